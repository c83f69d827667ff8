"""Signature arithmetic for strata of differentials."""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .const import ComponentLabel, Criterion, WeierstrassStatus
from .exceptions import BadIndex, BadPartition, NegativeGenus, NotAPole, OddSum

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class Signature:
    """Zero orders (positive or 0) and pole orders (negative), in order."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        genus_of(self)

    @classmethod
    def of(cls, *orders: int) -> Signature:
        return cls(tuple(orders))

    @property
    def genus(self) -> int:
        return genus_of(self)

    @property
    def zeros(self) -> tuple[int, ...]:
        return tuple(order for order in self.orders if order >= 0)

    @property
    def poles(self) -> tuple[int, ...]:
        return tuple(order for order in self.orders if order < 0)

    @property
    def holomorphic(self) -> bool:
        return not self.poles

    @property
    def all_even(self) -> bool:
        return all(order % 2 == 0 for order in self.orders)

    def __len__(self) -> int:
        return len(self.orders)

    def __str__(self) -> str:
        return "(" + ", ".join(str(order) for order in self.orders) + ")"


@dataclass(frozen=True)
class Adjacency:
    """``smaller`` lies in the closure of ``larger``; ``signature`` is the result."""

    signature: Signature
    smaller: Signature
    larger: Signature


def genus_of(signature: Signature | Sequence[int]) -> int:
    orders = signature.orders if isinstance(signature, Signature) else tuple(signature)
    total = sum(orders)
    if total % 2:
        raise OddSum(f"orders {orders} sum to the odd number {total}")
    genus = (total + 2) // 2
    if genus < 0:
        raise NegativeGenus(f"orders {orders} give genus {genus}")
    return genus


def stratum_dimension(signature: Signature, projectivized: bool = False) -> int:
    genus = signature.genus
    if signature.holomorphic:
        dimension = 2 * genus + len(signature) - 1
    else:
        dimension = 2 * genus - 2 + len(signature.zeros) + len(signature.poles)
    return dimension - 1 if projectivized else dimension


def _hyperelliptic_shape(signature: Signature) -> bool:
    genus = signature.genus
    zeros = tuple(sorted((o for o in signature.orders if o > 0), reverse=True))
    poles = tuple(sorted(-o for o in signature.poles))
    if not poles:
        return zeros in ((2 * genus - 2,), (genus - 1, genus - 1))
    if len(zeros) == 1 and zeros[0] % 2 == 0:
        return (len(poles) == 1 and poles[0] % 2 == 0) or (
            len(poles) == 2 and poles[0] == poles[1]
        )
    if len(zeros) == 2 and zeros[0] == zeros[1]:
        return (len(poles) == 1 and poles[0] % 2 == 0) or (
            len(poles) == 2 and poles[0] == poles[1]
        )
    return False


def component_labels(signature: Signature) -> tuple[ComponentLabel, ...]:
    """Connected-component labels, only for the shapes with a known answer."""
    genus = signature.genus
    if genus < 2:
        return (ComponentLabel.UNLABELED,)
    hyperelliptic = _hyperelliptic_shape(signature)
    if genus == 2:
        return (
            (ComponentLabel.HYPERELLIPTIC,)
            if hyperelliptic
            else (ComponentLabel.UNLABELED,)
        )
    even = signature.all_even
    labels: list[ComponentLabel] = []
    if hyperelliptic:
        labels.append(ComponentLabel.HYPERELLIPTIC)
    if even:
        labels.append(ComponentLabel.ODD_SPIN)
        # in genus three the even spin component is the hyperelliptic one
        if not (genus == 3 and signature.holomorphic and hyperelliptic):
            labels.append(ComponentLabel.EVEN_SPIN)
    elif hyperelliptic:
        labels.append(ComponentLabel.NONHYPERELLIPTIC)
    result = tuple(labels) or (ComponentLabel.UNLABELED,)
    _LOGGER.debug("Components of %s: %s", signature, [str(label) for label in result])
    return result


def split_zero(signature: Signature, index: int, parts: Sequence[int]) -> Adjacency:
    orders = signature.orders
    if not 0 <= index < len(orders):
        raise BadIndex(f"no entry {index} in {signature}")
    if orders[index] <= 0:
        raise BadPartition(f"entry {index} of {signature} is not a zero")
    if not parts or any(part <= 0 for part in parts) or sum(parts) != orders[index]:
        raise BadPartition(f"{tuple(parts)} does not partition {orders[index]}")
    result = Signature(orders[:index] + tuple(parts) + orders[index + 1 :])
    return Adjacency(result, smaller=signature, larger=result)


def merge_poles(signature: Signature, first: int, second: int) -> Adjacency:
    orders = signature.orders
    for index in (first, second):
        if not 0 <= index < len(orders):
            raise BadIndex(f"no entry {index} in {signature}")
    if first == second:
        raise BadIndex("cannot merge an entry with itself")
    if orders[first] >= 0 or orders[second] >= 0:
        raise NotAPole(
            f"entries {first} and {second} of {signature} are not both poles"
        )
    low, high = sorted((first, second))
    merged = list(orders)
    merged[low] = orders[first] + orders[second]
    del merged[high]
    result = Signature(tuple(merged))
    return Adjacency(result, smaller=result, larger=signature)


def stable_signature(
    zeros: Iterable[int],
    holomorphic_nodes: Iterable[tuple[int, int]] = (),
    polar_nodes: int = 0,
    vanishing: Iterable[tuple[int, int]] = (),
) -> Signature:
    """Signature of a smoothing of a stable differential.

    Zero orders are kept, every node where the differential is holomorphic
    with branch orders (b', b'') opens up into zeros b'+1 and b''+1, pairs
    of simple poles at polar nodes disappear, and nodes joining a vanishing
    component with branch orders (c', c'') behave like holomorphic nodes.
    """
    orders = list(zeros)
    for first, second in list(holomorphic_nodes) + list(vanishing):
        if first < 0 or second < 0:
            raise BadPartition(f"node branch orders {(first, second)} are negative")
        orders.extend((first + 1, second + 1))
    if polar_nodes < 0:
        raise BadPartition("negative number of polar nodes")
    return Signature(tuple(orders))


@dataclass(frozen=True)
class WeierstrassFact:
    status: WeierstrassStatus
    criterion: Criterion | None = None
    hypotheses: tuple[str, ...] = ()


def hyperelliptic_weierstrass_table(signature: Signature) -> tuple[WeierstrassStatus, ...]:
    """Weierstrass status of every marked point on the hyperelliptic component."""
    if not _hyperelliptic_shape(signature):
        raise BadIndex(f"{signature} has no hyperelliptic component")
    orders = signature.orders
    positive = [order for order in orders if order > 0]
    negative = [order for order in orders if order < 0]
    single_zero = len(positive) == 1
    single_pole = len(negative) == 1
    result: list[WeierstrassStatus] = []
    for order in orders:
        if order > 0:
            weierstrass = single_zero
        elif order < 0:
            weierstrass = single_pole
        else:
            weierstrass = False
        result.append(
            WeierstrassStatus.WEIERSTRASS if weierstrass else WeierstrassStatus.NOT_WEIERSTRASS
        )
    return tuple(result)
