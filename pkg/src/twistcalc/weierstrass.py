"""Limit Weierstrass points on elliptic chains and generic Weierstrass facts."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .const import ComponentLabel, Criterion, WeierstrassStatus
from .exceptions import BadIndex, InconsistentTorsion, InvalidGenus
from .strata import (
    Signature,
    WeierstrassFact,
    hyperelliptic_weierstrass_table,
    merge_poles,
    split_zero,
)

_LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainInput:
    """Chain E_1 - ... - E_g of elliptic curves; torsion[i] is the order of
    q_{i+1} - q_{i+2} on E_{i+2}, None for infinite."""

    genus: int
    torsion: tuple[int | None, ...]

    def __post_init__(self) -> None:
        if self.genus < 2:
            raise InvalidGenus(f"chain of genus {self.genus}")
        if len(self.torsion) != self.genus - 1:
            raise InconsistentTorsion(
                f"genus {self.genus} chain needs {self.genus - 1} torsion orders, "
                f"got {len(self.torsion)}"
            )
        for order in self.torsion:
            if order is not None and order < 1:
                raise InconsistentTorsion(f"torsion order {order}")

    def t(self, index: int) -> int | None:
        """Torsion order t_index for 2 <= index <= genus."""
        return self.torsion[index - 2]


@dataclass(frozen=True)
class ChainResult:
    weierstrass: bool
    witness: tuple[int, ...] | None = None


def chain_step_effective(torsion: int | None, k_high: int, k_low: int) -> bool:
    """Whether k_high q_i - k_low q_{i-1} is effective on an elliptic component
    where q_i - q_{i-1} has the given order."""
    if k_high > k_low:
        return True
    if k_high < k_low:
        return False
    return torsion is not None and k_high % torsion == 0


def chain_is_limit_weierstrass(chain: ChainInput) -> ChainResult:
    genus = chain.genus
    # reachable[i]: values of k_i that extend to a valid tail k_i, ..., k_g = g
    successor: dict[tuple[int, int], int] = {}
    reachable: set[int] = {genus}
    for index in range(genus - 1, 0, -1):
        current: set[int] = set()
        for k in range(2, genus + 1):
            for following in sorted(reachable):
                if chain_step_effective(chain.t(index + 1), following, k):
                    current.add(k)
                    successor[(index, k)] = following
                    break
        reachable = current
        if not reachable:
            _LOGGER.debug("Chain %s: no value left at position %s", chain.torsion, index)
            return ChainResult(False)

    k = min(reachable)
    witness = [k]
    for index in range(1, genus):
        k = successor[(index, k)]
        witness.append(k)
    _LOGGER.debug("Chain %s: witness %s", chain.torsion, witness)
    return ChainResult(True, tuple(witness))


def generic_nonweierstrass(
    signature: Signature, index: int, component: ComponentLabel | None = None
) -> WeierstrassFact:
    """Whether the marked point at ``index`` is a Weierstrass point of a
    generic curve in the given stratum component.

    ``component`` None stands for a nonhyperelliptic component.
    """
    orders = signature.orders
    if not 0 <= index < len(orders):
        raise BadIndex(f"no entry {index} in {signature}")
    if component == ComponentLabel.HYPERELLIPTIC:
        status = hyperelliptic_weierstrass_table(signature)[index]
        return WeierstrassFact(status, Criterion.WEIERSTRASS_TABLE)

    genus = signature.genus
    order = orders[index]
    if signature.holomorphic:
        if order >= genus:
            return WeierstrassFact(WeierstrassStatus.WEIERSTRASS, Criterion.LARGE_ORDER)
        if order > 0 and genus % order:
            rest = 2 * genus - 2 - order
            others = tuple(value for i, value in enumerate(orders) if i != index and value > 0)
            reduction = split_zero(Signature.of(order, rest), 1, others or (rest,))
            hypotheses = [f"{order} does not divide {genus}"]
            if reduction.smaller != reduction.larger:
                hypotheses.append(
                    f"{reduction.smaller} lies in the closure of {reduction.larger}"
                )
            hypotheses.append(
                f"a generic point of order {order} in {reduction.smaller} is not Weierstrass"
            )
            return WeierstrassFact(
                WeierstrassStatus.NOT_WEIERSTRASS,
                Criterion.SPLIT_REDUCTION,
                tuple(hypotheses),
            )
        return WeierstrassFact(WeierstrassStatus.OUT_OF_SCOPE)

    if order >= 0:
        return WeierstrassFact(WeierstrassStatus.NOT_WEIERSTRASS, Criterion.MEROMORPHIC_ZERO)

    pole = -order
    if genus % pole:
        hypotheses = [f"{pole} does not divide {genus}"]
        merged, position = signature, index
        while len(merged.poles) > 2:
            first, second = [
                i for i, value in enumerate(merged.orders) if value < 0 and i != position
            ][:2]
            adjacency = merge_poles(merged, first, second)
            hypotheses.append(f"{adjacency.smaller} lies in the closure of {adjacency.larger}")
            merged = adjacency.signature
            if position > second:
                position -= 1
        hypotheses.append(f"the pole of order {pole} in {merged} is not Weierstrass")
        return WeierstrassFact(
            WeierstrassStatus.NOT_WEIERSTRASS, Criterion.POLE_REDUCTION, tuple(hypotheses)
        )
    return WeierstrassFact(WeierstrassStatus.OUT_OF_SCOPE)
