import json
from enum import Enum, IntEnum
from pathlib import Path

try:
    from enum import StrEnum
except ImportError:  # Python < 3.11

    class StrEnum(str, Enum):  # type: ignore[no-redef]
        """Backport of :class:`enum.StrEnum` (Python 3.11)."""

        __str__ = str.__str__
        __format__ = str.__format__  # type: ignore[assignment]

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):  # type: ignore[override]
            return name.lower()

DOMAIN: str = "twistcalc"
MANIFEST_PATH = Path(__file__).parent / "manifest.json"
VERSION: str = json.loads(MANIFEST_PATH.read_text(encoding="utf-8"))["version"]

CATALOG_PATH = Path(__file__).parent / "genus3_cases.yml"

CANONICAL_SYMBOL = "K"
NODE_BRANCHES: tuple[str, str] = ("'", "''")
EXCEPTIONAL_SEPARATOR = "#"

CONF_REFINED = "refined"
CONF_EFFECTIVE_SEARCH_BOUND = "effective_search_bound"
CONF_SEMISTABLE_SEARCH_LENGTH = "semistable_search_length"
CONF_SECOND_KIND = "second_kind"

DEFAULT_EFFECTIVE_SEARCH_BOUND = 2
DEFAULT_SEMISTABLE_SEARCH_LENGTH = 2


class ExitCode(IntEnum):
    DECIDED = 0
    ERROR = 1
    UNDECIDED = 2


class Criterion(StrEnum):
    ONE_NODE = "one-node"
    ONE_NODE_POLAR = "one-node-polar"
    TWISTED_RELATION = "twisted-relation"
    SINGLE_HOLOMORPHIC = "single-holomorphic-component"
    ALL_POLAR = "all-polar-components"
    GENUS_TWO_BRIDGE = "genus-two-rational-bridge"
    CATALOG = "genus-three-catalog"
    REGULAR_SMOOTHING = "regular-smoothing"
    WEIERSTRASS_TABLE = "hyperelliptic-table"
    LARGE_ORDER = "order-at-least-genus"
    MEROMORPHIC_ZERO = "meromorphic-zero"
    SPLIT_REDUCTION = "split-zero-reduction"
    POLE_REDUCTION = "pole-merge-reduction"


class CurveKind(StrEnum):
    COMPACT = "compact"
    PSEUDOCOMPACT = "pseudocompact"
    NON_PSEUDOCOMPACT = "non-pseudocompact"


class ComponentLabel(StrEnum):
    HYPERELLIPTIC = "hyperelliptic"
    ODD_SPIN = "odd"
    EVEN_SPIN = "even"
    NONHYPERELLIPTIC = "nonhyperelliptic"
    UNLABELED = "unlabeled"


class Polarity(StrEnum):
    HOLOMORPHIC = "holomorphic"
    POLAR = "polar"


class Status(StrEnum):
    TWISTED_CANONICAL = "twisted-canonical"
    NOT_TWISTED_CANONICAL = "not-twisted-canonical"
    UNDECIDED = "undecided"


class Smoothable(StrEnum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class Parity(StrEnum):
    EVEN = "even"
    ODD = "odd"
    UNDECIDED = "undecided"


class WeierstrassStatus(StrEnum):
    WEIERSTRASS = "weierstrass"
    NOT_WEIERSTRASS = "not-weierstrass"
    OUT_OF_SCOPE = "out-of-scope"


COMMANDS: tuple[str, ...] = (
    "check",
    "twist",
    "spin",
    "dim",
    "genus3",
    "chain",
    "surface",
    "format",
)

SURFACE_OPERATIONS: tuple[str, ...] = ("data", "slit", "plumb")
