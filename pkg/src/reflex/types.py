import enum
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import List
from typing import NamedTuple
from typing import Optional
from typing import Tuple

Vector = Tuple[int, ...]


class Family(enum.Enum):
    ORTHOGONAL = "orthogonal"
    UNITARY = "unitary"


@dataclass(frozen=True)
class ModularFamily:
    """O(2, n) or U(1, n); n is the dimension of the period domain."""

    kind: Family
    n: int

    @classmethod
    def orthogonal(cls, n: int) -> "ModularFamily":
        return cls(Family.ORTHOGONAL, n)

    @classmethod
    def unitary(cls, n: int) -> "ModularFamily":
        return cls(Family.UNITARY, n)

    def __str__(self) -> str:
        group = "O(2,%d)" if self.kind is Family.ORTHOGONAL else "U(1,%d)"
        return group % self.n


@dataclass(frozen=True)
class CanonicalWeight:
    family: ModularFamily
    c: int


class GroupChoice(enum.Enum):
    FULL_PLUS = "full_plus"
    STABLE = "stable"
    UNITARY = "unitary"


@dataclass(frozen=True, order=True)
class DivisorKind:
    """A branch class key: rational norm of the reflective vector and its parity."""

    norm: int
    special_even: bool = False

    @property
    def label(self) -> str:
        return f"H({self.key})"

    @property
    def key(self) -> str:
        return f"{self.norm},se" if self.special_even else str(self.norm)

    @classmethod
    def parse_key(cls, key: str) -> "DivisorKind":
        norm, _, flag = key.partition(",")
        if flag not in ("", "se"):
            raise ValueError(f"Invalid divisor key {key!r}")
        return cls(int(norm), flag == "se")

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class BranchClass:
    kind: DivisorKind
    degree: int
    witness: Optional[Tuple[Any, ...]]
    exhaustive: bool
    units: Tuple[str, ...] = ()


@dataclass(frozen=True)
class AbsentClass:
    kind: DivisorKind
    exhaustive: bool
    reason: str


@dataclass(frozen=True)
class BranchReport:
    lattice: str
    group: GroupChoice
    family: ModularFamily
    classes: Tuple[BranchClass, ...]
    absent: Tuple[AbsentClass, ...] = ()

    @property
    def support(self) -> Tuple[DivisorKind, ...]:
        return tuple(branch.kind for branch in self.classes)

    @property
    def exhaustive(self) -> bool:
        return all(absent.exhaustive for absent in self.absent)

    def degree_of(self, kind: DivisorKind) -> int:
        for branch in self.classes:
            if branch.kind == kind:
                return branch.degree
        raise KeyError(kind)


class Verdict(enum.Enum):
    FANO = "Fano"
    CALABI_YAU = "CalabiYau"
    CANONICAL_MODEL = "CanonicalModel"
    ANTI_CANONICAL_BIG = "AntiCanonicalBig"
    NO_CONCLUSION = "NoConclusion"
    NO_MATCH = "NoMatch"

    @property
    def is_negative(self) -> bool:
        return self in (Verdict.NO_CONCLUSION, Verdict.NO_MATCH)


class Assumption(enum.Enum):
    I = "i"  # noqa: E741
    II = "ii"


@dataclass
class SlopeVerdict:
    s: Optional[Fraction]
    verdict: Verdict
    assumption: Assumption
    exponents: Dict[str, int] = field(default_factory=dict)
    per_class_slopes: Dict[DivisorKind, Fraction] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    weight: Optional[Fraction] = None
    power: Optional[int] = None


class LatticeInvariants(NamedTuple):
    rank: int
    signature: Tuple[int, int]
    determinant: int
    is_even: bool
    disc_group: Tuple[int, ...]

    @property
    def exponent(self) -> int:
        return self.disc_group[-1] if self.disc_group else 1

    @property
    def is_unimodular(self) -> bool:
        return abs(self.determinant) == 1


class HermInvariants(NamedTuple):
    signature: Tuple[int, int]
    is_unimodular: bool
    is_even: bool


@dataclass(frozen=True)
class IsotropicSubspace:
    lattice: str
    basis: Tuple[Vector, ...]
    label: str

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class Incidence:
    kind: DivisorKind
    contained: bool
    witness: Optional[Vector]
    exhaustive: bool
    quotient_vectors: int = 0


@dataclass(frozen=True)
class CuspRow:
    cusp: IsotropicSubspace
    quotient_gram: Tuple[Vector, ...]
    incidences: Tuple[Incidence, ...]

    @property
    def inconclusive(self) -> bool:
        return any(not i.contained and not i.exhaustive for i in self.incidences)

    @property
    def naked(self) -> bool:
        return not self.inconclusive and not any(i.contained for i in self.incidences)


@dataclass(frozen=True)
class CuspReport:
    lattice: str
    rows: Tuple[CuspRow, ...]
    notes: Tuple[str, ...] = ()

    @property
    def naked_count(self) -> int:
        return sum(1 for row in self.rows if row.naked)

    @property
    def exhaustive(self) -> bool:
        return not any(row.inconclusive for row in self.rows)
