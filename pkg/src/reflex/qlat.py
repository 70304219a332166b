import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable
from typing import List
from typing import Sequence
from typing import Tuple

from . import latalg
from .errors import DegenerateLattice
from .errors import IsotropicVector
from .errors import NonNegativeNorm
from .errors import NotPrimitive
from .errors import ZeroVector
from .latalg import IntMatrix
from .latalg import Vector
from .types import GroupChoice
from .types import LatticeInvariants


@dataclass(frozen=True)
class QuadLattice:
    name: str
    gram: IntMatrix

    def __post_init__(self) -> None:
        gram = latalg.to_int_matrix(self.gram)
        if any(len(row) != len(gram) for row in gram):
            raise ValueError(f"Gram matrix of {self.name} is not square")
        if latalg.transpose(gram) != gram:
            raise ValueError(f"Gram matrix of {self.name} is not symmetric")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return latalg.bilinear(self.gram, x, y)

    def norm(self, x: Sequence[int]) -> int:
        return self.pair(x, x)

    def pairings(self, x: Sequence[int]) -> Tuple[int, ...]:
        """The values (e_j, x) for every basis vector e_j."""
        return latalg.mat_vec(self.gram, x)


@functools.lru_cache(maxsize=256)
def invariants(lattice: QuadLattice) -> LatticeInvariants:
    determinant = latalg.det(lattice.gram)
    if determinant == 0:
        raise DegenerateLattice(f"Lattice {lattice.name} is degenerate (det = 0)")
    pos, neg, _ = latalg.signature(lattice.gram)
    disc_group = tuple(d for d in latalg.elementary_divisors(lattice.gram) if d > 1)
    return LatticeInvariants(
        rank=lattice.rank,
        signature=(pos, neg),
        determinant=int(determinant),
        is_even=all(lattice.gram[i][i] % 2 == 0 for i in range(lattice.rank)),
        disc_group=disc_group,
    )


def _check_nonzero(r: Sequence[int]) -> None:
    if not any(r):
        raise ZeroVector("The zero vector has no divisor")


def content(r: Sequence[int]) -> int:
    return math.gcd(*r)


def div(lattice: QuadLattice, r: Sequence[int]) -> int:
    _check_nonzero(r)
    return math.gcd(*lattice.pairings(r))


def is_special_even(lattice: QuadLattice, r: Sequence[int]) -> bool:
    return div(lattice, r) % 2 == 0


def reflection(lattice: QuadLattice, r: Sequence[int]) -> Tuple[Tuple[Fraction, ...], ...]:
    """Matrix of sigma_r whose j-th column is the image of e_j."""
    rr = lattice.norm(r)
    if rr == 0:
        raise IsotropicVector(f"Cannot reflect in the isotropic vector {tuple(r)}")
    pairings = lattice.pairings(r)
    n = lattice.rank
    return tuple(
        tuple(Fraction(int(i == j)) - Fraction(2 * r[i] * pairings[j], rr) for j in range(n))
        for i in range(n)
    )


def _discriminant_generators(lattice: QuadLattice) -> List[Tuple[Fraction, ...]]:
    """Lifts to the dual lattice of the SNF generators of the discriminant group."""
    D, _, V = latalg.snf(lattice.gram)
    n = lattice.rank
    return [
        tuple(Fraction(V[i][j], D[j][j]) for i in range(n))
        for j in range(n)
        if abs(D[j][j]) > 1
    ]


def reflection_in_group(lattice: QuadLattice, r: Sequence[int], group: GroupChoice) -> bool:
    _check_nonzero(r)
    if content(r) != 1:
        raise NotPrimitive(f"{tuple(r)} is not primitive")
    rr = lattice.norm(r)
    if rr >= 0:
        raise NonNegativeNorm(f"{tuple(r)} has norm {rr} >= 0")
    if group is GroupChoice.UNITARY:
        raise ValueError("The unitary group applies to Hermitian lattices only")
    if (2 * div(lattice, r)) % (-rr):
        return False
    if group is GroupChoice.FULL_PLUS:
        return True
    R = reflection(lattice, r)
    for generator in _discriminant_generators(lattice):
        image = latalg.mat_vec(R, generator)
        if any((a - b).denominator != 1 for a, b in zip(image, generator)):
            return False
    return True


def primitive_part(lattice: QuadLattice, r: Sequence[int]) -> Vector:
    _check_nonzero(r)
    g = content(r)
    return tuple(x // g for x in r)


def saturate(lattice: QuadLattice, vectors: Iterable[Sequence[int]]) -> List[Vector]:
    """Basis of (Q-span of the vectors) intersected with the lattice."""
    rows = [tuple(v) for v in vectors]
    if not rows:
        return []
    D, _, V = latalg.snf(rows)
    rank = sum(1 for i in range(min(len(D), len(V))) if D[i][i])
    V_inv = latalg.to_int_matrix(latalg.inverse(V))
    return latalg.row_basis(V_inv[:rank])


def orth_complement(lattice: QuadLattice, vectors: Iterable[Sequence[int]]) -> List[Vector]:
    """Z-basis of the vectors of the lattice orthogonal to every given vector."""
    rows = [lattice.pairings(v) for v in vectors]
    if not rows:
        return [tuple(row) for row in latalg.identity(lattice.rank)]
    return latalg.row_basis(latalg.integer_kernel(rows))


def sublattice(lattice: QuadLattice, basis: Sequence[Sequence[int]], name: str) -> QuadLattice:
    return QuadLattice(name, tuple(tuple(lattice.pair(x, y) for y in basis) for x in basis))


def direct_sum(name: str, *lattices: QuadLattice) -> QuadLattice:
    n = sum(lattice.rank for lattice in lattices)
    gram = [[0] * n for _ in range(n)]
    offset = 0
    for lattice in lattices:
        for i, row in enumerate(lattice.gram):
            gram[offset + i][offset:offset + lattice.rank] = row
        offset += lattice.rank
    return QuadLattice(name, tuple(tuple(row) for row in gram))


def scaled(lattice: QuadLattice, factor: int, name: str) -> QuadLattice:
    return QuadLattice(name, tuple(tuple(factor * x for x in row) for row in lattice.gram))
