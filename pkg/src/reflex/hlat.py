"""Hermitian lattices over the ring of integers of an imaginary quadratic field.

The form is linear in the first argument and conjugate-linear in the
second: <x, y> = sum_ij x_i H_ij conj(y_j). Lattices are delta*O_F-valued,
where delta is the inverse different of the field.
"""
import enum
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from . import latalg
from . import qlat
from .errors import DegenerateForm
from .errors import IsotropicVector
from .errors import NonIntegralTraceForm
from .errors import NotUnit
from .errors import ZeroVector
from .exactnum import FieldElem
from .exactnum import ImagQuadField
from .exactnum import make_field
from .qlat import QuadLattice
from .types import HermInvariants

LOGGER = logging.getLogger(__file__)

HermVector = Tuple[FieldElem, ...]
HermMatrix = Tuple[Tuple[FieldElem, ...], ...]


class SpecialEvenScope(enum.Enum):
    BASIS = "basis"
    LATTICE = "lattice"


@dataclass(frozen=True)
class HermLattice:
    name: str
    d: int
    gram: HermMatrix

    def __post_init__(self) -> None:
        field = make_field(self.d)
        gram = tuple(tuple(field.coerce(x) for x in row) for row in self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError(f"Gram matrix of {self.name} is not square")
        for i in range(n):
            for j in range(n):
                if gram[i][j] != gram[j][i].conjugate():
                    raise ValueError(
                        f"Gram matrix of {self.name} is not Hermitian at ({i}, {j})"
                    )
                if not field.is_integer(gram[i][j] / field.delta):
                    raise ValueError(
                        f"Entry ({i}, {j}) = {gram[i][j]} of {self.name} is not in delta*O_F"
                    )
        object.__setattr__(self, "gram", gram)

    @property
    def field(self) -> ImagQuadField:
        return make_field(self.d)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def vector(self, values: Sequence[Any]) -> HermVector:
        if len(values) != self.rank:
            raise ValueError(f"Expected {self.rank} coordinates, got {len(values)}")
        return tuple(self.field.coerce(v) for v in values)

    def pair(self, x: Sequence[Any], y: Sequence[Any]) -> FieldElem:
        x, y = self.vector(x), self.vector(y)
        total = self.field.zero
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if yj:
                    total = total + xi * self.gram[i][j] * yj.conjugate()
        return total

    def norm(self, x: Sequence[Any]) -> Fraction:
        return self.pair(x, x).a

    def pairings(self, r: Sequence[Any]) -> HermVector:
        """The values <e_j, r> for every basis vector e_j."""
        r = self.vector(r)
        return tuple(
            sum(
                (self.gram[j][k] * r[k].conjugate() for k in range(self.rank)),
                self.field.zero,
            )
            for j in range(self.rank)
        )


def field_inverse(matrix: Sequence[Sequence[FieldElem]], field: ImagQuadField) -> HermMatrix:
    """Gauss-Jordan inverse over F."""
    n = len(matrix)
    A = [[field.coerce(x) for x in row] + [field.elem(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for column in range(n):
        pivot = next((i for i in range(column, n) if A[i][column]), None)
        if pivot is None:
            raise DegenerateForm("Matrix is singular over F")
        A[column], A[pivot] = A[pivot], A[column]
        scale = A[column][column]
        A[column] = [x / scale for x in A[column]]
        for i in range(n):
            if i != column and A[i][column]:
                factor = A[i][column]
                A[i] = [x - factor * y for x, y in zip(A[i], A[column])]
    return tuple(tuple(row[n:]) for row in A)


def _mat_mul(left: Sequence[Sequence[FieldElem]], right: Sequence[Sequence[FieldElem]],
             field: ImagQuadField) -> HermMatrix:
    return tuple(
        tuple(sum((a * b for a, b in zip(row, column)), field.zero) for column in zip(*right))
        for row in left
    )


def _conjugate_transpose(matrix: Sequence[Sequence[FieldElem]]) -> HermMatrix:
    return tuple(tuple(x.conjugate() for x in column) for column in zip(*matrix))


def _is_integral_matrix(matrix: Sequence[Sequence[FieldElem]], field: ImagQuadField) -> bool:
    return all(field.is_integer(x) for row in matrix for x in row)


def dual(lattice: HermLattice) -> HermMatrix:
    """Rows form an O_F-basis of the dual lattice, in lattice coordinates."""
    return dual_module(lattice, latalg.identity(lattice.rank))


def dual_module(lattice: HermLattice, basis: Sequence[Sequence[Any]]) -> HermMatrix:
    """Dual (with respect to delta*O_F) of the full-rank module spanned by the rows."""
    field = lattice.field
    rows = [lattice.vector(row) for row in basis]
    pairing = _mat_mul(lattice.gram, _conjugate_transpose(rows), field)
    inverse = field_inverse(pairing, field)
    return tuple(tuple(field.delta * x for x in row) for row in inverse)


def same_module(
    lattice: HermLattice, first: Sequence[Sequence[Any]], second: Sequence[Sequence[Any]]
) -> bool:
    field = lattice.field
    first = [lattice.vector(row) for row in first]
    second = [lattice.vector(row) for row in second]
    forward = _mat_mul(first, field_inverse(second, field), field)
    backward = _mat_mul(second, field_inverse(first, field), field)
    return _is_integral_matrix(forward, field) and _is_integral_matrix(backward, field)


def is_unimodular(lattice: HermLattice) -> bool:
    return _is_integral_matrix(dual(lattice), lattice.field)


def herm_signature(lattice: HermLattice) -> Tuple[int, int]:
    """Inertia of the Hermitian form by exact diagonalisation over F."""
    A = [list(row) for row in lattice.gram]
    pos = neg = 0
    while A:
        size = len(A)
        k = next((i for i in range(size) if A[i][i]), None)
        if k is None:
            pair = next(((i, j) for i in range(size) for j in range(size) if A[i][j]), None)
            if pair is None:
                raise DegenerateForm(f"Hermitian form of {lattice.name} is degenerate")
            i, j = pair
            t = A[i][j]
            A[i] = [x + t * y for x, y in zip(A[i], A[j])]
            for row in A:
                row[i] = row[i] + t.conjugate() * row[j]
            k = i
        pivot = A[k][k]
        if pivot.a > 0:
            pos += 1
        else:
            neg += 1
        others = [i for i in range(size) if i != k]
        A = [[A[r][c] - A[r][k] * A[k][c] / pivot for c in others] for r in others]
    return pos, neg


@functools.lru_cache(maxsize=128)
def trace_form(lattice: HermLattice, name: Optional[str] = None) -> QuadLattice:
    """The Z-lattice (x, y) = Tr<x, y> on the basis (e_1, w e_1, e_2, w e_2, ...)."""
    field = lattice.field
    ring = (field.one, field.omega)
    n = lattice.rank
    gram = []
    for p in range(2 * n):
        i, a = divmod(p, 2)
        row = []
        for q in range(2 * n):
            j, b = divmod(q, 2)
            value = (ring[a] * ring[b].conjugate() * lattice.gram[i][j]).trace()
            if value.denominator != 1:
                raise NonIntegralTraceForm(
                    f"Trace form of {lattice.name} has entry {value} at ({p}, {q})"
                )
            row.append(value.numerator)
        gram.append(tuple(row))
    return QuadLattice(name or f"{lattice.name}_trace", tuple(gram))


def to_trace_coords(lattice: HermLattice, v: Sequence[Any]) -> Tuple[int, ...]:
    field = lattice.field
    coords: List[int] = []
    for x in lattice.vector(v):
        m, n = field.ring_coords(x)
        if m.denominator != 1 or n.denominator != 1:
            raise ValueError(f"{x} is not in O_F")
        coords.extend((m.numerator, n.numerator))
    return tuple(coords)


def from_trace_coords(lattice: HermLattice, x: Sequence[int]) -> HermVector:
    field = lattice.field
    return tuple(field.from_ring_coords(x[2 * i], x[2 * i + 1]) for i in range(lattice.rank))


@functools.lru_cache(maxsize=128)
def herm_invariants(lattice: HermLattice) -> HermInvariants:
    return HermInvariants(
        signature=herm_signature(lattice),
        is_unimodular=is_unimodular(lattice),
        is_even=qlat.invariants(trace_form(lattice)).is_even,
    )


def _check_unit(lattice: HermLattice, xi: Any) -> FieldElem:
    field = lattice.field
    xi = field.coerce(xi)
    if not field.is_unit(xi) or xi == 1:
        raise NotUnit(f"{xi} is not a unit different from 1 in O_F")
    return xi


def _checked_norm(lattice: HermLattice, r: Sequence[Any]) -> Fraction:
    rr = lattice.norm(r)
    if rr == 0:
        raise IsotropicVector(f"<r, r> = 0 for r = {tuple(map(str, r))}")
    return rr


def quasi_reflection(lattice: HermLattice, r: Sequence[Any], xi: Any) -> HermMatrix:
    """Matrix of tau_{r,xi} whose j-th column is the image of e_j."""
    xi = _check_unit(lattice, xi)
    r = lattice.vector(r)
    rr = _checked_norm(lattice, r)
    factor = 1 - xi
    coefficients = [c / rr for c in lattice.pairings(r)]
    n = lattice.rank
    return tuple(
        tuple(int(i == j) - factor * coefficients[j] * r[i] for j in range(n))
        for i in range(n)
    )


def tau_in_unitary_group(lattice: HermLattice, r: Sequence[Any], xi: Any) -> bool:
    xi = _check_unit(lattice, xi)
    r = lattice.vector(r)
    rr = _checked_norm(lattice, r)
    field = lattice.field
    forward, backward = 1 - xi, 1 - xi.conjugate()
    return all(
        field.is_integer(forward * c / rr) and field.is_integer(backward * c / rr)
        for c in lattice.pairings(r)
    )


def _ideal_generator(field: ImagQuadField, values: Sequence[FieldElem]) -> FieldElem:
    """Normalised generator of the fractional ideal spanned by the values."""
    scale = 1
    for x in values:
        for q in (x.a, x.b):
            scale = scale * q.denominator // math.gcd(scale, q.denominator)
    generator = field.gcd_all(scale * x for x in values)
    return field.normalize(generator / scale)


def ideal_content(lattice: HermLattice, v: Sequence[Any]) -> FieldElem:
    """Generator of the ideal {<v, w> : w in the lattice}."""
    v = lattice.vector(v)
    if not any(v):
        raise ZeroVector("The zero vector has no ideal content")
    values = [c.conjugate() for c in lattice.pairings(v)]
    return _ideal_generator(lattice.field, values)


def associates(lattice: HermLattice, x: Any, y: Any) -> bool:
    return lattice.field.associates(x, y)


def herm_special_even(
    lattice: HermLattice, r: Sequence[Any], scope: SpecialEvenScope = SpecialEvenScope.BASIS
) -> bool:
    """Re<r, e_j> in Z for every basis vector (or Re<r, v> in Z for every v)."""
    r = lattice.vector(r)
    if not any(r):
        raise ZeroVector("The zero vector is not special-even")
    values = [c.conjugate() for c in lattice.pairings(r)]
    multipliers = [lattice.field.one]
    if scope is SpecialEvenScope.LATTICE:
        multipliers.append(lattice.field.omega.conjugate())
    return all((m * value).a.denominator == 1 for value in values for m in multipliers)


def is_primitive(lattice: HermLattice, v: Sequence[Any]) -> bool:
    field = lattice.field
    v = lattice.vector(v)
    if not all(field.is_integer(x) for x in v):
        return False
    return field.is_unit(field.gcd_all(v))


def pullback_applies(d: int) -> bool:
    return d % 4 in (2, 3) or d == -3


def pullback_check(
    lattice: HermLattice, ell: Sequence[Any], r: Sequence[Any], xi: Any
) -> Tuple[bool, bool]:
    """(herm_ok, quad_ok) for the ramification pullback implication.

    quad_ok is evaluated on the trace form; for d = -3 it is true when some
    member of the orbit {r, z r, z^2 r} (z a primitive sixth root of unity)
    gives an integral reflection coefficient.
    """
    xi = lattice.field.coerce(xi)
    r = lattice.vector(r)
    rr = _checked_norm(lattice, r)
    field = lattice.field
    herm_ok = field.is_integer((1 - xi) * lattice.pair(ell, r) / rr)

    form = trace_form(lattice)
    x = to_trace_coords(lattice, ell)
    orbit = [r]
    if lattice.d == -3:
        orbit += [tuple(field.omega * c for c in r), tuple(field.omega ** 2 * c for c in r)]
    quad_ok = False
    for member in orbit:
        y = to_trace_coords(lattice, member)
        coefficient = Fraction(2 * form.pair(x, y), form.norm(y))
        if coefficient.denominator == 1:
            quad_ok = True
            break
    return herm_ok, quad_ok


def herm_direct_sum(name: str, *lattices: HermLattice) -> HermLattice:
    d = lattices[0].d
    if any(lattice.d != d for lattice in lattices):
        raise ValueError("Direct sums need lattices over the same field")
    field = make_field(d)
    n = sum(lattice.rank for lattice in lattices)
    gram = [[field.zero] * n for _ in range(n)]
    offset = 0
    for lattice in lattices:
        for i, row in enumerate(lattice.gram):
            gram[offset + i][offset:offset + lattice.rank] = row
        offset += lattice.rank
    return HermLattice(name, d, tuple(tuple(row) for row in gram))


def herm_scale(lattice: HermLattice, factor: Any, name: Optional[str] = None) -> HermLattice:
    """The lattice with its form multiplied by a nonzero rational factor."""
    factor = lattice.field.coerce(factor)
    if not factor or not factor.is_rational:
        raise ValueError(f"Scaling factor must be a nonzero rational, got {factor}")
    return HermLattice(
        name or f"{lattice.name}({factor})",
        lattice.d,
        tuple(tuple(factor * x for x in row) for row in lattice.gram),
    )


def scaling_factor(lattice: HermLattice) -> Optional[Fraction]:
    """Positive rational b with lattice = M(b) for a unimodular M, if there is one."""
    field = lattice.field
    entries = [x / field.delta for row in lattice.gram for x in row if x]
    if not entries:
        return None
    generator = field.gcd_all(entries)
    rational = next(
        (u * generator for u in field.units if (u * generator).is_rational
         and (u * generator).a > 0),
        None,
    )
    if rational is None:
        return None
    b = rational.a
    try:
        base = herm_scale(lattice, 1 / b)
    except ValueError:
        return None
    return b if is_unimodular(base) else None


def predicts_unramified(lattice: HermLattice) -> bool:
    """Scaled unimodular lattices over d = 2, 3 mod 4 (d != -1) whose b/sqrt(d) is
    not integral have no branch divisors."""
    if lattice.d % 4 not in (2, 3) or lattice.d == -1:
        return False
    b = scaling_factor(lattice)
    if b is None:
        return False
    field = lattice.field
    return not field.is_integer(field.elem(b) / field.sqrt_d)
