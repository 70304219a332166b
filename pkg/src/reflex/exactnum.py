"""Exact arithmetic over Q and over the imaginary quadratic fields Q(sqrt(d)).

Field elements are stored on the rational basis {1, sqrt(d)} for every d;
integrality is decided against the ring basis {1, omega}, where omega is
sqrt(d) for d = 2, 3 mod 4 and (1 + sqrt(d)) / 2 for d = 1 mod 4.
"""
import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable
from typing import Tuple
from typing import Union

from sympy import factorint

from .errors import UnsupportedField

NORM_EUCLIDEAN = (-1, -2, -3, -7, -11)

Rational = Fraction
Scalar = Union[int, Fraction, "FieldElem"]

_RATIONAL_RE = re.compile(r"^\s*(?P<num>[+-]?\d+)\s*(?:/\s*(?P<den>\d+)\s*)?$")

_TERM_RE = re.compile(
    r"""
    (?P<sign>[+-])?                     # joining sign between terms
    (?P<coeff>[+-]?\d+(?:/\d+)?)?       # rational coefficient
    (?P<root>\*?sqrt\((?P<d>-?\d+)\))?  # optional sqrt(d) factor
    """,
    re.VERBOSE,
)


def parse_rational(text: Union[str, int]) -> Fraction:
    if isinstance(text, bool):
        raise ValueError(f"Not a rational number: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_RE.match(text)
    if match is None:
        raise ValueError(f"Not a rational number: {text!r}")
    den = int(match.group("den") or 1)
    if den == 0:
        raise ValueError(f"Zero denominator in {text!r}")
    return Fraction(int(match.group("num")), den)


def format_rational(value: Union[int, Fraction]) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _round(value: Fraction) -> int:
    return math.floor(value + Fraction(1, 2))


@dataclass(frozen=True, eq=False)
class FieldElem:
    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def _coerce(self, other: Scalar) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.d != self.d:
                raise ValueError(
                    f"Cannot combine elements of Q(sqrt({self.d})) and Q(sqrt({other.d}))"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return FieldElem(Fraction(other), Fraction(0), self.d)
        raise TypeError(f"Unsupported operand {other!r}")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElem):
            return (self.a, self.b, self.d) == (other.a, other.b, other.d)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __neg__(self) -> "FieldElem":
        return FieldElem(-self.a, -self.b, self.d)

    def __add__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        return FieldElem(self.a + other.a, self.b + other.b, self.d)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        return FieldElem(self.a - other.a, self.b - other.b, self.d)

    def __rsub__(self, other: Scalar) -> "FieldElem":
        return self._coerce(other) - self

    def __mul__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        return FieldElem(
            self.a * other.a + self.d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "FieldElem":
        other = self._coerce(other)
        norm = other.norm()
        if norm == 0:
            raise ZeroDivisionError("division by zero in an imaginary quadratic field")
        numerator = self * other.conjugate()
        return FieldElem(numerator.a / norm, numerator.b / norm, self.d)

    def __rtruediv__(self, other: Scalar) -> "FieldElem":
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> "FieldElem":
        if exponent < 0:
            return FieldElem(1, 0, self.d) / (self ** (-exponent))
        result = FieldElem(1, 0, self.d)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "FieldElem":
        return FieldElem(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self) -> str:
        return f"FieldElem({format_elem(self)!r})"

    def __str__(self) -> str:
        return format_elem(self)


@dataclass(frozen=True)
class ImagQuadField:
    """The field Q(sqrt(d)) together with its ring of integers."""

    d: int
    omega: FieldElem
    delta: FieldElem
    units: Tuple[FieldElem, ...]

    def elem(self, a: Union[int, Fraction] = 0, b: Union[int, Fraction] = 0) -> FieldElem:
        return FieldElem(Fraction(a), Fraction(b), self.d)

    @property
    def zero(self) -> FieldElem:
        return self.elem(0)

    @property
    def one(self) -> FieldElem:
        return self.elem(1)

    @property
    def sqrt_d(self) -> FieldElem:
        return self.elem(0, 1)

    @property
    def is_one_mod_four(self) -> bool:
        return self.d % 4 == 1

    def coerce(self, value: Scalar) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.d != self.d:
                raise ValueError(f"{value} does not belong to Q(sqrt({self.d}))")
            return value
        return self.elem(value)

    def from_ring_coords(self, m: int, n: int) -> FieldElem:
        return m + n * self.omega

    def ring_coords(self, x: FieldElem) -> Tuple[Fraction, Fraction]:
        """Coordinates of x on the ring basis {1, omega}."""
        if self.is_one_mod_four:
            return x.a - x.b, 2 * x.b
        return x.a, x.b

    def is_integer(self, x: Scalar) -> bool:
        m, n = self.ring_coords(self.coerce(x))
        return m.denominator == 1 and n.denominator == 1

    def is_unit(self, x: Scalar) -> bool:
        x = self.coerce(x)
        return self.is_integer(x) and x.norm() == 1

    def divides(self, x: Scalar, y: Scalar) -> bool:
        """True when x | y in the ring of integers."""
        x, y = self.coerce(x), self.coerce(y)
        if not x:
            return not y
        return self.is_integer(y / x)

    def associates(self, x: Scalar, y: Scalar) -> bool:
        x, y = self.coerce(x), self.coerce(y)
        if not x or not y:
            return not x and not y
        return self.is_unit(x / y)

    def unit_order(self, unit: Scalar) -> int:
        unit = self.coerce(unit)
        if not self.is_unit(unit):
            raise ValueError(f"{unit} is not a unit of Q(sqrt({self.d}))")
        power, order = unit, 1
        while power != 1:
            power = power * unit
            order += 1
        return order

    def denominator(self, x: Scalar) -> int:
        """Smallest positive integer m with m*x in the ring of integers."""
        m, n = self.ring_coords(self.coerce(x))
        return m.denominator * n.denominator // math.gcd(m.denominator, n.denominator)

    def round_quotient(self, x: FieldElem, y: FieldElem) -> FieldElem:
        """A ring element q with norm(x - q*y) < norm(y)."""
        exact = x / y
        if self.is_one_mod_four:
            n = _round(2 * exact.b)
            m = _round(exact.a - Fraction(n, 2))
            return self.from_ring_coords(m, n)
        return self.elem(_round(exact.a), _round(exact.b))

    def normalize(self, x: Scalar) -> FieldElem:
        """The unit multiple of x with the smallest norm, preferring large (a, b)."""
        x = self.coerce(x)
        if not x:
            return x
        return min((u * x for u in self.units), key=lambda z: (z.norm(), -z.a, -z.b))

    def gcd(self, x: Scalar, y: Scalar) -> FieldElem:
        x, y = self.coerce(x), self.coerce(y)
        if not (self.is_integer(x) and self.is_integer(y)):
            raise ValueError(f"gcd needs ring elements, got {x} and {y}")
        while y:
            x, y = y, x - self.round_quotient(x, y) * y
        return self.normalize(x)

    def gcd_all(self, values: Iterable[Scalar]) -> FieldElem:
        result = self.zero
        for value in values:
            result = self.gcd(result, value)
            if self.is_unit(result):
                break
        return result

    def parse(self, text: Union[str, int]) -> FieldElem:
        return parse_elem(text, self.d)


def _is_squarefree(n: int) -> bool:
    return all(exponent == 1 for exponent in factorint(abs(n)).values())


def _find_units(d: int, omega: FieldElem) -> Tuple[FieldElem, ...]:
    units = []
    for m in range(-2, 3):
        for n in range(-2, 3):
            candidate = m + n * omega
            if candidate.norm() == 1 and candidate not in units:
                units.append(candidate)
    return tuple(sorted(units, key=lambda u: (-u.a, -u.b)))


@functools.lru_cache(maxsize=None)
def make_field(d: int) -> ImagQuadField:
    if d >= 0 or not _is_squarefree(d):
        raise UnsupportedField(f"d = {d} is not a squarefree negative integer")
    if d not in NORM_EUCLIDEAN:
        raise UnsupportedField(
            f"Q(sqrt({d})) is not norm-Euclidean; supported values are {NORM_EUCLIDEAN}"
        )
    sqrt_d = FieldElem(0, 1, d)
    if d % 4 == 1:
        omega = (1 + sqrt_d) / 2
        delta = 1 / sqrt_d
    else:
        omega = sqrt_d
        delta = 1 / (2 * sqrt_d)
    return ImagQuadField(d=d, omega=omega, delta=delta, units=_find_units(d, omega))


def is_integer(x: FieldElem) -> bool:
    return make_field(x.d).is_integer(x)


def of_gcd(x: FieldElem, y: FieldElem) -> FieldElem:
    return make_field(x.d).gcd(x, y)


def format_elem(x: FieldElem) -> str:
    if x.b == 0:
        return format_rational(x.a)
    return f"{format_rational(x.a)} + {format_rational(x.b)}*sqrt({x.d})"


def parse_elem(text: Union[str, int], d: int) -> FieldElem:
    """Parse "a/b + c/e*sqrt(d)" (or a plain rational) into an element of Q(sqrt(d))."""
    if isinstance(text, int) and not isinstance(text, bool):
        return FieldElem(Fraction(text), Fraction(0), d)
    if not isinstance(text, str):
        raise ValueError(f"Not a field element: {text!r}")
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ValueError("Empty field element")
    a, b, pos = Fraction(0), Fraction(0), 0
    while pos < len(compact):
        match = _TERM_RE.match(compact, pos)
        if match is None or match.end() == pos or not (
            match.group("coeff") or match.group("root")
        ):
            raise ValueError(f"Cannot parse field element {text!r}")
        coeff = Fraction(1)
        if match.group("coeff"):
            coeff = parse_rational(match.group("coeff"))
        if match.group("sign") == "-":
            coeff = -coeff
        if match.group("root"):
            if int(match.group("d")) != d:
                raise ValueError(f"{text!r} does not belong to Q(sqrt({d}))")
            b += coeff
        else:
            a += coeff
        pos = match.end()
    return FieldElem(a, b, d)
