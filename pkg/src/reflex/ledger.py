"""Reflective modular forms as data, and the calculus on them."""
import functools
import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict
from typing import Iterable
from typing import Tuple

from . import hlat
from . import qlat
from .constructions import LOG_ENRIQUES_KS
from .errors import AmbientMismatch
from .hlat import HermLattice
from .qlat import QuadLattice
from .types import DivisorKind

LOGGER = logging.getLogger(__file__)

Divisor = Tuple[Tuple[DivisorKind, Fraction], ...]


def _normalize_divisor(entries: Iterable[Tuple[DivisorKind, Fraction]]) -> Divisor:
    divisor = tuple(sorted((kind, Fraction(mult)) for kind, mult in entries))
    kinds = [kind for kind, _ in divisor]
    if len(set(kinds)) != len(kinds):
        raise ValueError(f"Divisor classes must be distinct, got {kinds}")
    if any(mult <= 0 for _, mult in divisor):
        raise ValueError("Divisor multiplicities must be positive")
    return divisor


@dataclass(frozen=True)
class FormRecord:
    name: str
    ambient: str
    weight: Fraction
    divisor: Divisor
    character_note: str = ""
    source: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", Fraction(self.weight))
        object.__setattr__(self, "divisor", _normalize_divisor(self.divisor))

    @property
    def multiplicities(self) -> Dict[DivisorKind, Fraction]:
        return dict(self.divisor)

    @property
    def support(self) -> Tuple[DivisorKind, ...]:
        return tuple(kind for kind, _ in self.divisor)


def _check_same_ambient(f: FormRecord, g: FormRecord) -> None:
    if f.ambient != g.ambient:
        raise AmbientMismatch(
            f"{f.name} lives on {f.ambient} but {g.name} lives on {g.ambient}"
        )


def _join_notes(*notes: str) -> str:
    return "; ".join(dict.fromkeys(note for note in notes if note))


def product(f: FormRecord, g: FormRecord, name: str = "") -> FormRecord:
    _check_same_ambient(f, g)
    multiplicities: Dict[DivisorKind, Fraction] = defaultdict(Fraction)
    for kind, mult in f.divisor + g.divisor:
        multiplicities[kind] += mult
    return FormRecord(
        name=name or f"{f.name}*{g.name}",
        ambient=f.ambient,
        weight=f.weight + g.weight,
        divisor=tuple(multiplicities.items()),
        character_note=_join_notes(f.character_note, g.character_note),
        source=_join_notes(f.source, g.source),
    )


def power(f: FormRecord, t: int, name: str = "") -> FormRecord:
    if t < 1:
        raise ValueError(f"Powers must be positive integers, got {t}")
    if t == 1 and not name:
        return f
    return FormRecord(
        name=name or f"{f.name}^{t}",
        ambient=f.ambient,
        weight=t * f.weight,
        divisor=tuple((kind, t * mult) for kind, mult in f.divisor),
        character_note=f.character_note,
        source=f.source,
    )


def combine(forms: Dict[FormRecord, int], name: str = "") -> FormRecord:
    """Product of powers; zero exponents are skipped."""
    factors = [power(form, exponent) for form, exponent in forms.items() if exponent]
    if not factors:
        raise ValueError("At least one positive exponent is needed")
    result = functools.reduce(product, factors)
    if name:
        result = power(result, 1, name=name)
    return result


def restriction_factor(lattice: HermLattice) -> Fraction:
    return Fraction(len(lattice.field.units), 2)


def restrict_to_ball(f: FormRecord, lattice: HermLattice, ambient: QuadLattice) -> FormRecord:
    """Pull back an orthogonal form to the ball of a Hermitian lattice.

    The ambient must be the quadratic lattice the form lives on and must have
    the invariants of the trace form of the Hermitian lattice.
    """
    if ambient.name != f.ambient:
        raise AmbientMismatch(f"{f.name} lives on {f.ambient}, not on {ambient.name}")
    trace = qlat.invariants(hlat.trace_form(lattice))
    if trace != qlat.invariants(ambient):
        raise AmbientMismatch(
            f"The trace form of {lattice.name} does not match {ambient.name}: "
            f"{trace} != {qlat.invariants(ambient)}"
        )
    factor = restriction_factor(lattice)
    divisor = []
    for kind, mult in f.divisor:
        if kind.norm % 2:
            raise AmbientMismatch(f"{kind.label} of {f.name} has odd norm")
        divisor.append((DivisorKind(kind.norm // 2, kind.special_even), factor * mult))
    LOGGER.debug("Restricted %s to %s with factor %s", f.name, lattice.name, factor)
    return FormRecord(
        name=f"{f.name}|",
        ambient=lattice.name,
        weight=f.weight,
        divisor=tuple(divisor),
        character_note=f.character_note,
        source=f.source,
    )


H_2 = DivisorKind(-2, False)
H_4_SE = DivisorKind(-4, True)


def _log_enriques_forms() -> Iterable[FormRecord]:
    for k in LOG_ENRIQUES_KS:
        ambient = f"Lambda_logEnr_{k}"
        yield FormRecord(
            f"Psi{4 + k}_k{k}",
            ambient,
            4 + k,
            ((H_2, 1),),
            source="log Enriques reflective form, divisor H(-2)",
        )
        yield FormRecord(
            f"Psi124_k{k}",
            ambient,
            -k * k - 9 * k + 124,
            ((H_4_SE, 1),),
            source="log Enriques reflective form, divisor H(-4,se)",
        )


@functools.lru_cache(maxsize=None)
def builtin_forms() -> Dict[str, FormRecord]:
    forms = [
        FormRecord(
            "Phi12",
            "II_2_26",
            12,
            ((H_2, 1),),
            character_note="trivial",
            source="Borcherds form on II_2_26, divisor H(-2)",
        ),
        FormRecord(
            "Phi252",
            "II_2_10",
            252,
            ((H_2, 1),),
            source="reflective form of weight 252 on U+U+E8(-1), divisor H(-2)",
        ),
        FormRecord(
            "Phi4",
            "Lambda_Enr",
            4,
            ((H_2, 1),),
            character_note="non-trivial; the square of Phi4*Phi124 has trivial character",
            source="Borcherds form on the Enriques lattice, divisor H(-2)",
        ),
        FormRecord(
            "Phi124",
            "Lambda_Enr",
            124,
            ((H_4_SE, 1),),
            character_note="non-trivial; the square of Phi4*Phi124 has trivial character",
            source="reflective form on the Enriques lattice, divisor H(-4,se)",
        ),
        FormRecord(
            "Psi12",
            "U_U_E8m2",
            12,
            ((H_2, 1),),
            source="reflective form of weight 12 on U+U+E8(-2), divisor H(-2)",
        ),
    ]
    by_name = {form.name: form for form in forms}
    forms.append(
        FormRecord(
            "F128",
            "Lambda_Enr",
            128,
            product(by_name["Phi4"], by_name["Phi124"]).divisor,
            character_note="non-trivial; F128^2 has trivial character",
            source="Phi4*Phi124 on the Enriques lattice",
        )
    )
    forms.extend(_log_enriques_forms())
    return {form.name: form for form in forms}
