"""Slope of a reflective form against a branch report, and the resulting verdict.

For a branch class of degree d on which the form vanishes to order mu, the
slope is s = k (d - 1) / (c d mu), where k is the weight of the form and c
the canonical weight of the family.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence

from . import latalg
from .errors import AmbientMismatch
from .ledger import FormRecord
from .ledger import combine
from .types import Assumption
from .types import BranchReport
from .types import CanonicalWeight
from .types import DivisorKind
from .types import Family
from .types import ModularFamily
from .types import SlopeVerdict
from .types import Verdict

LOGGER = logging.getLogger(__file__)


def canonical_weight(family: ModularFamily) -> CanonicalWeight:
    if family.n < 1:
        raise ValueError(f"Family dimension must be positive, got {family.n}")
    c = family.n if family.kind is Family.ORTHOGONAL else family.n + 1
    return CanonicalWeight(family, c)


def verdict_for_slope(s: Fraction) -> Verdict:
    if s > 1:
        return Verdict.FANO
    if s == 1:
        return Verdict.CALABI_YAU
    return Verdict.CANONICAL_MODEL


def _check_ambient(branch: BranchReport, form: FormRecord) -> None:
    if form.ambient != branch.lattice:
        raise AmbientMismatch(
            f"{form.name} lives on {form.ambient} "
            f"but the branch report is for {branch.lattice}"
        )


def _class_slopes(
    branch: BranchReport, form: FormRecord, c: int
) -> Dict[DivisorKind, Fraction]:
    slopes = {}
    for kind, mult in form.divisor:
        d = branch.degree_of(kind)
        slopes[kind] = form.weight * (d - 1) / (c * d * mult)
    return slopes


def _support_note(branch: BranchReport, form: FormRecord) -> str:
    form_labels = ", ".join(kind.label for kind in form.support) or "none"
    branch_labels = ", ".join(kind.label for kind in branch.support) or "none"
    return (
        f"div({form.name}) is supported on {form_labels}; "
        f"branch classes are {branch_labels}"
    )


def minimal_power(branch: BranchReport, form: FormRecord, s: Fraction, c: int) -> int:
    """Least t such that form^t gives integral N, N/d_i and s*N."""
    n1 = form.weight / (c * s)
    degrees = [branch.degree_of(kind) for kind in form.support]
    lcm = 1
    for d in degrees:
        lcm = lcm * d // math.gcd(lcm, d)
    a, b = (n1 / lcm).denominator, (n1 * s).denominator
    return a * b // math.gcd(a, b)


def check_assumption_i(
    branch: BranchReport, form: FormRecord, family: Optional[ModularFamily] = None
) -> SlopeVerdict:
    _check_ambient(branch, form)
    c = canonical_weight(family or branch.family).c
    if set(form.support) != set(branch.support):
        return SlopeVerdict(
            s=None,
            verdict=Verdict.NO_MATCH,
            assumption=Assumption.I,
            exponents={form.name: 1},
            notes=[_support_note(branch, form)],
            weight=form.weight,
        )
    slopes = _class_slopes(branch, form, c)
    values = set(slopes.values())
    if len(values) != 1:
        return SlopeVerdict(
            s=None,
            verdict=Verdict.NO_MATCH,
            assumption=Assumption.I,
            exponents={form.name: 1},
            per_class_slopes=slopes,
            notes=[f"per-class slopes of {form.name} differ"],
            weight=form.weight,
        )
    (s,) = values
    t = minimal_power(branch, form, s, c)
    n = t * form.weight / (c * s)
    note = f"{form.name}^{t} has N = {n}, s*N = {s * n}"
    LOGGER.info("Slope of %s on %s is %s", form.name, branch.lattice, s)
    return SlopeVerdict(
        s=s,
        verdict=verdict_for_slope(s),
        assumption=Assumption.I,
        exponents={form.name: 1},
        per_class_slopes=slopes,
        notes=[note],
        weight=form.weight,
        power=t,
    )


def check_assumption_ii(
    branch: BranchReport, form: FormRecord, family: Optional[ModularFamily] = None
) -> SlopeVerdict:
    _check_ambient(branch, form)
    c = canonical_weight(family or branch.family).c
    if not set(form.support) <= set(branch.support) or not form.support:
        return SlopeVerdict(
            s=None,
            verdict=Verdict.NO_MATCH,
            assumption=Assumption.II,
            exponents={form.name: 1},
            notes=[_support_note(branch, form)],
            weight=form.weight,
        )
    slopes = _class_slopes(branch, form, c)
    s_max = min(slopes.values())
    verdict = Verdict.ANTI_CANONICAL_BIG if s_max > 1 else Verdict.NO_CONCLUSION
    return SlopeVerdict(
        s=s_max,
        verdict=verdict,
        assumption=Assumption.II,
        exponents={form.name: 1},
        per_class_slopes=slopes,
        weight=form.weight,
    )


@dataclass(frozen=True)
class _Candidate:
    weight: Fraction
    order: int
    exponents: Dict[str, int]


def _integral_ray(vector: Sequence[Fraction]) -> Optional[List[int]]:
    if all(x > 0 for x in vector):
        signed = list(vector)
    elif all(x < 0 for x in vector):
        signed = [-x for x in vector]
    else:
        return None
    denominator = 1
    for x in signed:
        denominator = denominator * x.denominator // math.gcd(denominator, x.denominator)
    integers = [int(x * denominator) for x in signed]
    g = math.gcd(*integers)
    return [x // g for x in integers]


def find_assumption_i_combination(
    branch: BranchReport, forms: Sequence[FormRecord], family: Optional[ModularFamily] = None
) -> SlopeVerdict:
    """Nonnegative exponents making the product of the forms satisfy assumption (i)."""
    for form in forms:
        _check_ambient(branch, form)
    kinds = list(branch.support)
    if not kinds:
        return SlopeVerdict(
            s=None,
            verdict=Verdict.NO_MATCH,
            assumption=Assumption.I,
            notes=[f"{branch.lattice} has no branch classes"],
        )
    eligible = [form for form in forms if set(form.support) <= set(kinds)]
    weights = {kind: Fraction(branch.degree_of(kind), branch.degree_of(kind) - 1)
               for kind in kinds}

    candidates: List[_Candidate] = []
    order = 0
    for size in range(1, len(eligible) + 1):
        for subset in itertools.combinations(eligible, size):
            order += 1
            covered = set(itertools.chain.from_iterable(form.support for form in subset))
            if covered != set(kinds):
                continue
            rows = [
                [
                    form.multiplicities.get(kind, 0) * weights[kind]
                    - form.multiplicities.get(kinds[0], 0) * weights[kinds[0]]
                    for form in subset
                ]
                for kind in kinds[1:]
            ]
            if rows:
                basis = latalg.nullspace(rows)
            else:
                basis = [tuple(Fraction(1) for _ in subset)] if size == 1 else []
            if len(basis) != 1:
                continue
            ray = _integral_ray(basis[0])
            if ray is None:
                continue
            weight = sum((a * form.weight for a, form in zip(ray, subset)), Fraction(0))
            candidates.append(
                _Candidate(weight, order, {form.name: a for a, form in zip(ray, subset)})
            )

    if not candidates:
        return SlopeVerdict(
            s=None,
            verdict=Verdict.NO_MATCH,
            assumption=Assumption.I,
            notes=["no nonnegative combination of the forms matches the branch divisor"],
        )
    best = min(candidates, key=lambda candidate: (candidate.weight, candidate.order))
    by_name = {form.name: form for form in forms}
    combined = combine({by_name[name]: a for name, a in best.exponents.items()})
    result = check_assumption_i(branch, combined, family)
    result.exponents = dict(best.exponents)
    LOGGER.info("Best combination %s has weight %s", best.exponents, best.weight)
    return result


@dataclass(frozen=True)
class CurveDegrees:
    automorphic: Fraction
    branch: Fraction
    canonical: Fraction


def curve_degrees(s: Fraction) -> CurveDegrees:
    """Degrees of L, B and K on the boundary curve of a 1-cusp with 2s(L.C) = (B.C) = 1."""
    s = Fraction(s)
    if s <= 0:
        raise ValueError(f"Slope must be positive, got {s}")
    automorphic = 1 / (2 * s)
    return CurveDegrees(
        automorphic=automorphic,
        branch=Fraction(1),
        canonical=(1 - s) * automorphic,
    )


LEECH_CURVE_CANONICAL_DEGREE = curve_degrees(Fraction(3, 13)).canonical
