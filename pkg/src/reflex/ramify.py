"""Branch divisors of orthogonal and unitary modular varieties.

Every class is keyed by the norm of its reflective vectors and a parity flag.
A class is reported present only with an explicit witness; absent classes
say whether their absence is proven or only a consequence of the search box.
"""
import logging
import math
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from . import hlat
from . import latalg
from . import qlat
from .errors import InvalidArgument
from .errors import WrongSignature
from .exactnum import FieldElem
from .exactnum import format_elem
from .hlat import HermLattice
from .hlat import SpecialEvenScope
from .latalg import EnumBudget
from .qlat import QuadLattice
from .types import AbsentClass
from .types import BranchClass
from .types import BranchReport
from .types import DivisorKind
from .types import GroupChoice
from .types import ModularFamily

LOGGER = logging.getLogger(__file__)

DEFAULT_ORTHOGONAL_BOUND = -4
DEFAULT_UNITARY_BOUND = -2
DEFAULT_SEARCH_NODES = 200_000
WITNESS_SAMPLE = 8
ORTHOGONAL_DEGREE = 2


def _sparse_norm(gram: Sequence[Sequence[int]], v: Sequence[int]) -> int:
    support = [i for i, x in enumerate(v) if x]
    return sum(v[i] * v[j] * gram[i][j] for i in support for j in support)


def _search_budget(budget: Optional[EnumBudget]) -> EnumBudget:
    return budget or EnumBudget(max_nodes=DEFAULT_SEARCH_NODES)


def orthogonal_kind(k: int) -> DivisorKind:
    return DivisorKind(-2 * k, k % 2 == 0)


def is_orth_witness(
    lattice: QuadLattice, v: Sequence[int], kind: DivisorKind, group: GroupChoice
) -> bool:
    if not any(v) or qlat.content(v) != 1 or lattice.norm(v) != kind.norm:
        return False
    if qlat.is_special_even(lattice, v) != kind.special_even:
        return False
    return qlat.reflection_in_group(lattice, v, group)


def orth_branch_report(
    lattice: QuadLattice,
    group: GroupChoice = GroupChoice.FULL_PLUS,
    norm_bound: int = DEFAULT_ORTHOGONAL_BOUND,
    search_budget: Optional[EnumBudget] = None,
) -> BranchReport:
    invariants = qlat.invariants(lattice)
    pos, neg = invariants.signature
    if pos != 2 or neg <= 2:
        raise WrongSignature(
            f"{lattice.name} has signature {invariants.signature}, expected (2, n) with n > 2"
        )
    if norm_bound >= 0 or norm_bound % 2:
        raise InvalidArgument(
            f"Orthogonal norm bound must be even and negative, got {norm_bound}"
        )
    if group is GroupChoice.UNITARY:
        raise InvalidArgument("Orthogonal reports take the full_plus or stable group")
    budget = _search_budget(search_budget)

    classes: List[BranchClass] = []
    absent: List[AbsentClass] = []
    for k in range(1, -norm_bound // 2 + 1):
        kind = orthogonal_kind(k)
        if k > 1 and invariants.exponent % k:
            absent.append(
                AbsentClass(
                    kind,
                    exhaustive=True,
                    reason=f"{k} does not divide the exponent {invariants.exponent} "
                    "of the discriminant group",
                )
            )
            continue
        LOGGER.info("Searching %s witnesses in %s", kind.label, lattice.name)

        def predicate(v: Tuple[int, ...]) -> bool:
            if _sparse_norm(lattice.gram, v) != kind.norm or qlat.content(v) != 1:
                return False
            if qlat.is_special_even(lattice, v) != kind.special_even:
                return False
            return qlat.reflection_in_group(lattice, v, group)

        found, _ = latalg.search_witnesses(lattice.rank, predicate, max_nodes=budget.max_nodes)
        if found:
            LOGGER.debug("Witness for %s: %s", kind.label, found[0])
            classes.append(BranchClass(kind, ORTHOGONAL_DEGREE, found[0], exhaustive=True))
        else:
            LOGGER.warning("No witness for %s in %s within the search box", kind.label,
                           lattice.name)
            absent.append(
                AbsentClass(kind, exhaustive=False, reason="no witness in search box")
            )

    return BranchReport(
        lattice=lattice.name,
        group=group,
        family=ModularFamily.orthogonal(lattice.rank - 2),
        classes=tuple(classes),
        absent=tuple(absent),
    )


def admissible_units(lattice: HermLattice, r: Sequence[Any]) -> List[FieldElem]:
    return [
        xi
        for xi in lattice.field.units
        if xi != 1 and hlat.tau_in_unitary_group(lattice, r, xi)
    ]


def unit_group_order(lattice: HermLattice, units: Sequence[FieldElem]) -> int:
    """Order of the (cyclic) subgroup generated by the units."""
    order = 1
    for unit in units:
        unit_order = lattice.field.unit_order(unit)
        order = order * unit_order // math.gcd(order, unit_order)
    return order


def dual_exponent(lattice: HermLattice) -> int:
    """Least positive integer e with e * delta * H^-1 integral over O_F."""
    field = lattice.field
    exponent = 1
    for row in hlat.dual(lattice):
        for x in row:
            denominator = field.denominator(x)
            exponent = exponent * denominator // math.gcd(exponent, denominator)
    return exponent


def unitary_class_is_empty(lattice: HermLattice, kind: DivisorKind, exponent: int) -> bool:
    """True when no primitive vector of the class can have an admissible quasi-reflection."""
    field = lattice.field
    k = -kind.norm
    content_floor = exponent * field.delta
    two_delta = 2 * field.delta
    for xi in field.units:
        if xi == 1:
            continue
        bound = k / (1 - xi.conjugate())
        if not field.divides(bound, content_floor):
            continue
        if not kind.special_even and field.divides(two_delta, bound):
            continue
        if kind.special_even and not field.divides(two_delta, content_floor):
            continue
        return False
    return True


def is_herm_witness(lattice: HermLattice, v: Sequence[Any], kind: DivisorKind) -> bool:
    v = lattice.vector(v)
    if not any(v) or lattice.norm(v) != kind.norm or not hlat.is_primitive(lattice, v):
        return False
    if hlat.herm_special_even(lattice, v, SpecialEvenScope.LATTICE) != kind.special_even:
        return False
    return bool(admissible_units(lattice, v))


def unitary_branch_report(
    lattice: HermLattice,
    norm_bound: int = DEFAULT_UNITARY_BOUND,
    search_budget: Optional[EnumBudget] = None,
) -> BranchReport:
    pos, neg = hlat.herm_signature(lattice)
    if pos != 1 or neg <= 1:
        raise WrongSignature(
            f"{lattice.name} has signature {(pos, neg)}, expected (1, n) with n > 1"
        )
    if norm_bound >= 0:
        raise InvalidArgument(f"Unitary norm bound must be negative, got {norm_bound}")
    budget = _search_budget(search_budget)
    form = hlat.trace_form(lattice)
    exponent = dual_exponent(lattice)

    classes: List[BranchClass] = []
    absent: List[AbsentClass] = []
    for k in range(1, -norm_bound + 1):
        for special_even in (False, True):
            kind = DivisorKind(-k, special_even)
            if unitary_class_is_empty(lattice, kind, exponent):
                absent.append(
                    AbsentClass(kind, exhaustive=True, reason="no unit can be admissible")
                )
                continue
            LOGGER.info("Searching %s witnesses in %s", kind.label, lattice.name)

            def predicate(x: Tuple[int, ...]) -> bool:
                if _sparse_norm(form.gram, x) != 2 * kind.norm:
                    return False
                return is_herm_witness(lattice, hlat.from_trace_coords(lattice, x), kind)

            found, _ = latalg.search_witnesses(
                form.rank, predicate, limit=WITNESS_SAMPLE, max_nodes=budget.max_nodes
            )
            if not found:
                LOGGER.warning("No witness for %s in %s within the search box", kind.label,
                               lattice.name)
                absent.append(
                    AbsentClass(kind, exhaustive=False, reason="no witness in search box")
                )
                continue
            classes.append(_unitary_class(lattice, kind, found))

    return BranchReport(
        lattice=lattice.name,
        group=GroupChoice.UNITARY,
        family=ModularFamily.unitary(lattice.rank - 1),
        classes=tuple(classes),
        absent=tuple(absent),
    )


def _unitary_class(
    lattice: HermLattice, kind: DivisorKind, found: Sequence[Tuple[int, ...]]
) -> BranchClass:
    degrees: Dict[int, Tuple[hlat.HermVector, List[FieldElem]]] = {}
    for x in found:
        v = hlat.from_trace_coords(lattice, x)
        units = admissible_units(lattice, v)
        degrees.setdefault(unit_group_order(lattice, units), (v, units))
    degree = max(degrees)
    if len(degrees) > 1:
        LOGGER.warning(
            "Witnesses of %s in %s disagree on the ramification degree (%s); using %d",
            kind.label,
            lattice.name,
            sorted(degrees),
            degree,
        )
    witness, units = degrees[degree]
    LOGGER.debug("Witness for %s: %s (degree %d)", kind.label, witness, degree)
    return BranchClass(
        kind,
        degree,
        witness,
        exhaustive=True,
        units=tuple(format_elem(u) for u in units),
    )


def verify_class(lattice: Any, branch: BranchClass, group: GroupChoice) -> bool:
    """Re-check a reported witness independently of the search that found it."""
    if branch.witness is None:
        return False
    if isinstance(lattice, HermLattice):
        units = admissible_units(lattice, branch.witness)
        return (
            is_herm_witness(lattice, branch.witness, branch.kind)
            and unit_group_order(lattice, units) == branch.degree
        )
    return branch.degree == ORTHOGONAL_DEGREE and is_orth_witness(
        lattice, branch.witness, branch.kind, group
    )


def branch_report(
    lattice: Any,
    group: GroupChoice = GroupChoice.FULL_PLUS,
    norm_bound: Optional[int] = None,
    search_budget: Optional[EnumBudget] = None,
) -> BranchReport:
    if isinstance(lattice, HermLattice):
        return unitary_branch_report(
            lattice,
            DEFAULT_UNITARY_BOUND if norm_bound is None else norm_bound,
            search_budget,
        )
    return orth_branch_report(
        lattice,
        group,
        DEFAULT_ORTHOGONAL_BOUND if norm_bound is None else norm_bound,
        search_budget,
    )
