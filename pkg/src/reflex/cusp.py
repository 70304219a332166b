"""Cusps of orthogonal modular varieties and their position against branch divisors.

A cusp is given by a saturated isotropic line or plane E in the lattice. It
lies in the closure of a branch divisor when E^perp contains a reflective
vector of the class; the search runs in the quotient (E^perp)/E and every
hit is lifted and re-checked in the lattice itself.
"""
import dataclasses
import itertools
import logging
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

from . import latalg
from . import qlat
from .errors import AmbientMismatch
from .errors import NotIsotropic
from .errors import NotSaturated
from .errors import WrongSignature
from .latalg import EnumBudget
from .latalg import Vector
from .qlat import QuadLattice
from .ramify import DEFAULT_SEARCH_NODES
from .ramify import is_orth_witness
from .types import BranchClass
from .types import BranchReport
from .types import CuspReport
from .types import CuspRow
from .types import GroupChoice
from .types import Incidence
from .types import IsotropicSubspace

LOGGER = logging.getLogger(__file__)


def _check_cusp(lattice: QuadLattice, cusp: IsotropicSubspace) -> None:
    if cusp.dim not in (1, 2):
        raise ValueError(f"Cusp {cusp.label} must be spanned by 1 or 2 vectors")
    if any(len(v) != lattice.rank for v in cusp.basis):
        raise ValueError(f"Basis of cusp {cusp.label} does not live in rank {lattice.rank}")
    for x, y in itertools.combinations_with_replacement(cusp.basis, 2):
        if lattice.pair(x, y):
            raise NotIsotropic(f"Cusp {cusp.label}: ({x}, {y}) = {lattice.pair(x, y)}")
    divisors = latalg.elementary_divisors(cusp.basis)
    if len(divisors) != cusp.dim:
        raise NotSaturated(f"Basis of cusp {cusp.label} is linearly dependent")
    if any(abs(d) != 1 for d in divisors):
        raise NotSaturated(
            f"Cusp {cusp.label} is not saturated (elementary divisors {divisors})"
        )


def quotient_basis(lattice: QuadLattice, cusp: IsotropicSubspace) -> List[Vector]:
    """Vectors of E^perp whose images form a basis of (E^perp)/E."""
    _check_cusp(lattice, cusp)
    complement = qlat.orth_complement(lattice, cusp.basis)
    gram = latalg.mat_mul(complement, latalg.transpose(complement))
    coords = latalg.to_int_matrix(
        latalg.mat_mul(
            latalg.mat_mul(cusp.basis, latalg.transpose(complement)), latalg.inverse(gram)
        )
    )
    D, _, V = latalg.snf(coords)
    assert all(D[i][i] in (1, -1) for i in range(cusp.dim)), "E is not saturated in E^perp"
    adapted = latalg.to_int_matrix(latalg.mat_mul(latalg.inverse(V), complement))
    return [tuple(row) for row in adapted[cusp.dim:]]


def _quotient(
    lattice: QuadLattice, cusp: IsotropicSubspace
) -> Tuple[QuadLattice, List[Vector]]:
    pos, neg = qlat.invariants(lattice).signature
    if pos != 2:
        raise WrongSignature(
            f"{lattice.name} has signature {(pos, neg)}, expected signature (2, n)"
        )
    lifts = quotient_basis(lattice, cusp)
    return qlat.sublattice(lattice, lifts, f"{lattice.name}/{cusp.label}"), lifts


def quotient_lattice(lattice: QuadLattice, cusp: IsotropicSubspace) -> QuadLattice:
    quotient, _ = _quotient(lattice, cusp)
    return quotient


def _residue_period(lattice: QuadLattice, k: int, group: GroupChoice) -> int:
    """Lifts x + sum c_j e_j only matter for c_j modulo this period."""
    if k == 1:
        return 1
    if group is GroupChoice.STABLE:
        return k * qlat.invariants(lattice).exponent
    return k


def _lift_witness(
    lattice: QuadLattice,
    cusp: IsotropicSubspace,
    lift: Vector,
    branch: BranchClass,
    group: GroupChoice,
) -> Optional[Vector]:
    period = _residue_period(lattice, -branch.kind.norm // 2, group)
    for shifts in itertools.product(range(period), repeat=cusp.dim):
        x = list(lift)
        for shift, e in zip(shifts, cusp.basis):
            x = [a + shift * b for a, b in zip(x, e)]
        if is_orth_witness(lattice, x, branch.kind, group):
            return tuple(x)
    return None


def _lift(lifts: Sequence[Vector], y: Sequence[int]) -> Vector:
    return tuple(
        sum(c * lift[i] for c, lift in zip(y, lifts)) for i in range(len(lifts[0]))
    )


def _definite_incidence(
    lattice: QuadLattice,
    cusp: IsotropicSubspace,
    quotient: QuadLattice,
    lifts: Sequence[Vector],
    branch: BranchClass,
    group: GroupChoice,
    budget: Optional[EnumBudget],
    workers: int,
) -> Incidence:
    result = latalg.enumerate_norm_vectors(
        quotient.gram, branch.kind.norm, budget, workers=workers, pairs_only=True
    )
    LOGGER.info(
        "%s: %d pairs of norm %d vectors in the quotient (exhaustive: %s)",
        cusp.label,
        len(result.vectors),
        branch.kind.norm,
        result.exhaustive,
    )
    for y in result.vectors:
        witness = _lift_witness(lattice, cusp, _lift(lifts, y), branch, group)
        if witness is not None:
            LOGGER.debug("%s lies in %s, witness %s", cusp.label, branch.kind.label, witness)
            return Incidence(branch.kind, True, witness, True, 2 * len(result.vectors))
    return Incidence(branch.kind, False, None, result.exhaustive, 2 * len(result.vectors))


def _sparse_incidence(
    lattice: QuadLattice,
    cusp: IsotropicSubspace,
    quotient: QuadLattice,
    lifts: Sequence[Vector],
    branch: BranchClass,
    group: GroupChoice,
    max_nodes: int,
) -> Incidence:
    witnesses: List[Vector] = []

    def predicate(y: Tuple[int, ...]) -> bool:
        if quotient.norm(y) != branch.kind.norm:
            return False
        witness = _lift_witness(lattice, cusp, _lift(lifts, y), branch, group)
        if witness is None:
            return False
        witnesses.append(witness)
        return True

    latalg.search_witnesses(quotient.rank, predicate, max_nodes=max_nodes)
    if witnesses:
        return Incidence(branch.kind, True, witnesses[0], True)
    LOGGER.warning(
        "No %s vector orthogonal to %s in the search box", branch.kind.label, cusp.label
    )
    return Incidence(branch.kind, False, None, False)


def cusp_branch_incidence(
    lattice: QuadLattice,
    cusp: IsotropicSubspace,
    branch: BranchReport,
    budget: Optional[EnumBudget] = None,
    workers: int = 1,
) -> CuspRow:
    quotient, lifts = _quotient(lattice, cusp)
    LOGGER.info("Cusp %s of %s: quotient of rank %d", cusp.label, lattice.name, quotient.rank)
    incidences = []
    for branch_class in branch.classes:
        if cusp.dim == 2:
            incidence = _definite_incidence(
                lattice, cusp, quotient, lifts, branch_class, branch.group, budget, workers
            )
        else:
            max_nodes = budget.max_nodes if budget else DEFAULT_SEARCH_NODES
            incidence = _sparse_incidence(
                lattice, cusp, quotient, lifts, branch_class, branch.group, max_nodes
            )
        incidences.append(incidence)
    return CuspRow(cusp=cusp, quotient_gram=quotient.gram, incidences=tuple(incidences))


def _cusp_lattice(
    lattice: QuadLattice, cusp: IsotropicSubspace, models: Mapping[str, QuadLattice]
) -> QuadLattice:
    if cusp.lattice == lattice.name:
        return lattice
    model = models.get(cusp.lattice)
    if model is None:
        raise AmbientMismatch(f"Cusp {cusp.label} lives on {cusp.lattice}, not {lattice.name}")
    if qlat.invariants(model) != qlat.invariants(lattice):
        raise AmbientMismatch(
            f"Cusp {cusp.label} lives on {cusp.lattice}, "
            f"which is not a model of {lattice.name}"
        )
    LOGGER.info("Evaluating cusp %s on the model %s", cusp.label, model.name)
    return model


def naked_report(
    lattice: QuadLattice,
    cusps: Sequence[IsotropicSubspace],
    branch: BranchReport,
    budget: Optional[EnumBudget] = None,
    workers: int = 1,
    models: Optional[Mapping[str, QuadLattice]] = None,
) -> CuspReport:
    """Incidences of every cusp with every branch class, and which cusps are naked.

    Cusps may live on another model of the lattice (same invariants) given in
    `models`; the branch classes are keyed by norm and carry over unchanged.
    """
    if branch.lattice != lattice.name:
        raise AmbientMismatch(
            f"Branch report is for {branch.lattice}, not for {lattice.name}"
        )
    rows = [
        cusp_branch_incidence(_cusp_lattice(lattice, cusp, models or {}), cusp, branch,
                              budget, workers)
        for cusp in cusps
    ]
    report = CuspReport(lattice=lattice.name, rows=tuple(rows))
    notes = []
    if report.naked_count > 1:
        notes.append(
            f"{report.naked_count} naked cusps found; a Fano compactification has at most "
            "one minimal naked cusp"
        )
        LOGGER.warning(notes[-1])
    return dataclasses.replace(report, notes=tuple(notes))
