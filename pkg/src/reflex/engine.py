"""The operations behind each command, from catalog names to a Report."""
import logging
from dataclasses import dataclass
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from . import cusp
from . import hlat
from . import latalg
from . import qlat
from . import ramify
from . import slope
from .catalog import CUSP
from .catalog import FORM
from .catalog import HERM_LATTICE
from .catalog import QUAD_LATTICE
from .catalog import Catalog
from .catalog import form_entry
from .errors import AmbientMismatch
from .exactnum import format_rational
from .hlat import HermLattice
from .latalg import EnumBudget
from .ledger import FormRecord
from .ledger import restrict_to_ball
from .qlat import QuadLattice
from .report import Report
from .report import branch_payload
from .report import cusp_payload
from .report import exact
from .report import input_hashes
from .report import invariants_payload
from .report import slope_payload
from .types import Assumption
from .types import BranchReport
from .types import GroupChoice
from .types import SlopeVerdict

LOGGER = logging.getLogger(__file__)

RESTRICTION_SUFFIX = "|"

Lattice = Union[QuadLattice, HermLattice]
InputList = List[Tuple[str, str]]


@dataclass(frozen=True)
class Settings:
    """Knobs shared by every command."""

    budget_nodes: Optional[int] = None
    budget_results: Optional[int] = None
    workers: int = 1

    def enum_budget(self, rank: int) -> EnumBudget:
        if self.budget_nodes is None:
            return EnumBudget.for_rank(rank, self.budget_results)
        return EnumBudget(self.budget_nodes, self.budget_results)

    def search_budget(self) -> Optional[EnumBudget]:
        if self.budget_nodes is None:
            return None
        return EnumBudget(self.budget_nodes)


def _lattice_kind(lattice: Lattice) -> str:
    return HERM_LATTICE if isinstance(lattice, HermLattice) else QUAD_LATTICE


def _trace_model(catalog: Catalog, lattice: HermLattice) -> Optional[QuadLattice]:
    name = catalog.trace_models.get(lattice.name)
    return catalog.quad_lattice(name) if name else None


def resolve_form(
    catalog: Catalog, name: str, lattice: Lattice, inputs: InputList
) -> FormRecord:
    """A catalog form, or its restriction to a ball when the name ends in '|'."""
    if not name.endswith(RESTRICTION_SUFFIX):
        form = catalog.form(name)
        inputs.append((FORM, name))
        return form
    base = catalog.form(name[: -len(RESTRICTION_SUFFIX)])
    inputs.append((FORM, base.name))
    if not isinstance(lattice, HermLattice):
        raise AmbientMismatch(f"Restricted forms such as {name} need a Hermitian lattice")
    ambient = catalog.quad_lattice(base.ambient)
    inputs.append((QUAD_LATTICE, ambient.name))
    return restrict_to_ball(base, lattice, ambient)


def _branch_report(
    lattice: Lattice, group: GroupChoice, settings: Settings,
    norm_bound: Optional[int] = None,
) -> BranchReport:
    if isinstance(lattice, HermLattice):
        group = GroupChoice.UNITARY
    return ramify.branch_report(lattice, group, norm_bound, settings.search_budget())


def _degree_notes(catalog: Catalog, branch: BranchReport) -> List[str]:
    reference = catalog.references.get(branch.lattice)
    if reference is None:
        return []
    notes = []
    for kind, degree in sorted(reference.degrees.items()):
        if kind not in branch.support:
            notes.append(
                f"{reference.source or 'reference'} lists {kind.label} with degree {degree}, "
                "which is not a branch class here"
            )
        elif branch.degree_of(kind) != degree:
            notes.append(
                f"{reference.source or 'reference'} gives degree {degree} for {kind.label}; "
                f"computed degree is {branch.degree_of(kind)}"
            )
    return notes


def _slope_notes(catalog: Catalog, lattice: str, verdict: SlopeVerdict) -> List[str]:
    reference = catalog.references.get(lattice)
    if reference is None:
        return []
    source = reference.source or "reference"
    notes = []
    if reference.slope is not None and verdict.s is not None and reference.slope != verdict.s:
        notes.append(
            f"{source} gives s = {format_rational(reference.slope)}; "
            f"computed s = {format_rational(verdict.s)}"
        )
    if reference.verdict is not None and reference.verdict is not verdict.verdict:
        notes.append(
            f"{source} gives the verdict {reference.verdict.value}; "
            f"computed verdict is {verdict.verdict.value}"
        )
    for note in notes:
        LOGGER.warning(note)
    return notes


def _finish(
    catalog: Catalog,
    command: str,
    inputs: InputList,
    result: dict,
    notes: Sequence[str] = (),
    exhaustive: bool = True,
    negative: bool = False,
) -> Report:
    return Report(
        command=command,
        inputs=input_hashes(catalog, sorted(set(inputs))),
        result=result,
        notes=list(notes),
        exhaustive=exhaustive,
        negative=negative,
    )


def lattice_info(catalog: Catalog, name: str) -> Report:
    lattice = catalog.lattice(name)
    inputs: InputList = [(_lattice_kind(lattice), name)]
    if isinstance(lattice, QuadLattice):
        result = invariants_payload(name, qlat.invariants(lattice))
        result["label"] = catalog.labels.get(name, "")
        return _finish(catalog, "lattice info", inputs, result)

    invariants = hlat.herm_invariants(lattice)
    trace = qlat.invariants(hlat.trace_form(lattice))
    b = hlat.scaling_factor(lattice)
    result = {
        "lattice": name,
        "label": catalog.labels.get(name, ""),
        "field_d": lattice.d,
        "rank": lattice.rank,
        "signature": list(invariants.signature),
        "unimodular": invariants.is_unimodular,
        "even": invariants.is_even,
        "scaling_factor": exact(b),
        "predicts_unramified": hlat.predicts_unramified(lattice),
        "trace_form": invariants_payload(f"{name}_trace", trace),
    }
    notes = []
    model = _trace_model(catalog, lattice)
    if model is not None:
        inputs.append((QUAD_LATTICE, model.name))
        result["trace_model"] = model.name
        result["trace_model_matches"] = qlat.invariants(model) == trace
        if not result["trace_model_matches"]:
            notes.append(
                f"The trace form of {name} does not have the invariants of {model.name}"
            )
    return _finish(catalog, "lattice info", inputs, result, notes)


def lattice_roots(catalog: Catalog, name: str, norm: int, settings: Settings) -> Report:
    lattice = catalog.lattice(name)
    inputs: InputList = [(_lattice_kind(lattice), name)]
    notes = []
    if isinstance(lattice, HermLattice):
        lattice = hlat.trace_form(lattice)
        notes.append(f"Vectors counted in the trace form of {name}")
    found = latalg.enumerate_norm_vectors(
        lattice.gram, norm, settings.enum_budget(lattice.rank), workers=settings.workers,
        pairs_only=True,
    )
    result = {
        "lattice": name,
        "norm": norm,
        "count": 2 * len(found.vectors),
        "nodes": found.nodes,
    }
    return _finish(catalog, "lattice roots", inputs, result, notes, found.exhaustive)


def herm_trace_form(catalog: Catalog, name: str) -> Report:
    lattice = catalog.herm_lattice(name)
    trace = hlat.trace_form(lattice)
    inputs: InputList = [(HERM_LATTICE, name)]
    result = {
        "lattice": name,
        "basis": "e_1, w*e_1, e_2, w*e_2, ...",
        "gram": [list(row) for row in trace.gram],
        "invariants": invariants_payload(trace.name, qlat.invariants(trace)),
    }
    model = _trace_model(catalog, lattice)
    if model is not None:
        inputs.append((QUAD_LATTICE, model.name))
        result["trace_model"] = model.name
        result["trace_model_matches"] = qlat.invariants(model) == qlat.invariants(trace)
    return _finish(catalog, "herm trace-form", inputs, result)


def ramify_lattice(
    catalog: Catalog,
    name: str,
    group: GroupChoice,
    settings: Settings,
    norm_bound: Optional[int] = None,
) -> Report:
    lattice = catalog.lattice(name)
    branch = _branch_report(lattice, group, settings, norm_bound)
    notes = _degree_notes(catalog, branch)
    unramified = isinstance(lattice, HermLattice) and hlat.predicts_unramified(lattice)
    if unramified and branch.classes:
        notes.append(
            f"{name} is a scaled unimodular lattice that should have no branch classes"
        )
        LOGGER.warning(notes[-1])
    return _finish(
        catalog,
        "ramify",
        [(_lattice_kind(lattice), name)],
        branch_payload(branch),
        notes,
        branch.exhaustive,
    )


def classify(
    catalog: Catalog,
    lattice_name: str,
    form_name: str,
    group: GroupChoice,
    assumption: Assumption,
    settings: Settings,
) -> Report:
    lattice = catalog.lattice(lattice_name)
    inputs: InputList = [(_lattice_kind(lattice), lattice_name)]
    form = resolve_form(catalog, form_name, lattice, inputs)
    branch = _branch_report(lattice, group, settings)
    if assumption is Assumption.I:
        verdict = slope.check_assumption_i(branch, form)
    else:
        verdict = slope.check_assumption_ii(branch, form)
    LOGGER.info("%s on %s: %s", form.name, lattice_name, verdict.verdict.value)
    result = {
        "lattice": lattice_name,
        "form": form_entry(form),
        "branch": branch_payload(branch),
        "slope": slope_payload(verdict),
    }
    notes = verdict.notes + _degree_notes(catalog, branch) + _slope_notes(
        catalog, lattice_name, verdict
    )
    return _finish(
        catalog,
        "classify",
        inputs,
        result,
        notes,
        branch.exhaustive,
        verdict.verdict.is_negative,
    )


def combine(
    catalog: Catalog,
    lattice_name: str,
    form_names: Sequence[str],
    group: GroupChoice,
    settings: Settings,
) -> Report:
    lattice = catalog.lattice(lattice_name)
    inputs: InputList = [(_lattice_kind(lattice), lattice_name)]
    forms = [resolve_form(catalog, name, lattice, inputs) for name in form_names]
    branch = _branch_report(lattice, group, settings)
    verdict = slope.find_assumption_i_combination(branch, forms)
    result = {
        "lattice": lattice_name,
        "forms": [form.name for form in forms],
        "branch": branch_payload(branch),
        "slope": slope_payload(verdict),
    }
    notes = verdict.notes + _degree_notes(catalog, branch) + _slope_notes(
        catalog, lattice_name, verdict
    )
    return _finish(
        catalog,
        "combine",
        inputs,
        result,
        notes,
        branch.exhaustive,
        verdict.verdict.is_negative,
    )


def cusp_analysis(
    catalog: Catalog,
    lattice_name: str,
    cusp_names: Sequence[str],
    group: GroupChoice,
    settings: Settings,
) -> Report:
    lattice = catalog.quad_lattice(lattice_name)
    inputs: InputList = [(QUAD_LATTICE, lattice_name)]
    cusps = [catalog.cusp(name) for name in cusp_names]
    models = catalog.model_family(lattice_name)
    for c in cusps:
        inputs.append((CUSP, c.label))
        if c.lattice != lattice_name:
            inputs.append((QUAD_LATTICE, c.lattice))
    branch = _branch_report(lattice, group, settings)
    budget = settings.enum_budget(lattice.rank - 4)
    report = cusp.naked_report(lattice, cusps, branch, budget, settings.workers, models)
    result = {"branch": branch_payload(branch), **cusp_payload(report)}
    return _finish(
        catalog, "cusp", inputs, result, report.notes, report.exhaustive and branch.exhaustive
    )


def ledger_list(catalog: Catalog, ambient: Optional[str] = None) -> Report:
    forms = [
        form for name, form in sorted(catalog.forms.items())
        if ambient is None or form.ambient == ambient
    ]
    inputs = [(FORM, form.name) for form in forms]
    return _finish(catalog, "ledger list", inputs, {"forms": [form_entry(f) for f in forms]})


def ledger_show(catalog: Catalog, name: str) -> Report:
    form = catalog.form(name)
    return _finish(catalog, "ledger show", [(FORM, name)], {"form": form_entry(form)})
