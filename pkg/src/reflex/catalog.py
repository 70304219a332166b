"""JSON catalog of lattices, forms and cusps, merged over the built-ins.

A catalog directory holds ``*.json`` files, each containing one entry or a
list of entries. Every number is exact: integers, "p/q" strings, or field
element strings such as "1/2 + -1/2*sqrt(-1)". Floats are rejected.
"""
import dataclasses
import json
import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Any
from typing import Callable
from typing import Dict
from typing import Iterable
from typing import List
from typing import Optional
from typing import Tuple
from typing import Union

from . import constructions
from .errors import ReflexError
from .errors import SchemaError
from .errors import UnknownEntry
from .errors import UnsupportedField
from .exactnum import format_elem
from .exactnum import format_rational
from .exactnum import make_field
from .exactnum import parse_elem
from .exactnum import parse_rational
from .hlat import HermLattice
from .ledger import FormRecord
from .ledger import builtin_forms
from .qlat import QuadLattice
from .types import DivisorKind
from .types import IsotropicSubspace
from .types import Verdict

LOGGER = logging.getLogger(__file__)

CATALOG_ENV = "REFLEX_CATALOG"

QUAD_LATTICE = "quad_lattice"
HERM_LATTICE = "herm_lattice"
FORM = "form"
CUSP = "cusp"
KINDS = (QUAD_LATTICE, HERM_LATTICE, FORM, CUSP)

ALLOWED_FIELDS = {
    QUAD_LATTICE: {"kind", "name", "gram", "source", "label", "model_of", "reference"},
    HERM_LATTICE: {
        "kind", "name", "field_d", "gram", "source", "label", "trace_model", "reference"
    },
    FORM: {"kind", "name", "ambient", "weight", "divisor", "character_note", "source"},
    CUSP: {"kind", "name", "lattice", "cusp_basis", "source"},
}
REFERENCE_FIELDS = {"slope", "verdict", "source", "degrees"}

Entry = Dict[str, Any]


@dataclasses.dataclass(frozen=True)
class Reference:
    """Published values for a lattice that computed results are compared against."""

    source: str
    slope: Optional[Fraction] = None
    verdict: Optional[Verdict] = None
    degrees: Dict[DivisorKind, int] = dataclasses.field(default_factory=dict)


@dataclasses.dataclass
class Catalog:
    quad_lattices: Dict[str, QuadLattice] = dataclasses.field(default_factory=dict)
    herm_lattices: Dict[str, HermLattice] = dataclasses.field(default_factory=dict)
    forms: Dict[str, FormRecord] = dataclasses.field(default_factory=dict)
    cusps: Dict[str, IsotropicSubspace] = dataclasses.field(default_factory=dict)
    references: Dict[str, Reference] = dataclasses.field(default_factory=dict)
    trace_models: Dict[str, str] = dataclasses.field(default_factory=dict)
    models: Dict[str, str] = dataclasses.field(default_factory=dict)
    labels: Dict[str, str] = dataclasses.field(default_factory=dict)
    sources: Dict[str, str] = dataclasses.field(default_factory=dict)

    def lattice(self, name: str) -> Union[QuadLattice, HermLattice]:
        if name in self.quad_lattices:
            return self.quad_lattices[name]
        if name in self.herm_lattices:
            return self.herm_lattices[name]
        raise UnknownEntry(f"Unknown lattice {name!r}")

    def quad_lattice(self, name: str) -> QuadLattice:
        try:
            return self.quad_lattices[name]
        except KeyError:
            raise UnknownEntry(f"Unknown quadratic lattice {name!r}") from None

    def herm_lattice(self, name: str) -> HermLattice:
        try:
            return self.herm_lattices[name]
        except KeyError:
            raise UnknownEntry(f"Unknown Hermitian lattice {name!r}") from None

    def form(self, name: str) -> FormRecord:
        try:
            return self.forms[name]
        except KeyError:
            raise UnknownEntry(f"Unknown form {name!r}") from None

    def cusp(self, name: str) -> IsotropicSubspace:
        try:
            return self.cusps[name]
        except KeyError:
            raise UnknownEntry(f"Unknown cusp {name!r}") from None

    def model_family(self, name: str) -> Dict[str, QuadLattice]:
        """Quadratic lattices declared as models of the named lattice."""
        return {
            model: self.quad_lattices[model]
            for model, target in sorted(self.models.items())
            if target == name and model in self.quad_lattices
        }

    def _members(self, kind: str) -> Dict[str, Any]:
        return {
            QUAD_LATTICE: self.quad_lattices,
            HERM_LATTICE: self.herm_lattices,
            FORM: self.forms,
            CUSP: self.cusps,
        }[kind]

    def has(self, kind: str, name: str) -> bool:
        return name in self._members(kind)

    def entry(self, kind: str, name: str) -> Entry:
        """The canonical JSON object of one entry."""
        members = self._members(kind)
        if name not in members:
            raise UnknownEntry(f"Unknown {kind} {name!r}")
        if kind == QUAD_LATTICE:
            return quad_lattice_entry(self, members[name])
        if kind == HERM_LATTICE:
            return herm_lattice_entry(self, members[name])
        if kind == FORM:
            return form_entry(members[name])
        return cusp_entry(self, members[name])

    def entries(self) -> List[Entry]:
        """Every catalog entry in canonical form, sorted by kind and name."""
        return [
            self.entry(kind, name) for kind in KINDS for name in sorted(self._members(kind))
        ]

    def update(self, other: "Catalog") -> None:
        for field in dataclasses.fields(self):
            getattr(self, field.name).update(getattr(other, field.name))


def canonical_json(obj: Any, indent: Optional[int] = None) -> str:
    """Deterministic JSON: sorted keys and no floats anywhere."""
    _reject_floats(obj, "")
    separators = (",", ": ") if indent else (",", ":")
    return json.dumps(obj, sort_keys=True, indent=indent, separators=separators)


def _reject_floats(obj: Any, path: str) -> None:
    if isinstance(obj, float):
        raise ValueError(f"Floating point value at {path or '<root>'}")
    if isinstance(obj, dict):
        for key, value in obj.items():
            _reject_floats(value, f"{path}.{key}" if path else str(key))
    elif isinstance(obj, (list, tuple)):
        for i, value in enumerate(obj):
            _reject_floats(value, f"{path}[{i}]")


def _optional(entry: Entry, **fields: Any) -> Entry:
    entry.update((key, value) for key, value in fields.items() if value)
    return entry


def _reference_entry(reference: Optional[Reference]) -> Optional[Entry]:
    if reference is None:
        return None
    return _optional(
        {"source": reference.source},
        slope=reference.slope is not None and format_rational(reference.slope),
        verdict=reference.verdict and reference.verdict.value,
        degrees={kind.key: degree for kind, degree in sorted(reference.degrees.items())},
    )


def quad_lattice_entry(catalog: Catalog, lattice: QuadLattice) -> Entry:
    return _optional(
        {"kind": QUAD_LATTICE, "name": lattice.name, "gram": [list(r) for r in lattice.gram]},
        source=catalog.sources.get(lattice.name),
        label=catalog.labels.get(lattice.name),
        model_of=catalog.models.get(lattice.name),
        reference=_reference_entry(catalog.references.get(lattice.name)),
    )


def herm_lattice_entry(catalog: Catalog, lattice: HermLattice) -> Entry:
    return _optional(
        {
            "kind": HERM_LATTICE,
            "name": lattice.name,
            "field_d": lattice.d,
            "gram": [[format_elem(x) for x in row] for row in lattice.gram],
        },
        source=catalog.sources.get(lattice.name),
        label=catalog.labels.get(lattice.name),
        trace_model=catalog.trace_models.get(lattice.name),
        reference=_reference_entry(catalog.references.get(lattice.name)),
    )


def form_entry(form: FormRecord) -> Entry:
    return _optional(
        {
            "kind": FORM,
            "name": form.name,
            "ambient": form.ambient,
            "weight": format_rational(form.weight),
            "divisor": [
                {"norm": kind.norm, "special_even": kind.special_even,
                 "mult": format_rational(mult)}
                for kind, mult in form.divisor
            ],
        },
        character_note=form.character_note,
        source=form.source,
    )


def cusp_entry(catalog: Catalog, cusp: IsotropicSubspace) -> Entry:
    return _optional(
        {
            "kind": CUSP,
            "name": cusp.label,
            "lattice": cusp.lattice,
            "cusp_basis": [list(v) for v in cusp.basis],
        },
        source=catalog.sources.get(f"cusp:{cusp.label}"),
    )


class _EntryReader:
    """Field access on one raw entry that reports failures with their path."""

    def __init__(self, entry: Entry, name: Optional[str]) -> None:
        self.entry = entry
        self.name = name

    def error(self, message: str, field_path: str = "") -> SchemaError:
        return SchemaError(message, entry=self.name, field_path=field_path)

    def get(self, key: str, required: bool = True, default: Any = None) -> Any:
        if key not in self.entry:
            if required:
                raise self.error("missing required field", key)
            return default
        return self.entry[key]

    def string(self, key: str, required: bool = True) -> str:
        value = self.get(key, required, "")
        if not isinstance(value, str):
            raise self.error(f"expected a string, got {value!r}", key)
        return value

    def integer(self, key: str) -> int:
        value = self.get(key)
        if not isinstance(value, int) or isinstance(value, bool):
            raise self.error(f"expected an integer, got {value!r}", key)
        return value

    def convert(self, key: str, value: Any, parse: Callable[[Any], Any]) -> Any:
        try:
            return parse(value)
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise self.error(str(e), key) from None

    def matrix(self, key: str, parse: Callable[[Any], Any]) -> List[List[Any]]:
        rows = self.get(key)
        if not isinstance(rows, list) or not rows:
            raise self.error("expected a non-empty list of rows", key)
        result = []
        for i, row in enumerate(rows):
            if not isinstance(row, list):
                raise self.error("expected a list", f"{key}[{i}]")
            result.append(
                [self.convert(f"{key}[{i}][{j}]", value, parse) for j, value in enumerate(row)]
            )
        return result


def _parse_int(value: Any) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"expected an integer, got {value!r}")
    return value


def _parse_exact_rational(value: Any) -> Fraction:
    if not isinstance(value, (int, str)):
        raise ValueError(f"expected an integer or a 'p/q' string, got {value!r}")
    return parse_rational(value)


def _parse_reference(reader: _EntryReader) -> Optional[Reference]:
    raw = reader.get("reference", required=False)
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise reader.error("expected an object", "reference")
    unknown = set(raw) - REFERENCE_FIELDS
    if unknown:
        raise reader.error(f"unknown fields {sorted(unknown)}", "reference")
    sub = _EntryReader(raw, reader.name)
    slope = raw.get("slope")
    verdict = raw.get("verdict")
    degrees = raw.get("degrees", {})
    if not isinstance(degrees, dict):
        raise reader.error("expected an object", "reference.degrees")
    return Reference(
        source=sub.string("source", required=False),
        slope=None if slope is None else sub.convert(
            "reference.slope", slope, _parse_exact_rational
        ),
        verdict=None if verdict is None else sub.convert(
            "reference.verdict", verdict, Verdict
        ),
        degrees={
            sub.convert(f"reference.degrees.{key}", key, DivisorKind.parse_key): sub.convert(
                f"reference.degrees.{key}", value, _parse_int
            )
            for key, value in degrees.items()
        },
    )


def _parse_divisor(reader: _EntryReader) -> List[Any]:
    raw = reader.get("divisor")
    if not isinstance(raw, list):
        raise reader.error("expected a list", "divisor")
    divisor = []
    for i, item in enumerate(raw):
        path = f"divisor[{i}]"
        if not isinstance(item, dict) or set(item) - {"norm", "special_even", "mult"}:
            raise reader.error("expected {norm, special_even, mult}", path)
        sub = _EntryReader(item, reader.name)
        norm = sub.convert(f"{path}.norm", sub.get("norm"), _parse_int)
        special_even = sub.get("special_even", required=False, default=False)
        if not isinstance(special_even, bool):
            raise reader.error("expected a boolean", f"{path}.special_even")
        mult = sub.convert(f"{path}.mult", sub.get("mult"), _parse_exact_rational)
        divisor.append((DivisorKind(norm, special_even), mult))
    return divisor


def _parse_entry(entry: Entry) -> Tuple[str, str, Catalog, _EntryReader]:
    """Parse one raw entry into a catalog holding only that entry."""
    if not isinstance(entry, dict):
        raise SchemaError(f"expected an object, got {type(entry).__name__}")
    name = entry.get("name")
    reader = _EntryReader(entry, name if isinstance(name, str) else None)
    kind = reader.string("kind")
    if kind not in KINDS:
        raise reader.error(f"unknown kind {kind!r}", "kind")
    name = reader.string("name")
    if not name:
        raise reader.error("must not be empty", "name")
    unknown = set(entry) - ALLOWED_FIELDS[kind]
    if unknown:
        raise reader.error(f"unknown fields {sorted(unknown)}")
    source = reader.string("source", required=False)
    scratch = Catalog()

    if kind == QUAD_LATTICE:
        gram = reader.matrix("gram", _parse_int)
        scratch.quad_lattices[name] = reader.convert(
            "gram", gram, lambda g: QuadLattice(name, g)
        )
        _set_metadata(scratch, reader, name, source)
        model_of = reader.string("model_of", required=False)
        if model_of:
            scratch.models[name] = model_of
    elif kind == HERM_LATTICE:
        d = reader.integer("field_d")
        make_field(d)
        gram = reader.matrix("gram", lambda x: parse_elem(x, d))
        scratch.herm_lattices[name] = reader.convert(
            "gram", gram, lambda g: HermLattice(name, d, g)
        )
        _set_metadata(scratch, reader, name, source)
        trace_model = reader.string("trace_model", required=False)
        if trace_model:
            scratch.trace_models[name] = trace_model
    elif kind == FORM:
        form = reader.convert(
            "divisor",
            _parse_divisor(reader),
            lambda divisor: FormRecord(
                name=name,
                ambient=reader.string("ambient"),
                weight=reader.convert(
                    "weight", reader.get("weight"), _parse_exact_rational
                ),
                divisor=divisor,
                character_note=reader.string("character_note", required=False),
                source=source,
            ),
        )
        scratch.forms[name] = form
    else:
        basis = reader.matrix("cusp_basis", _parse_int)
        scratch.cusps[name] = IsotropicSubspace(
            reader.string("lattice"), tuple(tuple(v) for v in basis), name
        )
        if source:
            scratch.sources[f"cusp:{name}"] = source
    return kind, name, scratch, reader


def _add_entry(catalog: Catalog, entry: Entry) -> None:
    """Merge one entry; a repeated name is accepted only for an identical entry."""
    kind, name, scratch, reader = _parse_entry(entry)
    if catalog.has(kind, name):
        if catalog.entry(kind, name) != scratch.entry(kind, name):
            raise reader.error("conflicts with an existing entry of the same name", "name")
        LOGGER.debug("Entry %s repeats an existing identical entry", name)
        return
    other = {QUAD_LATTICE: HERM_LATTICE, HERM_LATTICE: QUAD_LATTICE}.get(kind)
    if other and catalog.has(other, name):
        raise reader.error(f"a {other} with this name already exists", "name")
    catalog.update(scratch)


def _set_metadata(catalog: Catalog, reader: _EntryReader, name: str, source: str) -> None:
    if source:
        catalog.sources[name] = source
    label = reader.string("label", required=False)
    if label:
        catalog.labels[name] = label
    reference = _parse_reference(reader)
    if reference is not None:
        catalog.references[name] = reference


def _check_references(catalog: Catalog) -> None:
    for form in catalog.forms.values():
        if not catalog.has(QUAD_LATTICE, form.ambient) and not catalog.has(
            HERM_LATTICE, form.ambient
        ):
            raise SchemaError(
                f"unknown ambient lattice {form.ambient!r}",
                entry=form.name,
                field_path="ambient",
            )
    for cusp in catalog.cusps.values():
        lattice = catalog.quad_lattices.get(cusp.lattice)
        if lattice is None:
            raise SchemaError(
                f"unknown quadratic lattice {cusp.lattice!r}",
                entry=cusp.label,
                field_path="lattice",
            )
        if any(len(v) != lattice.rank for v in cusp.basis):
            raise SchemaError(
                f"basis vectors must have length {lattice.rank}",
                entry=cusp.label,
                field_path="cusp_basis",
            )


BUILTIN_REFERENCES = {
    "Lambda_UUtwo_E8two_d-1": Reference(
        source="published ball quotient over Q(sqrt(-1)): (Phi4|^2 Phi124|^3)^12",
        slope=Fraction(62),
        verdict=Verdict.FANO,
        degrees={DivisorKind(-1): 2, DivisorKind(-2, True): 4},
    ),
    "Lambda_UUtwo_E8two_d-2": Reference(
        source="published ball quotient over Q(sqrt(-2)): Phi4|^12",
        slope=Fraction(1, 6),
        verdict=Verdict.CANONICAL_MODEL,
    ),
}

BUILTIN_LABELS = {
    "II_2_26": "II_{2,26} = U+U+E8(-1)^3",
    "II_2_26_leech": "II_{2,26} = U+U+Leech(-1)",
    "II_2_10": "II_{2,10} = U+U+E8(-1)",
    "Lambda_Enr": "U+U(2)+E8(-2)",
    "Lambda_E8_d-1": "Iyanaga lattice",
}


def builtin_catalog() -> Catalog:
    catalog = Catalog(
        quad_lattices=dict(constructions.quadratic_builtins()),
        herm_lattices=dict(constructions.hermitian_builtins()),
        forms=dict(builtin_forms()),
        cusps=dict(constructions.cusp_builtins()),
        references=dict(BUILTIN_REFERENCES),
        trace_models=dict(constructions.TRACE_MODELS),
        models=dict(constructions.MODEL_OF),
        labels=dict(BUILTIN_LABELS),
    )
    for name in catalog.quad_lattices:
        if name.startswith("Lambda_logEnr_"):
            catalog.labels[name] = f"U(2)+A1+A1(-1)^{9 - int(name.rsplit('_', 1)[1])}"
    return catalog


def _reject_float_literal(text: str) -> Any:
    raise ValueError(f"floating point literal {text}")


def _read_entries(path: Path) -> Iterable[Entry]:
    try:
        data = json.loads(path.read_text(), parse_float=_reject_float_literal)
    except ValueError as e:
        raise SchemaError(str(e), entry=path.name) from None
    if isinstance(data, list):
        yield from data
    else:
        yield data


def load_entries(catalog: Catalog, entries: Iterable[Entry]) -> Catalog:
    for entry in entries:
        try:
            _add_entry(catalog, entry)
        except (SchemaError, UnsupportedField):
            raise
        except ReflexError as e:
            name = entry.get("name") if isinstance(entry, dict) else None
            raise SchemaError(str(e), entry=name) from e
    _check_references(catalog)
    return catalog


def load_catalog(directory: Optional[Union[str, Path]] = None) -> Catalog:
    """Built-ins plus every entry found in the directory.

    Without a directory argument the REFLEX_CATALOG environment variable is
    consulted; with neither, only the built-ins are returned.
    """
    catalog = builtin_catalog()
    if directory is None:
        directory = os.getenv(CATALOG_ENV) or None
    if directory is None:
        return catalog
    path = Path(directory)
    if not path.is_dir():
        raise SchemaError(f"catalog directory {path} does not exist")
    files = sorted(path.glob("*.json"))
    LOGGER.info("Loading %d catalog files from %s", len(files), path)
    for file in files:
        LOGGER.debug("Reading catalog file %s", file)
        load_entries(catalog, _read_entries(file))
    return catalog


def dump_catalog(catalog: Catalog, directory: Union[str, Path]) -> List[Path]:
    """Write every entry as canonical JSON, one file per kind."""
    path = Path(directory)
    path.mkdir(parents=True, exist_ok=True)
    written = []
    entries = catalog.entries()
    for kind in KINDS:
        target = path / f"{kind}.json"
        target.write_text(
            canonical_json([e for e in entries if e["kind"] == kind], indent=2) + "\n"
        )
        written.append(target)
    return written
