import json
from fractions import Fraction

import pytest

from reflex import catalog
from reflex.catalog import Catalog
from reflex.catalog import builtin_catalog
from reflex.catalog import load_catalog
from reflex.catalog import load_entries
from reflex.errors import SchemaError
from reflex.errors import UnknownEntry
from reflex.errors import UnsupportedField
from reflex.types import DivisorKind
from reflex.types import Verdict
from tests.utils import quad_entry
from tests.utils import write_catalog

A2_GRAM = ((2, -1), (-1, 2))


def _form_entry(**overrides):
    entry = {
        "kind": "form",
        "name": "F",
        "ambient": "II_2_10",
        "weight": "7/2",
        "divisor": [{"norm": -2, "special_even": False, "mult": "1/2"}],
    }
    entry.update(overrides)
    return entry


def test_builtin_catalog():
    # WHEN

    builtins = builtin_catalog()

    # THEN

    assert builtins.quad_lattice("Lambda_Enr").rank == 12
    assert builtins.herm_lattice("Lambda_minus1").d == -1
    assert builtins.form("Phi12").ambient == "II_2_26"
    assert builtins.cusp("sterk1").lattice == "Lambda_Enr"
    assert builtins.trace_models["Lambda_UUtwo_E8two_d-1"] == "Lambda_Enr"
    assert builtins.labels["Lambda_logEnr_3"] == "U(2)+A1+A1(-1)^6"
    assert builtins.model_family("II_2_26") == {
        "II_2_26_leech": builtins.quad_lattice("II_2_26_leech")
    }
    reference = builtins.references["Lambda_UUtwo_E8two_d-2"]
    assert reference.slope == Fraction(1, 6)
    assert reference.verdict is Verdict.CANONICAL_MODEL


@pytest.mark.parametrize(
    "lookup", ["lattice", "quad_lattice", "herm_lattice", "form", "cusp"]
)
def test_unknown_entries(lookup):
    with pytest.raises(UnknownEntry, match="nope"):
        getattr(builtin_catalog(), lookup)("nope")


def test_lattice_lookup_covers_both_kinds():
    builtins = builtin_catalog()

    assert builtins.lattice("II_2_10") is builtins.quad_lattices["II_2_10"]
    assert builtins.lattice("Lambda_minus2") is builtins.herm_lattices["Lambda_minus2"]


def test_load_new_entries():
    # GIVEN

    entries = [
        quad_entry("A2", A2_GRAM, source="root lattice", label="A_2"),
        {
            "kind": "herm_lattice",
            "name": "Gauss",
            "field_d": -1,
            "gram": [["0", "1/2*sqrt(-1)"], ["-1/2*sqrt(-1)", "0"]],
        },
        _form_entry(),
        {
            "kind": "cusp",
            "name": "u",
            "lattice": "II_2_10",
            "cusp_basis": [[1] + [0] * 11],
        },
    ]

    # WHEN

    result = load_entries(builtin_catalog(), entries)

    # THEN

    assert result.quad_lattice("A2").gram == A2_GRAM
    assert result.sources["A2"] == "root lattice"
    assert result.labels["A2"] == "A_2"
    assert result.herm_lattice("Gauss").d == -1
    form = result.form("F")
    assert form.weight == Fraction(7, 2)
    assert form.multiplicities == {DivisorKind(-2): Fraction(1, 2)}
    assert result.cusp("u").dim == 1


def test_reference_block():
    entry = quad_entry(
        "A2",
        A2_GRAM,
        reference={
            "source": "table",
            "slope": "3/13",
            "verdict": "CanonicalModel",
            "degrees": {"-2": 2, "-4,se": 4},
        },
    )

    result = load_entries(Catalog(), [entry])

    reference = result.references["A2"]
    assert reference.slope == Fraction(3, 13)
    assert reference.verdict is Verdict.CANONICAL_MODEL
    assert reference.degrees == {DivisorKind(-2): 2, DivisorKind(-4, True): 4}
    assert result.entry("quad_lattice", "A2")["reference"]["degrees"] == {
        "-4,se": 4,
        "-2": 2,
    }


@pytest.mark.parametrize(
    "entry, field_path",
    [
        (quad_entry("A2", ((2.0, -1), (-1, 2))), "gram[0][0]"),
        (quad_entry("A2", ((2, -1), (1, 2))), "gram"),
        (quad_entry("A2", A2_GRAM, colour="blue"), ""),
        ({"kind": "quad_lattice", "name": "A2"}, "gram"),
        ({"kind": "lattice", "name": "A2"}, "kind"),
        (_form_entry(weight=3.5), "weight"),
        (_form_entry(divisor=[{"norm": -2, "mult": "1", "order": 2}]), "divisor[0]"),
        (_form_entry(divisor=[{"norm": -2, "special_even": "no", "mult": "1"}]),
         "divisor[0].special_even"),
        (_form_entry(divisor=[{"norm": -2, "mult": "0"}]), "divisor"),
        (quad_entry("A2", A2_GRAM, reference={"slope": "1/2", "year": 2020}), "reference"),
        (quad_entry("A2", A2_GRAM, reference={"verdict": "Great"}), "reference.verdict"),
    ],
    ids=[
        "float",
        "not-symmetric",
        "unknown-field",
        "missing-field",
        "unknown-kind",
        "float-weight",
        "unknown-divisor-field",
        "special-even-type",
        "zero-multiplicity",
        "unknown-reference-field",
        "unknown-verdict",
    ],
)
def test_schema_errors(entry, field_path):
    with pytest.raises(SchemaError) as excinfo:
        load_entries(builtin_catalog(), [entry])

    assert excinfo.value.field_path == field_path
    assert str(excinfo.value).startswith("Schema error in ")


def test_schema_error_names_the_entry():
    with pytest.raises(SchemaError, match=r"Schema error in A2:gram\[0\]\[0\]"):
        load_entries(Catalog(), [quad_entry("A2", (("x", -1), (-1, 2)))])


def test_unsupported_field():
    entry = {"kind": "herm_lattice", "name": "bad", "field_d": -5, "gram": [["1"]]}
    with pytest.raises(UnsupportedField):
        load_entries(builtin_catalog(), [entry])


def test_identical_duplicate_is_accepted():
    # GIVEN

    builtins = builtin_catalog()
    existing = builtins.entry("quad_lattice", "II_2_10")

    # WHEN

    result = load_entries(builtins, [json.loads(json.dumps(existing))])

    # THEN

    assert result.quad_lattice("II_2_10").rank == 12


def test_conflicting_duplicate_is_rejected():
    with pytest.raises(SchemaError, match="conflicts"):
        load_entries(builtin_catalog(), [quad_entry("U", ((0, 2), (2, 0)))])


def test_name_shared_between_lattice_kinds_is_rejected():
    with pytest.raises(SchemaError, match="already exists"):
        load_entries(builtin_catalog(), [quad_entry("Lambda_minus1", A2_GRAM)])


def test_form_on_an_unknown_lattice():
    with pytest.raises(SchemaError) as excinfo:
        load_entries(builtin_catalog(), [_form_entry(ambient="nowhere")])

    assert excinfo.value.entry == "F"
    assert excinfo.value.field_path == "ambient"


def test_cusp_basis_of_the_wrong_length():
    entry = {"kind": "cusp", "name": "c", "lattice": "II_2_10", "cusp_basis": [[1, 0]]}

    with pytest.raises(SchemaError) as excinfo:
        load_entries(builtin_catalog(), [entry])

    assert excinfo.value.field_path == "cusp_basis"


def test_load_catalog_from_a_directory(tmp_path):
    # GIVEN

    write_catalog(tmp_path, "lattices.json", [quad_entry("A2", A2_GRAM)])
    write_catalog(tmp_path, "form.json", _form_entry(ambient="A2", divisor=[]))

    # WHEN

    result = load_catalog(tmp_path)

    # THEN

    assert result.quad_lattice("A2").rank == 2
    assert result.form("F").ambient == "A2"
    assert result.form("Phi12").ambient == "II_2_26"


def test_load_catalog_from_the_environment(tmp_path, monkeypatch):
    write_catalog(tmp_path, "a2.json", quad_entry("A2", A2_GRAM))
    monkeypatch.setenv(catalog.CATALOG_ENV, str(tmp_path))

    assert load_catalog().has("quad_lattice", "A2")


def test_load_catalog_without_a_directory(monkeypatch):
    monkeypatch.delenv(catalog.CATALOG_ENV, raising=False)

    assert set(load_catalog().quad_lattices) == set(builtin_catalog().quad_lattices)


def test_missing_catalog_directory(tmp_path):
    with pytest.raises(SchemaError, match="does not exist"):
        load_catalog(tmp_path / "missing")


def test_float_literal_in_a_file(tmp_path):
    text = '{"kind": "quad_lattice", "name": "x", "gram": [[2.0]]}'
    (tmp_path / "bad.json").write_text(text)

    with pytest.raises(SchemaError) as excinfo:
        load_catalog(tmp_path)

    assert excinfo.value.entry == "bad.json"


def test_dump_and_reload(tmp_path):
    # GIVEN

    original = load_entries(builtin_catalog(), [quad_entry("A2", A2_GRAM, source="root")])

    # WHEN

    written = catalog.dump_catalog(original, tmp_path)
    reloaded = load_catalog(tmp_path)

    # THEN

    assert [path.name for path in written] == [
        "quad_lattice.json",
        "herm_lattice.json",
        "form.json",
        "cusp.json",
    ]
    assert reloaded.entries() == original.entries()


def test_canonical_json():
    assert catalog.canonical_json({"b": [1, "2/3"], "a": None}) == '{"a":null,"b":[1,"2/3"]}'
    with pytest.raises(ValueError, match=r"b\[1\]"):
        catalog.canonical_json({"b": [1, 0.5]})
