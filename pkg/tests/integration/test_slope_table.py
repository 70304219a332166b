"""Slopes and verdicts of the known reflective forms, end to end from the catalog."""
from fractions import Fraction

import pytest

from reflex import engine
from reflex.catalog import builtin_catalog
from reflex.constructions import LOG_ENRIQUES_KS
from reflex.types import Assumption
from reflex.types import GroupChoice

SETTINGS = engine.Settings()


@pytest.fixture(scope="module")
def catalog():
    return builtin_catalog()


def _classify(catalog, lattice, form, assumption=Assumption.I):
    report = engine.classify(
        catalog, lattice, form, GroupChoice.FULL_PLUS, assumption, SETTINGS
    )
    return report.result["slope"], report


@pytest.mark.parametrize(
    "lattice, form, s, verdict",
    [
        ("II_2_26", "Phi12", "3/13", "CanonicalModel"),
        ("II_2_10", "Phi252", "63/5", "Fano"),
        ("Lambda_Enr", "F128", "32/5", "Fano"),
        ("Lambda_UU_E8_d-1_rank14", "Phi12|", "3/14", "CanonicalModel"),
        ("Lambda_UU_E8_d-1_rank6", "Phi252|", "21/2", "Fano"),
        ("Lambda_UUtwo_E8two_d-2", "Phi4|", "1/3", "CanonicalModel"),
    ],
)
def test_single_form_slopes(catalog, lattice, form, s, verdict):
    # WHEN

    slope, report = _classify(catalog, lattice, form)

    # THEN

    assert slope["s"] == s
    assert slope["verdict"] == verdict
    assert report.exhaustive


def test_enriques_product(catalog):
    # WHEN

    report = engine.combine(
        catalog, "Lambda_Enr", ["Phi4", "Phi124"], GroupChoice.FULL_PLUS, SETTINGS
    )

    # THEN

    slope = report.result["slope"]
    assert slope["exponents"] == {"Phi124": 1, "Phi4": 1}
    assert slope["weight"] == "128"
    assert slope["s"] == "32/5"
    assert slope["verdict"] == "Fano"


@pytest.mark.parametrize("k", LOG_ENRIQUES_KS)
def test_log_enriques_products(catalog, k):
    # GIVEN

    forms = [f"Psi{4 + k}_k{k}", f"Psi124_k{k}"]
    expected = Fraction(128 - 8 * k - k * k, 2 * (10 - k))

    # WHEN

    report = engine.combine(
        catalog, f"Lambda_logEnr_{k}", forms, GroupChoice.FULL_PLUS, SETTINGS
    )

    # THEN

    slope = report.result["slope"]
    assert Fraction(slope["s"]) == expected
    assert slope["exponents"] == {name: 1 for name in forms}


@pytest.mark.parametrize("k, s", [(1, "119/18"), (3, "95/14"), (7, "23/6")])
def test_log_enriques_table_values(catalog, k, s):
    report = engine.combine(
        catalog,
        f"Lambda_logEnr_{k}",
        [f"Psi{4 + k}_k{k}", f"Psi124_k{k}"],
        GroupChoice.FULL_PLUS,
        SETTINGS,
    )

    assert report.result["slope"]["s"] == s


def test_gaussian_ball_quotient_combination(catalog):
    # WHEN

    report = engine.combine(
        catalog,
        "Lambda_UUtwo_E8two_d-1",
        ["Phi4|", "Phi124|"],
        GroupChoice.FULL_PLUS,
        SETTINGS,
    )

    # THEN

    slope = report.result["slope"]
    assert slope["exponents"] == {"Phi124|": 2, "Phi4|": 3}
    assert slope["s"] == "65/12"
    assert slope["verdict"] == "Fano"
    degrees = {c["key"]: c["degree"] for c in report.result["branch"]["classes"]}
    assert degrees == {"-1": 4, "-2,se": 2}
    assert any("gives degree 2 for H(-1)" in note for note in report.notes)


def test_assumption_ii_without_conclusion(catalog):
    slope, report = _classify(catalog, "Lambda_minus1", "Psi12|", Assumption.II)

    assert slope["s"] == "1/2"
    assert slope["verdict"] == "NoConclusion"
    assert report.negative


@pytest.mark.parametrize("lattice", ["Lambda_minus2", "Lambda_UU_E8_d-2_rank14"])
def test_unramified_ball_quotients(catalog, lattice):
    report = engine.ramify_lattice(catalog, lattice, GroupChoice.FULL_PLUS, SETTINGS)

    assert report.result["classes"] == []
