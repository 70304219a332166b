from fractions import Fraction

import pytest

from reflex import ledger
from reflex.constructions import hermitian_builtins
from reflex.constructions import quadratic_builtins
from reflex.errors import AmbientMismatch
from reflex.ledger import FormRecord
from reflex.ledger import builtin_forms
from reflex.types import DivisorKind

H_1 = DivisorKind(-1)
H_2 = DivisorKind(-2)
H_2_SE = DivisorKind(-2, True)
H_4_SE = DivisorKind(-4, True)


def test_builtin_forms():
    forms = builtin_forms()

    assert forms["Phi12"].ambient == "II_2_26"
    assert forms["Phi12"].weight == 12
    assert forms["Phi124"].support == (H_4_SE,)
    assert forms["Psi124_k1"].weight == 114
    assert forms["Psi11_k7"].ambient == "Lambda_logEnr_7"
    assert forms["F128"].multiplicities == {H_2: 1, H_4_SE: 1}
    assert forms["F128"].weight == ledger.product(forms["Phi4"], forms["Phi124"]).weight
    assert all(form.divisor for form in forms.values())


def test_divisor_is_normalized():
    form = FormRecord("f", "L", 1, ((H_2, 1), (H_4_SE, Fraction(1, 2))))
    assert form.divisor == ((H_4_SE, Fraction(1, 2)), (H_2, Fraction(1)))
    assert form.multiplicities[H_2] == 1


@pytest.mark.parametrize(
    "divisor",
    [((H_2, 1), (H_2, 2)), ((H_2, 0),), ((H_2, -1),)],
    ids=["repeated", "zero", "negative"],
)
def test_invalid_divisors(divisor):
    with pytest.raises(ValueError):
        FormRecord("f", "L", 1, divisor)


def test_product_adds_weights_and_divisors():
    # GIVEN

    forms = builtin_forms()

    # WHEN

    product = ledger.product(forms["Phi4"], forms["Phi124"])

    # THEN

    assert product.name == "Phi4*Phi124"
    assert product.weight == 128
    assert product.multiplicities == {H_2: 1, H_4_SE: 1}
    assert product.character_note == forms["Phi4"].character_note


def test_product_of_forms_on_different_lattices():
    forms = builtin_forms()
    with pytest.raises(AmbientMismatch):
        ledger.product(forms["Phi12"], forms["Phi252"])


def test_power():
    phi = builtin_forms()["Phi12"]

    cube = ledger.power(phi, 3)

    assert cube.name == "Phi12^3"
    assert cube.weight == 36
    assert cube.multiplicities == {H_2: 3}
    assert ledger.power(phi, 1) is phi
    with pytest.raises(ValueError):
        ledger.power(phi, 0)


def test_combine_skips_zero_exponents():
    forms = builtin_forms()

    combined = ledger.combine({forms["Phi4"]: 3, forms["Phi124"]: 2})
    only_phi4 = ledger.combine({forms["Phi4"]: 1, forms["Phi124"]: 0}, name="F")

    assert combined.weight == 260
    assert combined.multiplicities == {H_2: 3, H_4_SE: 2}
    assert only_phi4.name == "F"
    assert only_phi4.multiplicities == {H_2: 1}
    with pytest.raises(ValueError):
        ledger.combine({forms["Phi4"]: 0})


@pytest.mark.parametrize("d, factor", [(-1, 2), (-2, 1), (-3, 3)])
def test_restriction_factor(d, factor):
    lattice = next(lat for lat in hermitian_builtins().values() if lat.d == d)
    assert ledger.restriction_factor(lattice) == factor


def test_restriction_to_a_ball():
    # GIVEN

    forms = builtin_forms()
    ball = hermitian_builtins()["Lambda_UUtwo_E8two_d-1"]
    ambient = quadratic_builtins()["Lambda_Enr"]

    # WHEN

    phi4 = ledger.restrict_to_ball(forms["Phi4"], ball, ambient)
    phi124 = ledger.restrict_to_ball(forms["Phi124"], ball, ambient)

    # THEN

    assert phi4.name == "Phi4|"
    assert phi4.ambient == ball.name
    assert phi4.weight == 4
    assert phi4.multiplicities == {H_1: 2}
    assert phi124.multiplicities == {H_2_SE: 2}


def test_restriction_needs_the_ambient_of_the_form():
    forms = builtin_forms()
    ball = hermitian_builtins()["Lambda_UUtwo_E8two_d-1"]

    with pytest.raises(AmbientMismatch):
        ledger.restrict_to_ball(forms["Phi4"], ball, quadratic_builtins()["II_2_10"])


def test_restriction_needs_matching_trace_form():
    forms = builtin_forms()
    ball = hermitian_builtins()["Lambda_UU_E8_d-1_rank6"]

    with pytest.raises(AmbientMismatch):
        ledger.restrict_to_ball(forms["Phi12"], ball, quadratic_builtins()["II_2_26"])


@pytest.mark.parametrize(
    "ball, ambient, names",
    [
        ("Lambda_UUtwo_E8two_d-1", "Lambda_Enr", ("Phi4", "Phi124")),
        ("Lambda_UUtwo_E8two_d-2", "Lambda_Enr", ("Phi4", "Phi124")),
        ("Lambda_UU_E8_d-1_rank6", "II_2_10", ("Phi252", "Phi252")),
        ("Lambda_minus2", "U_U_E8m2", ("Psi12", "Psi12")),
    ],
    ids=["enriques-d-1", "enriques-d-2", "e8-d-1", "e8two-d-2"],
)
@pytest.mark.parametrize("t", [1, 2, 5])
def test_restriction_commutes_with_product_and_power(ball, ambient, names, t):
    # GIVEN

    forms = builtin_forms()
    lattice = hermitian_builtins()[ball]
    quadratic = quadratic_builtins()[ambient]
    f, g = (forms[name] for name in names)

    def restrict(form):
        return ledger.restrict_to_ball(form, lattice, quadratic)

    # WHEN

    product_first = restrict(ledger.product(f, g))
    restricted_first = ledger.product(restrict(f), restrict(g))
    power_first = restrict(ledger.power(f, t))
    restricted_power = ledger.power(restrict(f), t)

    # THEN

    assert product_first.ambient == restricted_first.ambient == ball
    assert product_first.weight == restricted_first.weight
    assert product_first.multiplicities == restricted_first.multiplicities
    assert power_first.weight == restricted_power.weight
    assert power_first.multiplicities == restricted_power.multiplicities
