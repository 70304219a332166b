"""Every Hermitian lattice against the quadratic lattice its trace form should be."""
import pytest

from reflex import hlat
from reflex import latalg
from reflex import qlat
from reflex.constructions import TRACE_MODELS
from reflex.constructions import hermitian_builtins
from reflex.constructions import quadratic_builtins


@pytest.mark.parametrize("name", sorted(TRACE_MODELS))
def test_trace_form_matches_its_model(name):
    # GIVEN

    lattice = hermitian_builtins()[name]
    model = quadratic_builtins()[TRACE_MODELS[name]]

    # WHEN

    trace = qlat.invariants(hlat.trace_form(lattice))

    # THEN

    assert trace == qlat.invariants(model)


@pytest.mark.parametrize("name", ["Lambda_E8_d-1", "Lambda_E8_d-2"])
def test_hermitian_e8_models_have_240_roots(name):
    trace = hlat.trace_form(hermitian_builtins()[name])

    result = latalg.enumerate_norm_vectors(trace.gram, -2)

    assert len(result.vectors) == 240
    assert result.exhaustive


def test_e8_shells():
    e8 = quadratic_builtins()["E8m"]

    assert len(latalg.enumerate_norm_vectors(e8.gram, -2).vectors) == 240
    assert len(latalg.enumerate_norm_vectors(e8.gram, -4).vectors) == 2160
