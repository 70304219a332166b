from fractions import Fraction
from unittest.mock import patch

import pytest

from reflex import latalg
from reflex.constructions import E8
from reflex.constructions import E8m
from reflex.errors import BudgetExceeded
from reflex.errors import NotDefinite
from reflex.errors import NotPositiveDefinite
from reflex.latalg import EnumBudget
from tests.utils import A2


def test_smith_normal_form_certificate(monkeypatch):
    # GIVEN

    monkeypatch.setenv(latalg.CHECK_CERTIFICATES_ENV, "1")
    matrix = ((2, 4, 4), (-6, 6, 12), (10, -4, -16))

    # WHEN

    D, U, V = latalg.snf(matrix)

    # THEN

    assert latalg.mat_mul(U, latalg.mat_mul(matrix, V)) == D
    assert [D[i][i] for i in range(3)] == [2, 6, 12]


@pytest.mark.parametrize(
    "matrix, expected",
    [
        (((2, 4), (6, 8)), [2, 4]),
        (((0, 1), (1, 0)), [1, 1]),
        (((2, 0), (0, 2), (1, 1)), [1, 2]),
        (((0, 0), (0, 3)), [3]),
    ],
)
def test_elementary_divisors(matrix, expected):
    assert latalg.elementary_divisors(matrix) == expected


def test_determinant_and_inverse():
    assert latalg.det(((2, 1), (1, 1))) == 1
    assert latalg.inverse(((2, 1), (1, 1))) == ((1, -1), (-1, 2))
    assert latalg.inverse(((2, 0), (0, 4))) == ((Fraction(1, 2), 0), (0, Fraction(1, 4)))
    with pytest.raises(ValueError):
        latalg.inverse(((1, 2), (2, 4)))


def test_nullspace_is_rational():
    (vector,) = latalg.nullspace(((Fraction(-8, 3), 4),))
    assert vector == (Fraction(3, 2), 1)


def test_integer_kernel_is_primitive():
    # GIVEN

    matrix = ((2, 4),)

    # WHEN

    (vector,) = latalg.integer_kernel(matrix)

    # THEN

    assert 2 * vector[0] + 4 * vector[1] == 0
    assert abs(vector[1]) == 1


def test_row_basis_spans_the_same_lattice():
    basis = latalg.row_basis(((2, 0), (0, 2), (1, 1)))

    assert len(basis) == 2
    assert abs(latalg.det(basis)) == 2
    assert latalg.row_basis(basis) == basis


@pytest.mark.parametrize(
    "gram, expected",
    [
        (((0, 1), (1, 0)), (1, 1, 0)),
        (E8.gram, (8, 0, 0)),
        (E8m.gram, (0, 8, 0)),
        (((1, 0), (0, 0)), (1, 0, 1)),
        (((0, 0), (0, 0)), (0, 0, 2)),
    ],
    ids=["hyperbolic-plane", "e8", "e8-negative", "degenerate", "zero"],
)
def test_signature(gram, expected):
    assert latalg.signature(gram) == expected


def test_lll_undoes_a_shear():
    # GIVEN

    gram = ((1, 5), (5, 26))

    # WHEN

    T = latalg.lll(gram)

    # THEN

    reduced = latalg.mat_mul(latalg.mat_mul(T, gram), latalg.transpose(T))
    assert reduced == ((1, 0), (0, 1))
    assert abs(latalg.det(T)) == 1


def test_lll_needs_a_positive_definite_form():
    with pytest.raises(NotPositiveDefinite):
        latalg.lll(((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        latalg.lll(A2.gram, delta=Fraction(1, 5))


def test_enumeration_of_e8_roots():
    # WHEN

    result = latalg.enumerate_norm_vectors(E8.gram, 2)

    # THEN

    assert len(result.vectors) == 240
    assert result.exhaustive
    assert all(latalg.bilinear(E8.gram, v, v) == 2 for v in result.vectors)


def test_enumeration_of_a_negative_definite_lattice_in_pairs():
    result = latalg.enumerate_norm_vectors(E8m.gram, -2, pairs_only=True)

    assert len(result.vectors) == 120
    assert all(next(x for x in v if x) > 0 for v in result.vectors)


def test_enumeration_without_lll_finds_the_same_vectors():
    with_lll = latalg.enumerate_norm_vectors(A2.gram, 2)
    without_lll = latalg.enumerate_norm_vectors(A2.gram, 2, use_lll=False)

    assert with_lll.vectors == without_lll.vectors
    assert len(with_lll.vectors) == 6


def test_enumeration_rejects_bad_input():
    with pytest.raises(NotDefinite):
        latalg.enumerate_norm_vectors(((0, 1), (1, 0)), 2)
    with pytest.raises(ValueError):
        latalg.enumerate_norm_vectors(A2.gram, -2)
    with pytest.raises(ValueError):
        latalg.enumerate_norm_vectors(A2.gram, 0)


def test_enumeration_budget_makes_the_result_partial():
    # GIVEN

    budget = EnumBudget(max_nodes=5)

    # WHEN

    result = latalg.enumerate_norm_vectors(E8.gram, 2, budget)

    # THEN

    assert not result.exhaustive
    assert len(result.vectors) < 240


def test_strict_enumeration_raises_with_partial_results():
    with pytest.raises(BudgetExceeded) as excinfo:
        latalg.enumerate_norm_vectors(E8.gram, 2, EnumBudget(max_nodes=5), strict=True)

    assert excinfo.value.nodes > 5
    assert "Budget exceeded" in str(excinfo.value)


@pytest.mark.parametrize("cap", [10, 11, 1])
def test_result_cap_counts_vectors(cap):
    result = latalg.enumerate_norm_vectors(E8.gram, 2, EnumBudget(max_results=cap))
    pairs = latalg.enumerate_norm_vectors(
        E8.gram, 2, EnumBudget(max_results=cap), pairs_only=True
    )

    assert not result.exhaustive
    assert len(result.vectors) <= cap
    assert 2 * len(pairs.vectors) <= cap


def test_later_subtrees_get_the_nodes_left_over():
    # GIVEN

    budget = EnumBudget(max_nodes=400)
    granted = []
    run_batch = latalg._run_batch

    def recording_run_batch(chol, target, tops, max_nodes, workers):
        granted.append(max_nodes)
        return run_batch(chol, target, tops, max_nodes, 1)

    # WHEN

    with patch("reflex.latalg._run_batch", side_effect=recording_run_batch):
        result = latalg.enumerate_norm_vectors(E8.gram, 4, budget, workers=1)

    # THEN

    assert not result.exhaustive
    assert granted[0] == 400
    assert all(later < earlier for earlier, later in zip(granted, granted[1:]))
    assert result.nodes <= 401


def test_enumeration_is_independent_of_the_number_of_workers():
    serial = latalg.enumerate_norm_vectors(E8.gram, 4, workers=1)
    parallel = latalg.enumerate_norm_vectors(E8.gram, 4, workers=3)

    assert serial.vectors == parallel.vectors
    assert len(serial.vectors) == 2160


@pytest.mark.parametrize(
    "kwargs", [{"max_nodes": 0}, {"max_results": 0}], ids=["nodes", "results"]
)
def test_budget_validation(kwargs):
    with pytest.raises(ValueError):
        EnumBudget(**kwargs)


def test_large_ranks_get_a_larger_budget():
    assert EnumBudget.for_rank(24).max_nodes == latalg.LARGE_RANK_MAX_NODES
    assert EnumBudget.for_rank(8).max_nodes == latalg.DEFAULT_MAX_NODES


def test_sparse_vectors_order():
    vectors = list(latalg.iter_sparse_vectors(2, max_support=2, radius=1))
    assert vectors == [(1, 0), (0, 1), (1, 1), (1, -1)]


def test_search_witnesses_reports_whether_the_box_was_exhausted():
    # WHEN

    found, complete = latalg.search_witnesses(
        3, lambda v: sum(v) == 2, limit=100, radius=2
    )
    none, none_complete = latalg.search_witnesses(2, lambda v: False, radius=2)

    # THEN

    assert (2, 0, 0) in found and (1, 1, 0) in found
    assert complete
    assert none == [] and none_complete


def test_search_witnesses_stops_at_the_limit():
    found, complete = latalg.search_witnesses(4, lambda v: True, limit=3)
    assert len(found) == 3
    assert not complete
