"""Seeded checks of reflections and quasi-reflections on random vectors."""
from fractions import Fraction

import pytest

from reflex import hlat
from reflex import qlat
from reflex import ramify
from reflex.constructions import hermitian_builtins
from reflex.constructions import quadratic_builtins
from reflex.hlat import HermLattice
from reflex.types import GroupChoice
from tests.utils import mat_apply
from tests.utils import random_vector
from tests.utils import rng

FIELDS = [-1, -2, -3]
SLOW_SEEDS = range(4)
SLOW_SAMPLES = 1000


def _plane_plus_minus_one(d):
    """Hyperbolic plane plus <-1>; every unit is admissible for the last basis vector."""
    plane = hermitian_builtins()[f"Lambda_UU_d{d}"]
    return hlat.herm_direct_sum(
        f"Lambda_UU_minus_one_d{d}", plane, HermLattice("minus_one", d, ((-1,),))
    )


def _sample_vectors(lattice, generator, count):
    samples = []
    while len(samples) < count:
        r = hlat.from_trace_coords(lattice, random_vector(generator, 2 * lattice.rank, 2))
        if lattice.norm(r):
            samples.append(r)
    return samples


def _mat_mul(left, right, field):
    return tuple(
        tuple(sum((a * b for a, b in zip(row, column)), field.zero) for column in zip(*right))
        for row in left
    )


def _transpose(matrix):
    return tuple(zip(*matrix))


def _conjugate(matrix):
    return tuple(tuple(x.conjugate() for x in row) for row in matrix)


def _identity(field, n):
    return tuple(tuple(field.elem(int(i == j)) for j in range(n)) for i in range(n))


def _mat_pow(matrix, k, field):
    result = _identity(field, len(matrix))
    for _ in range(k):
        result = _mat_mul(result, matrix, field)
    return result


def _is_integral(matrix, field):
    return all(field.is_integer(x) for row in matrix for x in row)


def _check_quasi_reflections(lattice, r):
    field = lattice.field
    gram = lattice.gram
    identity = _identity(field, lattice.rank)
    for xi in field.units[1:]:
        tau = hlat.quasi_reflection(lattice, r, xi)
        order = field.unit_order(xi)

        assert _mat_mul(_mat_mul(_transpose(tau), gram, field), _conjugate(tau), field) == gram
        powers = [_mat_pow(tau, k, field) for k in range(1, order + 1)]
        assert powers[-1] == identity
        assert identity not in powers[:-1]
        inverse = hlat.field_inverse(tau, field)
        assert inverse == powers[-2]
        if hlat.is_primitive(lattice, r):
            integral = _is_integral(tau, field) and _is_integral(inverse, field)
            assert integral == hlat.tau_in_unitary_group(lattice, r, xi)


@pytest.mark.parametrize("name", ["II_2_10", "Lambda_Enr", "Lambda_logEnr_3"])
def test_branch_witness_reflections_are_isometries(name):
    # GIVEN

    lattice = quadratic_builtins()[name]
    report = ramify.branch_report(lattice, GroupChoice.FULL_PLUS)
    generator = rng()

    for branch in report.classes:
        sigma = qlat.reflection(lattice, branch.witness)

        for _ in range(20):
            # WHEN

            x = random_vector(generator, lattice.rank)
            y = random_vector(generator, lattice.rank)

            # THEN

            assert lattice.pair(mat_apply(sigma, x), mat_apply(sigma, y)) == lattice.pair(x, y)
            assert all(c.denominator == 1 for c in mat_apply(sigma, x))


@pytest.mark.parametrize(
    "name", ["Lambda_UUtwo_E8two_d-1", "Lambda_UUtwo_E8two_d-2", "Lambda_UU_E8_d-1_rank6"]
)
def test_branch_witness_quasi_reflections_are_isometries(name):
    # GIVEN

    lattice = hermitian_builtins()[name]
    report = ramify.branch_report(lattice)
    generator = rng()

    for branch in report.classes:
        for xi in lattice.field.units[1:]:
            if not hlat.tau_in_unitary_group(lattice, branch.witness, xi):
                continue
            tau = hlat.quasi_reflection(lattice, branch.witness, xi)

            for _ in range(10):
                # WHEN

                x = hlat.from_trace_coords(lattice, random_vector(generator, 2 * lattice.rank))
                y = hlat.from_trace_coords(lattice, random_vector(generator, 2 * lattice.rank))

                # THEN

                assert lattice.pair(mat_apply(tau, x), mat_apply(tau, y)) == lattice.pair(x, y)


@pytest.mark.parametrize(
    "d, xi, square",
    [
        (-1, (0, 1), (-1, 0)),
        (-1, (0, -1), (-1, 0)),
        (-3, (Fraction(-1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(-1, 2))),
        (-3, (Fraction(-1, 2), Fraction(-1, 2)), (Fraction(-1, 2), Fraction(1, 2))),
        (-3, (Fraction(1, 2), Fraction(1, 2)), (Fraction(-1, 2), Fraction(1, 2))),
        (-3, (Fraction(1, 2), Fraction(-1, 2)), (Fraction(-1, 2), Fraction(-1, 2))),
    ],
    ids=["i", "minus-i", "cube-root", "conjugate-cube-root", "sixth-root",
         "conjugate-sixth-root"],
)
def test_square_of_a_quasi_reflection(d, xi, square):
    # GIVEN

    lattice = _plane_plus_minus_one(d)
    field = lattice.field
    xi, square = field.elem(*xi), field.elem(*square)

    for r in _sample_vectors(lattice, rng(), 50):
        # WHEN

        tau = hlat.quasi_reflection(lattice, r, xi)

        # THEN

        assert _mat_mul(tau, tau, field) == hlat.quasi_reflection(lattice, r, square)


@pytest.mark.parametrize("d", FIELDS)
def test_quasi_reflections_against_their_matrices(d):
    # GIVEN

    lattice = _plane_plus_minus_one(d)
    samples = _sample_vectors(lattice, rng(), 60)

    # WHEN / THEN

    for r in samples + [(0, 0, 1)]:
        _check_quasi_reflections(lattice, lattice.vector(r))


def test_eisenstein_units_of_order_three_and_six():
    # GIVEN

    lattice = _plane_plus_minus_one(-3)
    field = lattice.field
    last = (0, 0, 1)
    plane_vector = (1, field.omega, 0)

    # WHEN

    all_units = ramify.admissible_units(lattice, last)
    cube_roots = ramify.admissible_units(lattice, plane_vector)

    # THEN

    assert len(all_units) == 5
    assert ramify.unit_group_order(lattice, all_units) == 6
    assert lattice.norm(plane_vector) == -1
    assert sorted(field.unit_order(u) for u in cube_roots) == [3, 3]
    assert ramify.unit_group_order(lattice, cube_roots) == 3
    for r in (last, plane_vector):
        _check_quasi_reflections(lattice, lattice.vector(r))


@pytest.mark.parametrize("d", FIELDS)
def test_hermitian_integrality_pulls_back_to_the_trace_form(d):
    # GIVEN

    lattice = _plane_plus_minus_one(d)
    generator = rng(d)
    vectors = _sample_vectors(lattice, generator, 30) + [lattice.vector((0, 0, 1))]
    integral = 0

    for r in vectors:
        for _ in range(5):
            ell = hlat.from_trace_coords(lattice, random_vector(generator, 2 * lattice.rank))
            for xi in lattice.field.units[1:]:
                # WHEN

                herm_ok, quad_ok = hlat.pullback_check(lattice, ell, r, xi)

                # THEN

                if herm_ok:
                    integral += 1
                    assert quad_ok

    assert hlat.pullback_applies(d)
    assert integral


@pytest.mark.slow
@pytest.mark.parametrize("seed", SLOW_SEEDS)
@pytest.mark.parametrize("d", FIELDS)
def test_many_random_quasi_reflections(d, seed):
    # GIVEN

    lattice = _plane_plus_minus_one(d)
    generator = rng(seed)

    for r in _sample_vectors(lattice, generator, SLOW_SAMPLES):
        ell = hlat.from_trace_coords(lattice, random_vector(generator, 2 * lattice.rank))

        # WHEN / THEN

        _check_quasi_reflections(lattice, r)
        for xi in lattice.field.units[1:]:
            herm_ok, quad_ok = hlat.pullback_check(lattice, ell, r, xi)
            assert quad_ok or not herm_ok


def test_trace_pairing_is_twice_the_real_part():
    lattice = hermitian_builtins()["Lambda_UUtwo_E8two_d-1"]
    trace = hlat.trace_form(lattice)
    generator = rng(7)

    for _ in range(20):
        x = random_vector(generator, trace.rank)
        y = random_vector(generator, trace.rank)
        hx = hlat.from_trace_coords(lattice, x)
        hy = hlat.from_trace_coords(lattice, y)

        assert trace.pair(x, y) == lattice.pair(hx, hy).trace()
        assert trace.pair(x, y) == 2 * lattice.pair(hx, hy).a
