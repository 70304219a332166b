"""Built-in lattices, Hermitian lattices and isotropic planes."""
import functools
from typing import Dict
from typing import List
from typing import Tuple

from . import latalg
from .exactnum import make_field
from .exactnum import parse_elem
from .hlat import HermLattice
from .hlat import herm_direct_sum
from .hlat import herm_scale
from .qlat import QuadLattice
from .qlat import direct_sum
from .qlat import scaled
from .types import IsotropicSubspace

LOG_ENRIQUES_KS = (1, 3, 4, 5, 6, 7)

GOLAY_GENERATOR_SUPPORT = (0, 2, 4, 5, 6, 10, 11)

U = QuadLattice("U", ((0, 1), (1, 0)))
U2 = scaled(U, 2, "U2")
A1 = QuadLattice("A1", ((2,),))
A1m = QuadLattice("A1m", ((-2,),))


def e8_cartan() -> Tuple[Tuple[int, ...], ...]:
    edges = [(i, i + 1) for i in range(6)] + [(4, 7)]
    gram = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -1
    return tuple(tuple(row) for row in gram)


E8 = QuadLattice("E8", e8_cartan())
E8m = scaled(E8, -1, "E8m")
E8m2 = scaled(E8, -2, "E8m2")


def golay_codewords() -> List[Tuple[int, ...]]:
    """Generators of the extended binary Golay code (length 24)."""
    words = []
    for shift in range(12):
        word = [0] * 24
        for position in GOLAY_GENERATOR_SUPPORT:
            word[position + shift] = 1
        word[23] = sum(word[:23]) % 2
        words.append(tuple(word))
    return words


def leech_basis() -> List[Tuple[int, ...]]:
    """A basis of the Leech lattice scaled by sqrt(8), in Z^24."""
    generators: List[Tuple[int, ...]] = [tuple(2 * x for x in c) for c in golay_codewords()]
    for i in range(1, 24):
        vector = [0] * 24
        vector[0] = vector[i] = 4
        generators.append(tuple(vector))
    generators.append(tuple([4, -4] + [0] * 22))
    generators.append(tuple([-3] + [1] * 23))
    return latalg.row_basis(generators)


@functools.lru_cache(maxsize=None)
def leech() -> QuadLattice:
    basis = leech_basis()
    gram = latalg.mat_mul(basis, latalg.transpose(basis))
    if any(x % 8 for row in gram for x in row):
        raise ValueError("Leech Gram matrix is not integral after scaling")
    return QuadLattice("Leech", tuple(tuple(x // 8 for x in row) for row in gram))


@functools.lru_cache(maxsize=None)
def leech_m() -> QuadLattice:
    return scaled(leech(), -1, "Leech_m")


def lambda_enr() -> QuadLattice:
    return direct_sum("Lambda_Enr", U, U2, E8m2)


def lambda_log_enr(k: int) -> QuadLattice:
    return direct_sum(f"Lambda_logEnr_{k}", U2, A1, *([A1m] * (9 - k)))


@functools.lru_cache(maxsize=None)
def quadratic_builtins() -> Dict[str, QuadLattice]:
    lattices = [
        U,
        U2,
        A1,
        A1m,
        E8,
        E8m,
        E8m2,
        leech_m(),
        direct_sum("U_U", U, U),
        direct_sum("U_U2", U, U2),
        direct_sum("II_2_10", U, U, E8m),
        direct_sum("II_2_26", U, U, E8m, E8m, E8m),
        direct_sum("II_2_26_leech", U, U, leech_m()),
        direct_sum("U_U_E8m2", U, U, E8m2),
        lambda_enr(),
    ]
    lattices += [lambda_log_enr(k) for k in LOG_ENRIQUES_KS]
    return {lattice.name: lattice for lattice in lattices}


MODEL_OF = {"II_2_26_leech": "II_2_26"}


def _herm(name: str, d: int, rows: List[List[str]], factor: str = "1") -> HermLattice:
    scale = parse_elem(factor, d)
    return HermLattice(
        name, d, tuple(tuple(scale * parse_elem(x, d) for x in row) for row in rows)
    )


def _appendix_lattices() -> List[HermLattice]:
    i, s = "sqrt(-1)", "sqrt(-2)"
    d2 = make_field(-2)
    return [
        _herm("Lambda_UU_d-1", -1, [["0", f"-1/2*{i}"], [f"1/2*{i}", "0"]]),
        _herm("Lambda_UUtwo_d-1", -1, [["0", f"1 + {i}"], [f"1 - {i}", "0"]], "1/2"),
        _herm(
            "Lambda_E8_d-1",
            -1,
            [
                ["2", f"-{i}", f"-{i}", "1"],
                [i, "2", "1", i],
                [i, "1", "2", "1"],
                ["1", f"-{i}", "1", "2"],
            ],
            "-1/2",
        ),
        HermLattice("Lambda_UU_d-2", -2, ((d2.zero, d2.delta), (-d2.delta, d2.zero))),
        _herm("Lambda_UUtwo_d-2", -2, [["0", "1/2"], ["1/2", "0"]]),
        _herm(
            "Lambda_E8_d-2",
            -2,
            [
                ["2", "0", f"1 + {s}", f"1/2*{s}"],
                ["0", "2", f"1/2*{s}", f"1 - {s}"],
                [f"1 - {s}", f"-1/2*{s}", "2", "0"],
                [f"-1/2*{s}", f"1 + {s}", "0", "2"],
            ],
            "-1/2",
        ),
    ]


def _eisenstein_plane() -> HermLattice:
    d3 = make_field(-3)
    return HermLattice("Lambda_UU_d-3", -3, ((d3.zero, d3.delta), (-d3.delta, d3.zero)))


@functools.lru_cache(maxsize=None)
def hermitian_builtins() -> Dict[str, HermLattice]:
    lattices = {lattice.name: lattice for lattice in _appendix_lattices()}
    uu_1, uu2_1, e8_1 = (
        lattices[name] for name in ("Lambda_UU_d-1", "Lambda_UUtwo_d-1", "Lambda_E8_d-1")
    )
    uu_2, uu2_2, e8_2 = (
        lattices[name] for name in ("Lambda_UU_d-2", "Lambda_UUtwo_d-2", "Lambda_E8_d-2")
    )
    e8two_1 = herm_scale(e8_1, 2, "Lambda_E8two_d-1")
    e8two_2 = herm_scale(e8_2, 2, "Lambda_E8two_d-2")
    composites = [
        _eisenstein_plane(),
        e8two_1,
        e8two_2,
        herm_direct_sum("Lambda_UU_E8_d-1_rank14", uu_1, e8_1, e8_1, e8_1),
        herm_direct_sum("Lambda_UU_E8_d-1_rank6", uu_1, e8_1),
        herm_direct_sum("Lambda_UUtwo_E8two_d-1", uu2_1, e8two_1),
        herm_direct_sum("Lambda_minus1", uu_1, e8two_1),
        herm_direct_sum("Lambda_UU_E8_d-2_rank14", uu_2, e8_2, e8_2, e8_2),
        herm_direct_sum("Lambda_UUtwo_E8two_d-2", uu2_2, e8two_2),
        herm_direct_sum("Lambda_minus2", uu_2, e8two_2),
    ]
    lattices.update((lattice.name, lattice) for lattice in composites)
    return lattices


TRACE_MODELS = {
    "Lambda_UU_d-1": "U_U",
    "Lambda_UUtwo_d-1": "U_U2",
    "Lambda_E8_d-1": "E8m",
    "Lambda_UU_d-2": "U_U",
    "Lambda_UUtwo_d-2": "U_U2",
    "Lambda_E8_d-2": "E8m",
    "Lambda_UU_d-3": "U_U",
    "Lambda_E8two_d-1": "E8m2",
    "Lambda_E8two_d-2": "E8m2",
    "Lambda_UU_E8_d-1_rank14": "II_2_26",
    "Lambda_UU_E8_d-1_rank6": "II_2_10",
    "Lambda_UUtwo_E8two_d-1": "Lambda_Enr",
    "Lambda_minus1": "U_U_E8m2",
    "Lambda_UU_E8_d-2_rank14": "II_2_26",
    "Lambda_UUtwo_E8two_d-2": "Lambda_Enr",
    "Lambda_minus2": "U_U_E8m2",
}


def _enriques_cusps() -> List[IsotropicSubspace]:
    e, e_prime = [0] * 12, [0] * 12
    e[0] = 1
    e_prime[2] = 1
    second = [2, 2, 0, 0] + [0] * 8
    second[4] = second[6] = 1
    return [
        IsotropicSubspace("Lambda_Enr", (tuple(e), tuple(e_prime)), "sterk1"),
        IsotropicSubspace("Lambda_Enr", (tuple(e_prime), tuple(second)), "sterk2"),
    ]


def _standard_plane(lattice: str, rank: int, label: str) -> IsotropicSubspace:
    first, second = [0] * rank, [0] * rank
    first[0] = 1
    second[2] = 1
    return IsotropicSubspace(lattice, (tuple(first), tuple(second)), label)


@functools.lru_cache(maxsize=None)
def cusp_builtins() -> Dict[str, IsotropicSubspace]:
    cusps = _enriques_cusps() + [
        _standard_plane("II_2_26", 28, "e8x3"),
        _standard_plane("II_2_26_leech", 28, "leech"),
        _standard_plane("II_2_10", 12, "e8"),
    ]
    return {cusp.label: cusp for cusp in cusps}
