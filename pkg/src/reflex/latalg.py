"""Exact integer and rational linear algebra.

Smith normal form with transforms, Hermite row bases, inertia via LDL^T,
LLL reduction on Gram matrices and a budgeted Fincke-Pohst enumeration of
vectors of a prescribed norm.
"""
import itertools
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import Callable
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import sympy

from .errors import BudgetExceeded
from .errors import NotDefinite
from .errors import NotPositiveDefinite

LOGGER = logging.getLogger(__file__)

CHECK_CERTIFICATES_ENV = "REFLEX_CHECK_CERTIFICATES"

DEFAULT_MAX_NODES = 10**7
LARGE_RANK_MAX_NODES = 10**8
LARGE_RANK = 24

Vector = Tuple[int, ...]
IntMatrix = Tuple[Tuple[int, ...], ...]
Matrix = Sequence[Sequence[Any]]


@dataclass(frozen=True)
class EnumBudget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_results: Optional[int] = None

    def __post_init__(self) -> None:
        if self.max_nodes < 1:
            raise ValueError(f"max_nodes must be positive, got {self.max_nodes}")
        if self.max_results is not None and self.max_results < 1:
            raise ValueError(f"max_results must be positive, got {self.max_results}")

    @classmethod
    def for_rank(cls, rank: int, max_results: Optional[int] = None) -> "EnumBudget":
        nodes = LARGE_RANK_MAX_NODES if rank >= LARGE_RANK else DEFAULT_MAX_NODES
        return cls(max_nodes=nodes, max_results=max_results)


@dataclass(frozen=True)
class EnumResult:
    vectors: Tuple[Vector, ...]
    exhaustive: bool
    nodes: int


def _certificates_enabled() -> bool:
    return os.getenv(CHECK_CERTIFICATES_ENV) not in (None, "", "0")


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(matrix: Matrix) -> Tuple[Tuple[Any, ...], ...]:
    return tuple(zip(*matrix)) if matrix else ()


def mat_mul(left: Matrix, right: Matrix) -> Tuple[Tuple[Any, ...], ...]:
    columns = transpose(right)
    return tuple(
        tuple(sum((x * y for x, y in zip(row, column)), 0) for column in columns)
        for row in left
    )


def mat_vec(matrix: Matrix, vector: Sequence[Any]) -> Tuple[Any, ...]:
    return tuple(sum((x * y for x, y in zip(row, vector)), 0) for row in matrix)


def bilinear(gram: Matrix, x: Sequence[Any], y: Sequence[Any]) -> Any:
    return sum((xi * gy for xi, gy in zip(x, mat_vec(gram, y))), 0)


def to_int_matrix(matrix: Matrix) -> IntMatrix:
    result = []
    for row in matrix:
        converted = []
        for entry in row:
            value = Fraction(entry)
            if value.denominator != 1:
                raise ValueError(f"Matrix entry {entry} is not an integer")
            converted.append(value.numerator)
        result.append(tuple(converted))
    return tuple(result)


def _to_sympy(matrix: Matrix) -> sympy.Matrix:
    return sympy.Matrix(
        [[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in row]
         for row in matrix]
    )


def _from_sympy(value: Any) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def det(matrix: Matrix) -> Fraction:
    if not matrix:
        return Fraction(1)
    return _from_sympy(_to_sympy(matrix).det(method="bareiss"))


def inverse(matrix: Matrix) -> Tuple[Tuple[Fraction, ...], ...]:
    if det(matrix) == 0:
        raise ValueError("Matrix is singular")
    inv = _to_sympy(matrix).inv()
    return tuple(
        tuple(_from_sympy(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows)
    )


def nullspace(matrix: Matrix) -> List[Tuple[Fraction, ...]]:
    """Rational basis of the right kernel of the matrix."""
    return [
        tuple(_from_sympy(x) for x in vector) for vector in _to_sympy(matrix).nullspace()
    ]


def snf(matrix: Matrix) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form D = U * M * V with U and V unimodular."""
    A = [list(row) for row in to_int_matrix(matrix)]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [list(row) for row in identity(m)]
    V = [list(row) for row in identity(n)]

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for row in itertools.chain(A, V):
            row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, factor: int) -> None:
        for rows in (A, U):
            rows[target] = [t + factor * s for t, s in zip(rows[target], rows[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        for row in itertools.chain(A, V):
            row[target] += factor * row[source]

    for t in range(min(m, n)):
        while True:
            entries = [
                (abs(A[i][j]), i, j)
                for i in range(t, m)
                for j in range(t, n)
                if A[i][j] != 0
            ]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            pivot = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // pivot))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // pivot))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            offending = next(
                (
                    i
                    for i in range(t + 1, m)
                    for j in range(t + 1, n)
                    if A[i][j] % pivot
                ),
                None,
            )
            if offending is None:
                break
            add_row(t, offending, 1)
        if t < m and A[t][t] < 0:
            for rows in (A, U):
                rows[t] = [-x for x in rows[t]]

    D, U_t, V_t = (tuple(tuple(row) for row in rows) for rows in (A, U, V))
    if _certificates_enabled():
        assert mat_mul(U_t, mat_mul(matrix, V_t)) == D, "SNF certificate D = U M V failed"
        assert abs(det(U_t)) == 1 and abs(det(V_t)) == 1, "SNF transforms not unimodular"
        diagonal = [D[i][i] for i in range(min(m, n))]
        assert all(
            b % a == 0 if a else b == 0 for a, b in zip(diagonal, diagonal[1:])
        ), "SNF divisibility chain broken"
    return D, U_t, V_t


def elementary_divisors(matrix: Matrix) -> List[int]:
    D, _, _ = snf(matrix)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def integer_kernel(matrix: Matrix) -> List[Vector]:
    """Z-basis of {v in Z^n : M v = 0}."""
    D, _, V = snf(matrix)
    rows = len(D)
    cols = len(V)
    zero_columns = [
        j for j in range(cols) if j >= rows or D[j][j] == 0
    ]
    return [tuple(V[i][j] for i in range(cols)) for j in zero_columns]


def row_basis(rows: Sequence[Sequence[int]]) -> List[Vector]:
    """Hermite-form basis of the Z-span of the given integer rows."""
    A = [list(row) for row in to_int_matrix(rows)]
    if not A:
        return []
    n = len(A[0])
    pivot_row = 0
    for column in range(n):
        while True:
            nonzero = [i for i in range(pivot_row, len(A)) if A[i][column]]
            if not nonzero:
                break
            best = min(nonzero, key=lambda i: abs(A[i][column]))
            A[pivot_row], A[best] = A[best], A[pivot_row]
            pivot = A[pivot_row][column]
            done = True
            for i in range(pivot_row + 1, len(A)):
                if A[i][column]:
                    q = A[i][column] // pivot
                    A[i] = [x - q * y for x, y in zip(A[i], A[pivot_row])]
                    done = done and A[i][column] == 0
            if done:
                break
        if pivot_row < len(A) and A[pivot_row][column]:
            if A[pivot_row][column] < 0:
                A[pivot_row] = [-x for x in A[pivot_row]]
            pivot = A[pivot_row][column]
            for i in range(pivot_row):
                q = A[i][column] // pivot
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[pivot_row])]
            pivot_row += 1
        if pivot_row == len(A):
            break
    return [tuple(row) for row in A[:pivot_row]]


def signature(matrix: Matrix) -> Tuple[int, int, int]:
    """Inertia (pos, neg, zero) by exact LDL^T with symmetric pivoting."""
    A = [[Fraction(x) for x in row] for row in matrix]
    pos = neg = zero = 0
    while A:
        size = len(A)
        k = next((i for i in range(size) if A[i][i] != 0), None)
        if k is None:
            pair = next(
                ((i, j) for i in range(size) for j in range(size) if A[i][j] != 0), None
            )
            if pair is None:
                zero += size
                break
            i, j = pair
            A[i] = [x + y for x, y in zip(A[i], A[j])]
            for row in A:
                row[i] += row[j]
            k = i
        pivot = A[k][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        others = [i for i in range(size) if i != k]
        A = [[A[r][c] - A[r][k] * A[k][c] / pivot for c in others] for r in others]
    return pos, neg, zero


def _gram_schmidt(G: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[Fraction]]:
    n = len(G)
    mu = [[Fraction(0)] * n for _ in range(n)]
    B = [Fraction(0)] * n
    for i in range(n):
        for j in range(i):
            mu[i][j] = (
                G[i][j] - sum((mu[j][k] * mu[i][k] * B[k] for k in range(j)), Fraction(0))
            ) / B[j]
        B[i] = G[i][i] - sum((mu[i][k] ** 2 * B[k] for k in range(i)), Fraction(0))
    return mu, B


def _nearest(value: Fraction) -> int:
    return math.floor(value + Fraction(1, 2))


def lll(gram: Matrix, delta: Fraction = Fraction(3, 4)) -> IntMatrix:
    """Change of basis T such that T * G * T^t is LLL-reduced."""
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError(f"LLL parameter must lie in (1/4, 1), got {delta}")
    n = len(gram)
    if signature(gram) != (n, 0, 0):
        raise NotPositiveDefinite("LLL needs a positive definite Gram matrix")
    G = [[Fraction(x) for x in row] for row in gram]
    T = [list(row) for row in identity(n)]
    mu, B = _gram_schmidt(G)

    def size_reduce(k: int, l: int) -> None:
        q = _nearest(mu[k][l])
        if not q:
            return
        T[k] = [a - q * b for a, b in zip(T[k], T[l])]
        G[k] = [a - q * b for a, b in zip(G[k], G[l])]
        for row in G:
            row[k] -= q * row[l]
        mu[k][l] -= q
        for j in range(l):
            mu[k][j] -= q * mu[l][j]

    k = 1
    while k < n:
        size_reduce(k, k - 1)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            T[k], T[k - 1] = T[k - 1], T[k]
            G[k], G[k - 1] = G[k - 1], G[k]
            for row in G:
                row[k], row[k - 1] = row[k - 1], row[k]
            q = mu[k][k - 1]
            swapped = B[k] + q * q * B[k - 1]
            mu[k][k - 1] = q * B[k - 1] / swapped
            B[k] = B[k - 1] * B[k] / swapped
            B[k - 1] = swapped
            for j in range(k - 1):
                mu[k - 1][j], mu[k][j] = mu[k][j], mu[k - 1][j]
            for i in range(k + 1, n):
                t = mu[i][k]
                mu[i][k] = mu[i][k - 1] - q * t
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                size_reduce(k, l)
            k += 1
    return tuple(tuple(row) for row in T)


def _candidates(center: Fraction, radius_sq: Fraction, nonnegative: bool) -> List[int]:
    """Integers x with (x - center)^2 <= radius_sq, nearest to the center first."""
    if radius_sq < 0:
        return []
    reach = math.isqrt(math.floor(radius_sq)) + 1
    low = math.floor(center) - reach
    high = math.ceil(center) + reach
    if nonnegative:
        low = max(low, 0)
    values = [x for x in range(low, high + 1) if (x - center) ** 2 <= radius_sq]
    return sorted(values, key=lambda x: (abs(x - center), x))


@dataclass(frozen=True)
class _Cholesky:
    diag: Tuple[Fraction, ...]
    coef: Tuple[Tuple[Fraction, ...], ...]


def _cholesky(gram: Matrix) -> _Cholesky:
    mu, B = _gram_schmidt([[Fraction(x) for x in row] for row in gram])
    n = len(B)
    coef = tuple(tuple(mu[j][i] for j in range(n)) for i in range(n))
    return _Cholesky(diag=tuple(B), coef=coef)


def _search_subtree(
    chol: _Cholesky, target: Fraction, top: int, max_nodes: int
) -> Tuple[List[Vector], int, bool]:
    """Depth-first search below a fixed last coordinate."""
    n = len(chol.diag)
    x = [0] * n
    x[n - 1] = top
    found: List[Vector] = []
    nodes = 1
    first_remaining = target - chol.diag[n - 1] * top * top

    def descend(level: int, remaining: Fraction, zero_above: bool) -> bool:
        nonlocal nodes
        if level < 0:
            if remaining == 0 and not zero_above:
                found.append(tuple(x))
            return True
        center = -sum(
            (chol.coef[level][j] * x[j] for j in range(level + 1, n)), Fraction(0)
        )
        for value in _candidates(center, remaining / chol.diag[level], zero_above):
            nodes += 1
            if nodes > max_nodes:
                return False
            x[level] = value
            left = remaining - chol.diag[level] * (value - center) ** 2
            if not descend(level - 1, left, zero_above and value == 0):
                return False
        x[level] = 0
        return True

    if first_remaining < 0:
        return [], nodes, True
    complete = descend(n - 2, first_remaining, top == 0)
    return found, nodes, complete


def _representative(vector: Sequence[int]) -> Vector:
    first = next((v for v in vector if v), 0)
    return tuple(vector) if first >= 0 else tuple(-v for v in vector)


def enumerate_norm_vectors(
    gram: Matrix,
    target: int,
    budget: Optional[EnumBudget] = None,
    workers: int = 1,
    pairs_only: bool = False,
    use_lll: bool = True,
    strict: bool = False,
) -> EnumResult:
    """All nonzero v with v^t G v == target for a definite Gram matrix G.

    The result cap counts vectors, so a cap of m keeps at most m // 2 pairs +-v.
    Each batch of top-level subtrees gets the nodes the earlier batches left over.
    """
    n = len(gram)
    budget = budget or EnumBudget.for_rank(n)
    pos, neg, zero = signature(gram)
    if zero or (pos and neg) or n == 0:
        raise NotDefinite(f"Gram matrix has signature ({pos}, {neg}, {zero})")
    if target == 0 or (target > 0) != (pos > 0):
        raise ValueError(f"Target {target} does not have the sign of the form")
    if neg:
        gram = [[-x for x in row] for row in gram]
        target = -target

    T = lll(gram) if use_lll else identity(n)
    reduced = mat_mul(mat_mul(T, gram), transpose(T))
    chol = _cholesky(reduced)
    tops = _candidates(Fraction(0), Fraction(target) / chol.diag[n - 1], True)
    LOGGER.info(
        "Enumerating norm %s vectors in rank %d (%d top-level tasks, %d workers)",
        target,
        n,
        len(tops),
        workers,
    )

    representatives: List[Vector] = []
    nodes = 0
    exhaustive = True
    for batch_start in range(0, len(tops), max(workers, 1)):
        batch = tops[batch_start:batch_start + max(workers, 1)]
        remaining = budget.max_nodes - nodes
        outcomes = _run_batch(chol, Fraction(target), batch, remaining, workers)
        for found, used, complete in outcomes:
            nodes += used
            back = transpose(T)
            representatives.extend(_representative(mat_vec(back, y)) for y in found)
            if not complete or nodes > budget.max_nodes:
                exhaustive = False
                break
            cap = budget.max_results
            if cap is not None and 2 * len(representatives) > cap:
                representatives = representatives[: cap // 2]
                exhaustive = False
                break
        if not exhaustive:
            break
        LOGGER.debug("Batch at %d done, %d nodes so far", batch_start, nodes)

    representatives = sorted(set(representatives))
    if pairs_only:
        vectors = tuple(representatives)
    else:
        negatives = (tuple(-v for v in r) for r in representatives)
        vectors = tuple(sorted(itertools.chain(representatives, negatives)))
    if not exhaustive:
        LOGGER.warning("Enumeration stopped after %d nodes; result is partial", nodes)
        if strict:
            raise BudgetExceeded(
                f"norm {target} enumeration in rank {n}", partial=vectors, nodes=nodes
            )
    return EnumResult(vectors=vectors, exhaustive=exhaustive, nodes=nodes)


def _run_batch(
    chol: _Cholesky,
    target: Fraction,
    tops: Sequence[int],
    max_nodes: int,
    workers: int,
) -> List[Tuple[List[Vector], int, bool]]:
    if workers <= 1 or len(tops) == 1:
        return [_search_subtree(chol, target, top, max_nodes) for top in tops]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_search_subtree, chol, target, top, max_nodes) for top in tops
        ]
        return [future.result() for future in futures]


def iter_sparse_vectors(
    dim: int, max_support: int = 3, radius: int = 5
) -> Iterator[Vector]:
    """Integer vectors by growing coefficient shell, support size and position.

    The first nonzero coordinate is always positive, so every line through the
    origin is visited at most once.
    """
    for shell in range(1, radius + 1):
        for support_size in range(1, min(max_support, dim) + 1):
            for positions in itertools.combinations(range(dim), support_size):
                magnitudes = range(1, shell + 1)
                for coefficients in itertools.product(magnitudes, repeat=support_size):
                    if max(coefficients) != shell:
                        continue
                    for signs in itertools.product((1, -1), repeat=support_size - 1):
                        vector = [0] * dim
                        vector[positions[0]] = coefficients[0]
                        for position, coefficient, sign in zip(
                            positions[1:], coefficients[1:], signs
                        ):
                            vector[position] = sign * coefficient
                        yield tuple(vector)


def search_witnesses(
    dim: int,
    predicate: Callable[[Vector], bool],
    limit: int = 1,
    max_nodes: int = 200_000,
    max_support: int = 3,
    radius: int = 5,
) -> Tuple[List[Vector], bool]:
    """Collect up to `limit` sparse vectors satisfying the predicate.

    Returns the witnesses and whether the bounded box was fully explored.
    """
    found: List[Vector] = []
    for nodes, vector in enumerate(iter_sparse_vectors(dim, max_support, radius), 1):
        if nodes > max_nodes:
            return found, False
        if predicate(vector):
            found.append(vector)
            if len(found) >= limit:
                return found, False
    return found, True
