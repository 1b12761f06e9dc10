"""Dense linear-algebra kernels used throughout the pipeline.

Three operations are provided: symmetric eigendecomposition, generalized
symmetric-definite eigendecomposition (reduced to standard form through a
Cholesky factorization), and an exact minimum-cost assignment solver.
Everything is deterministic: eigenvector signs are canonicalized and
assignment ties are resolved lexicographically.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import lapack, solve_triangular

_SYM_TOL = 1e-10


class NumericalError(RuntimeError):
    """A dense factorization failed (non-convergence or indefiniteness)."""


@dataclass(frozen=True)
class EigenPairs:
    """Eigenvalues sorted descending, vectors as matching unit-norm columns."""

    values: np.ndarray
    vectors: np.ndarray

    def __post_init__(self):
        if self.values.shape[0] != self.vectors.shape[1]:
            raise ValueError("eigenvalue count must match eigenvector columns")


@dataclass(frozen=True)
class Matching:
    """Bijection between two equally sized index sets: i -> assignment[i]."""

    assignment: np.ndarray

    def as_matrix(self) -> np.ndarray:
        """0/1 matrix with exactly one 1 per row and per column."""
        n = self.assignment.size
        a = np.zeros((n, n))
        a[np.arange(n), self.assignment] = 1.0
        return a

    def total_cost(self, cost: np.ndarray) -> float:
        n = self.assignment.size
        return float(np.asarray(cost)[np.arange(n), self.assignment].sum())


def _checked_symmetric(m, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    scale = max(1.0, float(np.abs(m).max()))
    asym = float(np.abs(m - m.T).max())
    if asym > _SYM_TOL * scale:
        raise ValueError(f"{name} is not symmetric (max asymmetry {asym:.3e})")
    return 0.5 * (m + m.T)


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so the largest-magnitude component is positive."""
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def _eigh_descending(m: np.ndarray):
    try:
        values, vectors = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        # LAPACK's implicit-shift QL/QR sweep is capped at 30 iterations per
        # eigenvalue; report that bound since the library hides the counter.
        raise NumericalError(
            f"symmetric eigendecomposition failed to converge within "
            f"{30 * m.shape[0]} implicit-shift iterations: {exc}"
        ) from exc
    return values[::-1], vectors[:, ::-1]


def sym_eig(m, k: int) -> EigenPairs:
    """Top-k eigenpairs of a symmetric matrix.

    Eigenvalues are returned in descending order; eigenvectors are unit-norm
    columns with canonical signs. Each pair satisfies
    ``|m v - value * v| <= 1e-8 * |m|_F``.
    """
    m = _checked_symmetric(m, "m")
    n = m.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    values, vectors = _eigh_descending(m)
    return EigenPairs(values=values[:k].copy(),
                      vectors=_canonical_signs(vectors[:, :k]))


def gen_eig(a, b, k: int) -> EigenPairs:
    """Top-k pairs of the symmetric-definite pencil ``a p = value * b p``.

    ``b`` must be positive definite. The pencil is reduced to a standard
    symmetric problem through the Cholesky factorization ``b = L L^T``:
    eigenvectors ``y`` of ``L^-1 a L^-T`` are back-transformed as
    ``p = L^-T y`` and then normalized to unit length.
    """
    a = _checked_symmetric(a, "a")
    b = _checked_symmetric(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"order mismatch: a is {a.shape}, b is {b.shape}")
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    chol, info = lapack.dpotrf(b, lower=1, clean=1)
    if info > 0:
        raise NumericalError(
            f"b is not positive definite: Cholesky failed at pivot {info}"
        )
    if info < 0:
        raise NumericalError(f"Cholesky factorization of b rejected argument {-info}")
    # c = L^-1 a L^-T, symmetrized to absorb rounding
    half = solve_triangular(chol, a, lower=True)
    c = solve_triangular(chol, half.T, lower=True).T
    c = 0.5 * (c + c.T)
    values, y = _eigh_descending(c)
    p = solve_triangular(chol, y[:, :k], lower=True, trans="T")
    p = p / np.linalg.norm(p, axis=0, keepdims=True)
    return EigenPairs(values=values[:k].copy(), vectors=_canonical_signs(p))


def solve_assignment(c) -> Matching:
    """Exact minimum-cost one-to-one assignment for a square cost matrix.

    Uses the Hungarian method with dual potentials, O(n^3). Among equal-cost
    optima the lexicographically smallest assignment vector is returned.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ValueError(f"cost matrix must be square, got shape {c.shape}")
    if not np.isfinite(c).all():
        raise ValueError("cost matrix contains non-finite entries")
    if (c < 0).any():
        raise ValueError("cost matrix entries must be nonnegative")
    n = c.shape[0]
    if n == 1:
        return Matching(assignment=np.array([0]))
    row_to_col, u, v = _hungarian(c)
    # Complementary slackness: every optimal assignment lives on edges whose
    # reduced cost is zero under the optimal potentials.
    tol = 1e-9 * (1.0 + float(np.abs(c).max()))
    admissible = (c - u[:, None] - v[None, :]) <= tol
    admissible[np.arange(n), row_to_col] = True
    return Matching(assignment=_lex_min_matching(admissible))


def _hungarian(cost: np.ndarray):
    """Potentials-based Hungarian method; returns (row_to_col, u, v)."""
    n = cost.shape[0]
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    match_row = np.zeros(n + 1, dtype=int)  # column j -> matched row, 0 if free
    way = np.zeros(n + 1, dtype=int)
    for i in range(1, n + 1):
        match_row[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match_row[j0]
            cur = cost[i0 - 1] - u[i0] - v[1:]
            better = ~used[1:] & (cur < minv[1:])
            minv[1:] = np.where(better, cur, minv[1:])
            way[1:] = np.where(better, j0, way[1:])
            reach = np.where(used[1:], np.inf, minv[1:])
            j1 = int(np.argmin(reach)) + 1
            delta = reach[j1 - 1]
            rows = match_row[np.flatnonzero(used)]
            u[rows] += delta
            v[np.flatnonzero(used)] -= delta
            minv[1:][~used[1:]] -= delta
            j0 = j1
            if match_row[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_row[j0] = match_row[j1]
            j0 = j1
    row_to_col = np.empty(n, dtype=int)
    for j in range(1, n + 1):
        row_to_col[match_row[j] - 1] = j - 1
    return row_to_col, u[1:], v[1:]


def _lex_min_matching(admissible: np.ndarray) -> np.ndarray:
    """Lexicographically smallest perfect matching of an admissible graph."""
    n = admissible.shape[0]
    result = np.full(n, -1, dtype=int)
    used_cols = np.zeros(n, dtype=bool)
    for i in range(n):
        for j in np.flatnonzero(admissible[i] & ~used_cols):
            used_cols[j] = True
            if _rows_matchable(admissible, i + 1, used_cols):
                result[i] = j
                break
            used_cols[j] = False
        if result[i] < 0:
            raise NumericalError("assignment refinement lost feasibility")
    return result


def _rows_matchable(admissible: np.ndarray, start: int, used_cols: np.ndarray) -> bool:
    """Can rows start..n-1 be perfectly matched into the unused columns?"""
    n = admissible.shape[0]
    col_owner = np.full(n, -1, dtype=int)

    def augment(row: int, seen: np.ndarray) -> bool:
        for j in np.flatnonzero(admissible[row] & ~used_cols & ~seen):
            seen[j] = True
            if col_owner[j] < 0 or augment(col_owner[j], seen):
                col_owner[j] = row
                return True
        return False

    for row in range(start, n):
        if not augment(row, np.zeros(n, dtype=bool)):
            return False
    return True
