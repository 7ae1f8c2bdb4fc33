"""Dense real-matrix primitives: row-wise Khatri-Rao products, linear
solves with a singularity alarm, and rank / condition-number helpers.

Matrices are plain float64 ``numpy.ndarray`` objects validated by
:func:`as_matrix`; there is no wrapper class. All index conventions in
docstrings are 1-based (matching the usual linear-algebra notation);
storage is 0-based.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import DimensionError, SingularMatrixError

#: Matrices throughout the package are plain float64 ndarrays; this alias
#: documents intent in signatures. Use :func:`as_matrix` to validate.
DenseMatrix = np.ndarray

#: Relative pivot magnitude below which a solve is declared singular.
PIVOT_TOLERANCE = 1e-12

# Instrumentation: number of solve_linear invocations since the last
# reset. Deliberate test hook (copy-only decode paths must not solve);
# the single piece of mutable module state in the package.
_solve_calls = 0


def solve_call_count() -> int:
    """Return how many times :func:`solve_linear` ran since the last reset."""
    return _solve_calls


def reset_solve_call_count() -> None:
    """Zero the :func:`solve_linear` invocation counter."""
    global _solve_calls
    _solve_calls = 0


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate ``a`` as a finite float64 matrix and return it as an ndarray.

    Parameters
    ----------
    a : array_like
        Two-dimensional array with nonzero extent in both dimensions.
    name : str
        Label used in error messages.

    Returns
    -------
    numpy.ndarray
        C-contiguous float64 view or copy of ``a``.

    Raises
    ------
    DimensionError
        If ``a`` is not 2-D, has a zero dimension, or contains NaN/Inf.
    """
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got ndim={out.ndim}")
    if out.shape[0] < 1 or out.shape[1] < 1:
        raise DimensionError(f"{name} must have positive extent, got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise DimensionError(f"{name} contains non-finite entries")
    return out


@dataclass(frozen=True)
class SolveOutcome:
    """Result of :func:`solve_linear`.

    Attributes
    ----------
    solution : numpy.ndarray
        ``x`` with ``a @ x == b`` up to roundoff.
    condition_estimate : float
        2-norm condition number of the coefficient matrix (exact ratio
        of extreme singular values; >= 1 for any nonsingular matrix).
    """

    solution: np.ndarray
    condition_estimate: float


def khatri_rao_rowwise(p, q) -> np.ndarray:
    """Row-wise Khatri-Rao product: row i of the result is kron(p[i], q[i]).

    Column ``j`` (1-based) of the result holds ``p[i, j'] * q[i, j'']``
    with ``j' = ceil(j/n)`` and ``j'' = ((j-1) mod n) + 1`` where ``n``
    is the column count of ``q`` — the p-index varies slowest.

    Parameters
    ----------
    p : array_like, shape (k, m)
    q : array_like, shape (k, n)

    Returns
    -------
    numpy.ndarray, shape (k, m*n)

    Raises
    ------
    DimensionError
        If the row counts differ.
    """
    p = as_matrix(p, "p")
    q = as_matrix(q, "q")
    if p.shape[0] != q.shape[0]:
        raise DimensionError(
            f"row-count mismatch: p has {p.shape[0]} rows, q has {q.shape[0]}"
        )
    out = np.einsum("ij,il->ijl", p, q)
    return out.reshape(p.shape[0], p.shape[1] * q.shape[1])


def solve_linear(a, b) -> SolveOutcome:
    """Solve ``a @ x = b`` by LU with partial pivoting, factoring once.

    The factorization is shared across all columns of ``b``, so batching
    many right-hand sides into one call costs one factorization. The
    condition estimate comes from an exact SVD of ``a`` (matrices here
    are at most a few hundred square).

    Parameters
    ----------
    a : array_like, shape (k, k)
    b : array_like, shape (k, c)

    Returns
    -------
    SolveOutcome

    Raises
    ------
    DimensionError
        If ``a`` is not square or ``b``'s row count differs.
    SingularMatrixError
        If any pivot magnitude falls below ``PIVOT_TOLERANCE`` relative
        to the largest entry of ``a``. The error carries the 1-based
        pivot index. This is an alarm worth surfacing, never a silent
        fallback: for the random ensembles used here exact singularity
        has probability zero.
    """
    global _solve_calls
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"coefficient matrix must be square, got {a.shape}")
    if b.shape[0] != a.shape[0]:
        raise DimensionError(
            f"right-hand side has {b.shape[0]} rows, expected {a.shape[0]}"
        )
    _solve_calls += 1

    with warnings.catch_warnings():
        # exactly-zero pivots are caught by the relative threshold below;
        # scipy's own warning would just duplicate the alarm
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    scale = np.abs(a).max()
    bad = np.flatnonzero(pivots < PIVOT_TOLERANCE * scale)
    if bad.size:
        index = int(bad[0]) + 1
        raise SingularMatrixError(
            f"numerically singular system: pivot {index} has relative "
            f"magnitude {pivots[bad[0]] / scale:.3e} (< {PIVOT_TOLERANCE:g})",
            pivot_index=index,
        )
    x = lu_solve((lu, piv), b, check_finite=False)

    sv = np.linalg.svd(a, compute_uv=False)
    cond = float(sv[0] / sv[-1])
    return SolveOutcome(solution=x, condition_estimate=cond)


def rank_of(a) -> int:
    """Numerical rank: singular values above ``max(rows, cols) * eps * s_max``.

    Zero matrices have rank 0. Shuffling rows or columns cannot change
    the result (singular values are invariant under permutation).
    """
    a = as_matrix(a, "a")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[0] == 0.0:
        return 0
    tol = max(a.shape) * np.finfo(np.float64).eps * sv[0]
    return int(np.count_nonzero(sv > tol))


def condition_number(a) -> float:
    """Exact 2-norm condition number sigma_max / sigma_min of ``a``.

    Returns ``inf`` when the smallest singular value is exactly zero.
    """
    a = as_matrix(a, "a")
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] == 0.0:
        return float("inf")
    return float(sv[0] / sv[-1])
