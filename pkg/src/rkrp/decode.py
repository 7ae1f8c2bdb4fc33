"""Reconstruction of all block products from responder results.

Every decoder factorizes its coefficient matrix once and solves for all
scalar positions of the block products as one multi-column right-hand
side. The reported condition number is always that of the matrix
actually factorized, since that is the quantity governing precision
loss.

Responder selection when more workers answered than needed: the
random/deterministic kinds take the K smallest worker indices; the
systematic kind keeps every surviving systematic worker (their results
are exact and free) and adds only the first S1 surviving parity
workers, keeping the solve as small as the straggler count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .codes import (
    CodeSpec,
    chebyshev_vandermonde,
    flat_column_permutation,
    generator_matrix,
    orthopoly_h_matrix,
    parity_matrix,
)
from .errors import (
    ConfigurationError,
    DecodeError,
    DimensionError,
    InfeasiblePatternError,
    SingularMatrixError,
    UndefinedMetricError,
)
from .linalg import condition_number, solve_linear
from .partition import BlockPartition, assemble
from .runtime import WorkerResult


@dataclass
class DecodeReport:
    """Recovered block products plus solve diagnostics.

    ``product`` is assembled from ``blocks`` on first access (then
    cached), so the cost of a decode call is the recovery itself —
    proportional to the solve size — and the block-tiling bookkeeping
    is paid only when the full matrix is read.

    ``solve_dim`` is the order of the linear system actually solved:
    K for the non-systematic kinds, S1 for the systematic kind, and 0
    for a pure copy (condition_estimate is 1.0 in that case).
    """

    blocks: list
    condition_estimate: float
    solve_dim: int
    part: BlockPartition
    _product: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def product(self) -> np.ndarray:
        if self._product is None:
            self._product = assemble(self.blocks, self.part)
        return self._product


def _check_spec_part(spec: CodeSpec, part: BlockPartition) -> None:
    if (spec.m, spec.n) != (part.m, part.n):
        raise DimensionError(
            f"code is ({spec.m}, {spec.n})-blocked but partition is "
            f"({part.m}, {part.n})"
        )


def _by_worker(results) -> dict[int, WorkerResult]:
    table: dict[int, WorkerResult] = {}
    for res in results:
        if res.worker in table:
            raise ConfigurationError(
                f"duplicate result for worker {res.worker}; results must "
                "come from distinct workers"
            )
        table[res.worker] = res
    return table


def _stack_values(results, part: BlockPartition) -> np.ndarray:
    """Row-stack the flattened worker outputs, validating shapes."""
    shape = part.block_shape
    rows = []
    for res in results:
        x = np.asarray(res.x, dtype=np.float64)
        if x.shape != shape:
            raise DimensionError(
                f"worker {res.worker} result has shape {x.shape}, "
                f"expected {shape}"
            )
        rows.append(x.ravel())
    return np.stack(rows)


def decode_nonsystematic(spec: CodeSpec, results, part: BlockPartition) -> DecodeReport:
    """Invert the K x K generator submatrix of the K smallest responders.

    This is the generic dense decode used by the non-systematic and
    polynomial kinds: one LU factorization, one multi-column solve over
    every scalar position.
    """
    _check_spec_part(spec, part)
    table = _by_worker(results)
    big_k = spec.big_k
    if len(table) < big_k:
        raise InfeasiblePatternError(
            f"{len(table)} responders cannot reach the recovery threshold {big_k}"
        )
    chosen = sorted(table)[:big_k]
    sub = generator_matrix(spec)[[w - 1 for w in chosen], :]
    y = _stack_values([table[w] for w in chosen], part)
    try:
        outcome = solve_linear(sub, y)
    except SingularMatrixError as exc:
        raise DecodeError(
            f"generator submatrix for responders {chosen} is numerically "
            f"singular ({exc})",
            responders=chosen,
        ) from exc
    br, bc = part.block_shape
    blocks = [outcome.solution[j].reshape(br, bc) for j in range(big_k)]
    return DecodeReport(
        blocks=blocks,
        condition_estimate=outcome.condition_estimate,
        solve_dim=big_k,
        part=part,
    )


def decode_systematic(spec: CodeSpec, results, part: BlockPartition) -> DecodeReport:
    """Peeling decode: copy surviving systematic results, solve only for
    the S1 missing ones.

    Copied blocks are the worker outputs themselves — elementwise
    identical, no arithmetic. The S1 x S1 system couples the first S1
    surviving parity workers to the missing systematic blocks after
    subtracting the known blocks' contributions from the parity values.
    With S1 = 0 no solve happens at all.
    """
    if spec.kind != "rkrp_systematic":
        raise ConfigurationError(
            f"decode_systematic requires a systematic code, got {spec.kind!r}"
        )
    _check_spec_part(spec, part)
    table = _by_worker(results)
    big_k = spec.big_k
    if len(table) < big_k:
        raise InfeasiblePatternError(
            f"{len(table)} responders cannot reach the recovery threshold {big_k}"
        )

    surviving_sys = [w for w in sorted(table) if w <= big_k]
    missing = [j for j in range(1, big_k + 1) if j not in table]
    s1 = len(missing)

    shape = part.block_shape
    blocks: list = [None] * big_k
    for w in surviving_sys:
        x = table[w].x
        if x.shape != shape:
            raise DimensionError(
                f"worker {w} result has shape {x.shape}, expected {shape}"
            )
        blocks[w - 1] = x

    if s1 == 0:
        return DecodeReport(blocks=blocks, condition_estimate=1.0,
                            solve_dim=0, part=part)

    parity = [w for w in sorted(table) if w > big_k][:s1]
    if len(parity) < s1:
        raise InfeasiblePatternError(
            f"need {s1} surviving parity workers to recover {s1} missing "
            f"systematic blocks, have {len(parity)}"
        )

    f = parity_matrix(spec)
    rows = [w - big_k - 1 for w in parity]
    unknown_cols = [j - 1 for j in missing]
    known_cols = [w - 1 for w in surviving_sys]

    rhs = _stack_values([table[w] for w in parity], part)
    if known_cols:
        y_known = _stack_values([table[w] for w in surviving_sys], part)
        rhs = rhs - f[np.ix_(rows, known_cols)] @ y_known

    g_sys = f[np.ix_(rows, unknown_cols)]
    try:
        outcome = solve_linear(g_sys, rhs)
    except SingularMatrixError as exc:
        raise DecodeError(
            f"parity submatrix for responders {sorted(table)} is "
            f"numerically singular ({exc})",
            responders=sorted(table),
        ) from exc
    br, bc = part.block_shape
    for local, j in enumerate(missing):
        blocks[j - 1] = outcome.solution[local].reshape(br, bc)
    return DecodeReport(
        blocks=blocks,
        condition_estimate=outcome.condition_estimate,
        solve_dim=s1,
        part=part,
    )


def decode_orthopoly(spec: CodeSpec, results, part: BlockPartition) -> DecodeReport:
    """Two-stage Chebyshev decode: node solve, then basis conversion.

    Solves the K x K Chebyshev-Vandermonde system over the selected
    nodes for the basis coefficients, then converts those through the
    product-expansion matrix (columns in flat block order). The
    reported condition number is that of the composed matrix, which is
    what a single-solve decoder would invert.
    """
    if spec.kind != "orthopoly":
        raise ConfigurationError(
            f"decode_orthopoly requires the Chebyshev kind, got {spec.kind!r}"
        )
    _check_spec_part(spec, part)
    table = _by_worker(results)
    big_k = spec.big_k
    if len(table) < big_k:
        raise InfeasiblePatternError(
            f"{len(table)} responders cannot reach the recovery threshold {big_k}"
        )
    chosen = sorted(table)[:big_k]
    g_o = chebyshev_vandermonde(spec.nodes[[w - 1 for w in chosen]], big_k)
    h = orthopoly_h_matrix(spec.m, spec.n)[:, flat_column_permutation(spec.m, spec.n)]
    y = _stack_values([table[w] for w in chosen], part)
    try:
        coeffs = solve_linear(g_o, y).solution
        w_hat = solve_linear(h, coeffs).solution
    except SingularMatrixError as exc:
        raise DecodeError(
            f"node system for responders {chosen} is numerically singular "
            f"({exc})",
            responders=chosen,
        ) from exc
    br, bc = part.block_shape
    blocks = [w_hat[j].reshape(br, bc) for j in range(big_k)]
    return DecodeReport(
        blocks=blocks,
        condition_estimate=condition_number(g_o @ h),
        solve_dim=big_k,
        part=part,
    )


def decode(spec: CodeSpec, results, part: BlockPartition) -> DecodeReport:
    """Dispatch to the decoder for the spec's kind."""
    if spec.kind == "rkrp_systematic":
        return decode_systematic(spec, results, part)
    if spec.kind == "orthopoly":
        return decode_orthopoly(spec, results, part)
    return decode_nonsystematic(spec, results, part)


def relative_error(truth, estimate) -> float:
    """Vectorized relative error ||truth - estimate|| / ||truth||.

    Both arguments are flattened, so vectors and matrices of matching
    shape are treated alike (the matrix case is the Frobenius norm).

    Raises
    ------
    UndefinedMetricError
        If ``truth`` has zero norm.
    DimensionError
        If shapes differ.
    """
    t = np.asarray(truth, dtype=np.float64)
    e = np.asarray(estimate, dtype=np.float64)
    if t.shape != e.shape:
        raise DimensionError(
            f"shape mismatch: truth {t.shape} vs estimate {e.shape}"
        )
    denom = float(np.linalg.norm(t.ravel()))
    if denom == 0.0:
        raise UndefinedMetricError("relative error undefined for zero-norm truth")
    return float(np.linalg.norm((t - e).ravel()) / denom)
