"""Straggler-tolerant coded matrix multiplication.

Split a product A_t @ B into K = m*n block products, encode them over
N >= K simulated workers with one of four erasure-code families, erase
an arbitrary straggler subset, and reconstruct the full product from
any K responses. The random Khatri-Rao kinds trade the structured
(Vandermonde / Chebyshev) generators for random ones, keeping the
recovery guarantee while staying numerically well conditioned; the
package bundles a Monte-Carlo harness and CLI for measuring exactly
that difference.
"""

from .bench import ExperimentConfig, balanced_factorization
from .codes import (
    KINDS,
    CodeSpec,
    CoefficientDistribution,
    GeneratorRow,
    build_orthopoly,
    build_polynomial,
    chebyshev_nodes,
    chebyshev_t,
    chebyshev_vandermonde,
    encode_tasks,
    flat_column_permutation,
    generator_matrix,
    generator_row,
    orthopoly_h_matrix,
    parity_matrix,
    sample_rkrp_nonsystematic,
    sample_rkrp_systematic,
)
from .decode import (
    DecodeReport,
    decode,
    decode_nonsystematic,
    decode_orthopoly,
    decode_systematic,
    relative_error,
)
from .errors import (
    ConfigurationError,
    DecodeError,
    DimensionError,
    InfeasiblePatternError,
    MatrixIOError,
    PartitionError,
    RkrpError,
    SingularMatrixError,
    UndefinedMetricError,
)
from .linalg import (
    DenseMatrix,
    SolveOutcome,
    as_matrix,
    condition_number,
    khatri_rao_rowwise,
    rank_of,
    reset_solve_call_count,
    solve_call_count,
    solve_linear,
)
from .matio import load_matrix, save_matrix
from .metrics import (
    TrialConfig,
    TrialRecord,
    alpha_to_big_n,
    avg_log_condition,
    eta_summary,
    log_condition_samples,
    make_spec,
    mds_check,
    run_trials,
)
from .partition import (
    BlockIndex,
    BlockPartition,
    assemble,
    flat_index,
    flat_of,
    pad_to_multiple,
    split,
)
from .runtime import (
    Bernoulli,
    FixedSet,
    StragglerPattern,
    UniformKofN,
    WorkerResult,
    WorkerTask,
    compute_all,
    sample_pattern,
    split_pattern,
)

__version__ = "0.1.0"

__all__ = [
    "Bernoulli", "BlockIndex", "BlockPartition", "CodeSpec",
    "CoefficientDistribution", "ConfigurationError", "DecodeError",
    "DecodeReport", "DenseMatrix", "DimensionError", "ExperimentConfig",
    "FixedSet", "GeneratorRow", "InfeasiblePatternError", "KINDS",
    "MatrixIOError", "PartitionError", "RkrpError", "SingularMatrixError",
    "SolveOutcome", "StragglerPattern", "TrialConfig", "TrialRecord",
    "UndefinedMetricError", "UniformKofN", "WorkerResult", "WorkerTask",
    "alpha_to_big_n", "as_matrix", "assemble", "avg_log_condition",
    "balanced_factorization", "build_orthopoly", "build_polynomial",
    "chebyshev_nodes", "chebyshev_t", "chebyshev_vandermonde",
    "compute_all", "condition_number", "decode", "decode_nonsystematic",
    "decode_orthopoly", "decode_systematic", "encode_tasks",
    "eta_summary", "flat_column_permutation", "flat_index", "flat_of",
    "generator_matrix",
    "generator_row", "khatri_rao_rowwise", "load_matrix",
    "log_condition_samples", "make_spec", "mds_check",
    "orthopoly_h_matrix", "pad_to_multiple", "parity_matrix", "rank_of",
    "relative_error", "reset_solve_call_count", "run_trials",
    "sample_pattern", "sample_rkrp_nonsystematic",
    "sample_rkrp_systematic", "save_matrix", "solve_call_count",
    "solve_linear", "split", "split_pattern",
]
