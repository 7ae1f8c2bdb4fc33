"""Benchmark sweeps behind the CLI: grid construction, trial
aggregation, and CSV row formatting.

Two stable schemas are produced (byte-identical across reruns with the
same seed):

- error sweeps:  ``param,kind,eta_ave,stderr,num_trials,num_singular``
- condition sweep: ``param,kind,mean_log_cond,stderr,num_samples``

The param column holds N, alpha, or S depending on the sweep. Audit
data that doesn't fit the schema (the (m, n) factorization chosen per
grid point) goes to a JSON sidecar next to the CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigurationError
from .metrics import (
    TrialConfig,
    alpha_to_big_n,
    eta_summary,
    log_condition_samples,
    run_trials,
)

ERROR_HEADER = "param,kind,eta_ave,stderr,num_trials,num_singular"
COND_HEADER = "param,kind,mean_log_cond,stderr,num_samples"

#: Kinds plotted by the headline studies. The polynomial baseline is
#: opt-in: at the default K = 49 its decode matrix always trips the
#: singularity alarm, which is informative but makes noisy defaults.
DEFAULT_KINDS = ("rkrp_nonsystematic", "rkrp_systematic", "orthopoly")

ALL_KINDS = ("rkrp_nonsystematic", "rkrp_systematic", "orthopoly", "polynomial")

#: Default K grid for the worker-count sweep: products m*n over
#: 5 <= m <= n <= 10, whose balanced factorizations are exactly those
#: (m, n) pairs.
SWEEP_N_K_GRID = (30, 35, 36, 40, 42, 45, 48, 49, 50, 54, 56, 60,
                  63, 64, 70, 72, 80, 81, 90, 100)

#: Default straggler-fraction grid for the error-vs-alpha sweep.
SWEEP_ALPHA_GRID = (0.05, 0.09, 0.14, 0.16, 0.20, 0.23, 0.26, 0.28,
                    0.31, 0.33, 0.35, 0.37, 0.39, 0.41, 0.43)

#: Default grid for the condition-number sweep.
COND_ALPHA_GRID = tuple(round(0.05 * i, 2) for i in range(20))


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark invocation, fully determining its output."""

    experiment: str
    kinds: tuple[str, ...] = DEFAULT_KINDS
    k: int = 49
    alpha: float = 0.1
    s_max: int = 26
    k_grid: tuple[int, ...] = SWEEP_N_K_GRID
    alpha_grid: tuple[float, ...] | None = None
    num_trials: int = 200
    base_seed: int = 0
    out: str | None = None
    all_entries: bool = False
    plot: bool = False

    def __post_init__(self):
        if self.experiment not in ("sweep_n", "sweep_alpha", "sweep_s", "cond", "demo"):
            raise ConfigurationError(f"unknown experiment {self.experiment!r}")
        if not self.kinds:
            raise ConfigurationError("kinds must be nonempty")
        for kind in self.kinds:
            if kind not in ALL_KINDS:
                raise ConfigurationError(f"unknown code kind {kind!r}")
        if self.num_trials < 1:
            raise ConfigurationError("num_trials must be at least 1")
        if self.k < 1:
            raise ConfigurationError("k must be positive")
        if self.s_max < 0:
            raise ConfigurationError("s_max must be nonnegative")
        if not 0.0 <= self.alpha < 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1), got {self.alpha}")
        if not self.k_grid:
            raise ConfigurationError("k_grid must be nonempty")
        if self.alpha_grid is not None and not self.alpha_grid:
            raise ConfigurationError("alpha_grid must be nonempty")


def balanced_factorization(big_k: int) -> tuple[int, int]:
    """Factor pair (m, n), m <= n, minimizing n - m; (1, K) for primes."""
    if big_k < 1:
        raise ConfigurationError(f"K must be positive, got {big_k}")
    best = (1, big_k)
    for m in range(2, int(math.isqrt(big_k)) + 1):
        if big_k % m == 0:
            best = (m, big_k // m)
    return best


def _fmt(value) -> str:
    # repr() gives shortest exact round-trip for floats, so reruns with
    # the same seed produce byte-identical files.
    if isinstance(value, float):
        return repr(value)
    return str(value)


def rows_to_csv(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def sweep_n_rows(config: ExperimentConfig):
    """Error vs worker count at fixed alpha; one row per (N, kind).

    Grid points come from the configured K grid: each K is factored in
    balanced fashion and N = ceil(K / (1 - alpha)). Returns (rows,
    meta) where meta records the per-row geometry for auditing.
    """
    rows, meta = [], []
    for big_k in config.k_grid:
        m, n = balanced_factorization(big_k)
        big_n = alpha_to_big_n(big_k, config.alpha)
        for kind in config.kinds:
            records = run_trials(TrialConfig(
                kind=kind, m=m, n=n, big_n=big_n,
                num_trials=config.num_trials, base_seed=config.base_seed,
                all_entries=config.all_entries,
            ))
            eta, stderr, total, singular = eta_summary(records)
            rows.append((big_n, kind, eta, stderr, total, singular))
            meta.append({"param": big_n, "kind": kind, "k": big_k,
                         "m": m, "n": n, "big_n": big_n})
    return rows, meta


def sweep_alpha_rows(config: ExperimentConfig):
    """Error vs straggler fraction at fixed K; one row per (alpha, kind)."""
    m, n = balanced_factorization(config.k)
    grid = config.alpha_grid if config.alpha_grid is not None else SWEEP_ALPHA_GRID
    rows, meta = [], []
    for alpha in grid:
        big_n = alpha_to_big_n(config.k, float(alpha))
        for kind in config.kinds:
            records = run_trials(TrialConfig(
                kind=kind, m=m, n=n, big_n=big_n,
                num_trials=config.num_trials, base_seed=config.base_seed,
                all_entries=config.all_entries,
            ))
            eta, stderr, total, singular = eta_summary(records)
            rows.append((float(alpha), kind, eta, stderr, total, singular))
            meta.append({"param": float(alpha), "kind": kind, "k": config.k,
                         "m": m, "n": n, "big_n": big_n})
    return rows, meta


def sweep_s_rows(config: ExperimentConfig):
    """Error vs straggler count at fixed K, N = K + S; one row per (S, kind)."""
    m, n = balanced_factorization(config.k)
    rows, meta = [], []
    for s in range(config.s_max + 1):
        big_n = config.k + s
        for kind in config.kinds:
            records = run_trials(TrialConfig(
                kind=kind, m=m, n=n, big_n=big_n,
                num_trials=config.num_trials, base_seed=config.base_seed,
                all_entries=config.all_entries,
            ))
            eta, stderr, total, singular = eta_summary(records)
            rows.append((s, kind, eta, stderr, total, singular))
            meta.append({"param": s, "kind": kind, "k": config.k,
                         "m": m, "n": n, "big_n": big_n})
    return rows, meta


def cond_rows(config: ExperimentConfig):
    """Mean log condition number vs alpha; one row per (alpha, kind)."""
    m, n = balanced_factorization(config.k)
    grid = config.alpha_grid if config.alpha_grid is not None else COND_ALPHA_GRID
    rows, meta = [], []
    for alpha in grid:
        for kind in config.kinds:
            samples = log_condition_samples(
                kind, m, n, float(alpha), config.num_trials, config.base_seed)
            mean = float(samples.mean())
            stderr = (float(samples.std(ddof=1) / math.sqrt(samples.size))
                      if samples.size > 1 else 0.0)
            rows.append((float(alpha), kind, mean, stderr, samples.size))
            meta.append({"param": float(alpha), "kind": kind, "k": config.k,
                         "m": m, "n": n,
                         "big_n": alpha_to_big_n(config.k, float(alpha))})
    return rows, meta
