"""Ensemble statistics: Monte-Carlo relative-error trials, empirical
recovery checks over random responder subsets, and mean log condition
numbers of the decode matrices.

Each trial derives three independent RNG streams (data, coefficients,
straggler pattern) from ``base_seed + t``, so runs are reproducible
and per-trial components can be varied independently. Coefficients are
drawn fresh every trial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import (
    CodeSpec,
    CoefficientDistribution,
    build_orthopoly,
    build_polynomial,
    chebyshev_nodes,
    chebyshev_vandermonde,
    encode_tasks,
    generator_matrix,
    khatri_rao_rowwise,
    orthopoly_h_matrix,
    sample_rkrp_nonsystematic,
    sample_rkrp_systematic,
)
from .decode import decode, relative_error
from .errors import ConfigurationError, DecodeError
from .linalg import condition_number, rank_of
from .partition import flat_index, split
from .runtime import UniformKofN, compute_all, sample_pattern, split_pattern


@dataclass(frozen=True)
class TrialConfig:
    """Settings for one Monte-Carlo run of :func:`run_trials`.

    ``data_dims`` is (n1, n2, n3); ``None`` selects n1 = 7m, n2 = 8,
    n3 = 7n, which divides evenly for every geometry and keeps a trial
    sub-millisecond. ``model`` is a straggler model; ``None`` selects a
    uniformly random K-of-N responder set, the sampling scheme behind
    all the headline sweeps. With ``all_entries`` the error is measured
    over the full product; the default scores the vector of (1,1)
    entries of the block products.
    """

    kind: str
    m: int
    n: int
    big_n: int
    num_trials: int
    base_seed: int
    model: object | None = None
    data_dims: tuple[int, int, int] | None = None
    all_entries: bool = False

    def __post_init__(self):
        if self.num_trials < 1:
            raise ConfigurationError("num_trials must be at least 1")
        if self.big_n < self.m * self.n:
            raise ConfigurationError(
                f"need at least K = {self.m * self.n} workers, got N = {self.big_n}"
            )


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single trial.

    ``singular_flag`` marks trials whose decode matrix tripped the
    singularity alarm; those carry no relative error (``None``) and a
    NaN ``log_cond``, and aggregate summaries count them separately
    instead of folding an infinity into a mean. ``s1`` counts the
    stragglers among the first K workers (the solve size for the
    systematic kind).
    """

    seed: int
    kind: str
    m: int
    n: int
    big_n: int
    s1: int
    relative_err: float | None
    log_cond: float
    singular_flag: bool


def make_spec(kind: str, m: int, n: int, big_n: int, coeff_seed: int) -> CodeSpec:
    """Construct a code of the given kind; random kinds use ``coeff_seed``."""
    if kind == "rkrp_nonsystematic":
        return sample_rkrp_nonsystematic(
            m, n, big_n, CoefficientDistribution(seed=coeff_seed))
    if kind == "rkrp_systematic":
        return sample_rkrp_systematic(
            m, n, big_n, CoefficientDistribution(seed=coeff_seed))
    if kind == "orthopoly":
        return build_orthopoly(m, n, big_n)
    if kind == "polynomial":
        return build_polynomial(m, n, big_n)
    raise ConfigurationError(f"unknown code kind {kind!r}")


def _stream_seeds(trial_seed: int) -> tuple[int, int, int]:
    """Three independent child seeds (data, coefficients, pattern)."""
    state = np.random.SeedSequence(trial_seed).generate_state(3, np.uint64)
    return int(state[0]), int(state[1]), int(state[2])


def run_trials(config: TrialConfig) -> list[TrialRecord]:
    """Monte-Carlo relative-error trials; deterministic given the config.

    Each trial draws fresh Gaussian(0,1) data and fresh coefficients,
    samples a straggler pattern, decodes from the responders, and
    scores the decoded blocks against exactly computed truth.
    """
    big_k = config.m * config.n
    n1, n2, n3 = config.data_dims or (7 * config.m, 8, 7 * config.n)
    model = config.model if config.model is not None else UniformKofN(big_k)

    records: list[TrialRecord] = []
    for t in range(config.num_trials):
        trial_seed = config.base_seed + t
        data_seed, coeff_seed, pattern_seed = _stream_seeds(trial_seed)

        rng = np.random.default_rng(data_seed)
        a_t = rng.standard_normal((n1, n2))
        b = rng.standard_normal((n2, n3))
        a_blocks, b_blocks, part = split(a_t, b, config.m, config.n)

        spec = make_spec(config.kind, config.m, config.n, config.big_n, coeff_seed)
        results = compute_all(encode_tasks(spec, a_blocks, b_blocks))
        pattern = sample_pattern(model, config.big_n, pattern_seed, big_k=big_k)
        responders = set(pattern.responders)
        survived = [res for res in results if res.worker in responders]
        s1 = len(split_pattern(pattern, big_k)[0])

        try:
            report = decode(spec, survived, part)
        except DecodeError:
            records.append(TrialRecord(
                seed=trial_seed, kind=config.kind, m=config.m, n=config.n,
                big_n=config.big_n, s1=s1, relative_err=None,
                log_cond=float("nan"), singular_flag=True,
            ))
            continue

        if config.all_entries:
            err = relative_error(a_t @ b, report.product)
        else:
            truth = np.array([
                a_blocks[idx.row_block - 1][0, :] @ b_blocks[idx.col_block - 1][:, 0]
                for idx in (flat_index(j, config.n, config.m)
                            for j in range(1, big_k + 1))
            ])
            estimate = np.array([blk[0, 0] for blk in report.blocks])
            err = relative_error(truth, estimate)

        records.append(TrialRecord(
            seed=trial_seed, kind=config.kind, m=config.m, n=config.n,
            big_n=config.big_n, s1=s1, relative_err=err,
            log_cond=math.log(report.condition_estimate), singular_flag=False,
        ))
    return records


def eta_summary(records) -> tuple[float, float, int, int]:
    """Aggregate trial records into (eta_ave, stderr, num_trials, num_singular).

    Singular-flagged trials are excluded from the mean and counted in
    the last slot; with every trial singular the mean and stderr are
    NaN. The standard error uses the sample standard deviation.
    """
    errs = [r.relative_err for r in records if not r.singular_flag]
    num_singular = len(records) - len(errs)
    if not errs:
        return float("nan"), float("nan"), len(records), num_singular
    arr = np.array(errs)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return mean, stderr, len(records), num_singular


def mds_check(kind: str, m: int, n: int, big_n: int, num_subsets: int,
              seed: int, spec: CodeSpec | None = None) -> dict:
    """Empirical recovery check: count rank-deficient decode systems.

    Samples ``num_subsets`` random size-K responder subsets (or, for
    the systematic kind, random straggler patterns and the implied
    parity subsystem) and counts how many fail the full-rank test.
    Random kinds resample their coefficients every draw unless a fixed
    ``spec`` is supplied — passing a handcrafted spec (e.g. one with
    duplicated generator rows) lets callers verify the check actually
    detects deficiency.

    Returns ``{"failures": int, "trials": int}``.
    """
    big_k = m * n
    rng = np.random.default_rng(seed)
    failures = 0
    for _ in range(num_subsets):
        this = spec if spec is not None else make_spec(
            kind, m, n, big_n, int(rng.integers(2**63)))
        if kind == "rkrp_systematic":
            responders = rng.choice(big_n, size=big_k, replace=False) + 1
            missing = sorted(set(range(1, big_k + 1)) - set(int(w) for w in responders))
            if not missing:
                continue
            s1 = len(missing)
            parity = sorted(int(w) for w in responders if w > big_k)[:s1]
            f = generator_matrix(this)[big_k:, :]
            g_sys = f[np.ix_([w - big_k - 1 for w in parity],
                             [j - 1 for j in missing])]
            if rank_of(g_sys) < s1:
                failures += 1
        else:
            rows = rng.choice(big_n, size=big_k, replace=False)
            sub = generator_matrix(this)[rows, :]
            if rank_of(sub) < big_k:
                failures += 1
    return {"failures": failures, "trials": num_subsets}


def alpha_to_big_n(big_k: int, alpha: float) -> int:
    """Worker count for a straggler fraction: N = ceil(K / (1 - alpha)).

    A small epsilon guards against float noise promoting exact
    divisions (e.g. alpha = 0.3, K = 49 must give N = 70, not 71).
    """
    if not 0.0 <= alpha < 1.0:
        raise ConfigurationError(f"alpha must lie in [0, 1), got {alpha}")
    return max(big_k, math.ceil(big_k / (1.0 - alpha) - 1e-9))


def log_condition_samples(kind: str, m: int, n: int, alpha: float,
                          num_samples: int, seed: int) -> np.ndarray:
    """Natural-log condition numbers of decode matrices drawn at ``alpha``.

    Ensembles per kind:

    - non-systematic: K x K row-wise Khatri-Rao products of fresh
      Gaussian coefficient rows (responder-row subsets of the full
      generator have exactly this law, so the curve is flat in alpha);
    - systematic: the S1 x S1 parity subsystem induced by a uniform
      K-of-N responder set (no solve — condition 1, log 0 — when every
      systematic worker survives, which is certain at alpha = 0);
    - orthopoly: random K-row subsets of the node-evaluation matrix on
      N nodes, composed with the basis-conversion matrix;
    - polynomial: random K-row subsets of its generator on N nodes.
    """
    big_k = m * n
    big_n = alpha_to_big_n(big_k, alpha)
    rng = np.random.default_rng(seed)
    out = np.empty(num_samples)
    h = orthopoly_h_matrix(m, n) if kind == "orthopoly" else None
    for i in range(num_samples):
        if kind == "rkrp_nonsystematic":
            p = rng.standard_normal((big_k, m))
            q = rng.standard_normal((big_k, n))
            cond = condition_number(khatri_rao_rowwise(p, q))
        elif kind == "rkrp_systematic":
            responders = set(int(w) + 1 for w in
                             rng.choice(big_n, size=big_k, replace=False))
            missing = [j for j in range(1, big_k + 1) if j not in responders]
            if not missing:
                cond = 1.0
            else:
                s1 = len(missing)
                parity = sorted(w for w in responders if w > big_k)[:s1]
                p = rng.standard_normal((big_n - big_k, m))
                q = rng.standard_normal((big_n - big_k, n))
                f = khatri_rao_rowwise(p, q)
                cond = condition_number(f[np.ix_(
                    [w - big_k - 1 for w in parity],
                    [j - 1 for j in missing])])
        elif kind == "orthopoly":
            rows = rng.choice(big_n, size=big_k, replace=False)
            g_o = chebyshev_vandermonde(chebyshev_nodes(big_n)[rows], big_k)
            cond = condition_number(g_o @ h)
        elif kind == "polynomial":
            rows = rng.choice(big_n, size=big_k, replace=False)
            spec = build_polynomial(m, n, big_n)
            cond = condition_number(generator_matrix(spec)[rows, :])
        else:
            raise ConfigurationError(f"unknown code kind {kind!r}")
        out[i] = math.log(cond)
    return out


def avg_log_condition(kind: str, m: int, n: int, alpha_grid,
                      num_samples: int, seed: int) -> list[tuple[float, float]]:
    """Mean natural-log condition number at each straggler fraction."""
    result = []
    for alpha in alpha_grid:
        samples = log_condition_samples(kind, m, n, float(alpha), num_samples, seed)
        result.append((float(alpha), float(samples.mean())))
    return result
