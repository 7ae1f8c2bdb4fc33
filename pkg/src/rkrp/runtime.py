"""Master/worker round simulation.

Workers are simulated in-process: each task's product is computed
exactly and straggling is pure erasure — a straggler's result simply
never arrives. Three straggler models are provided: a fixed responder
set, a uniformly random size-k responder subset, and independent
per-worker Bernoulli straggling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InfeasiblePatternError
from .linalg import as_matrix


@dataclass(frozen=True)
class WorkerTask:
    """Encoded operand pair shipped to one worker (1-based index)."""

    worker: int
    u_t: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class WorkerResult:
    """One worker's computed product X_i = U_i^T V_i."""

    worker: int
    x: np.ndarray


@dataclass(frozen=True)
class FixedSet:
    """Straggler model: exactly these workers respond."""

    responders: tuple[int, ...]

    def __init__(self, responders):
        object.__setattr__(self, "responders", tuple(sorted(int(i) for i in responders)))


@dataclass(frozen=True)
class UniformKofN:
    """Straggler model: a uniformly random k-subset of workers responds."""

    k: int


@dataclass(frozen=True)
class Bernoulli:
    """Straggler model: each worker independently straggles with this probability."""

    prob_straggle: float

    def __post_init__(self):
        if not 0.0 <= self.prob_straggle <= 1.0:
            raise ConfigurationError(
                f"prob_straggle must lie in [0, 1], got {self.prob_straggle}"
            )


@dataclass(frozen=True)
class StragglerPattern:
    """Outcome of one round: the ordered set of responding workers."""

    responders: tuple[int, ...]
    model: object

    def __post_init__(self):
        object.__setattr__(self, "responders", tuple(sorted(set(int(i) for i in self.responders))))


def compute_all(tasks) -> list[WorkerResult]:
    """Run every task, preserving order. Pure and deterministic.

    Tasks are independent, so they could fan out across processes; the
    in-order loop here gives the identical result list.
    """
    results = []
    for task in tasks:
        u_t = as_matrix(task.u_t, f"worker {task.worker} u_t")
        v = as_matrix(task.v, f"worker {task.worker} v")
        results.append(WorkerResult(worker=task.worker, x=u_t @ v))
    return results


def sample_pattern(model, big_n: int, seed: int, big_k: int | None = None) -> StragglerPattern:
    """Draw a responder set for a round of ``big_n`` workers.

    Deterministic given ``seed``. When ``big_k`` is supplied, a
    uniform-k model with k < K is rejected up front (no pattern it
    produces could ever decode).
    """
    if big_n < 1:
        raise ConfigurationError(f"big_n must be positive, got {big_n}")
    if isinstance(model, FixedSet):
        responders = model.responders
        if responders and (responders[0] < 1 or responders[-1] > big_n):
            raise ConfigurationError(
                f"fixed responder set {responders} not within [1, {big_n}]"
            )
    elif isinstance(model, UniformKofN):
        if model.k < 0 or model.k > big_n:
            raise ConfigurationError(
                f"k={model.k} outside [0, {big_n}]"
            )
        if big_k is not None and model.k < big_k:
            raise InfeasiblePatternError(
                f"k={model.k} responders can never reach the recovery "
                f"threshold K={big_k}"
            )
        rng = np.random.default_rng(seed)
        chosen = rng.choice(big_n, size=model.k, replace=False)
        responders = tuple(sorted(int(i) + 1 for i in chosen))
    elif isinstance(model, Bernoulli):
        rng = np.random.default_rng(seed)
        keep = rng.random(big_n) >= model.prob_straggle
        responders = tuple(int(i) + 1 for i in np.flatnonzero(keep))
    else:
        raise ConfigurationError(f"unknown straggler model {model!r}")
    return StragglerPattern(responders=responders, model=model)


def split_pattern(pattern: StragglerPattern, big_k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Partition a pattern relative to the systematic/parity boundary K.

    Returns ``(systematic_stragglers, surviving_parity)``: the workers
    in [1, K] that did NOT respond, and the responders in [K+1, N].
    """
    responders = set(pattern.responders)
    systematic_stragglers = tuple(i for i in range(1, big_k + 1) if i not in responders)
    surviving_parity = tuple(i for i in pattern.responders if i > big_k)
    return systematic_stragglers, surviving_parity
