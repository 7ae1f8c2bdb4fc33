"""Code family constructions.

Four kinds are supported, identified by the strings in :data:`KINDS`:

- ``rkrp_nonsystematic``: every worker gets random linear combinations
  of the A-blocks and B-blocks; the generator matrix is the row-wise
  Khatri-Rao product of the coefficient matrices P and Q.
- ``rkrp_systematic``: workers 1..K get raw block pairs, workers
  K+1..N get randomly coded pairs; the generator stacks the identity
  over the Khatri-Rao parity matrix F.
- ``orthopoly``: deterministic encoding over the Chebyshev basis
  T_r(x) = cos(r*arccos x) evaluated at the nodes
  x_i = cos((2i-1)*pi/(2N)).
- ``polynomial``: classic Vandermonde encoding at integer nodes
  x_i = i, included as the numerically fragile baseline.

Block products are indexed flat with the column (B) index fastest:
flat j corresponds to (j', j'') = (ceil(j/n), ((j-1) mod n)+1). All
generator matrices returned here map that flat ordering of block
products to worker outputs, so ``y = G @ w`` holds uniformly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError
from .linalg import as_matrix, khatri_rao_rowwise
from .partition import flat_index
from .runtime import WorkerTask

KINDS = ("rkrp_nonsystematic", "rkrp_systematic", "orthopoly", "polynomial")


@dataclass(frozen=True)
class CoefficientDistribution:
    """Law of the random encoding coefficients.

    Only absolutely continuous distributions are admitted (currently
    ``gaussian``); point masses would break the probability-1 recovery
    guarantee. ``seed`` makes sampling reproducible.
    """

    kind: str = "gaussian"
    mean: float = 0.0
    std: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.kind != "gaussian":
            raise ConfigurationError(
                f"unsupported coefficient distribution {self.kind!r}"
            )
        if not self.std > 0:
            raise ConfigurationError("std must be positive")

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        return self.mean + self.std * rng.standard_normal(shape)


@dataclass(frozen=True)
class CodeSpec:
    """One concrete code: kind, geometry, and its coefficient data.

    ``p``/``q`` hold the random coefficient matrices for the RKRP kinds
    (N x m and N x n when non-systematic, (N-K) x m and (N-K) x n when
    systematic; zero-row when N == K) and are ``None`` for the
    deterministic kinds, which carry ``nodes`` instead.
    """

    kind: str
    m: int
    n: int
    big_n: int
    p: np.ndarray | None = None
    q: np.ndarray | None = None
    nodes: np.ndarray | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"unknown code kind {self.kind!r}")
        _check_geometry(self.m, self.n, self.big_n)

    @property
    def big_k(self) -> int:
        return self.m * self.n

    def to_json(self) -> str:
        """Serialize to JSON, embedding the full coefficient matrices.

        Floats round-trip bit-exactly (shortest-repr encoding), so a
        replayed experiment sees the identical code.
        """
        doc = {
            "kind": self.kind,
            "m": self.m,
            "n": self.n,
            "big_n": self.big_n,
            "seed": self.seed,
            "p": None if self.p is None else self.p.tolist(),
            "q": None if self.q is None else self.q.tolist(),
            "nodes": None if self.nodes is None else self.nodes.tolist(),
        }
        return json.dumps(doc)

    @staticmethod
    def from_json(text: str) -> "CodeSpec":
        doc = json.loads(text)
        arr = lambda v, ndim: None if v is None else np.array(v, dtype=np.float64, ndmin=ndim)
        return CodeSpec(
            kind=doc["kind"],
            m=int(doc["m"]),
            n=int(doc["n"]),
            big_n=int(doc["big_n"]),
            p=arr(doc["p"], 2),
            q=arr(doc["q"], 2),
            nodes=arr(doc["nodes"], 1),
            seed=doc["seed"],
        )


@dataclass(frozen=True)
class GeneratorRow:
    """One worker's row of the generator matrix."""

    worker: int
    weights: np.ndarray


def _check_geometry(m: int, n: int, big_n: int) -> None:
    if m < 1 or n < 1:
        raise ConfigurationError(f"block counts must be positive, got m={m}, n={n}")
    if big_n < m * n:
        raise ConfigurationError(
            f"need at least K = m*n = {m * n} workers, got N = {big_n}"
        )


def sample_rkrp_nonsystematic(
    m: int, n: int, big_n: int, dist: CoefficientDistribution
) -> CodeSpec:
    """Draw a non-systematic code: P is N x m, Q is N x n, entries i.i.d."""
    _check_geometry(m, n, big_n)
    rng = np.random.default_rng(dist.seed)
    p = dist.sample(rng, (big_n, m))
    q = dist.sample(rng, (big_n, n))
    return CodeSpec(kind="rkrp_nonsystematic", m=m, n=n, big_n=big_n,
                    p=p, q=q, seed=dist.seed)


def sample_rkrp_systematic(
    m: int, n: int, big_n: int, dist: CoefficientDistribution
) -> CodeSpec:
    """Draw a systematic code: only the N-K parity workers get coefficients."""
    _check_geometry(m, n, big_n)
    rng = np.random.default_rng(dist.seed)
    rows = big_n - m * n
    p = dist.sample(rng, (rows, m))
    q = dist.sample(rng, (rows, n))
    return CodeSpec(kind="rkrp_systematic", m=m, n=n, big_n=big_n,
                    p=p, q=q, seed=dist.seed)


def chebyshev_nodes(big_n: int) -> np.ndarray:
    """Nodes x_i = cos((2i-1)*pi/(2N)), i = 1..N: strictly decreasing, in (-1, 1)."""
    i = np.arange(1, big_n + 1, dtype=np.float64)
    return np.cos((2.0 * i - 1.0) * np.pi / (2.0 * big_n))


def chebyshev_t(degree, x) -> np.ndarray:
    """Chebyshev polynomial values T_r(x) = cos(r*arccos x) on [-1, 1].

    ``degree`` and ``x`` broadcast against each other.
    """
    return np.cos(np.asarray(degree, dtype=np.float64) * np.arccos(np.clip(x, -1.0, 1.0)))


def build_orthopoly(m: int, n: int, big_n: int) -> CodeSpec:
    """Deterministic Chebyshev-basis code on the N standard nodes."""
    _check_geometry(m, n, big_n)
    return CodeSpec(kind="orthopoly", m=m, n=n, big_n=big_n,
                    nodes=chebyshev_nodes(big_n))


def build_polynomial(m: int, n: int, big_n: int) -> CodeSpec:
    """Vandermonde baseline at integer nodes 1..N."""
    _check_geometry(m, n, big_n)
    return CodeSpec(kind="polynomial", m=m, n=n, big_n=big_n,
                    nodes=np.arange(1, big_n + 1, dtype=np.float64))


def _coding_weights(spec: CodeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-worker combination weights over A-blocks and B-blocks.

    Returns (wa, wb) with wa shape (rows, m) and wb shape (rows, n);
    for the systematic kind these cover only the parity workers.
    """
    if spec.kind in ("rkrp_nonsystematic", "rkrp_systematic"):
        return spec.p, spec.q
    x = spec.nodes
    if spec.kind == "orthopoly":
        degrees_a = np.arange(spec.m)
        degrees_b = np.arange(spec.n) * spec.m
        wa = chebyshev_t(degrees_a[None, :], x[:, None])
        wb = chebyshev_t(degrees_b[None, :], x[:, None])
        return wa, wb
    # polynomial: plain powers
    wa = x[:, None] ** np.arange(spec.m)[None, :]
    wb = x[:, None] ** (np.arange(spec.n) * spec.m)[None, :]
    return wa, wb


def parity_matrix(spec: CodeSpec) -> np.ndarray:
    """Systematic kind's F: the (N-K) x K rows coding the parity workers.

    Shape (0, K) when N == K (plain blocking, no parity).
    """
    if spec.kind != "rkrp_systematic":
        raise ConfigurationError(f"parity_matrix undefined for kind {spec.kind!r}")
    if spec.big_n == spec.big_k:
        return np.zeros((0, spec.big_k))
    return khatri_rao_rowwise(spec.p, spec.q)


def flat_column_permutation(m: int, n: int) -> np.ndarray:
    """0-based map from flat block order to the Chebyshev-degree order.

    Entry j0 gives the column, in :func:`orthopoly_h_matrix`'s native
    ordering (A-index fastest), that holds flat block j0+1.
    """
    j0 = np.arange(m * n)
    row = j0 // n  # 0-based j' - 1
    col = j0 % n   # 0-based j'' - 1
    return row + col * m


def orthopoly_h_matrix(m: int, n: int) -> np.ndarray:
    """Basis-conversion matrix H for the Chebyshev-product encoding.

    Column c = (j-1) + (l-1)*m + 1 expands the product
    T_{j-1}(x) * T_{(l-1)m}(x) in the basis T_0..T_{K-1}; entries
    accumulate the two halves of T_a*T_b = (T_{a+b} + T_{|a-b|})/2,
    so coincident targets (the j=1 column of each l) sum to 1 and
    every column sums to 1.
    """
    if m < 1 or n < 1:
        raise ConfigurationError(f"block counts must be positive, got m={m}, n={n}")
    big_k = m * n
    h = np.zeros((big_k, big_k))
    for l in range(n):
        for j in range(m):
            c = j + l * m
            a, b = j, l * m
            h[a + b, c] += 0.5
            h[abs(a - b), c] += 0.5
    return h


def chebyshev_vandermonde(nodes: np.ndarray, big_k: int) -> np.ndarray:
    """Matrix with entries T_{r-1}(x_i): len(nodes) rows, big_k columns."""
    degrees = np.arange(big_k)
    return chebyshev_t(degrees[None, :], np.asarray(nodes, dtype=np.float64)[:, None])


def generator_matrix(spec: CodeSpec) -> np.ndarray:
    """The N x K matrix G with y = G @ w over flat-ordered block products w.

    Non-systematic rows are Kronecker products of coefficient rows;
    systematic generators stack I_K over the parity matrix F; the
    Chebyshev kind composes the node-evaluation matrix with the
    basis-conversion matrix H (columns permuted to flat order);
    the polynomial kind's rows are node powers with exponent
    (j'-1) + (j''-1)*m at flat column j.
    """
    if spec.kind == "rkrp_nonsystematic":
        return khatri_rao_rowwise(spec.p, spec.q)
    if spec.kind == "rkrp_systematic":
        eye = np.eye(spec.big_k)
        f = parity_matrix(spec)
        return np.vstack([eye, f]) if f.shape[0] else eye
    if spec.kind == "orthopoly":
        g_o = chebyshev_vandermonde(spec.nodes, spec.big_k)
        h = orthopoly_h_matrix(spec.m, spec.n)
        return g_o @ h[:, flat_column_permutation(spec.m, spec.n)]
    wa, wb = _coding_weights(spec)
    return khatri_rao_rowwise(wa, wb)


def generator_row(spec: CodeSpec, worker: int) -> GeneratorRow:
    """Row of :func:`generator_matrix` for a single 1-based worker index."""
    if worker < 1 or worker > spec.big_n:
        raise ConfigurationError(
            f"worker {worker} outside [1, {spec.big_n}]"
        )
    return GeneratorRow(worker=worker, weights=generator_matrix(spec)[worker - 1])


def encode_tasks(spec: CodeSpec, a_blocks, b_blocks) -> list[WorkerTask]:
    """Build the N worker tasks (U_i^T, V_i) from the partitioned blocks.

    Coded workers receive weighted sums of the blocks; systematic
    workers 1..K receive verbatim copies of their (A_{i'}, B_{i''})
    pair — no arithmetic touches those, so their results are exact.
    """
    if len(a_blocks) != spec.m or len(b_blocks) != spec.n:
        raise DimensionError(
            f"expected {spec.m} A-blocks and {spec.n} B-blocks, "
            f"got {len(a_blocks)} and {len(b_blocks)}"
        )
    a_stack = np.stack([as_matrix(blk, "A block") for blk in a_blocks])
    b_stack = np.stack([as_matrix(blk, "B block") for blk in b_blocks])
    if a_stack.shape[2] != b_stack.shape[1]:
        raise DimensionError(
            f"inner dimensions disagree: A blocks are {a_stack.shape[1:]}, "
            f"B blocks are {b_stack.shape[1:]}"
        )

    tasks: list[WorkerTask] = []
    start = 1
    if spec.kind == "rkrp_systematic":
        for i in range(1, spec.big_k + 1):
            idx = flat_index(i, spec.n, spec.m)
            tasks.append(WorkerTask(
                worker=i,
                u_t=a_blocks[idx.row_block - 1].copy(),
                v=b_blocks[idx.col_block - 1].copy(),
            ))
        start = spec.big_k + 1
        if spec.big_n == spec.big_k:
            return tasks

    wa, wb = _coding_weights(spec)
    u_all = np.tensordot(wa, a_stack, axes=([1], [0]))
    v_all = np.tensordot(wb, b_stack, axes=([1], [0]))
    for offset in range(u_all.shape[0]):
        tasks.append(WorkerTask(
            worker=start + offset, u_t=u_all[offset], v=v_all[offset]
        ))
    return tasks
