"""Block partitioning: split the left factor into m row-blocks and the
right factor into n column-blocks, map flat block indices to (row, col)
pairs, and reassemble decoded block products.

Naming follows the master/worker setting: the product computed is
``a_t @ b`` where ``a_t`` (n1 x n2) is split row-wise and ``b``
(n2 x n3) column-wise, giving K = m*n block products of shape
(n1/m) x (n3/n). Flat index j (1-based) enumerates blocks with the
column index varying fastest: j = (j'-1)*n + j''.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, PartitionError
from .linalg import as_matrix


@dataclass(frozen=True)
class BlockPartition:
    """Geometry of one split: block counts and the three dimensions."""

    m: int
    n: int
    n1: int
    n2: int
    n3: int

    def __post_init__(self):
        for field in ("m", "n", "n1", "n2", "n3"):
            if getattr(self, field) < 1:
                raise PartitionError(f"{field} must be positive")
        if self.n1 % self.m:
            raise PartitionError(
                f"m={self.m} does not divide the left factor's {self.n1} rows"
            )
        if self.n3 % self.n:
            raise PartitionError(
                f"n={self.n} does not divide the right factor's {self.n3} columns"
            )

    @property
    def big_k(self) -> int:
        """Number of block products, K = m*n."""
        return self.m * self.n

    @property
    def block_shape(self) -> tuple[int, int]:
        """Shape (n1/m, n3/n) of each block product."""
        return (self.n1 // self.m, self.n3 // self.n)


@dataclass(frozen=True)
class BlockIndex:
    """A flat block index together with its (row-block, col-block) pair.

    All three fields are 1-based: ``flat`` in [1, m*n], ``row_block``
    in [1, m], ``col_block`` in [1, n].
    """

    flat: int
    row_block: int
    col_block: int


def flat_index(j: int, n: int, m: int | None = None) -> BlockIndex:
    """Map a 1-based flat block index to its (row-block, col-block) pair.

    ``j' = ceil(j/n)`` and ``j'' = ((j-1) mod n) + 1``. When ``m`` is
    given the upper bound ``j <= m*n`` is enforced; otherwise only
    ``j >= 1`` can be checked.
    """
    if n < 1:
        raise PartitionError(f"n must be positive, got {n}")
    if j < 1 or (m is not None and j > m * n):
        bound = f"[1, {m * n}]" if m is not None else "[1, m*n]"
        raise PartitionError(f"flat index {j} outside {bound}")
    row = math.ceil(j / n)
    col = (j - 1) % n + 1
    return BlockIndex(flat=j, row_block=row, col_block=col)


def flat_of(row_block: int, col_block: int, n: int) -> int:
    """Inverse of :func:`flat_index`: 1-based flat index of block (j', j'')."""
    if row_block < 1 or col_block < 1 or col_block > n:
        raise PartitionError(
            f"block ({row_block}, {col_block}) invalid for n={n}"
        )
    return (row_block - 1) * n + col_block


def split(a_t, b, m: int, n: int):
    """Split ``a_t`` into m row-blocks and ``b`` into n column-blocks.

    Returns ``(a_blocks, b_blocks, part)`` where the blocks are
    materialized copies (tasks get shipped to simulated workers; copy
    semantics match that model) and ``part`` records the geometry.

    Raises
    ------
    DimensionError
        If the inner dimensions of ``a_t`` and ``b`` disagree.
    PartitionError
        If m does not divide a_t's rows or n does not divide b's cols.
    """
    a_t = as_matrix(a_t, "a_t")
    b = as_matrix(b, "b")
    if a_t.shape[1] != b.shape[0]:
        raise DimensionError(
            f"inner dimensions disagree: a_t is {a_t.shape}, b is {b.shape}"
        )
    part = BlockPartition(m=m, n=n, n1=a_t.shape[0], n2=a_t.shape[1], n3=b.shape[1])
    rows = part.n1 // m
    cols = part.n3 // n
    a_blocks = [a_t[i * rows:(i + 1) * rows, :].copy() for i in range(m)]
    b_blocks = [b[:, l * cols:(l + 1) * cols].copy() for l in range(n)]
    return a_blocks, b_blocks, part


def assemble(blocks, part: BlockPartition) -> np.ndarray:
    """Tile the K block products (ordered by flat index) into the n1 x n3 product."""
    if len(blocks) != part.big_k:
        raise DimensionError(
            f"expected {part.big_k} blocks, got {len(blocks)}"
        )
    br, bc = part.block_shape
    out = np.empty((part.n1, part.n3), dtype=np.float64)
    for j, block in enumerate(blocks, start=1):
        block = np.asarray(block, dtype=np.float64)
        if block.shape != (br, bc):
            raise DimensionError(
                f"block {j} has shape {block.shape}, expected {(br, bc)}"
            )
        idx = flat_index(j, part.n, part.m)
        r0 = (idx.row_block - 1) * br
        c0 = (idx.col_block - 1) * bc
        out[r0:r0 + br, c0:c0 + bc] = block
    return out


def pad_to_multiple(a, row_multiple: int, col_multiple: int) -> np.ndarray:
    """Zero-pad ``a`` so both dimensions become multiples of the given sizes.

    Used by the CLI's opt-in padding path; the library itself keeps
    divisibility strict because silent padding corrupts error metrics.
    """
    a = as_matrix(a, "a")
    pad_r = (-a.shape[0]) % row_multiple
    pad_c = (-a.shape[1]) % col_multiple
    if pad_r == 0 and pad_c == 0:
        return a
    return np.pad(a, ((0, pad_r), (0, pad_c)))
