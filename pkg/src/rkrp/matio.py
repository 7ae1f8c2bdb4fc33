"""Whitespace-delimited matrix files with a one-line `rows cols` header.

The format is deliberately plain text — diffable and readable from any
language. Values are written with enough digits to round-trip float64
exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import MatrixIOError
from .linalg import as_matrix


def load_matrix(path) -> np.ndarray:
    try:
        with open(path, "r", encoding="ascii") as fh:
            header = fh.readline().split()
            if len(header) != 2:
                raise MatrixIOError(
                    f"{path}: first line must be 'rows cols', got {header!r}"
                )
            try:
                rows, cols = int(header[0]), int(header[1])
            except ValueError as exc:
                raise MatrixIOError(f"{path}: malformed header: {exc}") from exc
            body = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    except OSError as exc:
        raise MatrixIOError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise MatrixIOError(f"{path}: malformed matrix body: {exc}") from exc
    if body.shape != (rows, cols):
        # loadtxt flattens single-row bodies; try to reconcile before failing
        if body.size == rows * cols:
            body = body.reshape(rows, cols)
        else:
            raise MatrixIOError(
                f"{path}: header promises {rows}x{cols} but body has "
                f"shape {body.shape}"
            )
    try:
        return as_matrix(body, str(path))
    except Exception as exc:
        raise MatrixIOError(f"{path}: {exc}") from exc


def save_matrix(path, a) -> None:
    a = as_matrix(a, "matrix")
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{a.shape[0]} {a.shape[1]}\n")
            np.savetxt(fh, a, fmt="%.17g")
    except OSError as exc:
        raise MatrixIOError(f"cannot write {path}: {exc}") from exc
