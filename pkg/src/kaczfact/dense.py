"""Dense real matrices and vectors with eagerly cached row/column norms.

Every solver in this package samples rows or columns proportionally to
their squared Euclidean norms, so the norm caches are computed once at
construction and reused for the whole run.  Matrices are immutable:
the backing array is marked read-only and ``row``/``col`` hand out
read-only views.

All data is 64-bit real floating point.  The adjoint of a real matrix
is its transpose.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

__all__ = [
    "DenseMatrix",
    "make_matrix",
    "make_vector",
    "matvec",
    "matvec_adjoint",
    "dot",
    "axpy",
    "save_matrix",
    "load_matrix",
    "save_vector",
    "load_vector",
]

# Number of significant digits that round-trips a float64 through text.
_FLOAT_FMT = "%.17g"


def _as_float_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains a non-finite entry")
    return arr


class DenseMatrix:
    """Immutable row-major dense matrix with cached squared norms.

    Attributes
    ----------
    data : np.ndarray
        Read-only (rows, cols) float64 array.
    row_sqnorms : np.ndarray
        ``row_sqnorms[i] == ||data[i, :]||^2``.
    col_sqnorms : np.ndarray
        ``col_sqnorms[j] == ||data[:, j]||^2``.
    frob_sq : float
        Squared Frobenius norm, equal to ``row_sqnorms.sum()``.
    """

    def __init__(self, data) -> None:
        arr = np.array(data, dtype=np.float64, order="C", copy=True)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be two-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"matrix dimensions must be positive, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix contains a non-finite entry")
        arr.setflags(write=False)
        self._data = arr
        sq = arr * arr
        self._row_sqnorms = sq.sum(axis=1)
        self._col_sqnorms = sq.sum(axis=0)
        self._row_sqnorms.setflags(write=False)
        self._col_sqnorms.setflags(write=False)
        self._frob_sq = float(self._row_sqnorms.sum())

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def row_sqnorms(self) -> np.ndarray:
        return self._row_sqnorms

    @property
    def col_sqnorms(self) -> np.ndarray:
        return self._col_sqnorms

    @property
    def frob_sq(self) -> float:
        return self._frob_sq

    def row(self, i: int) -> np.ndarray:
        """Read-only view of row ``i``."""
        if not 0 <= i < self.rows:
            raise IndexError(f"row index {i} out of range for {self.rows}x{self.cols} matrix")
        return self._data[i, :]

    def col(self, j: int) -> np.ndarray:
        """Read-only view of column ``j``."""
        if not 0 <= j < self.cols:
            raise IndexError(f"column index {j} out of range for {self.rows}x{self.cols} matrix")
        return self._data[:, j]

    def __repr__(self) -> str:
        return f"DenseMatrix({self.rows}x{self.cols}, frob_sq={self._frob_sq:.6g})"


def make_matrix(rows: int, cols: int, values) -> DenseMatrix:
    """Build a DenseMatrix from ``values`` laid out row-major.

    ``values`` may be flat (length rows*cols) or already (rows, cols).
    Rejects non-finite entries and dimension mismatches.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 1:
        if arr.size != rows * cols:
            raise ValueError(f"expected {rows * cols} values for a {rows}x{cols} matrix, got {arr.size}")
        arr = arr.reshape(rows, cols)
    elif arr.shape != (rows, cols):
        raise ValueError(f"expected shape {(rows, cols)}, got {arr.shape}")
    return DenseMatrix(arr)


def make_vector(values) -> np.ndarray:
    """Validate and return a finite 1-D float64 array."""
    return _as_float_vector(values).copy()


def matvec(A: DenseMatrix, v: np.ndarray) -> np.ndarray:
    """Return ``A @ v``."""
    if v.shape != (A.cols,):
        raise ValueError(f"matvec dimension mismatch: matrix is {A.rows}x{A.cols}, vector has shape {v.shape}")
    return A.data @ v


def matvec_adjoint(A: DenseMatrix, v: np.ndarray) -> np.ndarray:
    """Return ``A* @ v`` (transpose for real matrices)."""
    if v.shape != (A.rows,):
        raise ValueError(f"matvec_adjoint dimension mismatch: matrix is {A.rows}x{A.cols}, vector has shape {v.shape}")
    return A.data.T @ v


def dot(u: np.ndarray, v: np.ndarray) -> float:
    if u.shape != v.shape:
        raise ValueError(f"dot dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


def axpy(alpha: float, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Return ``alpha * u + v`` without mutating the inputs."""
    if u.shape != v.shape:
        raise ValueError(f"axpy dimension mismatch: {u.shape} vs {v.shape}")
    return alpha * u + v


# ---------------------------------------------------------------------------
# Text file formats.
#
# Matrix: first line "rows cols", then one line of space-separated values
# per row.  Vector: first line "len", then one value per line.  Values are
# written with 17 significant digits so that float64 round-trips exactly.
# ---------------------------------------------------------------------------


def save_matrix(A: DenseMatrix, path) -> None:
    lines = [f"{A.rows} {A.cols}"]
    for i in range(A.rows):
        lines.append(" ".join(_FLOAT_FMT % x for x in A.data[i, :]))
    Path(path).write_text("\n".join(lines) + "\n")


def load_matrix(path) -> DenseMatrix:
    text = Path(path).read_text().strip().split("\n")
    if not text or not text[0].strip():
        raise ValueError(f"empty matrix file: {path}")
    header = text[0].split()
    if len(header) != 2:
        raise ValueError(f"malformed matrix header {text[0]!r} in {path}")
    rows, cols = int(header[0]), int(header[1])
    if len(text) - 1 != rows:
        raise ValueError(f"expected {rows} data lines in {path}, got {len(text) - 1}")
    data = np.empty((rows, cols), dtype=np.float64)
    for i, line in enumerate(text[1:]):
        vals = line.split()
        if len(vals) != cols:
            raise ValueError(f"row {i} of {path} has {len(vals)} values, expected {cols}")
        data[i, :] = [float(v) for v in vals]
    return DenseMatrix(data)


def save_vector(v: np.ndarray, path) -> None:
    v = _as_float_vector(v)
    lines = [str(v.size)]
    lines.extend(_FLOAT_FMT % x for x in v)
    Path(path).write_text("\n".join(lines) + "\n")


def load_vector(path) -> np.ndarray:
    text = Path(path).read_text().strip().split("\n")
    if not text or not text[0].strip():
        raise ValueError(f"empty vector file: {path}")
    size = int(text[0])
    if len(text) - 1 != size:
        raise ValueError(f"expected {size} values in {path}, got {len(text) - 1}")
    return _as_float_vector([float(line) for line in text[1:]], name=str(path))


def save_json(obj: dict, path) -> None:
    """Write a manifest-style dict as deterministic JSON."""
    Path(path).write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
