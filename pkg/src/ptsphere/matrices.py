"""Exact complex matrices and float dense linear algebra.

ExactMatrix entries are Exact scalars; equality is entrywise and exact.
FloatMatrix wraps a dense complex128 array and provides the nonsymmetric
eigensolver and matrix exponential used by the spectral layer.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .exact import Exact, ONE, ZERO
from .errors import DimensionMismatch, NoConvergence, SingularMatrix

__all__ = ["ExactMatrix", "FloatMatrix", "eig_dense", "mat_exp_numeric", "exact_inverse"]


class ExactMatrix:
    """Immutable rectangular matrix over Exact scalars."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        rows = tuple(tuple(Exact.coerce(e) for e in row) for row in entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("matrix must be rectangular and nonempty")
        self.rows = len(rows)
        self.cols = len(rows[0])
        self.entries = rows

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, r: int, c: int) -> "ExactMatrix":
        return cls([[ZERO] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        return ExactMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix([[-a for a in row] for row in self.entries])

    def scale(self, c) -> "ExactMatrix":
        c = Exact.coerce(c)
        return ExactMatrix([[c * a for a in row] for row in self.entries])

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.cols} != {other.rows}")
        ot = list(zip(*other.entries))
        out = []
        for row in self.entries:
            out.append([sum((a * b for a, b in zip(row, col)), ZERO) for col in ot])
        return ExactMatrix(out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.entries)))

    def conjugate(self) -> "ExactMatrix":
        return ExactMatrix([[a.conjugate() for a in row] for row in self.entries])

    def is_zero(self) -> bool:
        return all(a.is_zero() for row in self.entries for a in row)

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.transpose()

    def apply_vector(self, v: Sequence) -> list:
        if len(v) != self.cols:
            raise DimensionMismatch("vector length mismatch")
        return [sum((a * x for a, x in zip(row, v)), ZERO) for row in self.entries]

    def commutator(self, other: "ExactMatrix") -> "ExactMatrix":
        """AB - BA, exactly."""
        self._same_shape(other)
        if self.rows != self.cols:
            raise DimensionMismatch("commutator needs square matrices")
        return self @ other - other @ self

    def det(self) -> Exact:
        if self.rows != self.cols:
            raise DimensionMismatch("determinant needs a square matrix")
        a = [list(row) for row in self.entries]
        n = self.rows
        det = ONE
        for c in range(n):
            piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
            if piv is None:
                return ZERO
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                det = -det
            det = det * a[c][c]
            inv = a[c][c].inverse()
            for r in range(c + 1, n):
                if a[r][c].is_zero():
                    continue
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def rank(self) -> int:
        a = [list(row) for row in self.entries]
        rank, row = 0, 0
        for c in range(self.cols):
            piv = next((r for r in range(row, self.rows) if not a[r][c].is_zero()), None)
            if piv is None:
                continue
            a[row], a[piv] = a[piv], a[row]
            inv = a[row][c].inverse()
            for r in range(self.rows):
                if r != row and not a[r][c].is_zero():
                    f = a[r][c] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[row])]
            row += 1
            rank += 1
        return rank

    def inverse(self) -> "ExactMatrix":
        return exact_inverse(self)

    def solve(self, rhs: Sequence) -> list:
        """Solve self @ x = rhs exactly (square, nonsingular)."""
        n = self.rows
        if self.rows != self.cols or len(rhs) != n:
            raise DimensionMismatch("solve needs a square system")
        a = [list(row) + [Exact.coerce(rhs[i])] for i, row in enumerate(self.entries)]
        for c in range(n):
            piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
            if piv is None:
                raise SingularMatrix("singular system")
            a[c], a[piv] = a[piv], a[c]
            inv = a[c][c].inverse()
            a[c] = [x * inv for x in a[c]]
            for r in range(n):
                if r != c and not a[r][c].is_zero():
                    f = a[r][c]
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return [a[r][n] for r in range(n)]

    def to_numpy(self) -> np.ndarray:
        return np.array(
            [[a.to_complex() for a in row] for row in self.entries], dtype=complex
        )

    def _same_shape(self, other: "ExactMatrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(
                f"shape {(self.rows, self.cols)} != {(other.rows, other.cols)}"
            )

    def __repr__(self):
        body = "; ".join(", ".join(repr(a) for a in row) for row in self.entries)
        return f"ExactMatrix[{body}]"


def exact_inverse(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse by Gauss-Jordan elimination with exact division."""
    if m.rows != m.cols:
        raise DimensionMismatch("inverse needs a square matrix")
    n = m.rows
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(m.entries)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = a[c][c].inverse()
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and not a[r][c].is_zero():
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return ExactMatrix([row[n:] for row in a])


class FloatMatrix:
    """Dense complex128 matrix; all entries must be finite on construction."""

    __slots__ = ("array",)

    MAX_EIG_DIM = 4096

    def __init__(self, array):
        arr = np.asarray(array, dtype=complex)
        if arr.ndim != 2:
            raise DimensionMismatch("expected a 2-d array")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ValueError("non-finite entries in FloatMatrix")
        self.array = arr
        self.array.setflags(write=False)

    @property
    def rows(self):
        return self.array.shape[0]

    @property
    def cols(self):
        return self.array.shape[1]


def eig_dense(m: FloatMatrix | np.ndarray) -> np.ndarray:
    """All eigenvalues of a dense general complex matrix.

    Delegates to LAPACK's balanced Hessenberg + implicitly shifted QR path
    (zgeev); dimensions are capped at 4096.
    """
    arr = m.array if isinstance(m, FloatMatrix) else np.asarray(m, dtype=complex)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch("eigenvalues need a square matrix")
    if arr.shape[0] > FloatMatrix.MAX_EIG_DIM:
        raise DimensionMismatch(f"dimension {arr.shape[0]} exceeds {FloatMatrix.MAX_EIG_DIM}")
    try:
        return np.linalg.eigvals(arr)
    except np.linalg.LinAlgError as exc:  # QR sweep budget exceeded
        raise NoConvergence(str(exc)) from exc


def mat_exp_numeric(m: FloatMatrix | np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling-and-squaring with Pade approximants."""
    arr = m.array if isinstance(m, FloatMatrix) else np.asarray(m, dtype=complex)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch("exponential needs a square matrix")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite entries")
    return scipy.linalg.expm(arr)
