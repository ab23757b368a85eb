"""Exact rational matrices, fraction-free elimination and a checked eigensolver.

All rank and kernel answers are exact. Floating point is only used for
spectra, and the zero count of every spectrum is cross-checked against the
exact kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError

DEFAULT_TOL = 1e-9


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("RationalMatrix entries must be exact (int, Fraction or 'p/q' str), not float")
    return Fraction(x)


class RationalMatrix:
    """Immutable dense matrix of :class:`fractions.Fraction`.

    ``shape`` is required when either dimension is zero, since it cannot be
    recovered from the rows.
    """

    __slots__ = ("_rows", "_shape")

    def __init__(self, rows: Iterable[Iterable], shape: tuple[int, int] | None = None):
        data = tuple(tuple(_frac(x) for x in row) for row in rows)
        if shape is None:
            if not data:
                raise ValueError("shape is required for a matrix with no rows")
            shape = (len(data), len(data[0]))
        n, m = shape
        if len(data) != n or any(len(row) != m for row in data):
            raise ValueError(f"entries do not match shape {shape}")
        self._rows = data
        self._shape = (n, m)

    @classmethod
    def zeros(cls, n: int, m: int) -> RationalMatrix:
        return cls([[0] * m for _ in range(n)], shape=(n, m))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.diagonal([1] * n)

    @classmethod
    def diagonal(cls, values: Sequence) -> RationalMatrix:
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)], shape=(n, n))

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def rows(self) -> int:
        return self._shape[0]

    @property
    def cols(self) -> int:
        return self._shape[1]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._rows[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self._rows)

    @property
    def T(self) -> RationalMatrix:
        n, m = self._shape
        return RationalMatrix([[self._rows[i][j] for i in range(n)] for j in range(m)], shape=(m, n))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        n, k = self._shape
        k2, m = other._shape
        if k != k2:
            raise ValueError(f"shape mismatch {self._shape} @ {other._shape}")
        cols = list(zip(*other._rows)) if k else [()] * m
        out = [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in self._rows]
        return RationalMatrix(out, shape=(n, m))

    def _elementwise(self, other, op) -> RationalMatrix:
        if self._shape != other._shape:
            raise ValueError(f"shape mismatch {self._shape} vs {other._shape}")
        return RationalMatrix(
            [[op(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self._rows, other._rows)],
            shape=self._shape,
        )

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self) -> RationalMatrix:
        return RationalMatrix([[-a for a in row] for row in self._rows], shape=self._shape)

    def scale(self, c) -> RationalMatrix:
        c = _frac(c)
        return RationalMatrix([[c * a for a in row] for row in self._rows], shape=self._shape)

    def __pow__(self, k: int) -> RationalMatrix:
        if self.rows != self.cols:
            raise ValueError("matrix power needs a square matrix")
        if k < 0:
            raise ValueError("negative matrix power")
        result = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._shape == other._shape and self._rows == other._rows

    def __hash__(self):
        return hash((self._shape, self._rows))

    def __repr__(self):
        return f"RationalMatrix({self.tolist_str()!r}, shape={self._shape})"

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_zero(self) -> bool:
        return all(a == 0 for row in self._rows for a in row)

    def tolist(self) -> list[list[Fraction]]:
        return [list(row) for row in self._rows]

    def tolist_str(self) -> list[list[str]]:
        return [[str(a) for a in row] for row in self._rows]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(a) for a in row] for row in self._rows], dtype=float).reshape(self._shape)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RationalMatrix:
        return RationalMatrix(
            [[self._rows[i][j] for j in cols] for i in rows], shape=(len(rows), len(cols))
        )


def _integer_rows(m: RationalMatrix) -> list[list[int]]:
    # Row scaling by the denominator lcm keeps row space and kernel intact.
    out = []
    for i in range(m.rows):
        row = m.row(i)
        d = lcm(*(a.denominator for a in row)) if row else 1
        out.append([int(a * d) for a in row])
    return out


def row_echelon(m: RationalMatrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) echelon form of the row-scaled integer matrix.

    Pivots are the first nonzero entry found scanning columns left to right.
    Returns the echelon rows (zero rows dropped) and the pivot columns.
    """
    a = _integer_rows(m)
    n, k = m.shape
    prev = 1
    r = 0
    pivots = []
    for c in range(k):
        if r == n:
            break
        p = next((i for i in range(r, n) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, n):
            aic = a[i][c]
            row_i, row_r = a[i], a[r]
            for j in range(c + 1, k):
                num = piv * row_i[j] - aic * row_r[j]
                q, rem = divmod(num, prev)
                assert rem == 0, "Bareiss division must be exact"
                row_i[j] = q
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rational_rank(m: RationalMatrix) -> int:
    return len(row_echelon(m)[1])


@dataclass(frozen=True)
class KernelBasis:
    dimension: int
    basis: tuple[tuple[Fraction, ...], ...]


def _primitive(vec: list[Fraction]) -> tuple[Fraction, ...]:
    d = lcm(*(x.denominator for x in vec))
    ints = [int(x * d) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        g = -g
    return tuple(Fraction(x, g) for x in ints)


def rational_kernel(m: RationalMatrix) -> KernelBasis:
    """Exact basis of the right kernel, one primitive integer vector per free column."""
    echelon, pivots = row_echelon(m)
    k = m.cols
    free = [c for c in range(k) if c not in set(pivots)]
    basis = []
    for f in free:
        x = [Fraction(0)] * k
        x[f] = Fraction(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            s = sum((echelon[r][j] * x[j] for j in range(c + 1, k)), Fraction(0))
            x[c] = -s / echelon[r][c]
        basis.append(_primitive(x))
    return KernelBasis(len(basis), tuple(basis))


def apply(m: RationalMatrix, vec: Sequence) -> tuple[Fraction, ...]:
    return tuple(sum((a * _frac(b) for a, b in zip(m.row(i), vec)), Fraction(0)) for i in range(m.rows))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns, orthonormal
    zero_count: int
    threshold: float

    def __len__(self):
        return len(self.eigenvalues)


def zero_threshold(a: np.ndarray, tol: float = DEFAULT_TOL) -> float:
    """Absolute cut-off for calling a value zero, scaled by the matrix norm."""
    norm = float(np.abs(a).max()) if a.size else 0.0
    return tol * max(1.0, norm)


def symmetric_spectrum(m: RationalMatrix, tol: float = DEFAULT_TOL, check_kernel: bool = True) -> Spectrum:
    """Eigen-decomposition of a symmetric rational matrix.

    The number of eigenvalues within the zero threshold must match the exact
    kernel dimension; a mismatch raises :class:`ContractError`.
    """
    if not m.is_symmetric():
        raise ContractError("symmetric_spectrum requires a symmetric matrix")
    a = m.to_numpy()
    return numeric_symmetric_spectrum(a, tol, exact_kernel_dim=rational_kernel(m).dimension if check_kernel else None)


def numeric_symmetric_spectrum(a: np.ndarray, tol: float = DEFAULT_TOL, exact_kernel_dim: int | None = None) -> Spectrum:
    if a.shape[0] != a.shape[1] or not np.allclose(a, a.T, rtol=0, atol=zero_threshold(a, tol)):
        raise ContractError("symmetric_spectrum requires a symmetric matrix")
    n = a.shape[0]
    if n == 0:
        return Spectrum(np.zeros(0), np.zeros((0, 0)), 0, 0.0)
    w, q = np.linalg.eigh(a)
    thr = zero_threshold(a, tol)
    zeros = int(np.sum(np.abs(w) <= thr))
    if exact_kernel_dim is not None and zeros != exact_kernel_dim:
        raise ContractError(
            f"numeric zero count {zeros} disagrees with exact kernel dimension {exact_kernel_dim}"
        )
    return Spectrum(w, q, zeros, thr)


@dataclass(frozen=True)
class SpectrumComparison:
    left: np.ndarray  # nonzero eigenvalues of A A^T
    right: np.ndarray  # nonzero eigenvalues of A^T A
    max_discrepancy: float

    def agree(self, tol: float = 1e-8) -> bool:
        return self.max_discrepancy <= tol


def verify_lemma_spectrum(a: RationalMatrix, tol: float = DEFAULT_TOL) -> SpectrumComparison:
    """Compare the nonzero spectra of ``A A^T`` and ``A^T A``."""
    left = symmetric_spectrum(a @ a.T, tol)
    right = symmetric_spectrum(a.T @ a, tol)
    lnz = np.sort(left.eigenvalues[np.abs(left.eigenvalues) > left.threshold])
    rnz = np.sort(right.eigenvalues[np.abs(right.eigenvalues) > right.threshold])
    if len(lnz) != len(rnz):
        disc = float("inf")
    elif len(lnz) == 0:
        disc = 0.0
    else:
        disc = float(np.max(np.abs(lnz - rnz)))
    return SpectrumComparison(lnz, rnz, disc)


def verify_lemma_kernel(a: RationalMatrix) -> bool:
    """``ker A == ker A^T A``, checked exactly (equal dimension and mutual containment)."""
    ka = rational_kernel(a)
    kaa = rational_kernel(a.T @ a)
    if ka.dimension != kaa.dimension:
        return False
    return all(not any(apply(a, v)) for v in kaa.basis)


def is_invertible(m: RationalMatrix) -> bool:
    return m.rows == m.cols and rational_rank(m) == m.rows


def verify_lemma_conjugacy(a: RationalMatrix, x: RationalMatrix, y: RationalMatrix) -> bool:
    """``dim ker A == dim ker XAY`` for invertible ``X`` (p x p) and ``Y`` (q x q)."""
    if not is_invertible(x):
        raise ContractError("left conjugator X must be square and invertible")
    if not is_invertible(y):
        raise ContractError("right conjugator Y must be square and invertible")
    return rational_kernel(a).dimension == rational_kernel(x @ a @ y).dimension
