# Exact arithmetic substrate: truncated integer power series and linear
# algebra over the prime field Z/p.

from __future__ import annotations

import math
from bisect import insort

import numpy as np


def is_odd_prime(p: int) -> bool:
    """Check that ``p`` is an odd prime (trial division; moduli here are small)."""
    if p < 3 or p % 2 == 0:
        return False
    for d in range(3, int(math.isqrt(p)) + 1, 2):
        if p % d == 0:
            return False
    return True


class TruncatedSeries:
    """Integer power series truncated at a degree cap.

    Coefficients are exact (unbounded) integers: these series track true
    graded dimensions, so no modular reduction is ever applied. Instances
    are immutable; all arithmetic returns new objects.
    """

    __slots__ = ("cap", "coeffs")

    def __init__(self, coeffs, cap=None):
        coeffs = tuple(int(c) for c in coeffs)
        if cap is None:
            if not coeffs:
                raise ValueError("empty coefficient list needs an explicit cap")
            cap = len(coeffs) - 1
        if cap < 0:
            raise ValueError("cap must be >= 0")
        if len(coeffs) > cap + 1:
            raise ValueError("more coefficients than cap+1")
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "coeffs", coeffs + (0,) * (cap + 1 - len(coeffs)))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @classmethod
    def zero(cls, cap):
        return cls((0,), cap)

    @classmethod
    def one(cls, cap):
        return cls((1,), cap)

    @classmethod
    def from_terms(cls, terms, cap):
        """Series from a {degree: coefficient} mapping, dropping terms above cap."""
        coeffs = [0] * (cap + 1)
        for d, c in terms.items():
            if d < 0:
                raise ValueError("negative degree")
            if d <= cap:
                coeffs[d] += int(c)
        return cls(coeffs, cap)

    def __getitem__(self, d):
        return self.coeffs[d]

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedSeries)
            and self.cap == other.cap
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.cap, self.coeffs))

    def __repr__(self):
        return f"TruncatedSeries({list(self.coeffs)})"

    def _check_cap(self, other):
        if not isinstance(other, TruncatedSeries):
            raise TypeError(f"expected TruncatedSeries, got {type(other).__name__}")
        if self.cap != other.cap:
            raise ValueError(f"cap mismatch: {self.cap} != {other.cap}")

    def __add__(self, other):
        self._check_cap(other)
        return TruncatedSeries(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.cap
        )

    def __sub__(self, other):
        self._check_cap(other)
        return TruncatedSeries(
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.cap
        )

    def __mul__(self, other):
        self._check_cap(other)
        out = [0] * (self.cap + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(self.cap + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncatedSeries(out, self.cap)

    def inverse(self):
        """Multiplicative inverse up to the cap; constant term must be +1 or -1."""
        a0 = self.coeffs[0]
        if a0 not in (1, -1):
            raise ValueError("series is not invertible: constant term must be +1 or -1")
        out = [0] * (self.cap + 1)
        out[0] = a0
        for d in range(1, self.cap + 1):
            acc = 0
            for i in range(1, d + 1):
                ai = self.coeffs[i]
                if ai:
                    acc += ai * out[d - i]
            out[d] = -a0 * acc
        return TruncatedSeries(out, self.cap)

    def truncate(self, cap):
        if cap > self.cap:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coeffs[: cap + 1], cap)

    def shift_down(self, k):
        """Divide by t^k; the first k coefficients must vanish. Cap drops by k."""
        if any(self.coeffs[:k]):
            raise ValueError(f"series not divisible by t^{k}")
        return TruncatedSeries(self.coeffs[k:], self.cap - k)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common cap."""
    return a * b


def series_inv(a: TruncatedSeries) -> TruncatedSeries:
    """Inverse series up to the cap; requires unit (+-1) constant term."""
    return a.inverse()


class FpMatrix:
    """Dense matrix over Z/p for an odd prime p; entries stored as residues."""

    __slots__ = ("p", "rows", "cols", "_a")

    def __init__(self, p, entries):
        if not is_odd_prime(p):
            raise ValueError(f"p={p} must be an odd prime >= 3")
        a = np.array(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("entries must be a rectangular 2-d array")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", a.shape[0])
        object.__setattr__(self, "cols", a.shape[1])
        object.__setattr__(self, "_a", a % p)
        self._a.setflags(write=False)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    @classmethod
    def identity(cls, p, k):
        return cls(p, np.eye(k, dtype=np.int64))

    @classmethod
    def zeros(cls, p, rows, cols):
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    def entry(self, i, j):
        return int(self._a[i, j])

    def array(self):
        """Read-only numpy view of the entries."""
        return self._a

    def tolist(self):
        return self._a.tolist()

    def __eq__(self, other):
        return (
            isinstance(other, FpMatrix)
            and self.p == other.p
            and self._a.shape == other._a.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __hash__(self):
        return hash((self.p, self._a.shape, self._a.tobytes()))

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.tolist()})"

    def transpose(self):
        return FpMatrix(self.p, self._a.T)

    def matmul(self, other):
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        return FpMatrix(self.p, (self._a @ other._a) % self.p)

    def submatrix(self, row_range, col_range):
        return FpMatrix(self.p, self._a[row_range[0] : row_range[1], col_range[0] : col_range[1]])

    def is_symmetric(self):
        return bool(np.array_equal(self._a, self._a.T % self.p))

    def is_skew_symmetric(self):
        # Over odd p a skew matrix has zero diagonal automatically, but the
        # diagonal check is kept explicit.
        return bool(np.array_equal(self._a, (-self._a.T) % self.p)) and not np.any(
            np.diagonal(self._a)
        )

    def is_zero(self):
        return not np.any(self._a)

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("only square matrices can be inverted")
        n, p = self.rows, self.p
        aug = np.concatenate([self._a.copy(), np.eye(n, dtype=np.int64)], axis=1)
        r = 0
        for c in range(n):
            pivot = None
            for i in range(r, n):
                if aug[i, c]:
                    pivot = i
                    break
            if pivot is None:
                raise ValueError("matrix is singular over Z/p")
            if pivot != r:
                aug[[r, pivot]] = aug[[pivot, r]]
            aug[r] = (aug[r] * pow(int(aug[r, c]), -1, p)) % p
            for i in range(n):
                if i != r and aug[i, c]:
                    aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
            r += 1
        return FpMatrix(p, aug[:, n:])


def matrix_rank(mat: FpMatrix) -> int:
    """Rank over Z/p by Gaussian elimination.

    Columns are eliminated left to right and the pivot is always the lowest
    remaining row index with a nonzero entry, so the computation is
    deterministic across runs.
    """
    a = mat.array().copy()
    p = mat.p
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pivot = None
        for i in range(r, nrows):
            if a[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            a[[r, pivot]] = a[[pivot, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        for i in range(r + 1, nrows):
            if a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % p
        r += 1
    return r


class RowSpaceModP:
    """Row space over Z/p kept in reduced row-echelon form.

    Supports incremental insertion, membership queries, and coordinates
    relative to the complementary (non-pivot) columns. Insertion order is
    up to the caller; ranks and membership answers do not depend on it.
    """

    def __init__(self, p, width):
        self.p = p
        self.width = width
        self._pivots = []  # ascending pivot column indices
        self._rows = {}  # pivot column -> normalized row (numpy, RREF)

    @property
    def rank(self):
        return len(self._pivots)

    @property
    def pivots(self):
        return tuple(self._pivots)

    def reduce(self, vec):
        """Residue of ``vec`` modulo the row space."""
        v = np.asarray(vec, dtype=np.int64) % self.p
        v = v.copy()
        for c in self._pivots:
            coef = v[c]
            if coef:
                v = (v - coef * self._rows[c]) % self.p
        return v

    def add(self, vec) -> bool:
        """Insert a vector; returns True when the rank grew."""
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if len(nz) == 0:
            return False
        c = int(nz[0])
        v = (v * pow(int(v[c]), -1, self.p)) % self.p
        for c2 in self._pivots:
            row = self._rows[c2]
            if row[c]:
                self._rows[c2] = (row - row[c] * v) % self.p
        self._rows[c] = v
        insort(self._pivots, c)
        return True

    def contains(self, vec) -> bool:
        return not np.any(self.reduce(vec))

    def nonpivot_columns(self):
        piv = set(self._pivots)
        return tuple(c for c in range(self.width) if c not in piv)

    def coords_in_complement(self, vec):
        """Coordinates of ``vec`` mod the row space, in the non-pivot columns."""
        return self.reduce(vec)[list(self.nonpivot_columns())]


def left_nullspace(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : x @ mat = 0 over Z/p}."""
    m = mat.shape[0]
    if m == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([mat % p, np.eye(m, dtype=np.int64)], axis=1)
    ncols = mat.shape[1]
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        pivot = None
        for i in range(r, m):
            if aug[i, c]:
                pivot = i
                break
        if pivot is None:
            continue
        if pivot != r:
            aug[[r, pivot]] = aug[[pivot, r]]
        aug[r] = (aug[r] * pow(int(aug[r, c]), -1, p)) % p
        for i in range(m):
            if i != r and aug[i, c]:
                aug[i] = (aug[i] - aug[i, c] * aug[r]) % p
        r += 1
    return aug[r:, ncols:] % p
