"""Exact dense linear algebra over a prime field F_p.

Everything downstream (truncated algebras, Hilbert functions, Tor lengths)
reduces to row reduction, kernels and subspace arithmetic over F_p.  Matrices
are numpy int64 arrays with entries in [0, p); all arithmetic is exact.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 32003  # classical computer-algebra modulus; large enough for
                       # random-linear-form genericity at desk scale


class ModulusMismatch(ValueError):
    pass


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    if not _is_probable_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    return p


class FieldElem:
    """An element of F_p, held as a residue in [0, p)."""

    __slots__ = ("residue", "p")

    def __init__(self, residue: int, p: int):
        self.p = p
        self.residue = residue % p

    def _check(self, other: "FieldElem") -> None:
        if self.p != other.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.residue + other.residue, self.p)

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.residue - other.residue, self.p)

    def __mul__(self, other):
        self._check(other)
        return FieldElem(self.residue * other.residue, self.p)

    def inverse(self) -> "FieldElem":
        if self.residue == 0:
            raise ZeroDivisionError("inverse of zero in F_p")
        return FieldElem(pow(self.residue, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * other.inverse()

    def __neg__(self):
        return FieldElem(-self.residue, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, FieldElem)
            and self.p == other.p
            and self.residue == other.residue
        )

    def __hash__(self):
        return hash((self.residue, self.p))

    def __repr__(self):
        return f"FieldElem({self.residue}, {self.p})"


def _as_array(mat, p: int) -> np.ndarray:
    a = np.asarray(mat, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b mod p, routed through float64 BLAS when that is exact.

    Entries live in [0, p); a dot product of length n is bounded by
    n * (p-1)^2, which fits the 2^53 float64 integer range for every size
    this package produces (p <= 46341 keeps n up to ~4e6 safe).
    """
    n = a.shape[1]
    if n and n * (p - 1) * (p - 1) < 2 ** 53:
        out = (a % p).astype(np.float64) @ (b % p).astype(np.float64)
        return (out % p).astype(np.int64)
    return a @ b % p


def rref(mat, p: int):
    """Reduced row echelon form over F_p.

    Returns (R, pivots) where R has the same shape as the input (zero rows
    at the bottom) and pivots lists the pivot column of each nonzero row.
    """
    a = _as_array(mat, p).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(mat, p: int) -> int:
    return len(rref(mat, p)[1])


def kernel_basis(mat, p: int):
    """Basis of the right null space of mat over F_p.

    Returns a list of 1-d arrays v with mat @ v == 0; the count equals
    cols - rank.
    """
    a = _as_array(mat, p)
    rows, cols = a.shape
    R, pivots = rref(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-R[i, f]) % p
        basis.append(v)
    return basis


def solve(mat, b, p: int):
    """One solution x of mat @ x = b over F_p, or None if inconsistent."""
    a = _as_array(mat, p)
    rows, cols = a.shape
    bb = np.asarray(b, dtype=np.int64).reshape(-1) % p
    aug = np.concatenate([a, bb.reshape(-1, 1)], axis=1)
    R, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, cols]
    return x


class Mat:
    """Dense matrix over F_p with exact arithmetic."""

    def __init__(self, entries, p: int = DEFAULT_PRIME):
        self.p = p
        self.array = _as_array(entries, p)
        self.rows, self.cols = self.array.shape

    @classmethod
    def identity(cls, n: int, p: int = DEFAULT_PRIME) -> "Mat":
        return cls(np.eye(n, dtype=np.int64), p)

    def entry(self, i: int, j: int) -> FieldElem:
        return FieldElem(int(self.array[i, j]), self.p)

    def _check(self, other: "Mat") -> None:
        if self.p != other.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")

    def rref(self):
        R, pivots = rref(self.array, self.p)
        return Mat(R, self.p), pivots

    def rank(self) -> int:
        return rank(self.array, self.p)

    def kernel_basis(self):
        return kernel_basis(self.array, self.p)

    def transpose(self) -> "Mat":
        return Mat(self.array.T, self.p)

    def __matmul__(self, other: "Mat") -> "Mat":
        self._check(other)
        return Mat(self.array @ other.array % self.p, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.p == other.p
            and self.array.shape == other.array.shape
            and bool((self.array == other.array).all())
        )

    def __repr__(self):
        return f"Mat({self.array.tolist()}, p={self.p})"


class AmbientMismatch(ValueError):
    pass


class Subspace:
    """A subspace of F_p^n held as a reduced-row-echelon basis."""

    def __init__(self, ambient: int, rows: np.ndarray, pivots, p: int):
        self.ambient = ambient
        self.rows = rows            # shape (dim, ambient), rref, no zero rows
        self.pivots = list(pivots)
        self.p = p

    @classmethod
    def from_vectors(cls, vectors, ambient: int, p: int) -> "Subspace":
        if len(vectors) == 0:
            return cls.zero(ambient, p)
        a = _as_array(np.array(list(vectors), dtype=np.int64), p)
        if a.shape[1] != ambient:
            raise AmbientMismatch(
                f"vector length {a.shape[1]} != ambient {ambient}")
        R, pivots = rref(a, p)
        return cls(ambient, R[: len(pivots)].copy(), pivots, p)

    @classmethod
    def zero(cls, ambient: int, p: int) -> "Subspace":
        return cls(ambient, np.zeros((0, ambient), dtype=np.int64), [], p)

    @classmethod
    def full(cls, ambient: int, p: int) -> "Subspace":
        return cls(ambient, np.eye(ambient, dtype=np.int64),
                   list(range(ambient)), p)

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def _check(self, other: "Subspace") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch(
                f"ambient dims differ: {self.ambient} vs {other.ambient}")
        if self.p != other.p:
            raise ModulusMismatch(f"moduli differ: {self.p} vs {other.p}")

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Residual of vec after eliminating this subspace's pivots."""
        v = np.asarray(vec, dtype=np.int64).reshape(-1) % self.p
        if self.dim == 0:
            return v
        coeffs = v[self.pivots]
        if coeffs.any():
            v = (v - coeffs @ self.rows) % self.p
        return v

    def reduce_matrix(self, mat: np.ndarray) -> np.ndarray:
        """Column-wise reduction; kernel of the result is the preimage of self."""
        m = np.asarray(mat, dtype=np.int64) % self.p
        if self.dim == 0:
            return m
        return (m - matmul_mod(self.rows.T, m[self.pivots, :], self.p)) \
            % self.p

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()

    def contains_space(self, other: "Subspace") -> bool:
        self._check(other)
        if other.dim == 0:
            return True
        return not self.reduce_matrix(other.rows.T).any()

    def sum(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if other.dim == 0:
            return self
        if self.dim == 0:
            return other
        stacked = np.concatenate([self.rows, other.rows], axis=0)
        return Subspace.from_vectors(stacked, self.ambient, self.p)

    def intersect(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.p)
        # c . rows in other  <=>  c in kernel of (rows reduced by other)^T
        residuals = other.reduce_matrix(self.rows.T).T  # (dim, ambient)
        combos = kernel_basis(residuals.T, self.p)
        vecs = [c @ self.rows % self.p for c in combos]
        return Subspace.from_vectors(vecs, self.ambient, self.p)

    def complement_in(self, other: "Subspace"):
        """Vectors of `other` spanning a complement of self inside other."""
        self._check(other)
        residuals = [self.reduce(r) for r in other.rows]
        R, pivots = rref(np.array(residuals or
                                  np.zeros((0, self.ambient), dtype=np.int64),
                                  dtype=np.int64), self.p)
        return [R[i] for i in range(len(pivots))]

    def quotient_dim(self, sub: "Subspace") -> int:
        self._check(sub)
        if not self.contains_space(sub):
            raise ValueError("quotient_dim: argument is not a subspace")
        return self.dim - sub.dim

    def basis_vectors(self):
        return [self.rows[i] for i in range(self.dim)]

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient == other.ambient
            and self.p == other.p
            and self.dim == other.dim
            and bool((self.rows == other.rows).all())
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"


def subspace_sum_dim_check(u: Subspace, v: Subspace) -> bool:
    """Grassmann identity dim(U+V) + dim(U∩V) == dim U + dim V."""
    return u.sum(v).dim + u.intersect(v).dim == u.dim + v.dim
