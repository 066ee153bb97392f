"""Brute-force oracle layer for the test suite.

Everything here is deliberately primitive: plain monomial enumeration with
itertools, dense row reduction over F_p in pure Python lists, and dimension
counting via Grassmann's identity.  No numpy, no subspace classes, no
caching; the only shared code with the package under test is the polynomial
parser (input plumbing, not computation).

Modules are described by (nvars, p, ideal_polys, rank, relation_columns)
where polynomials are {exponent tuple: coefficient} dicts.
"""

from __future__ import annotations

import itertools


def monomials_upto(nvars: int, bound: int):
    """All exponent tuples of total degree < bound, one degree at a time."""
    out = []
    for d in range(bound):
        for combo in itertools.product(range(d + 1), repeat=nvars):
            if sum(combo) == d:
                out.append(combo)
    return out


def poly_mul(a: dict, b: dict, p: int) -> dict:
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = (out.get(m, 0) + ca * cb) % p
    return {m: c for m, c in out.items() if c}


def rref_inplace(rows, p: int):
    """Gauss-Jordan over F_p on a list of row lists; returns pivot columns."""
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p
                           for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def span_dim(vectors, p: int) -> int:
    rows = [list(v) for v in vectors if any(x % p for x in v)]
    return len(rref_inplace(rows, p))


class OracleRing:
    """k[x_1..x_v]/(I + m^N) by brute force."""

    def __init__(self, nvars: int, p: int, ideal, level: int):
        self.nvars = nvars
        self.p = p
        self.level = level
        self.monomials = monomials_upto(nvars, level)
        self.index = {m: i for i, m in enumerate(self.monomials)}

        rel_rows = []
        for f in ideal:
            for m in self.monomials:
                prod = poly_mul({m: 1}, f, p)
                row = [0] * len(self.monomials)
                keep = False
                for mm, c in prod.items():
                    if sum(mm) < level:
                        row[self.index[mm]] = c
                        keep = True
                if keep or prod == {}:
                    rel_rows.append(row)
        self.rel_rows = [r for r in rel_rows if any(r)]
        pivots = rref_inplace(self.rel_rows, self.p)
        self.rel_rows = self.rel_rows[: len(pivots)]
        self.rel_pivots = pivots
        self.dim = len(self.monomials) - len(pivots)

    def poly_to_raw(self, f: dict):
        row = [0] * len(self.monomials)
        for m, c in f.items():
            if sum(m) < self.level:
                row[self.index[m]] = c % self.p
        return row

    def reduce(self, row):
        row = list(row)
        for prow, pc in zip(self.rel_rows, self.rel_pivots):
            if row[pc] % self.p:
                f = row[pc]
                row = [(x - f * y) % self.p for x, y in zip(row, prow)]
        return row


def free_vec(ring: OracleRing, column, rank: int):
    """Flatten a column of polynomials into reduced free-module coords."""
    out = []
    for i in range(rank):
        out.extend(ring.reduce(ring.poly_to_raw(column[i])))
    return out


def submodule_vectors(ring: OracleRing, columns, rank: int, min_deg: int = 0):
    """All reduced vectors m . col for monomials with min_deg <= deg."""
    vecs = []
    for m in ring.monomials:
        if sum(m) < min_deg:
            continue
        for col in columns:
            shifted = [poly_mul({m: 1}, f, ring.p) for f in col]
            vecs.append(free_vec(ring, shifted, rank))
    return vecs


def power_vectors(ring: OracleRing, rank: int, n: int):
    """Spanning vectors of m^n . (free module)."""
    vecs = []
    for m in ring.monomials:
        if sum(m) < n:
            continue
        for slot in range(rank):
            col = [dict() for _ in range(rank)]
            col[slot] = {m: 1}
            vecs.append(free_vec(ring, col, rank))
    return vecs


def module_length(ring: OracleRing, columns, rank: int, n: int) -> int:
    """ell(M / m^{n+1} M) for M = coker(columns) in A^rank."""
    vecs = submodule_vectors(ring, columns, rank)
    vecs += power_vectors(ring, rank, n + 1)
    return rank * ring.dim - span_dim(vecs, ring.p)


def submodule_lengths(ring: OracleRing, columns, rank: int, n: int) -> int:
    """ell(K / m^{n+1} K) for the submodule K generated by the columns."""
    top = span_dim(submodule_vectors(ring, columns, rank), ring.p)
    bottom = span_dim(submodule_vectors(ring, columns, rank, min_deg=n + 1),
                      ring.p)
    return top - bottom


def tor1_length(ring: OracleRing, columns, rank: int, n: int) -> int:
    """ell((K cap m^{n+1}F) / m^{n+1}K) via Grassmann dimension counting."""
    k_vecs = submodule_vectors(ring, columns, rank)
    w_vecs = power_vectors(ring, rank, n + 1)
    dim_k = span_dim(k_vecs, ring.p)
    dim_w = span_dim(w_vecs, ring.p)
    dim_sum = span_dim(k_vecs + w_vecs, ring.p)
    dim_meet = dim_k + dim_w - dim_sum
    dim_mk = span_dim(
        submodule_vectors(ring, columns, rank, min_deg=n + 1), ring.p)
    return dim_meet - dim_mk


def graded_piece_dims(ring: OracleRing, columns, rank: int, upto: int):
    """[dim m^n M / m^{n+1} M for n = 0..upto] by repeated length counts."""
    lengths = [module_length(ring, columns, rank, n) for n in range(upto + 1)]
    return [lengths[0]] + [lengths[i] - lengths[i - 1]
                           for i in range(1, upto + 1)]
