"""Truncated exact models of local quotients of polynomial rings.

A RingSpec fixes A = F_p[x_1..x_v]/I local at (x_1..x_v).  All finite-length
quantities are computed inside the Artinian quotient k[x]/(I + m^N) for a
truncation level N, which is already local, so localization is never needed.
"For all n >> 0" statements are made operational by the `stabilized`
combinator: sweep N upward until the answer repeats over a window, and
record the levels in a certificate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fieldmath import (DEFAULT_PRIME, Subspace, check_prime, matmul_mod,
                        rref)
from .poly import (Poly, PolyVec, mono_degree, mono_mul, monomials_below,
                   monomials_of_degree, parse)


class UnstableError(RuntimeError):
    """A level sweep hit the cap without the answer stabilizing."""


@dataclass(frozen=True)
class RingSpec:
    """A = F_p[vars]/(ideal), local at the ideal generated by the variables.

    Every ideal generator must have zero constant term so that the image of
    (x_1..x_v) is the unique maximal ideal of every truncation.
    """

    p: int
    varnames: tuple
    ideal: tuple  # tuple of Poly

    def __post_init__(self):
        check_prime(self.p)
        if len(set(self.varnames)) != len(self.varnames):
            raise ValueError("duplicate variable names")
        for f in self.ideal:
            if f.nvars != self.nvars or f.p != self.p:
                raise ValueError("ideal generator in the wrong ring")
            if f.constant_term() != 0:
                raise ValueError(
                    "ideal generators must have zero constant term")

    @classmethod
    def make(cls, varnames, ideal_texts=(), p: int = DEFAULT_PRIME) -> "RingSpec":
        names = tuple(varnames)
        gens = tuple(parse(t, names, p) for t in ideal_texts)
        return cls(p=p, varnames=names, ideal=gens)

    @property
    def nvars(self) -> int:
        return len(self.varnames)

    def poly(self, text: str) -> Poly:
        return parse(text, self.varnames, self.p)

    def zero(self) -> Poly:
        return Poly.zero(self.nvars, self.p)

    def one(self) -> Poly:
        return Poly.constant(1, self.nvars, self.p)

    def variable(self, i: int) -> Poly:
        return Poly.variable(i, self.nvars, self.p)

    def with_extra_ideal(self, elems) -> "RingSpec":
        return RingSpec(p=self.p, varnames=self.varnames,
                        ideal=self.ideal + tuple(elems))

    def with_extra_vars(self, names) -> "RingSpec":
        for n in names:
            if n in self.varnames:
                raise ValueError(f"variable name collision: {n}")
        new_names = self.varnames + tuple(names)
        new_ideal = tuple(f.shift_vars(len(new_names)) for f in self.ideal)
        return RingSpec(p=self.p, varnames=new_names, ideal=new_ideal)


@dataclass(frozen=True)
class TruncationPolicy:
    """Operational stand-in for "for all n >> 0".

    base: first truncation level tried (floors at the query index + buffer).
    buffer: extra levels beyond the largest filtration degree queried.
    window: consecutive level increments with an unchanged answer required.
    cap: extra levels beyond the start before giving up with UnstableError.
    """

    base: int = 4
    buffer: int = 2
    window: int = 2
    cap: int = 12

    def __post_init__(self):
        if self.base < 1 or self.buffer < 1 or self.window < 2:
            raise ValueError("policy out of range: need base>=1, buffer>=1, "
                             "window>=2")

    def start_level(self, query_degree: int = 0) -> int:
        return max(self.base, query_degree + 1 + self.buffer)

    def cap_level(self, query_degree: int = 0) -> int:
        return max(self.base, query_degree + 1) + self.cap


@dataclass
class StabilizationCertificate:
    levels: list
    window: int
    stable_value_repr: str = ""

    def to_json(self):
        return {"levels": list(self.levels), "window": self.window,
                "value": self.stable_value_repr}


def stabilized(compute, policy: TruncationPolicy, query_degree: int = 0):
    """Run compute(N) for increasing truncation levels N until the value
    repeats `policy.window` times; return (value, certificate).

    Raises UnstableError at the cap; never returns a silent guess.
    """
    start = policy.start_level(query_degree)
    cap = policy.cap_level(query_degree)
    history = []
    value = None
    streak = 0
    for level in range(start, cap + 1):
        v = compute(level)
        history.append(level)
        if value is not None and v == value:
            streak += 1
        else:
            value = v
            streak = 1
        if streak >= policy.window:
            return value, StabilizationCertificate(
                levels=history, window=policy.window,
                stable_value_repr=repr(value))
    raise UnstableError(
        f"no stabilization in levels {start}..{cap} (window "
        f"{policy.window}); raise the cap or inspect the input")


class TruncatedAlgebra:
    """Exact linear-algebra model of k[x]/(I + m^N).

    Vectors over the monomial basis of degree < N are reduced modulo the
    span of all truncated multiples of the ideal generators; the quotient
    basis is the set of non-pivot monomials.
    """

    def __init__(self, ring: RingSpec, level: int):
        if level < 1:
            raise ValueError("truncation level must be >= 1")
        self.ring = ring
        self.level = level
        self.p = ring.p
        self.monomials = monomials_below(ring.nvars, level)
        self.mono_index = {m: i for i, m in enumerate(self.monomials)}
        self._build_relations()
        self._var_mats = None
        self._power_spans = {}

    def _build_relations(self):
        n_mono = len(self.monomials)
        rel_vecs = []
        for f in self.ring.ideal:
            if f.is_zero():
                continue
            o = f.order()
            for m in monomials_below(self.ring.nvars, self.level - o):
                prod = (Poly.monomial(m, self.p) * f).truncate(self.level)
                if prod.is_zero():
                    continue
                v = np.zeros(n_mono, dtype=np.int64)
                for mm, c in prod.coeffs.items():
                    v[self.mono_index[mm]] = c
                rel_vecs.append(v)
        if rel_vecs:
            R, pivots = rref(np.array(rel_vecs, dtype=np.int64), self.p)
            self.rel_rows = R[: len(pivots)].copy()
            self.rel_pivots = pivots
        else:
            self.rel_rows = np.zeros((0, n_mono), dtype=np.int64)
            self.rel_pivots = []
        pivot_set = set(self.rel_pivots)
        self.basis_cols = [i for i in range(n_mono) if i not in pivot_set]
        self.basis_monomials = [self.monomials[i] for i in self.basis_cols]
        self.dim = len(self.basis_cols)

    def reduce_raw(self, raw: np.ndarray) -> np.ndarray:
        """Reduce a monomial-coefficient vector to quotient coordinates."""
        v = raw % self.p
        if self.rel_rows.shape[0]:
            coeffs = v[self.rel_pivots]
            if coeffs.any():
                v = (v - coeffs @ self.rel_rows) % self.p
        return v[self.basis_cols]

    def poly_vec(self, f: Poly) -> np.ndarray:
        """Quotient coordinates of a polynomial (truncated at the level)."""
        raw = np.zeros(len(self.monomials), dtype=np.int64)
        for m, c in f.truncate(self.level).coeffs.items():
            raw[self.mono_index[m]] = c
        return self.reduce_raw(raw)

    @property
    def var_mats(self):
        """Multiplication-by-variable matrices on quotient coordinates."""
        if self._var_mats is None:
            mats = []
            for i in range(self.ring.nvars):
                cols = np.zeros((self.dim, self.dim), dtype=np.int64)
                for j, b in enumerate(self.basis_monomials):
                    e = list(b)
                    e[i] += 1
                    m = tuple(e)
                    if mono_degree(m) >= self.level:
                        continue
                    raw = np.zeros(len(self.monomials), dtype=np.int64)
                    raw[self.mono_index[m]] = 1
                    cols[:, j] = self.reduce_raw(raw)
                mats.append(cols)
            self._var_mats = mats
        return self._var_mats

    def mult_matrix(self, f: Poly) -> np.ndarray:
        """Multiplication-by-f matrix on quotient coordinates."""
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        ident = np.eye(self.dim, dtype=np.int64)
        for m, c in f.truncate(self.level).coeffs.items():
            mat = ident
            for i, e in enumerate(m):
                for _ in range(e):
                    mat = matmul_mod(self.var_mats[i], mat, self.p)
            out = (out + c * mat) % self.p
        return out

    def power_span(self, n: int) -> Subspace:
        """Image of m^n in the quotient, as a subspace."""
        if n <= 0:
            return Subspace.full(self.dim, self.p)
        if n not in self._power_spans:
            if n >= self.level:
                self._power_spans[n] = Subspace.zero(self.dim, self.p)
            else:
                vecs = []
                for d in range(n, self.level):
                    for m in monomials_of_degree(self.ring.nvars, d):
                        raw = np.zeros(len(self.monomials), dtype=np.int64)
                        raw[self.mono_index[m]] = 1
                        vecs.append(self.reduce_raw(raw))
                self._power_spans[n] = Subspace.from_vectors(
                    vecs, self.dim, self.p)
        return self._power_spans[n]

    def length(self) -> int:
        return self.dim


_algebra_cache: dict = {}


def build_truncated_algebra(ring: RingSpec, level: int) -> TruncatedAlgebra:
    """Cached construction of the level-N model of the ring."""
    key = (ring, level)
    if key not in _algebra_cache:
        _algebra_cache[key] = TruncatedAlgebra(ring, level)
    return _algebra_cache[key]


class FreeTruncation:
    """The free module (k[x]/(I + m^N))^rank as a coordinate space."""

    def __init__(self, alg: TruncatedAlgebra, rank: int):
        self.alg = alg
        self.rank = rank
        self.p = alg.p
        self.dim = rank * alg.dim
        self._power_spans = {}

    def vec(self, pv: PolyVec) -> np.ndarray:
        if len(pv) != self.rank:
            raise ValueError(f"vector length {len(pv)} != rank {self.rank}")
        return np.concatenate([self.alg.poly_vec(f) for f in pv])

    def mult_var(self, i: int, mat_or_vecs: np.ndarray) -> np.ndarray:
        """Apply multiplication by variable i blockwise to rows of vectors."""
        d = self.alg.dim
        out = np.zeros_like(mat_or_vecs)
        vm = self.alg.var_mats[i]
        for b in range(self.rank):
            out[:, b * d:(b + 1) * d] = matmul_mod(
                mat_or_vecs[:, b * d:(b + 1) * d], vm.T, self.p)
        return out

    def mult_matrix(self, f: Poly) -> np.ndarray:
        """Blockwise multiplication-by-f on the whole coordinate space."""
        d = self.alg.dim
        block = self.alg.mult_matrix(f)
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for b in range(self.rank):
            out[b * d:(b + 1) * d, b * d:(b + 1) * d] = block
        return out

    def power_span(self, n: int) -> Subspace:
        """m^n . (free module) as a subspace of the coordinates."""
        if n not in self._power_spans:
            base = self.alg.power_span(n)
            if base.dim == 0:
                self._power_spans[n] = Subspace.zero(self.dim, self.p)
            else:
                vecs = []
                d = self.alg.dim
                for b in range(self.rank):
                    block = np.zeros((base.dim, self.dim), dtype=np.int64)
                    block[:, b * d:(b + 1) * d] = base.rows
                    vecs.extend(block)
                self._power_spans[n] = Subspace.from_vectors(
                    vecs, self.dim, self.p)
        return self._power_spans[n]

    def var_closure(self, span: Subspace) -> Subspace:
        """Smallest subspace containing span and closed under all variables."""
        current = span
        while True:
            if current.dim == 0:
                return current
            extra = [self.mult_var(i, current.rows)
                     for i in range(self.alg.ring.nvars)]
            candidate = Subspace.from_vectors(
                np.concatenate([current.rows] + extra, axis=0),
                self.dim, self.p)
            if candidate.dim == current.dim:
                return candidate
            current = candidate

    def times_m(self, span: Subspace) -> Subspace:
        """The span of x_i . v over all variables and v in span."""
        if span.dim == 0:
            return span
        extra = [self.mult_var(i, span.rows)
                 for i in range(self.alg.ring.nvars)]
        return Subspace.from_vectors(
            np.concatenate(extra, axis=0), self.dim, self.p)


class TruncatedSubmodule:
    """A-submodule of a free module, expanded at a truncation level."""

    def __init__(self, free: FreeTruncation, gens):
        self.free = free
        self.gens = list(gens)
        for g in self.gens:
            if len(g) != free.rank:
                raise ValueError("generator length mismatch")
        if self.gens:
            seed = Subspace.from_vectors(
                [free.vec(g) for g in self.gens], free.dim, free.p)
        else:
            seed = Subspace.zero(free.dim, free.p)
        self.span = free.var_closure(seed)
        self._filtration = {0: self.span}

    def filtration_piece(self, n: int) -> Subspace:
        """Span of a.g for a in m^n, g a generator (m^n times the module)."""
        if n < 0:
            n = 0
        known = max(k for k in self._filtration if k <= n)
        current = self._filtration[known]
        for k in range(known + 1, n + 1):
            current = self.free.var_closure(self.free.times_m(current))
            self._filtration[k] = current
        return self._filtration[n]


def submodule_span(gens, rank: int, alg: TruncatedAlgebra) -> TruncatedSubmodule:
    """The A-submodule of A^rank generated by gens, modulo truncation."""
    return TruncatedSubmodule(FreeTruncation(alg, rank), gens)
