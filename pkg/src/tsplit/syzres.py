"""Syzygy generation and short minimal free resolutions.

The engine is degree-incremental: candidate coefficient vectors of bounded
degree are tested against the truncated relation span, the surviving space is
canonicalized by row reduction, and new generators are kept only when they
enlarge the submodule generated so far.  The whole selection is then swept
over truncation levels until it repeats (the stabilization policy), which
weeds out artifacts of the truncation.  The closed-form periodic hypersurface
resolution serves as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .artinian import (FreeTruncation, RingSpec, TruncatedSubmodule,
                       TruncationPolicy, UnstableError, stabilized)
from .fieldmath import Subspace, kernel_basis, rref, solve
from .modpres import PresentedModule, minimalize
from .poly import Poly, PolyVec, monomials_below


def _columns_degree(columns) -> int:
    return max((max((e.degree() for e in col), default=0)
                for col in columns), default=0)


def _candidate_monomials(nvars: int, d_max: int):
    return monomials_below(nvars, d_max + 1)


def _vec_to_polyvec(coeffs, monos, s: int, nvars: int, p: int) -> PolyVec:
    """Decode a flat coefficient vector (slot-major within each monomial)."""
    entries = [dict() for _ in range(s)]
    for idx, c in enumerate(coeffs):
        c = int(c)
        if c == 0:
            continue
        m = monos[idx // s]
        entries[idx % s][m] = c
    return PolyVec([Poly(e, nvars, p) for e in entries])


def _kernel_selection(target: PresentedModule, columns, level: int,
                      d_max: int):
    """Minimal generators (canonical choice) of ker(A^s -> target) read off
    at one truncation level; returns (gens, last_degree_with_new_gen)."""
    ring = target.ring
    p = ring.p
    s = len(columns)
    mod = target.model(level)
    alg = mod.alg
    free_s = FreeTruncation(alg, s)
    monos = _candidate_monomials(ring.nvars, d_max)
    base_vecs = [mod.rel.span.reduce(mod.free.vec(col)) for col in columns]

    b_cols = []
    selected = []
    sel_span = Subspace.zero(free_s.dim, p)
    last_new = -1
    mono_count = 0
    for d in range(d_max + 1):
        while mono_count < len(monos) and sum(monos[mono_count]) == d:
            m = monos[mono_count]
            for j in range(s):
                prod = columns[j].scale_poly(Poly.monomial(m, p))
                b_cols.append(mod.rel.span.reduce(mod.free.vec(prod)))
            mono_count += 1
        if not b_cols:
            continue
        B = np.array(b_cols, dtype=np.int64).T
        K = kernel_basis(B, p)
        if not K:
            continue
        R, pivots = rref(np.array(K, dtype=np.int64), p)
        for i in range(len(pivots)):
            cand = _vec_to_polyvec(R[i], monos, s, ring.nvars, p)
            v = free_s.vec(cand)
            if not v.any() or sel_span.contains(v):
                continue
            selected.append(cand)
            sel_span = free_s.var_closure(sel_span.sum(
                Subspace.from_vectors([v], free_s.dim, p)))
            last_new = d
    return tuple(selected), last_new


@dataclass
class GenerationCertificate:
    degree_bound: int
    stabilization: object = None

    def to_json(self):
        out = {"degree_bound": self.degree_bound}
        if self.stabilization is not None:
            out["stabilization"] = self.stabilization.to_json()
        return out


def kernel_of_map(target: PresentedModule, columns, policy: TruncationPolicy,
                  d_max: int | None = None, with_certificate: bool = False):
    """Generators of the kernel of the map A^s -> target sending the j-th
    basis vector to columns[j] (an element written in target generator
    coordinates).

    The candidate degree bound is raised until the top degree contributes
    nothing new; the selection is certified by level stabilization.
    """
    if not columns:
        return ([], GenerationCertificate(0)) if with_certificate else []
    col_deg = _columns_degree(columns)
    d = d_max if d_max is not None else max(3, col_deg + 2)
    while True:
        def compute(level, _d=d):
            return _kernel_selection(target, columns, level, _d)

        (gens, last_new), cert = stabilized(
            compute, policy, query_degree=d + col_deg)
        if last_new < d - 1 or d_max is not None:
            gens = list(gens)
            if with_certificate:
                return gens, GenerationCertificate(d, cert)
            return gens
        d += 2


def syzygy_generators(m: PresentedModule, policy: TruncationPolicy,
                      with_certificate: bool = False):
    """Minimal generators of ker(F0 -> M) for the free cover on m's
    generators, recomputed from scratch (not read off the presentation)."""
    ring = m.ring
    basis_cols = []
    for j in range(m.rank):
        entries = [ring.one() if i == j else ring.zero()
                   for i in range(m.rank)]
        basis_cols.append(PolyVec(entries))
    if m.rank == 0:
        return ([], GenerationCertificate(0)) if with_certificate else []
    return kernel_of_map(m, basis_cols, policy,
                         with_certificate=with_certificate)


def omega(m: PresentedModule, policy: TruncationPolicy) -> PresentedModule:
    """First syzygy module of M, minimally presented: generators are the
    minimal kernel generators inside F0, relations their own syzygies."""
    mm = minimalize(m, policy)
    if mm.rank == 0:
        return PresentedModule(m.ring, [], [])
    gens = syzygy_generators(mm, policy)
    if not gens:
        return PresentedModule(m.ring, [], [])
    ambient = PresentedModule.free(m.ring, mm.rank)
    rels = kernel_of_map(ambient, gens, policy)
    out = PresentedModule(m.ring, [f"s{i}" for i in range(len(gens))], rels)
    out.embedding = {"ambient_rank": mm.rank, "generators": gens}
    return out


def syzygy_class(m: PresentedModule, policy: TruncationPolicy):
    """The canonical class 0 -> Omega(M) -> F0 -> M -> 0 of a minimal free
    cover, as a concrete ExtensionClass."""
    from .modpres import ExtensionClass, ModuleMap
    mm = minimalize(m, policy)
    om = omega(mm, policy)
    if om.rank == 0:
        raise ValueError("module is free; its syzygy class is trivial")
    free0 = PresentedModule.free(m.ring, mm.rank)
    iota = ModuleMap(om, free0, om.embedding["generators"])
    ident = []
    for j in range(mm.rank):
        entries = [m.ring.one() if i == j else m.ring.zero()
                   for i in range(mm.rank)]
        ident.append(PolyVec(entries))
    pi = ModuleMap(free0, mm, ident)
    return ExtensionClass(N=om, E=free0, M=mm, iota=iota, pi=pi,
                          meta={"kind": "syzygy-sequence"})


def solve_membership(gen_vectors, ambient: PresentedModule, target: PolyVec,
                     policy: TruncationPolicy) -> PolyVec:
    """Coefficients c with sum_t c_t . gen_t = target in the ambient module.

    Solved degree-incrementally at each truncation level; the canonical
    solution must repeat across a window of levels before it is trusted.
    """
    ring = ambient.ring
    p = ring.p
    s = len(gen_vectors)
    col_deg = _columns_degree(list(gen_vectors) + [target])

    def attempt(level, d_bound):
        mod = ambient.model(level)
        alg = mod.alg
        monos = _candidate_monomials(ring.nvars, d_bound)
        b_cols = []
        for m in monos:
            for j in range(s):
                prod = gen_vectors[j].scale_poly(Poly.monomial(m, p))
                b_cols.append(mod.rel.span.reduce(mod.free.vec(prod)))
        B = np.array(b_cols, dtype=np.int64).T
        rhs = mod.rel.span.reduce(mod.free.vec(target))
        x = solve(B, rhs, p)
        if x is None:
            return None
        return _vec_to_polyvec(x, monos, s, ring.nvars, p)

    for d_bound in range(1, policy.cap + 1):
        try:
            def compute(level, _d=d_bound):
                sol = attempt(level, _d)
                if sol is None:
                    raise _NoSolution()
                return tuple(sol.entries)

            value, _cert = stabilized(compute, policy,
                                      query_degree=d_bound + col_deg)
            return PolyVec(list(value))
        except _NoSolution:
            continue
    raise UnstableError("membership equation has no bounded-degree solution")


class _NoSolution(Exception):
    pass


@dataclass
class ResolutionSegment:
    """Two steps of a free resolution F2 -> F1 -> F0 of a module."""

    ring: RingSpec
    b0: int
    b1: int
    b2: int
    phi1: list  # columns of F1 -> F0
    phi2: list  # columns of F2 -> F1
    degree_bound: int = 0
    meta: dict = field(default_factory=dict)

    def composite_is_zero(self, policy: TruncationPolicy | None = None) -> bool:
        """phi1 o phi2 = 0 in A^{b0}, entry by entry."""
        from .modpres import is_zero_in_ring
        policy = policy or TruncationPolicy()
        if not self.phi2 or not self.phi1:
            return True
        for col2 in self.phi2:
            composite = [self.ring.zero()] * self.b0
            for j, f in enumerate(col2):
                for i in range(self.b0):
                    composite[i] = composite[i] + f * self.phi1[j][i]
            if not all(is_zero_in_ring(e, self.ring, policy)
                       for e in composite):
                return False
        return True

    def is_minimal(self) -> bool:
        """No unit entries anywhere in either matrix."""
        cols = list(self.phi1) + list(self.phi2)
        return not any(e.is_unit() for col in cols for e in col)


def resolution_segment(m: PresentedModule,
                       policy: TruncationPolicy) -> ResolutionSegment:
    """Minimal F2 -> F1 -> F0 -> M -> 0 computed by the syzygy engine."""
    mm = minimalize(m, policy)
    phi1, cert = syzygy_generators(mm, policy, with_certificate=True)
    if phi1:
        ambient = PresentedModule.free(m.ring, mm.rank)
        phi2 = kernel_of_map(ambient, phi1, policy)
    else:
        phi2 = []
    return ResolutionSegment(ring=m.ring, b0=mm.rank, b1=len(phi1),
                             b2=len(phi2), phi1=phi1, phi2=phi2,
                             degree_bound=cert.degree_bound)


def hypersurface_resolution(varnames, g_text: str, power: int, h_text: str,
                            p: int | None = None) -> ResolutionSegment:
    """The 2-periodic resolution of A/(g) over A = Q/(g^power . h):

        ... -> A --g^{power-1}h--> A --g--> A -> A/(g) -> 0
    """
    from .fieldmath import DEFAULT_PRIME
    p = p or DEFAULT_PRIME
    names = tuple(varnames)
    base = RingSpec.make(names, [], p)
    g = base.poly(g_text)
    h = base.poly(h_text)
    if power < 1:
        raise ValueError("power must be >= 1")
    f = (g ** power) * h
    if f.is_zero() or f.constant_term() != 0:
        raise ValueError("g^power . h must be nonzero with zero constant term")
    ring = RingSpec(p=p, varnames=names, ideal=(f,))
    phi1 = [PolyVec([g])]
    phi2 = [PolyVec([(g ** (power - 1)) * h])]
    return ResolutionSegment(ring=ring, b0=1, b1=1, b2=1,
                             phi1=phi1, phi2=phi2,
                             meta={"periodic": True, "g": g_text,
                                   "power": power, "h": h_text})


def _spans_agree(ours, theirs, rank: int, ring: RingSpec,
                 policy: TruncationPolicy):
    """Mutual containment of two generated submodules of A^rank, certified
    by level stabilization."""

    def containment(level):
        from .artinian import build_truncated_algebra
        alg = build_truncated_algebra(ring, level)
        free = FreeTruncation(alg, rank)
        a = TruncatedSubmodule(free, ours).span if ours \
            else Subspace.zero(free.dim, free.p)
        b = TruncatedSubmodule(free, theirs).span if theirs \
            else Subspace.zero(free.dim, free.p)
        return a.contains_space(b), b.contains_space(a)

    deg = max(_columns_degree(ours) if ours else 0,
              _columns_degree(theirs) if theirs else 0)
    (fwd, bwd), _cert = stabilized(containment, policy, query_degree=deg + 1)
    return fwd and bwd


def resolution_consistency(m: PresentedModule, seg: ResolutionSegment,
                           policy: TruncationPolicy) -> dict:
    """Cross-check a claimed resolution segment of m against the syzygy
    engine: the phi1 columns must generate ker(F0 -> M), and the phi2
    columns must generate the syzygies of phi1; both as mutual containment
    of submodule spans at stabilized levels."""
    mm = minimalize(m, policy)
    report = {"ok": True, "checks": {}}
    if mm.rank != seg.b0:
        report["ok"] = False
        report["checks"]["rank"] = f"b0 {seg.b0} != mu(M) {mm.rank}"
        return report

    computed1 = syzygy_generators(mm, policy)
    report["checks"]["phi1_matches_syzygies"] = _spans_agree(
        computed1, seg.phi1, mm.rank, m.ring, policy)

    if seg.phi1:
        ambient = PresentedModule.free(m.ring, seg.b0)
        computed2 = kernel_of_map(ambient, seg.phi1, policy)
    else:
        computed2 = []
    report["checks"]["phi2_matches_syzygies_of_phi1"] = _spans_agree(
        computed2, seg.phi2, seg.b1, m.ring, policy)

    report["ok"] = all(report["checks"].values())
    return report
