"""Finitely presented modules over a RingSpec and presentation-level
constructions: minimalization, direct sums, pushout, pullback, Baer sum,
quotient by ring elements and variable adjunction.

A PresentedModule is coker of a polynomial matrix whose columns are the
relations among named generators.  Extension classes are carried as concrete
triples of modules with injection/surjection maps; class equality is never
decided, only invariant equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .artinian import (FreeTruncation, RingSpec, TruncatedSubmodule,
                       TruncationPolicy, build_truncated_algebra, stabilized)
from .fieldmath import Subspace
from .poly import Poly, PolyVec


class _Model:
    """Truncated coordinate model of a presented module at one level."""

    def __init__(self, module: "PresentedModule", level: int):
        alg = build_truncated_algebra(module.ring, level)
        self.alg = alg
        self.free = FreeTruncation(alg, module.rank)
        self.rel = TruncatedSubmodule(self.free, module.relations)
        self._sub_spans = {}

    def span_mod_power(self, n: int) -> Subspace:
        """Relations + m^n . (free module): the kernel of F -> M/m^n M."""
        if n not in self._sub_spans:
            self._sub_spans[n] = self.rel.span.sum(self.free.power_span(n))
        return self._sub_spans[n]

    def length_mod_power(self, n: int) -> int:
        """l(M / m^n M); exact whenever n <= level."""
        return self.free.dim - self.span_mod_power(n).dim


class PresentedModule:
    """coker(phi) for a polynomial matrix phi over a local ring A.

    generators: names of the target free module basis (rank = len).
    relations: columns of phi, each a PolyVec of that length.
    """

    def __init__(self, ring: RingSpec, generators, relations):
        self.ring = ring
        self.generators = tuple(generators)
        self.relations = tuple(relations)
        for col in self.relations:
            if len(col) != self.rank:
                raise ValueError("relation column length != generator count")
        self._models: dict = {}

    @property
    def rank(self) -> int:
        return len(self.generators)

    @classmethod
    def free(cls, ring: RingSpec, rank: int, prefix: str = "e") -> "PresentedModule":
        return cls(ring, [f"{prefix}{i}" for i in range(rank)], [])

    @classmethod
    def cyclic(cls, ring: RingSpec, texts) -> "PresentedModule":
        """A/(texts) as a module with one generator."""
        return cls(ring, ["u"], [PolyVec([ring.poly(t)]) for t in texts])

    @classmethod
    def from_matrix(cls, ring: RingSpec, rows) -> "PresentedModule":
        """coker of the matrix given as rows of polynomial strings."""
        polys = [[ring.poly(t) for t in row] for row in rows]
        ncols = len(polys[0]) if polys else 0
        cols = [PolyVec([polys[i][j] for i in range(len(polys))])
                for j in range(ncols)]
        return cls(ring, [f"g{i}" for i in range(len(polys))], cols)

    def model(self, level: int) -> _Model:
        if level not in self._models:
            self._models[level] = _Model(self, level)
        return self._models[level]

    def length_values(self, n_max: int):
        """[l(M/m^{n+1}M) for n = 0..n_max]; exact, no stabilization needed."""
        mod = self.model(n_max + 1)
        return [mod.length_mod_power(n + 1) for n in range(n_max + 1)]

    def mu(self) -> int:
        """Minimal number of generators, l(M/mM)."""
        return self.model(2).length_mod_power(1)

    def is_zero(self, policy: TruncationPolicy | None = None) -> bool:
        return self.model(2).length_mod_power(1) == 0

    def with_ring(self, ring: RingSpec) -> "PresentedModule":
        return PresentedModule(ring, self.generators, self.relations)

    def __repr__(self):
        return (f"PresentedModule(rank={self.rank}, "
                f"nrels={len(self.relations)})")


def is_zero_in_ring(f: Poly, ring: RingSpec,
                    policy: TruncationPolicy) -> bool:
    """Whether f lies in the defining ideal, certified by level stabilization."""
    if f.is_zero():
        return True

    def compute(level):
        alg = build_truncated_algebra(ring, level)
        return not alg.poly_vec(f).any()

    value, _cert = stabilized(compute, policy, query_degree=f.degree())
    return value


def minimalize(m: PresentedModule,
               policy: TruncationPolicy | None = None) -> PresentedModule:
    """Minimal presentation: eliminate generators hit by unit relation
    entries, drop zero and redundant relation columns."""
    policy = policy or TruncationPolicy()
    gens = list(m.generators)
    cols = [list(col.entries) for col in m.relations]

    # unit elimination: pivot on a relation entry with nonzero constant term
    while True:
        pivot = None
        for j, col in enumerate(cols):
            for i, entry in enumerate(col):
                if entry.is_unit():
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        u = cols[j][i]
        for jj in range(len(cols)):
            if jj == j:
                continue
            c = cols[jj][i]
            if not c.is_zero():
                cols[jj] = [(u * a) - (c * b)
                            for a, b in zip(cols[jj], cols[j])]
        del cols[j]
        del gens[i]
        cols = [[e for k, e in enumerate(col) if k != i] for col in cols]

    if not gens:
        return PresentedModule(m.ring, [], [])

    # drop columns that are zero in the ring
    kept = []
    for col in cols:
        if not all(is_zero_in_ring(e, m.ring, policy) for e in col):
            kept.append(PolyVec(col))
    if not kept:
        return PresentedModule(m.ring, gens, [])

    # drop relation columns whose image in K/mK is dependent on the others
    candidate = PresentedModule(m.ring, gens, kept)
    max_deg = max(max((e.degree() for e in col), default=0) for col in kept)

    def select(level):
        mod = candidate.model(level)
        mk = mod.rel.filtration_piece(1)
        chosen = []
        space = mk
        for idx, col in enumerate(kept):
            v = mod.free.vec(col)
            if not space.contains(v):
                chosen.append(idx)
                space = space.sum(Subspace.from_vectors(
                    [v], mod.free.dim, mod.free.p))
        return tuple(chosen)

    chosen, _cert = stabilized(select, policy, query_degree=max_deg + 1)
    return PresentedModule(m.ring, gens, [kept[i] for i in chosen])


class ModuleMap:
    """A-linear map given on generators: column j is the image of source
    generator j, written in target generator coordinates."""

    def __init__(self, source: PresentedModule, target: PresentedModule,
                 columns):
        self.source = source
        self.target = target
        self.columns = [col if isinstance(col, PolyVec) else PolyVec(col)
                        for col in columns]
        if len(self.columns) != source.rank:
            raise ValueError("need one column per source generator")
        for col in self.columns:
            if len(col) != target.rank:
                raise ValueError("column length != target generator count")

    @classmethod
    def identity(cls, m: PresentedModule) -> "ModuleMap":
        cols = []
        for j in range(m.rank):
            entries = [m.ring.one() if i == j else m.ring.zero()
                       for i in range(m.rank)]
            cols.append(PolyVec(entries))
        return cls(m, m, cols)

    @classmethod
    def multiplication(cls, m: PresentedModule, r: Poly) -> "ModuleMap":
        cols = []
        for j in range(m.rank):
            entries = [r if i == j else m.ring.zero()
                       for i in range(m.rank)]
            cols.append(PolyVec(entries))
        return cls(m, m, cols)

    @classmethod
    def zero(cls, source: PresentedModule, target: PresentedModule) -> "ModuleMap":
        z = source.ring.zero()
        return cls(source, target,
                   [PolyVec([z] * target.rank) for _ in range(source.rank)])

    def apply(self, vec: PolyVec) -> PolyVec:
        """Image of an element of the source free module."""
        out = [self.source.ring.zero()] * self.target.rank
        for j, f in enumerate(vec):
            if f.is_zero():
                continue
            for i in range(self.target.rank):
                out[i] = out[i] + f * self.columns[j][i]
        return PolyVec(out)

    def compose(self, inner: "ModuleMap") -> "ModuleMap":
        """self o inner."""
        return ModuleMap(inner.source, self.target,
                         [self.apply(col) for col in inner.columns])

    def coord_matrix(self, level: int) -> np.ndarray:
        """Matrix on truncated free-module coordinates at a level."""
        alg = build_truncated_algebra(self.source.ring, level)
        d = alg.dim
        out = np.zeros((self.target.rank * d, self.source.rank * d),
                       dtype=np.int64)
        for j in range(self.source.rank):
            for i in range(self.target.rank):
                f = self.columns[j][i]
                if f.is_zero():
                    continue
                out[i * d:(i + 1) * d, j * d:(j + 1) * d] = alg.mult_matrix(f)
        return out

    def is_well_defined(self, policy: TruncationPolicy | None = None):
        """Check each source relation maps into the target relation span,
        at a stabilized truncation level.  Returns (bool, certificate)."""
        policy = policy or TruncationPolicy()
        images = [self.apply(rel) for rel in self.source.relations]
        if not images:
            return True, None
        max_deg = max(max((e.degree() for e in img), default=0)
                      for img in images)

        def compute(level):
            mod = self.target.model(level)
            return all(mod.rel.span.contains(mod.free.vec(img))
                       for img in images)

        return stabilized(compute, policy, query_degree=max_deg + 1)


class ExtensionError(ValueError):
    pass


@dataclass
class ExtensionClass:
    """A short exact sequence 0 -> N -> E -> M -> 0 at presentation level."""

    N: PresentedModule
    E: PresentedModule
    M: PresentedModule
    iota: ModuleMap
    pi: ModuleMap
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.iota.source is not self.N or self.iota.target is not self.E:
            raise ExtensionError("iota must map N into E")
        if self.pi.source is not self.E or self.pi.target is not self.M:
            raise ExtensionError("pi must map E onto M")

    @property
    def ring(self) -> RingSpec:
        return self.N.ring

    def validate(self, policy: TruncationPolicy | None = None,
                 n_window=(1, 4)) -> dict:
        """Certificate that the triple is a short exact sequence, checked on
        truncated spans: pi o iota = 0, pi surjective, coker(iota) has the
        length function of M, and the image of iota has the length function
        of N (injectivity surrogate)."""
        policy = policy or TruncationPolicy()
        report = {"ok": True, "checks": {}}

        composite = self.pi.compose(self.iota)
        comp_ok, _ = ModuleMap(self.N, self.M, composite.columns
                               ).is_well_defined(policy)
        # pi o iota must be the ZERO map: each column in the relation span
        def comp_zero(level):
            mod = self.M.model(level)
            return all(mod.rel.span.contains(mod.free.vec(col))
                       for col in composite.columns)
        zero_ok, _ = stabilized(comp_zero, policy, query_degree=4)
        report["checks"]["pi_iota_zero"] = bool(zero_ok and comp_ok)

        surj = self.M.model(2)
        im_cols = [surj.free.vec(col) for col in self.pi.columns]
        covered = surj.span_mod_power(1).sum(
            Subspace.from_vectors(im_cols, surj.free.dim, surj.free.p))
        report["checks"]["pi_surjective"] = covered.dim == surj.free.dim

        lo, hi = n_window
        m_values = self.M.length_values(hi)
        n_values = self.N.length_values(hi)

        def coker_lengths(level):
            mod = self.E.model(level)
            im = TruncatedSubmodule(
                mod.free,
                [PolyVec(col.entries) for col in self.iota.columns])
            vals = []
            for n in range(lo, hi + 1):
                span = mod.rel.span.sum(im.span).sum(
                    mod.free.power_span(n + 1))
                vals.append(mod.free.dim - span.dim)
            return tuple(vals)

        coker_vals, _ = stabilized(coker_lengths, policy, query_degree=hi + 1)
        report["checks"]["coker_iota_matches_M"] = list(coker_vals) == [
            m_values[n] for n in range(lo, hi + 1)]

        def image_lengths(level):
            mod = self.E.model(level)
            im = TruncatedSubmodule(
                mod.free,
                [PolyVec(col.entries) for col in self.iota.columns])
            vals = []
            for n in range(lo, hi + 1):
                top = im.span.sum(mod.rel.span)
                bottom = im.filtration_piece(n + 1).sum(mod.rel.span)
                vals.append(top.dim - bottom.dim)
            return tuple(vals)

        image_vals, _ = stabilized(image_lengths, policy, query_degree=hi + 1)
        report["checks"]["image_iota_matches_N"] = list(image_vals) == [
            n_values[n] for n in range(lo, hi + 1)]

        report["ok"] = all(report["checks"].values())
        return report


def direct_sum(a: PresentedModule, b: PresentedModule) -> PresentedModule:
    if a.ring != b.ring:
        raise ValueError("direct sum needs a shared ring")
    zero = a.ring.zero()
    gens = [f"a.{g}" for g in a.generators] + [f"b.{g}" for g in b.generators]
    cols = []
    for col in a.relations:
        cols.append(PolyVec(list(col.entries) + [zero] * b.rank))
    for col in b.relations:
        cols.append(PolyVec([zero] * a.rank + list(col.entries)))
    return PresentedModule(a.ring, gens, cols)


def split_extension(n: PresentedModule, m: PresentedModule) -> ExtensionClass:
    """The split class 0 -> N -> N (+) M -> M -> 0."""
    e = direct_sum(n, m)
    zero = n.ring.zero()
    one = n.ring.one()
    iota_cols = []
    for j in range(n.rank):
        entries = [one if i == j else zero for i in range(e.rank)]
        iota_cols.append(PolyVec(entries))
    pi_cols = []
    for j in range(e.rank):
        entries = [zero] * m.rank
        if j >= n.rank:
            entries[j - n.rank] = one
        pi_cols.append(PolyVec(entries))
    return ExtensionClass(N=n, E=e, M=m,
                          iota=ModuleMap(n, e, iota_cols),
                          pi=ModuleMap(e, m, pi_cols),
                          meta={"kind": "split"})


def pushout(s: ExtensionClass, f: ModuleMap) -> ExtensionClass:
    """Push a class forward along f: N -> N'; the result represents
    Ext^1(M, f)(s), with middle (N' (+) E) / <(f(n_j), -iota(n_j))>."""
    if f.source is not s.N:
        raise ExtensionError("pushout map must start at the class's N")
    nprime = f.target
    ring = s.ring
    zero = ring.zero()
    gens = ([f"n.{g}" for g in nprime.generators] +
            [f"e.{g}" for g in s.E.generators])
    cols = []
    for col in nprime.relations:
        cols.append(PolyVec(list(col.entries) + [zero] * s.E.rank))
    for col in s.E.relations:
        cols.append(PolyVec([zero] * nprime.rank + list(col.entries)))
    for j in range(s.N.rank):
        top = f.columns[j].entries
        bottom = [-e for e in s.iota.columns[j].entries]
        cols.append(PolyVec(list(top) + bottom))
    eprime = PresentedModule(ring, gens, cols)

    iota_cols = []
    for j in range(nprime.rank):
        entries = [ring.one() if i == j else zero
                   for i in range(eprime.rank)]
        iota_cols.append(PolyVec(entries))
    pi_cols = []
    for j in range(eprime.rank):
        if j < nprime.rank:
            pi_cols.append(PolyVec([zero] * s.M.rank))
        else:
            pi_cols.append(PolyVec(list(s.pi.columns[j - nprime.rank].entries)))
    return ExtensionClass(
        N=nprime, E=eprime, M=s.M,
        iota=ModuleMap(nprime, eprime, iota_cols),
        pi=ModuleMap(eprime, s.M, pi_cols),
        meta={"kind": "pushout", "base": s.meta.get("kind", "?")})


def scalar_multiple(s: ExtensionClass, r: Poly) -> ExtensionClass:
    """The class r.s, as the pushout along multiplication by r on N."""
    out = pushout(s, ModuleMap.multiplication(s.N, r))
    out.meta = {"kind": "scalar_multiple", "base": s.meta.get("kind", "?")}
    return out


def _fiber_product(pi_a: ModuleMap, pi_b: ModuleMap,
                   policy: TruncationPolicy):
    """Generators and presentation of ker(E_a (+) E_b -> M) for two maps
    into the same presented module M.  Returns (X, gen_vectors) where
    gen_vectors live in the generator coordinates of E_a (+) E_b."""
    from .syzres import kernel_of_map, syzygy_generators  # cycle-breaking

    if pi_a.target is not pi_b.target:
        raise ExtensionError("fiber product needs a shared target")
    m = pi_a.target
    ea, eb = pi_a.source, pi_b.source
    ring = m.ring
    combined_cols = []
    for col in pi_a.columns:
        combined_cols.append(col)
    for col in pi_b.columns:
        combined_cols.append(PolyVec([-e for e in col.entries]))
    # v with [P_a | -P_b] v in im(phi_M)
    gen_vectors = kernel_of_map(m, combined_cols, policy)
    ambient = direct_sum(ea, eb)
    relations = kernel_of_map(ambient, gen_vectors, policy)
    x = PresentedModule(ring, [f"w{i}" for i in range(len(gen_vectors))],
                        relations)
    return x, gen_vectors, ambient


def _lift_through(gen_vectors, ambient: PresentedModule, target: PolyVec,
                  policy: TruncationPolicy) -> PolyVec:
    """Solve sum_t c_t . g_t = target modulo the relations of the ambient
    module, degree-incrementally at a stabilized truncation level."""
    from .syzres import solve_membership  # cycle-breaking
    return solve_membership(gen_vectors, ambient, target, policy)


def pullback(s: ExtensionClass, g: ModuleMap,
             policy: TruncationPolicy | None = None) -> ExtensionClass:
    """Pull a class back along g: M' -> M; the result represents
    Ext^1(g, N)(s), with middle the fiber product E x_M M'."""
    if g.target is not s.M:
        raise ExtensionError("pullback map must end at the class's M")
    policy = policy or TruncationPolicy()
    x, gen_vectors, ambient = _fiber_product(s.pi, g, policy)
    ring = s.ring
    zero = ring.zero()

    iota_cols = []
    for j in range(s.N.rank):
        target = PolyVec(list(s.iota.columns[j].entries) +
                         [zero] * g.source.rank)
        iota_cols.append(_lift_through(gen_vectors, ambient, target, policy))
    pi_cols = []
    for gv in gen_vectors:
        pi_cols.append(PolyVec(list(gv.entries[s.E.rank:])))
    return ExtensionClass(
        N=s.N, E=x, M=g.source,
        iota=ModuleMap(s.N, x, iota_cols),
        pi=ModuleMap(x, g.source, pi_cols),
        meta={"kind": "pullback", "base": s.meta.get("kind", "?")})


def baer_sum(a: ExtensionClass, b: ExtensionClass,
             policy: TruncationPolicy | None = None) -> ExtensionClass:
    """Sum of two classes with the same ends: pull back the two surjections
    to the fiber product E'' and quotient by the antidiagonal copy of N."""
    if a.N is not b.N and a.N.relations != b.N.relations:
        raise ExtensionError("Baer sum needs a shared N")
    if a.M is not b.M and a.M.relations != b.M.relations:
        raise ExtensionError("Baer sum needs a shared M")
    policy = policy or TruncationPolicy()
    x, gen_vectors, ambient = _fiber_product(a.pi, b.pi, policy)
    ring = a.ring
    zero = ring.zero()

    # quotient by the antidiagonal (iota_a(n), -iota_b(n))
    extra_rels = []
    diag_cols = []
    for j in range(a.N.rank):
        target = PolyVec(list(a.iota.columns[j].entries) +
                         [-e for e in b.iota.columns[j].entries])
        extra_rels.append(_lift_through(gen_vectors, ambient, target, policy))
        diag_target = PolyVec(list(a.iota.columns[j].entries) +
                              [zero] * b.E.rank)
        diag_cols.append(_lift_through(gen_vectors, ambient, diag_target,
                                       policy))
    y = PresentedModule(ring, x.generators,
                        list(x.relations) + extra_rels)

    iota_cols = [PolyVec(list(col.entries)) for col in diag_cols]
    pi_cols = []
    for gv in gen_vectors:
        img = a.pi.apply(PolyVec(list(gv.entries[:a.E.rank])))
        pi_cols.append(img)
    return ExtensionClass(
        N=a.N, E=y, M=a.M,
        iota=ModuleMap(a.N, y, iota_cols),
        pi=ModuleMap(y, a.M, pi_cols),
        meta={"kind": "baer_sum"})


def quotient_by(m: PresentedModule, elems) -> PresentedModule:
    """M/(elems)M as a module over the ring with the enlarged ideal."""
    elems = list(elems)
    if not elems:
        return m
    new_ring = m.ring.with_extra_ideal(elems)
    return PresentedModule(new_ring, m.generators, m.relations)


def adjoin_variables(m: PresentedModule, names) -> PresentedModule:
    """The same presentation read over the ring with extra variables."""
    names = list(names)
    if not names:
        return m
    new_ring = m.ring.with_extra_vars(names)
    nv = new_ring.nvars
    new_rels = [PolyVec([e.shift_vars(nv) for e in col.entries])
                for col in m.relations]
    return PresentedModule(new_ring, m.generators, new_rels)


def reduce_extension(s: ExtensionClass, elems) -> ExtensionClass:
    """Tensor the whole class with A/(elems): same matrices over the
    quotient ring."""
    n2 = quotient_by(s.N, elems)
    e2 = quotient_by(s.E, elems)
    m2 = quotient_by(s.M, elems)
    return ExtensionClass(
        N=n2, E=e2, M=m2,
        iota=ModuleMap(n2, e2, [PolyVec(list(c.entries))
                                for c in s.iota.columns]),
        pi=ModuleMap(e2, m2, [PolyVec(list(c.entries))
                              for c in s.pi.columns]),
        meta=dict(s.meta, reduced=True))
