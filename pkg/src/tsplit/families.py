"""Constructors for the example families: the hypersurface extension ladder
(bounded-multiplicity middles over Q/(g^i h)), dimension-one Ulrich power
families, syzygy modules over dimension-two rings, and quotients by regular
sequences after variable adjunction."""

from __future__ import annotations

from dataclasses import dataclass, field

from .artinian import RingSpec, TruncationPolicy
from .fieldmath import DEFAULT_PRIME
from .gcm import GradedModel, initial_forms_regular
from .hilbert import hilbert_data, ring_hilbert_data
from .modpres import (ExtensionClass, ModuleMap, PresentedModule,
                      adjoin_variables, minimalize, pushout, quotient_by)
from .poly import PolyVec
from .syzres import omega


@dataclass
class FamilySpec:
    kind: str       # hypersurface-sci | ulrich-dim1 | syz-dim2 | rci
    params: dict = field(default_factory=dict)
    seed: int = 0
    assertions: dict = field(default_factory=dict)  # user-asserted hypotheses

    def to_json(self):
        return {"kind": self.kind, "params": dict(self.params),
                "seed": self.seed, "assertions": dict(self.assertions)}


def sci_base_class(varnames, g_text: str, power: int, h_text: str,
                   p: int | None = None):
    """The base sequence 0 -> A/(g^{i-1}h) --g--> A -> A/(g) -> 0 over
    A = Q/(g^i h)."""
    p = p or DEFAULT_PRIME
    base = RingSpec.make(tuple(varnames), [], p)
    g = base.poly(g_text)
    h = base.poly(h_text)
    f = (g ** power) * h
    if f.is_zero() or f.constant_term() != 0:
        raise ValueError("g^i h must be nonzero with zero constant term")
    ring = RingSpec(p=p, varnames=tuple(varnames), ideal=(f,))
    n_mod = PresentedModule(ring, ["u"],
                            [PolyVec([(g ** (power - 1)) * h])])
    e_mod = PresentedModule.free(ring, 1)
    m_mod = PresentedModule(ring, ["v"], [PolyVec([g])])
    iota = ModuleMap(n_mod, e_mod, [PolyVec([g])])
    pi = ModuleMap(e_mod, m_mod, [PolyVec([ring.one()])])
    return ExtensionClass(N=n_mod, E=e_mod, M=m_mod, iota=iota, pi=pi,
                          meta={"kind": "sci-base", "g": g_text,
                                "power": power, "h": h_text})


def sci_family(varnames, g_text: str, power: int, h_text: str, n_range,
               u_text: str | None = None, p: int | None = None,
               policy: TruncationPolicy | None = None):
    """Members u^n . chi of the hypersurface ladder, as concrete classes.

    Returns (base class, parameter u, [(n, ExtensionClass), ...]).
    """
    policy = policy or TruncationPolicy()
    chi = sci_base_class(varnames, g_text, power, h_text, p)
    ring = chi.ring
    d = ring_hilbert_data(ring, policy).dim
    if power >= 2 and d < 1:
        raise ValueError("i >= 2 needs ring dimension >= 1")
    if power == 1 and d < 2:
        raise ValueError("i = 1 needs ring dimension >= 2")
    if u_text is None:
        from .hilbert import find_superficial
        cert = find_superficial([PresentedModule.free(ring, 1)], policy,
                                seed=0)
        u_text = cert.form_text
    u = ring.poly(u_text)
    members = []
    for n in n_range:
        if n == 0:
            members.append((0, chi))
            continue
        s_n = pushout(chi, ModuleMap.multiplication(chi.N, u ** n))
        s_n.meta = dict(chi.meta, n=n, u=u_text)
        members.append((n, s_n))
    return chi, u, members


def ulrich_dim1_family(e_mod: PresentedModule, n_max: int,
                       policy: TruncationPolicy | None = None) -> dict:
    """Detect the threshold from which the powers m^n E are Ulrich, purely
    from the Hilbert function: mu(m^n E) = ell(m^n E / m^{n+1} E), which
    must hit e_0(E) and stay there."""
    policy = policy or TruncationPolicy()
    data = hilbert_data(e_mod, policy, n_max=max(n_max + 2,
                                                 2 * e_mod.ring.nvars + 6))
    if data.dim != 1:
        raise ValueError("Ulrich power family needs a dimension-1 module")
    e0 = data.e[0]
    diffs = [data.values[0]] + [
        data.values[j] - data.values[j - 1]
        for j in range(1, n_max + 2)]
    n0 = None
    for n in range(len(diffs)):
        if all(diffs[j] == e0 for j in range(n, len(diffs))):
            n0 = n
            break
    return {"e0": e0, "mu_powers": diffs[: n_max + 1], "threshold": n0,
            "ok": n0 is not None,
            "values": data.values[: n_max + 2]}


def lift_to_cover(m: PresentedModule, cover: RingSpec) -> PresentedModule:
    """Rewrite a module over B = cover/(extra) as a module over `cover`
    by adding the extra ideal elements times each generator as relations."""
    if m.ring.varnames != cover.varnames or m.ring.p != cover.p:
        raise ValueError("cover must share variables and modulus")
    extra = [f for f in m.ring.ideal if f not in cover.ideal]
    cols = [PolyVec(list(c.entries)) for c in m.relations]
    zero = cover.zero()
    for f in extra:
        for i in range(m.rank):
            entries = [f if j == i else zero for j in range(m.rank)]
            cols.append(PolyVec(entries))
    return PresentedModule(cover, m.generators, cols)


def syz_dim2_module(a_ring: RingSpec, e_mod: PresentedModule,
                    policy: TruncationPolicy | None = None) -> PresentedModule:
    """M = Omega_A(E) for an Ulrich module E over a dimension-1 quotient B
    of the dimension-2 ring A."""
    policy = policy or TruncationPolicy()
    if minimalize(e_mod, policy).rank == 0:
        raise ValueError("E must be nonzero")
    lifted = lift_to_cover(e_mod, a_ring)
    return omega(lifted, policy)


def rci_family(r_ring: RingSpec, e_mod: PresentedModule, r: int, l: int,
               g_texts, policy: TruncationPolicy | None = None,
               regularity_bound: int = 8) -> dict:
    """Adjoin r variables to the base ring, quotient by l polynomials whose
    initial forms are regular on the graded model, and carry the module
    along.  Requires l <= r - 1."""
    policy = policy or TruncationPolicy()
    if r < 1:
        raise ValueError("need r >= 1 adjoined variables")
    if not (0 <= l <= r - 1):
        raise ValueError("need 0 <= l <= r - 1")
    if len(g_texts) != l:
        raise ValueError("expected exactly l quotient polynomials")
    new_names = []
    idx = 0
    while len(new_names) < r:
        cand = f"t{idx}"
        idx += 1
        if cand not in r_ring.varnames:
            new_names.append(cand)
    b_ring = r_ring.with_extra_vars(new_names)
    e_b = adjoin_variables(e_mod, new_names)
    gs = [b_ring.poly(t) for t in g_texts]
    checks = {"l_le_r_minus_1": True}
    if gs:
        g_b = GradedModel(PresentedModule.free(b_ring, 1),
                          regularity_bound, policy)
        ok, failure = initial_forms_regular(
            g_b, [g.initial_form() for g in gs])
        checks["initial_forms_regular"] = ok
        if not ok:
            raise ValueError(f"initial forms not regular on G(B): {failure}")
    m_out = quotient_by(e_b, gs) if gs else e_b
    return {"module": m_out, "ring": m_out.ring, "base_ring": b_ring,
            "adjoined": new_names, "checks": checks}
