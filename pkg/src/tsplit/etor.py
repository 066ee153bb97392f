"""The Tor-length invariant: t-series ell(Tor_1(M, A/m^{n+1})), the
invariant e^T computed by two independent routes (polynomial fit of the
t-series vs the formula mu(M) e_1(A) - e_1(M) - e_1(first syzygy)), e^T of
extension classes, the T-split predicate, the dimension-one exactness
alternative, and the scalar-ladder experiment.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .artinian import (FreeTruncation, RingSpec, TruncatedSubmodule,
                       TruncationPolicy, build_truncated_algebra, stabilized)
from .fieldmath import Subspace
from .hilbert import (e_from_h, eval_poly, fit_series, h_vector, hilbert_data,
                      ring_hilbert_data, submodule_hilbert_data,
                      check_superficial, find_superficial)
from .modpres import (ExtensionClass, ModuleMap, PresentedModule, minimalize,
                      pushout, reduce_extension)
from .poly import Poly


def tor1_series(m: PresentedModule, n_max: int,
                policy: TruncationPolicy | None = None):
    """[ell(Tor_1(M, A/m^{n+1})) for n = 0..n_max], with certificate.

    Uses Tor_1(M, A/m^{n+1}) = (K cap m^{n+1}F_0) / m^{n+1}K for the kernel
    K of a minimal free cover; submodule intersections are only eventually
    exact under truncation, hence the level sweep.
    """
    policy = policy or TruncationPolicy()
    mm = minimalize(m, policy)
    if not mm.relations or mm.rank == 0:
        return [0] * (n_max + 1), None

    def compute(level):
        alg = build_truncated_algebra(m.ring, level)
        free = FreeTruncation(alg, mm.rank)
        sub = TruncatedSubmodule(free, list(mm.relations))
        out = []
        for n in range(n_max + 1):
            meet = sub.span.intersect(free.power_span(n + 1))
            out.append(meet.dim - sub.filtration_piece(n + 1).dim)
        return tuple(out)

    values, cert = stabilized(compute, policy, query_degree=n_max + 1)
    return list(values), cert


def tor1_length(m: PresentedModule, n: int,
                policy: TruncationPolicy | None = None) -> int:
    if n < 0:
        raise ValueError("n must be >= 0")
    values, _cert = tor1_series(m, n, policy)
    return values[n]


def _e1_relative(values, d: int) -> int:
    """e_1 of a value series, normalized to the ring dimension d."""
    h = h_vector(list(values), d)
    return e_from_h(h, d)[1] if d >= 1 else 0


@dataclass
class EtorReport:
    module_repr: str
    t_values: list
    c_observed: int | None
    t_poly: list
    e_fit: int
    e_formula: int
    agree: bool
    mu: int
    ring_dim: int
    module_dim: int
    mcm_warning: bool = False
    certificates: list = field(default_factory=list)

    @property
    def value(self) -> int:
        return self.e_formula

    def to_json(self):
        return {
            "module": self.module_repr,
            "t_values": list(self.t_values),
            "c_observed": self.c_observed,
            "t_poly": [str(c) for c in self.t_poly],
            "e_fit": self.e_fit,
            "e_formula": self.e_formula,
            "agree": self.agree,
            "mu": self.mu,
            "ring_dim": self.ring_dim,
            "module_dim": self.module_dim,
            "mcm_warning": self.mcm_warning,
            "certificates": list(self.certificates),
        }


def etor(m: PresentedModule, policy: TruncationPolicy | None = None,
         n_max: int | None = None) -> EtorReport:
    """Both routes to e^T(M), cross-checked.

    Route 1 fits a polynomial of degree <= d-1 to the t-series and takes
    (d-1)! times its leading coefficient (zero when the degree drops, the
    freeness criterion).  Route 2 is mu(M) e_1(A) - e_1(M) - e_1(Omega(M)).
    """
    policy = policy or TruncationPolicy()
    ring = m.ring
    ring_data = ring_hilbert_data(ring, policy)
    d = ring_data.dim
    if d < 1:
        raise ValueError("e^T needs a ring of dimension >= 1")
    e1_ring = ring_data.e[1]

    mm = minimalize(m, policy)
    certs = []
    if mm.rank == 0:
        return EtorReport(module_repr=repr(m), t_values=[], c_observed=None,
                          t_poly=[], e_fit=0, e_formula=0, agree=True,
                          mu=0, ring_dim=d, module_dim=0)
    n_max = n_max if n_max is not None else max(2 * d + 4, 6)

    t_values, t_cert = tor1_series(mm, n_max, policy)
    if t_cert is not None:
        certs.append(t_cert.to_json())

    m_values = mm.length_values(n_max)
    fs, m_poly = fit_series(m_values, policy.window)
    module_dim = 0 if m_poly == [Fraction(0)] else len(m_poly) - 1
    e1_m = _e1_relative(m_values, d)

    if mm.relations:
        omega_data = submodule_hilbert_data(list(mm.relations), mm.rank,
                                            ring, policy, n_max=n_max)
        e1_omega = _e1_relative(omega_data.values, d)
        certs.extend(omega_data.certificates)
    else:
        e1_omega = 0

    e_formula = mm.rank * e1_ring - e1_m - e1_omega

    _tfs, t_poly = fit_series(t_values, policy.window)
    t_deg = 0 if t_poly == [Fraction(0)] else len(t_poly) - 1
    if any(t_values) and t_deg == d - 1:
        lead = t_poly[-1] * factorial(d - 1)
        if lead.denominator != 1:
            raise ValueError("t-series leading coefficient not integral")
        e_fit = int(lead)
    else:
        e_fit = 0

    c_observed = None
    if d == 1:
        # first index from which the t-series is constant
        c_observed = 0
        for i in range(len(t_values) - 1, 0, -1):
            if t_values[i] != t_values[i - 1]:
                c_observed = i
                break

    return EtorReport(
        module_repr=repr(m), t_values=t_values, c_observed=c_observed,
        t_poly=t_poly, e_fit=e_fit, e_formula=e_formula,
        agree=e_fit == e_formula, mu=mm.rank, ring_dim=d,
        module_dim=module_dim,
        mcm_warning=module_dim != d and not mm.is_zero(),
        certificates=certs)


@dataclass
class ExtensionReport:
    e_n: int
    e_e: int
    e_m: int
    e_class: int
    t_split: bool
    filmy: bool | None = None
    filmy_agrees: bool | None = None
    reports: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "e_N": self.e_n, "e_E": self.e_e, "e_M": self.e_m,
            "e_class": self.e_class, "t_split": self.t_split,
            "filmy": self.filmy, "filmy_agrees": self.filmy_agrees,
        }


def extension_report(s: ExtensionClass,
                     policy: TruncationPolicy | None = None,
                     run_filmy: bool | None = None) -> ExtensionReport:
    """e^T(s) = e^T(N) + e^T(M) - e^T(E); T-split iff zero.

    In ring dimension one the exactness-based test is run as well and must
    agree (set run_filmy=False to skip it).
    """
    policy = policy or TruncationPolicy()
    rn = etor(s.N, policy)
    re_ = etor(s.E, policy)
    rm = etor(s.M, policy)
    e_class = rn.value + rm.value - re_.value
    t_split = e_class == 0
    filmy = None
    agrees = None
    if run_filmy is None:
        run_filmy = rn.ring_dim == 1
    if run_filmy and rn.ring_dim == 1:
        filmy = filmy_check(s, policy)
        agrees = filmy == t_split
    return ExtensionReport(e_n=rn.value, e_e=re_.value, e_m=rm.value,
                           e_class=e_class, t_split=t_split,
                           filmy=filmy, filmy_agrees=agrees,
                           reports={"N": rn, "E": re_, "M": rm})


def filmy_check(s: ExtensionClass,
                policy: TruncationPolicy | None = None,
                n_lo: int = 2, n_hi: int | None = None) -> bool:
    """Dimension-one T-split test via exactness of the Tor sequence:
    the Tor_1 lengths must be additive and N/m^{n+1}N -> E/m^{n+1}E must be
    injective, on a window of large n."""
    policy = policy or TruncationPolicy()
    n_hi = n_hi if n_hi is not None else n_lo + policy.window + 1

    tn, _ = tor1_series(s.N, n_hi, policy)
    te, _ = tor1_series(s.E, n_hi, policy)
    tm, _ = tor1_series(s.M, n_hi, policy)
    for n in range(n_lo, n_hi + 1):
        if te[n] != tn[n] + tm[n]:
            return False

    n_values = s.N.length_values(n_hi)

    def image_lengths(level):
        mod = s.E.model(level)
        im = TruncatedSubmodule(
            mod.free, [col for col in s.iota.columns])
        out = []
        for n in range(n_lo, n_hi + 1):
            low = mod.rel.span.sum(mod.free.power_span(n + 1))
            out.append(low.sum(im.span).dim - low.dim)
        return tuple(out)

    img, _cert = stabilized(image_lengths, policy, query_degree=n_hi + 1)
    for i, n in enumerate(range(n_lo, n_hi + 1)):
        if img[i] != n_values[n]:
            return False
    return True


@dataclass
class LadderReport:
    values: list
    nonincreasing: bool
    first_zero: int | None
    no_nonzero_repeat: bool
    u_text: str

    def to_json(self):
        return {"values": list(self.values),
                "nonincreasing": self.nonincreasing,
                "first_zero": self.first_zero,
                "no_nonzero_repeat": self.no_nonzero_repeat,
                "u": self.u_text}


def reduction_index(s: ExtensionClass,
                    policy: TruncationPolicy | None = None) -> int:
    """Largest observed t-series stabilization index c over N, E, M."""
    policy = policy or TruncationPolicy()
    cs = []
    for mod in (s.N, s.E, s.M):
        rep = etor(mod, policy)
        if rep.c_observed is not None:
            cs.append(rep.c_observed)
    return max(cs) if cs else 0


def scalar_ladder(s: ExtensionClass, u: Poly, steps: int,
                  policy: TruncationPolicy | None = None,
                  check_order: bool = True) -> LadderReport:
    """e^T(u^i s) for i = 0..steps; nonincreasing, and no value may repeat
    before the ladder reaches zero (the dimension-one descent lemma)."""
    policy = policy or TruncationPolicy()
    base = extension_report(s, policy, run_filmy=False)
    if base.reports["N"].ring_dim != 1:
        raise ValueError("scalar ladder requires ring dimension 1")
    if check_order:
        c = reduction_index(s, policy)
        if u.order() < c + 1:
            raise ValueError(
                f"u must lie in m^{c + 1} (order {u.order()} too small)")
    values = [base.e_class]
    for i in range(1, steps + 1):
        si = pushout(s, ModuleMap.multiplication(s.N, u ** i))
        rep = extension_report(si, policy, run_filmy=False)
        values.append(rep.e_class)
    nonincreasing = all(values[i + 1] <= values[i]
                        for i in range(len(values) - 1))
    first_zero = next((i for i, v in enumerate(values) if v == 0), None)
    ok_repeat = True
    for i in range(len(values) - 1):
        if values[i + 1] == values[i] and values[i] != 0:
            ok_repeat = False
    names = s.ring.varnames
    return LadderReport(values=values, nonincreasing=nonincreasing,
                        first_zero=first_zero, no_nonzero_repeat=ok_repeat,
                        u_text=u.to_string(names))


def superficial_cross_check(s: ExtensionClass,
                            policy: TruncationPolicy | None = None,
                            seed: int = 0) -> dict:
    """Dimension-reduction cross-check: e^T(s) computed directly equals
    e^T of the class tensored with A/(x) for a simultaneously superficial
    linear form x (found for the ring and all three modules)."""
    policy = policy or TruncationPolicy()
    ring = s.ring
    mods = [PresentedModule.free(ring, 1), s.N, s.E, s.M]
    cert = find_superficial(mods, policy, seed=seed)
    form = ring.poly(cert.form_text)
    direct = extension_report(s, policy, run_filmy=False)
    reduced = reduce_extension(s, [form])
    red_rep = extension_report(reduced, policy, run_filmy=False)
    return {"form": cert.form_text,
            "e_direct": direct.e_class,
            "e_reduced": red_rep.e_class,
            "ok": direct.e_class == red_rep.e_class,
            "certificate": cert.to_json()}
