"""Hilbert functions of presented modules: value series, exact polynomial
fit, Hilbert coefficients e_i, h-vectors, dimension, multiplicity and the
Ulrich / minimal multiplicity predicates, plus superficial-element search
with certificates.

All fitting is exact (fractions), never least squares: the fitted polynomial
must reproduce every value from the fit start onward.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .artinian import (FreeTruncation, RingSpec, TruncatedSubmodule,
                       TruncationPolicy, build_truncated_algebra, stabilized)
from .fieldmath import Subspace, kernel_basis
from .modpres import PresentedModule, minimalize, quotient_by
from .poly import Poly, PolyVec


class FitError(ValueError):
    """No polynomial reproduces the value series with enough spare points."""


def _difference_rows(values):
    rows = [list(values)]
    while len(rows[-1]) > 1:
        prev = rows[-1]
        rows.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    return rows


def fit_series(values, window: int = 2):
    """Exact polynomial fit of an eventually polynomial integer series.

    Returns (fit_start, coeffs) with coeffs ascending Fractions; the degree
    is minimal and the fit is verified on at least `window` points beyond
    the interpolation points.  Raises FitError if no start works.
    """
    n = len(values)
    for start in range(n):
        tail = values[start:]
        rows = _difference_rows(tail)
        # minimal degree r: all (r+1)-th differences vanish, with at least
        # `window` vanishing entries as verification
        for r in range(len(rows)):
            if r + 1 >= len(rows):
                break
            diffs = rows[r + 1]
            if len(diffs) < window:
                break
            if all(d == 0 for d in diffs):
                coeffs = _newton_coeffs(rows, r, start)
                return start, coeffs
    raise FitError("no polynomial fit with enough verification points; "
                   "extend the value series")


def _newton_coeffs(rows, r: int, start: int):
    """Coefficients of P(n) = sum_k D^k[0] . C(n - start, k), ascending."""
    coeffs = [Fraction(0)] * (r + 1)
    for k in range(r + 1):
        lead = Fraction(rows[k][0])
        if lead == 0:
            continue
        # C(n - start, k) = prod_{t=0}^{k-1} (n - start - t) / k!
        poly = [Fraction(1)]
        for t in range(k):
            shift = Fraction(start + t)
            new = [Fraction(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i + 1] += c
                new[i] -= c * shift
            poly = new
        fact = Fraction(1)
        for t in range(1, k + 1):
            fact *= t
        for i, c in enumerate(poly):
            coeffs[i] += lead * c / fact
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def eval_poly(coeffs, n: int) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def h_vector(values, r: int):
    """h-vector from the Hilbert-Samuel series: numerator coefficients of
    sum values[n] z^n = h(z)/(1-z)^{r+1}."""
    h = []
    for n in range(len(values)):
        c = 0
        for k in range(min(n, r + 1) + 1):
            c += (-1) ** k * comb(r + 1, k) * values[n - k]
        h.append(c)
    while h and h[-1] == 0:
        h.pop()
    return h


def e_from_h(h, r: int):
    """Hilbert coefficients e_i = sum_j C(j, i) h_j for i = 0..r."""
    return [sum(comb(j, i) * hj for j, hj in enumerate(h))
            for i in range(r + 1)]


@dataclass
class HilbertData:
    values: list
    fit_start: int
    poly: list          # ascending Fraction coefficients of P(n)
    e: list
    h: list
    mu: int
    dim: int
    certificates: list = field(default_factory=list)

    def to_json(self):
        return {
            "values": list(self.values),
            "fit_start": self.fit_start,
            "poly": [str(c) for c in self.poly],
            "e": list(self.e),
            "h": list(self.h),
            "mu": self.mu,
            "dim": self.dim,
            "certificates": list(self.certificates),
        }


def _data_from_values(values, mu: int, window: int,
                      certificates=None) -> HilbertData:
    fit_start, coeffs = fit_series(values, window)
    if coeffs == [Fraction(0)]:
        r = 0  # zero polynomial happens only for the zero module
    else:
        r = len(coeffs) - 1
    h = h_vector(values, r)
    e = e_from_h(h, r)
    data = HilbertData(values=list(values), fit_start=fit_start,
                       poly=coeffs, e=e, h=h, mu=mu, dim=r,
                       certificates=list(certificates or []))
    for n in range(fit_start, len(values)):
        if eval_poly(coeffs, n) != values[n]:
            raise FitError("fitted polynomial does not reproduce the series")
    return data


def default_n_max(ring: RingSpec) -> int:
    return 2 * ring.nvars + 6


def hilbert_data(m: PresentedModule, policy: TruncationPolicy | None = None,
                 n_max: int | None = None) -> HilbertData:
    """HilbertData of a presented module; values are exact (the filtration
    quotients need no stabilization sweep)."""
    policy = policy or TruncationPolicy()
    mm = minimalize(m, policy)
    if mm.rank == 0:
        raise ValueError("hilbert_data needs a nonzero module")
    n_max = n_max if n_max is not None else default_n_max(m.ring)
    values = m.length_values(n_max)
    return _data_from_values(values, mu=mm.rank, window=policy.window)


def ring_hilbert_data(ring: RingSpec,
                      policy: TruncationPolicy | None = None,
                      n_max: int | None = None) -> HilbertData:
    return hilbert_data(PresentedModule.free(ring, 1), policy, n_max)


def submodule_hilbert_data(gens, rank: int, ring: RingSpec,
                           policy: TruncationPolicy | None = None,
                           n_max: int | None = None) -> HilbertData:
    """HilbertData of the submodule of A^rank generated by gens.

    Submodule filtrations are only eventually exact under truncation, so the
    whole value series is swept over levels until it stabilizes.
    """
    policy = policy or TruncationPolicy()
    if not gens:
        raise ValueError("submodule_hilbert_data needs generators")
    n_max = n_max if n_max is not None else default_n_max(ring)

    def compute(level):
        alg = build_truncated_algebra(ring, level)
        free = FreeTruncation(alg, rank)
        sub = TruncatedSubmodule(free, gens)
        return tuple(sub.span.dim - sub.filtration_piece(n + 1).dim
                     for n in range(n_max + 1))

    values, cert = stabilized(compute, policy, query_degree=n_max + 1)

    def mu_at(level):
        alg = build_truncated_algebra(ring, level)
        free = FreeTruncation(alg, rank)
        sub = TruncatedSubmodule(free, gens)
        return sub.span.dim - sub.filtration_piece(1).dim

    mu, _ = stabilized(mu_at, policy, query_degree=2)
    return _data_from_values(list(values), mu=mu, window=policy.window,
                             certificates=[cert.to_json()])


def is_ulrich(m: PresentedModule, policy: TruncationPolicy | None = None):
    """Ulrich test e_0 = mu; returns (bool, evidence)."""
    data = hilbert_data(m, policy)
    return data.e[0] == data.mu, {"e0": data.e[0], "mu": data.mu}


def has_min_mult(m: PresentedModule, policy: TruncationPolicy | None = None):
    """Minimal multiplicity test: h-vector degree <= 1."""
    data = hilbert_data(m, policy)
    return len(data.h) <= 2, {"h": data.h}


@dataclass
class SuperficialCertificate:
    form_text: str
    c: int
    n_range: tuple
    module_count: int
    seed: int | None = None
    trial: int = 0
    details: list = field(default_factory=list)

    def to_json(self):
        return {"form": self.form_text, "c": self.c,
                "n_range": list(self.n_range),
                "module_count": self.module_count,
                "seed": self.seed, "trial": self.trial}


def _colon_condition(m: PresentedModule, form: Poly, c: int, n: int,
                     level: int) -> bool:
    """(m^{n+1}M : form) cap m^c M == m^n M inside the level model."""
    mod = m.model(level)
    free = mod.free
    s_next = mod.span_mod_power(n + 1)
    s_c = mod.span_mod_power(c)
    s_n = mod.span_mod_power(n)
    mult = free.mult_matrix(form)
    reduced = s_next.reduce_matrix(mult)
    colon_vecs = kernel_basis(reduced, free.p)
    colon = Subspace.from_vectors(colon_vecs, free.dim, free.p) if colon_vecs \
        else Subspace.zero(free.dim, free.p)
    meet = colon.intersect(s_c)
    return meet == s_n or (meet.dim == s_n.dim and s_n.contains_space(meet))


def check_superficial(modules, form: Poly,
                      policy: TruncationPolicy | None = None,
                      c_max: int = 4):
    """Try to certify `form` as simultaneously superficial for all the
    modules.  Returns a SuperficialCertificate or None."""
    policy = policy or TruncationPolicy()
    if not modules:
        raise ValueError("no modules to certify")
    if form.order() != 1:
        raise ValueError("superficial candidate must have a degree-1 "
                         "initial form")
    for c in range(1, c_max + 1):
        n_lo, n_hi = c, c + policy.window + 1

        def compute(level, _c=c):
            return all(
                _colon_condition(m, form, _c, n, level)
                for m in modules for n in range(n_lo, n_hi + 1))

        try:
            ok, _cert = stabilized(compute, policy, query_degree=n_hi + 1)
        except Exception:
            continue
        if ok:
            names = modules[0].ring.varnames
            return SuperficialCertificate(
                form_text=form.to_string(names), c=c, n_range=(n_lo, n_hi),
                module_count=len(modules))
    return None


def find_superficial(modules, policy: TruncationPolicy | None = None,
                     seed: int = 0, trials: int = 40) -> SuperficialCertificate:
    """Random search for a simultaneous superficial linear form.

    Deterministic in the seed; the winning trial index and seed are recorded
    in the certificate.
    """
    policy = policy or TruncationPolicy()
    if not modules:
        raise ValueError("no modules to certify")
    ring = modules[0].ring
    rng = random.Random(seed)
    # first pass: the plain variables, then random combinations
    candidates = [ring.variable(i) for i in range(ring.nvars)]
    for t in range(trials):
        if t < len(candidates):
            form = candidates[t]
        else:
            coeffs = [rng.randrange(ring.p) for _ in range(ring.nvars)]
            if not any(coeffs):
                coeffs[rng.randrange(ring.nvars)] = 1
            form = ring.zero()
            for i, cf in enumerate(coeffs):
                form = form + ring.variable(i).scale(cf)
            if form.is_zero():
                continue
        cert = check_superficial(modules, form, policy)
        if cert is not None:
            cert.seed = seed
            cert.trial = t
            return cert
    raise RuntimeError(f"no superficial form found in {trials} trials")


def superficial_reduction_check(m: PresentedModule,
                                cert: SuperficialCertificate,
                                policy: TruncationPolicy | None = None) -> dict:
    """e_i(M/xM) = e_i(M) for i <= dim - 1, for a certified superficial x."""
    policy = policy or TruncationPolicy()
    data = hilbert_data(m, policy)
    report = {"ok": True, "e": data.e, "dim": data.dim}
    if data.dim == 0:
        report["note"] = "dimension 0: vacuous"
        return report
    form = m.ring.poly(cert.form_text)
    reduced = quotient_by(m, [form])
    rdata = hilbert_data(reduced, policy)
    report["e_reduced"] = rdata.e
    for i in range(data.dim):
        if i >= len(rdata.e) or rdata.e[i] != data.e[i]:
            report["ok"] = False
            report["first_mismatch"] = i
            break
    return report


def dimension_drop_check(m: PresentedModule, f: Poly,
                         policy: TruncationPolicy | None = None) -> dict:
    """dim(M/fM) >= dim(M) - 1."""
    policy = policy or TruncationPolicy()
    data = hilbert_data(m, policy)
    quot = quotient_by(m, [f])
    if minimalize(quot, policy).rank == 0:
        qdim = -1  # zero module; only possible when dim(M) == 0 anyway
    else:
        qdim = hilbert_data(quot, policy).dim
    ok = qdim >= data.dim - 1
    return {"ok": ok, "dim": data.dim, "dim_reduced": qdim}
