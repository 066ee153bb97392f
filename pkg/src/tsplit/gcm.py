"""Associated graded modules G(M) = (+) m^n M / m^{n+1} M as degreewise
coordinate spaces with variable actions, graded exactness of extension
classes, and Monte-Carlo Cohen-Macaulayness certification via random linear
systems of parameters (length ell(G/(y)G) = e_0 iff CM)."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .artinian import TruncationPolicy
from .fieldmath import Subspace, matmul_mod, rank as mat_rank, solve
from .hilbert import hilbert_data
from .modpres import ExtensionClass, PresentedModule, minimalize
from .poly import Poly, mono_degree


class GradedModel:
    """Degreewise model of G(M) on [0, D]: bases of m^n M / m^{n+1} M as
    complements inside the truncated free cover, plus the multiplication
    action of each variable from degree n to n+1."""

    def __init__(self, module: PresentedModule, bound: int,
                 policy: TruncationPolicy | None = None):
        policy = policy or TruncationPolicy()
        self.module = module
        self.ring = module.ring
        self.bound = bound
        level = bound + 2
        mod = module.model(level)
        self.level = level
        self._mod = mod
        self.bases = []      # rows spanning a complement of S_{n+1} in S_n
        self.dims = []
        spans = [mod.span_mod_power(n) for n in range(bound + 2)]
        self._spans = spans
        for n in range(bound + 1):
            comp = spans[n + 1].complement_in(spans[n])
            basis = (np.array(comp, dtype=np.int64) if comp
                     else np.zeros((0, mod.free.dim), dtype=np.int64))
            self.bases.append(basis)
            self.dims.append(basis.shape[0])
        self.actions = []    # actions[i][n]: G_n -> G_{n+1} for variable i
        for i in range(self.ring.nvars):
            per_degree = []
            for n in range(bound):
                per_degree.append(self._action_matrix(i, n))
            self.actions.append(per_degree)

    def _coords_in_degree(self, vec: np.ndarray, n: int) -> np.ndarray:
        """Coordinates of a vector of S_n in the G_n basis (mod S_{n+1})."""
        basis = self.bases[n]
        if basis.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        killer = self._spans[n + 1]
        cols = [basis[j] for j in range(basis.shape[0])]
        if killer.dim:
            cols.extend(killer.rows)
        A = np.array(cols, dtype=np.int64).T
        x = solve(A, vec, self._mod.free.p)
        if x is None:
            raise ValueError("vector not in the expected filtration piece")
        return x[: basis.shape[0]]

    def _action_matrix(self, i: int, n: int) -> np.ndarray:
        src = self.bases[n]
        tgt_dim = self.dims[n + 1]
        out = np.zeros((tgt_dim, src.shape[0]), dtype=np.int64)
        if src.shape[0] == 0 or tgt_dim == 0:
            return out
        images = self._mod.free.mult_var(i, src)
        for j in range(src.shape[0]):
            out[:, j] = self._coords_in_degree(images[j], n + 1)
        return out

    def form_action(self, f: Poly, n: int) -> np.ndarray:
        """Action of a homogeneous form (its own initial form) from G_n to
        G_{n + deg f}."""
        t = f.order()
        if t != f.degree():
            raise ValueError("form must be homogeneous")
        if n + t > self.bound:
            raise ValueError("degree bound exceeded")
        p = self.ring.p
        out = np.zeros((self.dims[n + t], self.dims[n]), dtype=np.int64)
        for m, c in f.coeffs.items():
            mat = np.eye(self.dims[n], dtype=np.int64)
            deg = n
            for i, e in enumerate(m):
                for _ in range(e):
                    mat = matmul_mod(self.actions[i][deg], mat, p)
                    deg += 1
            out = (out + c * mat) % p
        return out

    def quotient_dims(self, forms):
        """Degreewise dims of G / (forms) G for degree-1 forms."""
        p = self.ring.p
        out = [self.dims[0]]
        for n in range(1, self.bound + 1):
            blocks = [self.form_action(f, n - 1) for f in forms]
            stacked = np.concatenate(blocks, axis=1) if blocks else \
                np.zeros((self.dims[n], 0), dtype=np.int64)
            out.append(self.dims[n] - mat_rank(stacked, p))
        return out


def graded_model(m: PresentedModule, bound: int,
                 policy: TruncationPolicy | None = None) -> GradedModel:
    return GradedModel(m, bound, policy)


@dataclass
class CmCertificate:
    verdict: str            # "CM" | "not-CM" | "inconclusive"
    e0: int
    dim: int
    seed: int
    trials: int
    lengths: list = field(default_factory=list)
    forms: list = field(default_factory=list)
    degree_cap: int = 0

    def to_json(self):
        return {"verdict": self.verdict, "e0": self.e0, "dim": self.dim,
                "seed": self.seed, "trials": self.trials,
                "lengths": self.lengths, "forms": self.forms,
                "degree_cap": self.degree_cap}


def cm_certify(g: GradedModel, trials: int = 5, seed: int = 0,
               policy: TruncationPolicy | None = None,
               e0: int | None = None, dim: int | None = None) -> CmCertificate:
    """Monte-Carlo CM certificate: draw `dim` random linear forms, sum the
    degreewise dims of G/(y)G until a run of zeros, compare with e_0.

    Equality in any trial certifies CM; strict inequality in every finished
    trial reports not-CM; anything else is inconclusive.
    """
    policy = policy or TruncationPolicy()
    ring = g.ring
    if e0 is None or dim is None:
        data = hilbert_data(g.module, policy)
        e0 = data.e[0] if e0 is None else e0
        dim = data.dim if dim is None else dim

    if dim == 0:
        total = sum(g.dims)
        verdict = "CM" if total == e0 else "inconclusive"
        return CmCertificate(verdict=verdict, e0=e0, dim=0, seed=seed,
                             trials=0, lengths=[total],
                             degree_cap=g.bound)

    rng = random.Random(seed)
    lengths = []
    form_texts = []
    names = ring.varnames
    saw_equal = False
    all_strict = True
    for _t in range(trials):
        forms = []
        for _i in range(dim):
            coeffs = [rng.randrange(ring.p) for _ in range(ring.nvars)]
            if not any(coeffs):
                coeffs[rng.randrange(ring.nvars)] = 1
            f = ring.zero()
            for i, c in enumerate(coeffs):
                f = f + ring.variable(i).scale(c)
            forms.append(f)
        qdims = g.quotient_dims(forms)
        # finite length: a window of consecutive zeros before the cap
        total = 0
        zeros = 0
        finite = False
        for d_idx, qd in enumerate(qdims):
            total += qd
            zeros = zeros + 1 if qd == 0 else 0
            if zeros >= policy.window:
                finite = True
                break
        form_texts.append([f.to_string(names) for f in forms])
        if not finite:
            lengths.append(None)
            all_strict = False
            continue
        lengths.append(total)
        if total == e0:
            saw_equal = True
            break
        if total < e0:
            all_strict = False
    if saw_equal:
        verdict = "CM"
    elif all_strict and lengths and all(v is not None for v in lengths):
        verdict = "not-CM"
    else:
        verdict = "inconclusive"
    return CmCertificate(verdict=verdict, e0=e0, dim=dim, seed=seed,
                         trials=len(lengths), lengths=lengths,
                         forms=form_texts, degree_cap=g.bound)


def g_exactness(s: ExtensionClass, bound: int,
                policy: TruncationPolicy | None = None):
    """Exactness of 0 -> G(N) -> G(E) -> G(M) -> 0 on degrees [0, bound]:
    dimension additivity plus injectivity of the induced G(N)_n -> G(E)_n.

    Returns (ok, first_failure_degree_or_None).
    """
    policy = policy or TruncationPolicy()
    n_vals = s.N.length_values(bound + 1)
    e_vals = s.E.length_values(bound + 1)
    m_vals = s.M.length_values(bound + 1)

    def diffs(vals):
        return [vals[0]] + [vals[i] - vals[i - 1]
                            for i in range(1, len(vals))]

    dn, de, dm = diffs(n_vals), diffs(e_vals), diffs(m_vals)
    gn = GradedModel(s.N, bound, policy)
    level = gn.level
    e_mod = s.E.model(level)
    iota_mat = s.iota.coord_matrix(level)
    p = s.ring.p
    for n in range(bound + 1):
        if de[n] != dn[n] + dm[n]:
            return False, n
        src = gn.bases[n]
        if src.shape[0] == 0:
            continue
        images = matmul_mod(iota_mat, src.T, p).T
        killer = e_mod.span_mod_power(n + 1)
        residual = np.array([killer.reduce(v) for v in images],
                            dtype=np.int64)
        if mat_rank(residual, p) != src.shape[0]:
            return False, n
    return True, None


def additivity_check(s: ExtensionClass,
                     policy: TruncationPolicy | None = None) -> dict:
    """e_i(E) = e_i(N) + e_i(M) for i = 0..d, for a T-split class."""
    from .etor import extension_report
    from .hilbert import e_from_h, h_vector, ring_hilbert_data
    policy = policy or TruncationPolicy()
    rep = extension_report(s, policy, run_filmy=False)
    report = {"t_split": rep.t_split, "ok": True}
    if not rep.t_split:
        report["ok"] = False
        report["reason"] = "class is not T-split"
        return report
    d = ring_hilbert_data(s.ring, policy).dim
    n_max = 2 * s.ring.nvars + 6

    def e_rel(m):
        vals = m.length_values(n_max)
        return e_from_h(h_vector(vals, d), d)

    en, ee, em = e_rel(s.N), e_rel(s.E), e_rel(s.M)
    report["e_N"], report["e_E"], report["e_M"] = en, ee, em
    report["ok"] = all(ee[i] == en[i] + em[i] for i in range(d + 1))
    return report


def sally_descent_check(m: PresentedModule, cert,
                        policy: TruncationPolicy | None = None,
                        bound: int = 10, trials: int = 5,
                        seed: int = 0) -> dict:
    """Consistency between dimension levels: if G(M/xM) certifies CM for a
    superficial x then G(M) must not certify not-CM."""
    from .modpres import quotient_by
    policy = policy or TruncationPolicy()
    data = hilbert_data(m, policy)
    report = {"dim": data.dim, "ok": True}
    if data.dim < 1:
        report["note"] = "dimension 0: trivial"
        return report
    form = m.ring.poly(cert.form_text)
    reduced = quotient_by(m, [form])
    if minimalize(reduced, policy).rank == 0:
        report["note"] = "reduction is zero"
        return report
    g_red = GradedModel(reduced, bound, policy)
    c_red = cm_certify(g_red, trials=trials, seed=seed, policy=policy)
    g_full = GradedModel(m, bound, policy)
    c_full = cm_certify(g_full, trials=trials, seed=seed, policy=policy)
    report["reduced"] = c_red.to_json()
    report["full"] = c_full.to_json()
    if c_red.verdict == "CM" and c_full.verdict == "not-CM":
        report["ok"] = False
    return report


def initial_forms_regular(g: GradedModel, forms, bound: int | None = None):
    """Whether the (homogeneous) forms are a regular sequence on the graded
    model, checked degreewise up to the bound.

    Returns (ok, first_failure) where first_failure is (form_index, degree).
    """
    bound = bound if bound is not None else g.bound
    p = g.ring.p
    # U[n]: subspace of G_n coords spanned by the ideal of previous forms
    U = [Subspace.zero(g.dims[n], p) if g.dims[n] else
         Subspace.zero(0, p) for n in range(bound + 1)]
    for idx, f in enumerate(forms):
        t = f.degree()
        # injectivity of f on (G/previous)_n for all testable n
        for n in range(bound + 1 - t):
            if g.dims[n] == 0:
                continue
            M = g.form_action(f, n)
            reduced = U[n + t].reduce_matrix(M)
            from .fieldmath import kernel_basis
            ker = kernel_basis(reduced, p)
            for v in ker:
                if not U[n].contains(np.asarray(v) % p):
                    return False, (idx, n)
        # enlarge the ideal subspaces by f . G_{n-t}
        for n in range(t, bound + 1):
            M = g.form_action(f, n - t)
            if M.shape[1]:
                U[n] = U[n].sum(Subspace.from_vectors(
                    M.T, g.dims[n], p))
    return True, None
