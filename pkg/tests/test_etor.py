import pytest

from conftest import (chi_class, dim1_classes, maximal_ideal_a1, ring_a1,
                      ring_x2_dim2)
from oracle import OracleRing
from oracle import tor1_length as oracle_tor1
from tsplit.etor import (etor, extension_report, filmy_check,
                         reduction_index, scalar_ladder, tor1_series,
                         superficial_cross_check)
from tsplit.modpres import ModuleMap, PresentedModule, pushout


def test_tor1_series_matches_oracle(policy):
    a1 = ring_a1()
    cases = [
        PresentedModule.cyclic(a1, ["x"]),
        maximal_ideal_a1(a1),
    ]
    orc = OracleRing(a1.nvars, a1.p, [f.coeffs for f in a1.ideal], 10)
    for m in cases:
        values, cert = tor1_series(m, 5, policy)
        cols = [[f.coeffs for f in rel] for rel in m.relations]
        want = [oracle_tor1(orc, cols, m.rank, n) for n in range(6)]
        assert values == want
        assert cert is not None


def test_tor1_series_of_free_is_zero(policy):
    values, cert = tor1_series(PresentedModule.free(ring_a1(), 2), 4, policy)
    assert values == [0] * 5
    assert cert is None


def test_etor_a1_fixtures(policy):
    a1 = ring_a1()
    rep = etor(PresentedModule.cyclic(a1, ["x"]), policy)
    assert rep.e_fit == rep.e_formula == 1
    assert rep.agree
    assert rep.t_values[2:] == [1] * (len(rep.t_values) - 2)
    rep = etor(maximal_ideal_a1(a1), policy)
    assert rep.e_fit == rep.e_formula == 2
    rep = etor(PresentedModule.free(a1, 3), policy)
    assert rep.value == 0 and rep.e_fit == 0


def test_etor_zero_iff_free(policy):
    a1 = ring_a1()
    assert etor(PresentedModule.free(a1, 1), policy).value == 0
    assert etor(PresentedModule.cyclic(a1, ["x"]), policy).value == 1
    assert etor(maximal_ideal_a1(a1), policy).value == 2


def test_etor_subadditive_on_direct_sum(policy):
    from tsplit.modpres import direct_sum
    a1 = ring_a1()
    m1 = PresentedModule.cyclic(a1, ["x"])
    m2 = maximal_ideal_a1(a1)
    assert etor(direct_sum(m1, m2), policy).value == \
        etor(m1, policy).value + etor(m2, policy).value


def test_extension_reports_dim1_corpus(policy):
    want = {"chi0": (2, False), "s1": (0, True),
            "split": (0, True), "cusp-syzygy": (4, False)}
    for label, cls in dim1_classes(policy):
        rep = extension_report(cls, policy)
        e_class, t_split = want[label]
        assert rep.e_class == e_class, label
        assert rep.t_split == t_split, label
        assert rep.filmy_agrees, label


def test_filmy_direct(policy):
    chi = chi_class()
    assert not filmy_check(chi, policy)
    a1 = ring_a1()
    s1 = pushout(chi, ModuleMap.multiplication(chi.N, a1.poly("y")))
    assert filmy_check(s1, policy)


def test_reduction_index_chi(policy):
    # all three modules have constant t-series from n = 2 at the latest
    assert reduction_index(chi_class(), policy) <= 2


def test_scalar_ladder_chi(policy):
    a1 = ring_a1()
    ladder = scalar_ladder(chi_class(a1), a1.poly("y^2"), 6, policy)
    assert ladder.values == [2, 0, 0, 0, 0, 0, 0]
    assert ladder.nonincreasing
    assert ladder.first_zero == 1
    assert ladder.no_nonzero_repeat


def test_scalar_ladder_rejects_small_order(policy):
    # a unit scalar never descends, so order 0 is rejected up front
    a1 = ring_a1()
    with pytest.raises(ValueError):
        scalar_ladder(chi_class(a1), a1.poly("3"), 3, policy)


def test_superficial_cross_check_dim2(policy):
    # the dim-2 analog of chi0 over k[x,y,z]/(x^2): e^T survives reduction
    d2 = ring_x2_dim2()
    from tsplit.modpres import ExtensionClass
    from tsplit.poly import PolyVec
    m = PresentedModule.cyclic(d2, ["x"])
    e = PresentedModule.free(d2, 1)
    cls = ExtensionClass(
        N=m, E=e, M=m,
        iota=ModuleMap(m, e, [PolyVec([d2.poly("x")])]),
        pi=ModuleMap(e, m, [PolyVec([d2.poly("1")])]))
    out = superficial_cross_check(cls, policy)
    assert out["ok"], out
    assert out["e_direct"] == out["e_reduced"] == 2
