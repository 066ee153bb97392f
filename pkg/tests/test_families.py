import pytest

from conftest import maximal_ideal_a1, ring_a1, ring_x2_dim2
from tsplit.artinian import RingSpec
from tsplit.etor import extension_report
from tsplit.families import (lift_to_cover, rci_family, sci_base_class,
                             sci_family, syz_dim2_module, ulrich_dim1_family)
from tsplit.gcm import cm_certify, graded_model
from tsplit.hilbert import hilbert_data, is_ulrich
from tsplit.modpres import PresentedModule, minimalize


def test_sci_base_class_validates(policy):
    chi = sci_base_class(("x", "y"), "x", 2, "1")
    report = chi.validate(policy)
    assert report["ok"], report
    # over A = k[x,y]/(x^2) this is the canonical non-split class: e^T = 2
    rep = extension_report(chi, policy, run_filmy=False)
    assert rep.e_class == 2
    assert not rep.t_split


def test_sci_family_members(policy):
    chi, u, members = sci_family(("x", "y"), "x", 2, "1", range(0, 3),
                                 policy=policy)
    assert u.order() == 1
    want = {0: 2, 1: 0, 2: 0}
    for n, cls in members:
        rep = extension_report(cls, policy, run_filmy=False)
        assert rep.e_class == want[n], n
        assert cls.validate(policy)["ok"], n


def test_sci_family_constant_e_of_middle(policy):
    _chi, _u, members = sci_family(("x", "y"), "x", 2, "1", range(1, 4),
                                   policy=policy)
    for n, cls in members:
        data = hilbert_data(minimalize(cls.E, policy), policy)
        assert data.e[0] == 2, n


def test_sci_family_dimension_preconditions(policy):
    # i = 1 over a dimension-1 hypersurface is rejected
    with pytest.raises(ValueError):
        sci_family(("x",), "x", 1, "x", range(2), policy=policy)


def test_ulrich_dim1_maximal_ideal(policy):
    # the maximal ideal of k[x,y]/(x^2) is already Ulrich: threshold 0
    out = ulrich_dim1_family(maximal_ideal_a1(), 4, policy)
    assert out["ok"]
    assert out["threshold"] == 0
    assert out["e0"] == 2


def test_ulrich_dim1_free_module(policy):
    # the ring itself becomes Ulrich from the first power on
    out = ulrich_dim1_family(PresentedModule.free(ring_a1(), 1), 4, policy)
    assert out["ok"]
    assert out["threshold"] == 1
    assert out["mu_powers"][0] == 1


def test_ulrich_dim1_t3t5_curve(policy):
    # k[x,y]/(x^5 - y^3): e_0 = 3, threshold 2 (mu of powers: 1, 2, 3, ...)
    curve = RingSpec.make(("x", "y"), ["x^5 - y^3"])
    out = ulrich_dim1_family(PresentedModule.free(curve, 1), 5, policy)
    assert out["ok"]
    assert out["e0"] == 3
    assert out["threshold"] == 2
    assert out["mu_powers"][:3] == [1, 2, 3]


def test_ulrich_dim1_rejects_wrong_dim(policy):
    with pytest.raises(ValueError):
        ulrich_dim1_family(PresentedModule.free(ring_x2_dim2(), 1), 3,
                           policy)


def test_lift_to_cover_lengths(policy):
    # B = A/(y^2) viewed over A = k[x,y]/(x^2)
    a1 = ring_a1()
    b_ring = a1.with_extra_ideal([a1.poly("y^2")])
    m_b = PresentedModule.free(b_ring, 1)
    lifted = lift_to_cover(m_b, a1)
    assert lifted.ring is a1 or lifted.ring == a1
    assert lifted.length_values(4) == m_b.length_values(4)


def test_syz_dim2_is_cm(policy):
    # E = Ulrich module over B = A/(x), A = k[x,y,z]/(x^2) of dimension 2;
    # its syzygy over A is maximal Cohen-Macaulay, hence G-CM here
    d2 = ring_x2_dim2()
    b_ring = d2.with_extra_ideal([d2.poly("x")])
    e_mod = PresentedModule.free(b_ring, 1)
    m = syz_dim2_module(d2, e_mod, policy)
    assert m.rank >= 1
    g = graded_model(minimalize(m, policy), 10, policy)
    cert = cm_certify(g, policy=policy)
    assert cert.verdict == "CM", cert.to_json()


def test_rci_family_quotient(policy):
    a1 = ring_a1()
    e_mod = PresentedModule.free(a1, 1)
    out = rci_family(a1, e_mod, r=2, l=1, g_texts=["t0^2 - t1^2"],
                     policy=policy)
    assert out["adjoined"] == ["t0", "t1"]
    assert out["checks"]["initial_forms_regular"]
    # one regular quotient of two adjoined variables: dimension goes 1+2-1=2
    # (keep n_max small: 4 variables make the default series expensive)
    data = hilbert_data(out["module"], policy, n_max=7)
    assert data.dim == 2


def test_rci_family_rejects_l_equal_r(policy):
    a1 = ring_a1()
    e_mod = PresentedModule.free(a1, 1)
    with pytest.raises(ValueError):
        rci_family(a1, e_mod, r=2, l=2, g_texts=["t0^2", "t1^2"],
                   policy=policy)


def test_rci_family_rejects_irregular_forms(policy):
    a1 = ring_a1()
    e_mod = PresentedModule.free(a1, 1)
    with pytest.raises(ValueError):
        rci_family(a1, e_mod, r=2, l=1, g_texts=["x*t0"], policy=policy)
