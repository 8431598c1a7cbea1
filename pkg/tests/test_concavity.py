import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

import lyapspec as ls
from lyapspec import concavity, thermo
from lyapspec.errors import DegenerateMapError

E = math.e


def model(*slopes):
    return ls.LinearPressureModel(ls.LinearCookieCutter(slopes))


# ---------------------------------------------------------------------------
# the variance criterion G
# ---------------------------------------------------------------------------

def test_criterion_equal_slopes():
    m = model(2, 2)
    for t in (-4.0, 0.0, 2.0):
        assert ls.criterion_G(m, t) == pytest.approx(-math.log(2) ** 2, abs=1e-14)


def test_criterion_arithmetic_oracle_extreme_map():
    # sigma2(0) = ((45-1)/2)^2 = 484, P(0) = log 2, alpha(0) = 23
    g = ls.criterion_G(model(E, math.exp(45)), 0.0)
    assert g == pytest.approx(2 * 484 * math.log(2) - 529, abs=1e-9)
    assert g > 0


def test_criterion_negative_at_dimension():
    for slopes in ((2, 4), (E, math.exp(45)), (2, 3, 11)):
        m = model(*slopes)
        t_d = thermo.bowen_root(m)
        alpha_d = m.alpha(t_d)
        assert ls.criterion_G(m, t_d) == pytest.approx(-alpha_d**2, abs=1e-9)


def test_criterion_left_asymptote():
    # G -> -(max log m)^2 as t -> -inf
    m = model(2, 4, 32)
    assert ls.criterion_G(m, -60.0) == pytest.approx(-math.log(32) ** 2, abs=1e-9)


# ---------------------------------------------------------------------------
# exact second derivative
# ---------------------------------------------------------------------------

def test_d2l_at_dimension_point():
    m = model(2, 4)
    t_d = thermo.bowen_root(m)
    expected = -1.0 / (m.sigma2(t_d) * m.alpha(t_d))
    assert ls.d2L_dalpha2(m, t_d) == pytest.approx(expected, rel=1e-9)


def test_d2l_signs_at_zero():
    assert ls.d2L_dalpha2(model(E, math.exp(10)), 0.0) < 0
    assert ls.d2L_dalpha2(model(E, math.exp(45)), 0.0) > 0


def test_d2l_degenerate_raises():
    with pytest.raises(DegenerateMapError):
        ls.d2L_dalpha2(model(2, 2), 0.0)


def test_d2l_matches_finite_differences():
    # second central differences of L(alpha) along interior exponents
    for slopes in ((E, math.exp(10)), (E, math.exp(2), math.exp(8))):
        m = model(*slopes)
        rng = m.alpha_max - m.alpha_min
        h = 1e-4 * rng
        alphas = np.linspace(m.alpha_min + 0.02 * rng, m.alpha_max - 0.02 * rng, 25)

        def L(al):
            t = thermo.t_of_alpha(m, al)
            return (m.pressure(t) + t * al) / al

        pairs = []
        for al in alphas:
            t = thermo.t_of_alpha(m, al)
            fd = (L(al + h) - 2 * L(al) + L(al - h)) / h**2
            pairs.append((fd, ls.d2L_dalpha2(m, t)))
        scale = max(abs(ex) for _, ex in pairs)
        for fd, ex in pairs:
            assert abs(fd - ex) <= 1e-3 * max(abs(ex), 1e-6 * scale)


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def test_classify_three_branch_panels():
    assert ls.classify(model(E, math.exp(2), math.exp(4))).verdict == "concave"
    r8 = ls.classify(model(E, math.exp(2), math.exp(8)))
    r16 = ls.classify(model(E, math.exp(2), math.exp(16)))
    assert r8.verdict == "non_concave" and len(r8.inflections) == 2
    assert r16.verdict == "non_concave" and len(r16.inflections) == 2


def test_classify_two_branch_inflections_certified():
    cookie = ls.LinearCookieCutter((E, math.exp(45)))
    m = ls.LinearPressureModel(cookie)
    report = ls.classify(m, map_hint=cookie)
    assert report.verdict == "non_concave"
    assert len(report.inflections) == 2
    t_d = report.dimension
    for pt in report.inflections:
        assert pt.t_star < t_d
        lo, hi = pt.bracket
        assert ls.criterion_G(m, lo) * ls.criterion_G(m, hi) < 0
        assert pt.transversality is not None and pt.transversality > 0
        assert pt.alpha_star == pytest.approx(m.alpha(pt.t_star), rel=1e-12)


def test_classify_boundary_at_critical_ratio():
    crit = model(E, math.exp(ls.critical_ratio()))
    report = ls.classify(crit)
    assert report.verdict == "concave_boundary"
    assert abs(report.worst_margin) <= 1e-9


def test_classify_degenerate():
    report = ls.classify(model(3, 3))
    assert report.degenerate
    assert report.verdict == "concave"
    assert report.inflections == ()
    assert report.worst_margin == pytest.approx(-math.log(3) ** 2, abs=1e-12)


def test_classify_scan_edges_negative():
    for slopes in ((E, math.exp(45)), (E, math.exp(2), math.exp(16))):
        m = model(*slopes)
        report = ls.classify(m)
        assert ls.criterion_G(m, report.scan_lo) < 0
        assert ls.criterion_G(m, report.scan_hi) < 0
        assert report.scan_hi == pytest.approx(report.dimension, abs=1e-12)


def test_classify_max_at_zero_for_critical_two_branch():
    # at the exact threshold G touches zero only at t = 0, the parameter of
    # the measure of maximal entropy
    m = model(E, math.exp(ls.critical_ratio()))
    res = minimize_scalar(lambda t: -ls.criterion_G(m, t),
                          bounds=(-1.0, 0.5), method="bounded",
                          options={"xatol": 1e-12})
    assert abs(res.x) < 1e-6
    assert abs(-res.fun) < 1e-8


# ---------------------------------------------------------------------------
# slope criterion (closed form)
# ---------------------------------------------------------------------------

def test_slope_criterion_paper_maps():
    assert ls.corollary_c_check(ls.LinearCookieCutter((E, math.exp(10)))).concave
    res45 = ls.corollary_c_check(ls.LinearCookieCutter((E, math.exp(45))))
    assert not res45.concave
    assert res45.worst_lhs > 1
    # 12.2733202 is the threshold's 7-decimal truncation: still concave
    assert ls.corollary_c_check(ls.LinearCookieCutter((E, math.exp(12.2733202)))).concave
    crit = ls.corollary_c_check(ls.LinearCookieCutter((E, math.exp(ls.critical_ratio()))))
    assert crit.concave and crit.boundary


def test_slope_criterion_degenerate():
    res = ls.corollary_c_check(ls.LinearCookieCutter((2, 2)))
    assert res.degenerate and res.concave
    assert res.worst_lhs is None


def test_slope_criterion_equals_scaled_variance_criterion():
    # lhs - 1 = G / alpha^2 pointwise
    cookie = ls.LinearCookieCutter((E, math.exp(2), math.exp(8)))
    m = ls.LinearPressureModel(cookie)
    res = ls.corollary_c_check(cookie)
    g = ls.criterion_G(m, res.worst_t)
    assert res.worst_lhs - 1.0 == pytest.approx(g / m.alpha(res.worst_t) ** 2, rel=1e-9)


# ---------------------------------------------------------------------------
# unconditional concavity left of the peak
# ---------------------------------------------------------------------------

def test_left_concavity_paper_maps():
    for slopes in ((E, math.exp(45)), (2, 4), (E, math.exp(2), math.exp(16))):
        assert ls.verify_left_concavity(model(*slopes), samples=200)
