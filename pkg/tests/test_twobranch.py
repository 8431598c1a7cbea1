import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import lyapspec as ls
from lyapspec import thermo, twobranch
from lyapspec.errors import (
    DomainError,
    InconclusiveError,
    InvalidMapError,
    PreconditionError,
)

E = math.e


def tb(log_a, log_b):
    return ls.TwoBranchMap(math.exp(log_a), math.exp(log_b))


def test_map_validation():
    with pytest.raises(InvalidMapError):
        ls.TwoBranchMap(4, 2)
    with pytest.raises(InvalidMapError):
        ls.TwoBranchMap(2, 2)
    with pytest.raises(InvalidMapError):
        ls.TwoBranchMap(1.2, 1.3)  # domains overlap


# ---------------------------------------------------------------------------
# closed-form spectrum and entropy
# ---------------------------------------------------------------------------

def test_spectrum_endpoints_vanish():
    m = tb(1, 10)
    assert ls.spectrum_closed_form(m, m.log_a) == 0.0
    assert ls.spectrum_closed_form(m, m.log_b) == 0.0


def test_spectrum_midpoint_extreme_map():
    m = tb(1, 45)
    assert ls.spectrum_closed_form(m, 23.0) == pytest.approx(math.log(2) / 23, abs=1e-12)


def test_entropy_values():
    m = tb(1, 3)
    assert ls.entropy_of_alpha(m, m.alpha_M) == pytest.approx(math.log(2), abs=1e-14)
    assert ls.entropy_of_alpha(m, 2.0) == pytest.approx(math.log(2), abs=1e-14)  # alpha_M = 2
    assert ls.entropy_of_alpha(m, m.log_a) == 0.0


@settings(deadline=None, max_examples=40)
@given(st.floats(0.1, 3.0), st.floats(0.2, 40.0), st.floats(0.01, 0.99))
def test_entropy_symmetry(log_a, spread, frac):
    assume(math.exp(-log_a) + math.exp(-(log_a + spread)) <= 1.0)
    m = tb(log_a, log_a + spread)
    alpha = m.log_a + frac * m.log_ratio
    mirrored = m.log_a + m.log_b - alpha
    assert ls.entropy_of_alpha(m, alpha) == pytest.approx(
        ls.entropy_of_alpha(m, mirrored), rel=1e-12, abs=1e-12)


def test_closed_form_agrees_with_inversion_route():
    # 500 interior exponents per map, ratios up to 50
    for ratio in (1.5, 5.0, 12.27, 30.0, 50.0):
        m = tb(1.0, ratio)
        pm = ls.LinearPressureModel(m.as_cookie())
        alphas = np.linspace(m.log_a, m.log_b, 502)[1:-1]
        for alpha in alphas:
            t = thermo.t_of_alpha(pm, alpha)
            via_t = (pm.pressure(t) + t * alpha) / alpha
            assert abs(via_t - ls.spectrum_closed_form(m, alpha)) < 1e-9


# ---------------------------------------------------------------------------
# entropy derivatives
# ---------------------------------------------------------------------------

def test_derivative_anchor_values():
    m = tb(1, 3)
    assert ls.entropy_derivative(m, m.alpha_M, 1) == pytest.approx(0.0, abs=1e-13)
    assert ls.entropy_derivative(m, m.alpha_M, 2) == pytest.approx(-1.0, abs=1e-12)
    assert ls.entropy_derivative(m, m.alpha_M, 3) == pytest.approx(0.0, abs=1e-12)
    # plug alpha = 1.5 into the second-derivative formula
    assert ls.entropy_derivative(m, 1.5, 2) == pytest.approx(-(0.5) * (1 / 0.5 + 1 / 1.5), abs=1e-13)


def test_equilibrium_weights_match_closed_form():
    # at t_alpha the Bernoulli weights are ((log b - alpha)/D, (alpha - log a)/D)
    m = tb(1, 7)
    pm = ls.LinearPressureModel(m.as_cookie())
    for alpha in np.linspace(m.log_a + 0.5, m.log_b - 0.5, 7):
        t = thermo.t_of_alpha(pm, alpha)
        w = ls.equilibrium_weights(m.as_cookie(), t)
        d = m.log_ratio
        assert w[0] == pytest.approx((m.log_b - alpha) / d, abs=1e-10)
        assert w[1] == pytest.approx((alpha - m.log_a) / d, abs=1e-10)


def test_first_derivative_is_dual_parameter():
    # dh/dalpha equals t_alpha, the Legendre-dual parameter
    m = tb(1, 7)
    pm = ls.LinearPressureModel(m.as_cookie())
    for alpha in np.linspace(m.log_a + 0.3, m.log_b - 0.3, 9):
        assert ls.entropy_derivative(m, alpha, 1) == pytest.approx(
            thermo.t_of_alpha(pm, alpha), abs=1e-9)


def test_derivative_ladder_finite_differences():
    # step-by-step: a central difference of each closed form reproduces the
    # next order (differencing the entropy itself through four orders would
    # sit below double-precision noise)
    m = tb(1, 6)
    h = 1e-4
    fns = [lambda a: ls.entropy_of_alpha(m, a)]
    fns += [lambda a, k=k: ls.entropy_derivative(m, a, k) for k in (1, 2, 3)]
    for order, fn in enumerate(fns, start=1):
        for alpha in np.linspace(m.log_a + 0.5, m.log_b - 0.5, 7):
            fd = (fn(alpha + h) - fn(alpha - h)) / (2 * h)
            exact = ls.entropy_derivative(m, alpha, order)
            assert abs(fd - exact) <= 1e-4 * max(abs(exact), 1e-6)


def test_second_derivative_shape():
    # concave profile, increasing then decreasing, global max -(2/D)^2
    m = tb(1, 9)
    alphas = np.linspace(m.log_a + 1e-3, m.log_b - 1e-3, 801)
    vals = np.array([ls.entropy_derivative(m, a, 2) for a in alphas])
    i_max = int(np.argmax(vals))
    assert alphas[i_max] == pytest.approx(m.alpha_M, abs=2 * (alphas[1] - alphas[0]))
    assert vals[i_max] <= -(2.0 / m.log_ratio) ** 2 + 1e-12
    assert np.all(np.diff(vals[:i_max]) > 0)
    assert np.all(np.diff(vals[i_max:]) < 0)
    second = np.diff(vals, 2)
    assert np.all(second < 1e-8)  # concavity of h'' itself
    assert np.all(np.array([ls.entropy_derivative(m, a, 4) for a in alphas]) < 0)


def test_derivatives_reject_boundary():
    m = tb(1, 5)
    for order in (1, 2, 3, 4):
        with pytest.raises(DomainError):
            ls.entropy_derivative(m, m.log_a, order)
        with pytest.raises(DomainError):
            ls.entropy_derivative(m, m.log_b + 0.1, order)


# ---------------------------------------------------------------------------
# spectrum slope 2 L'
# ---------------------------------------------------------------------------

def test_two_dl_midpoint_values():
    m = tb(1, 3)
    assert ls.two_dL_dalpha(m, 2.0) == pytest.approx(-math.log(2) / 2, abs=1e-12)
    wide = tb(1, 45)
    assert ls.two_dL_dalpha(wide, 23.0) == pytest.approx(-8 * math.log(2) / 46**2, abs=1e-12)


def test_two_dl_vanishes_at_spectrum_peak():
    m = tb(math.log(2), math.log(4))
    pm = ls.LinearPressureModel(m.as_cookie())
    alpha_d = pm.alpha(thermo.bowen_root(pm))
    assert ls.two_dL_dalpha(m, alpha_d) == pytest.approx(0.0, abs=1e-9)


def test_two_dl_matches_pressure_route():
    # 2 L' = -2 P(t_alpha) / alpha^2
    m = tb(1, 12)
    pm = ls.LinearPressureModel(m.as_cookie())
    for alpha in np.linspace(m.log_a + 0.4, m.log_b - 0.4, 11):
        t = thermo.t_of_alpha(pm, alpha)
        assert ls.two_dL_dalpha(m, alpha) == pytest.approx(
            -2 * pm.pressure(t) / alpha**2, rel=1e-9, abs=1e-11)


# ---------------------------------------------------------------------------
# inflection function
# ---------------------------------------------------------------------------

def test_inflection_function_signs_at_midpoint():
    # derived anchors: concave ratio-10 map has F(alpha_M) > 0, the
    # non-concave ratio-45 map has F(alpha_M) < 0
    f10 = ls.inflection_equation(tb(1, 10), 5.5)
    f45 = ls.inflection_equation(tb(1, 45), 23.0)
    assert f10 == pytest.approx(-8 * math.log(2) / 121 + (2 / 9) ** 2, abs=1e-12)
    assert f10 > 0
    assert f45 == pytest.approx(-8 * math.log(2) / 46**2 + (2 / 44) ** 2, abs=1e-12)
    assert f45 < 0


def test_inflection_function_critical_midpoint_is_zero():
    m = tb(1.0, ls.critical_ratio())
    assert ls.inflection_equation(m, m.alpha_M) == pytest.approx(0.0, abs=1e-13)


def test_inflection_sign_changes_even():
    for log_b, expected_changes in ((10, 0), (45, 2)):
        m = tb(1, log_b)
        alphas = np.linspace(m.log_a, m.log_b, 4001)[1:-1]
        vals = np.array([ls.inflection_equation(m, a) for a in alphas])
        changes = int(np.count_nonzero(np.diff(np.sign(vals)) != 0))
        assert changes == expected_changes
        assert changes % 2 == 0
        # diverges to +inf at both endpoints
        assert vals[0] > 0 and vals[-1] > 0


def test_inflection_zeros_match_spectrum_second_derivative():
    # F = -alpha * L'': same zeros, opposite signs
    m = tb(1, 45)
    pm = ls.LinearPressureModel(m.as_cookie())
    for alpha in np.linspace(5, 40, 15):
        t = thermo.t_of_alpha(pm, alpha)
        f = ls.inflection_equation(m, alpha)
        d2 = ls.d2L_dalpha2(pm, t)
        assert f == pytest.approx(-alpha * d2, rel=1e-7, abs=1e-12)


def test_inflection_boundary_raises():
    m = tb(1, 5)
    with pytest.raises(DomainError):
        ls.inflection_equation(m, m.log_b)


# ---------------------------------------------------------------------------
# threshold verdict and bifurcation slope
# ---------------------------------------------------------------------------

def test_threshold_verdicts():
    assert ls.theorem_a_check(tb(1, 10)).concave
    assert not ls.theorem_a_check(tb(1, 45)).concave
    crit = ls.theorem_a_check(tb(1.0, ls.critical_ratio()))
    assert crit.concave and crit.boundary


def test_threshold_flips_just_above():
    a = E
    b_star = ls.bifurcation_slope(a)
    assert not ls.theorem_a_check(ls.TwoBranchMap(a, b_star * (1 + 1e-6))).concave
    assert ls.theorem_a_check(ls.TwoBranchMap(a, b_star * (1 - 1e-6))).concave


def test_bifurcation_slope_values():
    assert math.log(ls.bifurcation_slope(E)) == pytest.approx(12.2733202, abs=1e-6)
    assert math.log(ls.bifurcation_slope(E**2)) == pytest.approx(2 * 12.2733202535, abs=1e-6)
    with pytest.raises(InvalidMapError):
        ls.bifurcation_slope(1.0)


def test_critical_ratio_formula():
    s = math.sqrt(2 * math.log(2))
    assert ls.critical_ratio() == (s + 1) / (s - 1)


# ---------------------------------------------------------------------------
# transversality
# ---------------------------------------------------------------------------

def test_transversality_at_detected_inflections():
    cookie = ls.LinearCookieCutter((E, math.exp(45)))
    report = ls.classify(ls.LinearPressureModel(cookie), map_hint=cookie)
    m = tb(1, 45)
    assert len(report.inflections) == 2
    for pt in report.inflections:
        cert = ls.transversality_check(m, pt.alpha_star)
        assert cert > 1e-8
        assert cert == pt.transversality


def test_transversality_midpoint_inconclusive():
    m = tb(1.0, ls.critical_ratio())
    with pytest.raises(InconclusiveError):
        ls.transversality_check(m, m.alpha_M)


def test_transversality_non_root_rejected():
    m = tb(1, 45)
    with pytest.raises(PreconditionError):
        ls.transversality_check(m, 10.0)
