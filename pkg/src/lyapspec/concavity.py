"""Concavity classification of the dimension spectrum.

Everything rests on the variance criterion

    G(t) = 2 * sigma2(t) * P(t) - alpha(t)^2,

whose sign equals the sign of d2L/dalpha2 at alpha(t):

    d2L/dalpha2 = G(t) / (sigma2(t) * alpha(t)^3).

For t >= t_d the pressure is <= 0 and G < 0 automatically, so the spectrum
is always concave on [alpha_min, alpha_d]; non-concavity can only occur for
t < t_d.  Since G'(t) = 2 * sigma2'(t) * P(t), the interior local maxima of
G on the scan window are exactly the zeros of sigma2' (the third pressure
derivative) — locating those zeros makes the scan robust against
arbitrarily narrow violations near the concavity threshold, which a plain
grid would miss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMapError, InconclusiveError
from .thermo import LinearCookieCutter, LinearPressureModel, PressureModel, bowen_root
from .twobranch import TwoBranchMap, transversality_check

#: worst-case G within +-TOL of zero classifies as the boundary verdict
TOL_CLASSIFY = 1e-9

VERDICT_CONCAVE = "concave"
VERDICT_BOUNDARY = "concave_boundary"
VERDICT_NON_CONCAVE = "non_concave"


@dataclass(frozen=True)
class InflectionPoint:
    t_star: float
    alpha_star: float
    transversality: float | None = None
    bracket: tuple[float, float] = (math.nan, math.nan)


@dataclass(frozen=True)
class ConcavityReport:
    verdict: str
    inflections: tuple[InflectionPoint, ...]
    worst_margin: float          # max of G over the scan
    worst_t: float
    scan_lo: float
    scan_hi: float
    dimension: float
    degenerate: bool = False

    @property
    def concave(self) -> bool:
        return self.verdict != VERDICT_NON_CONCAVE


@dataclass(frozen=True)
class CorollaryCResult:
    concave: bool
    worst_t: float
    worst_lhs: float | None
    boundary: bool = False
    degenerate: bool = False


def criterion_G(model: PressureModel, t: float) -> float:
    """2 sigma2(t) P(t) - alpha(t)^2; the spectrum is locally concave at
    alpha(t) iff G(t) <= 0."""
    return 2.0 * model.sigma2(t) * model.pressure(t) - model.alpha(t) ** 2


def d2L_dalpha2(model: PressureModel, t: float) -> float:
    """Exact second derivative of the spectrum in the exponent variable,

        (alpha^2 - 2 sigma2 P) / (-sigma2 alpha^3) = G / (sigma2 alpha^3).

    Where the variance underflows to zero (far tails) the true value
    diverges to -inf, which is returned explicitly.
    """
    if model.degenerate:
        raise DegenerateMapError("second derivative undefined for equal-slope maps")
    a = model.alpha(t)
    s2 = model.sigma2(t)
    g = 2.0 * s2 * model.pressure(t) - a * a
    denom = s2 * a ** 3
    if denom == 0.0:
        return -math.inf if g < 0.0 else math.inf
    return g / denom


def _bisect_sign_change(f, lo, hi, flo, fhi, xtol, max_iter=200):
    """Refine a bracketed sign change; returns (root, final_bracket)."""
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi or (hi - lo) < xtol:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid, (lo, hi)
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return 0.5 * (lo + hi), (lo, hi)


def _scan_candidates(model: PressureModel, grid_points: int = 4001):
    """Candidate t values for extrema and sign changes of G on (t_lo, t_d].

    Uniform grid, locally refined x8 where |G| is small, augmented with all
    zeros of sigma2' found on the window (the exact interior maxima of G)
    and with t = 0 when it lies inside the window.
    Returns (t_d, t_lo, ts, G) with ts sorted.
    """
    t_d = bowen_root(model)
    t_lo = model.scan_floor(t_d)
    for _ in range(8):
        if criterion_G(model, t_lo) < 0.0:
            break
        t_lo = t_d - 2.0 * (t_d - t_lo)
    else:
        raise RuntimeError("could not find a negative left edge for the scan")

    ts = np.linspace(t_lo, t_d, grid_points)
    P, a, s2, s2p = model.profile(ts)
    G = 2.0 * s2 * P - a * a

    extras = []
    typical = np.median(np.abs(G))
    small = np.abs(G) < 0.05 * typical
    if small.any():
        idx = np.flatnonzero(small)
        lo_idx = np.clip(idx - 1, 0, ts.size - 1)
        hi_idx = np.clip(idx + 1, 0, ts.size - 1)
        for i, j in zip(lo_idx, hi_idx):
            if j > i:
                extras.append(np.linspace(ts[i], ts[j], 8 * (j - i) + 1))

    # zeros of sigma2' bracket the interior maxima of G
    crit = []
    sign = np.sign(s2p)
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    for i in flips:
        root, _ = _bisect_sign_change(
            model.sigma2_prime, float(ts[i]), float(ts[i + 1]),
            float(s2p[i]), float(s2p[i + 1]),
            xtol=1e-13 * max(1.0, abs(ts[i])))
        crit.append(root)
    if t_lo < 0.0 < t_d:
        crit.append(0.0)

    if extras or crit:
        cand = np.unique(np.concatenate([ts] + extras + [np.asarray(crit)]))
        P, a, s2, _ = model.profile(cand)
        G = 2.0 * s2 * P - a * a
        ts = cand
    return t_d, t_lo, ts, G


def classify(model: PressureModel, tol: float = TOL_CLASSIFY,
             grid_points: int = 4001, map_hint=None) -> ConcavityReport:
    """Scan G over t < t_d, refine every sign change by bisection and
    report the verdict with located inflection points.

    t > t_d is never scanned for violations (G < 0 there unconditionally).
    For two-branch maps (signalled through `map_hint`) each inflection off
    the midpoint exponent carries a transversality certificate.
    """
    if model.degenerate:
        a = model.alpha(0.0)
        return ConcavityReport(
            verdict=VERDICT_CONCAVE, inflections=(),
            worst_margin=-a * a, worst_t=0.0,
            scan_lo=math.nan, scan_hi=math.nan,
            dimension=bowen_root(model), degenerate=True)

    t_d, t_lo, ts, G = _scan_candidates(model, grid_points)
    i_worst = int(np.argmax(G))
    worst = float(G[i_worst])
    worst_t = float(ts[i_worst])

    roots = []
    sign = np.sign(G)
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    g_of = lambda t: criterion_G(model, t)
    for i in flips:
        a_here = model.alpha(float(ts[i]))
        root, bracket = _bisect_sign_change(
            g_of, float(ts[i]), float(ts[i + 1]), float(G[i]), float(G[i + 1]),
            xtol=1e-13 * max(1.0, abs(ts[i]), a_here))
        roots.append((root, bracket))

    if worst > tol:
        verdict = VERDICT_NON_CONCAVE
    elif worst >= -tol:
        verdict = VERDICT_BOUNDARY
    else:
        verdict = VERDICT_CONCAVE

    inflections = []
    if verdict == VERDICT_NON_CONCAVE:
        if len(roots) == 0 or len(roots) % 2 != 0:
            raise RuntimeError(
                f"scan found {len(roots)} sign changes for a non-concave "
                "spectrum; expected a positive even count")
        tb = _two_branch_hint(model, map_hint)
        for root, bracket in roots:
            astar = model.alpha(root)
            cert = None
            if tb is not None:
                try:
                    cert = transversality_check(tb, astar)
                except InconclusiveError:
                    cert = None
            inflections.append(InflectionPoint(
                t_star=root, alpha_star=astar,
                transversality=cert, bracket=bracket))

    return ConcavityReport(
        verdict=verdict, inflections=tuple(inflections),
        worst_margin=worst, worst_t=worst_t,
        scan_lo=t_lo, scan_hi=t_d, dimension=t_d)


def _two_branch_hint(model, map_hint):
    if isinstance(map_hint, TwoBranchMap):
        return map_hint
    cookie = map_hint
    if cookie is None and isinstance(model, LinearPressureModel):
        cookie = model.map
    if isinstance(cookie, LinearCookieCutter) and cookie.n == 2 and not cookie.degenerate:
        return TwoBranchMap(min(cookie.slopes), max(cookie.slopes))
    return None


def corollary_c_check(cookie: LinearCookieCutter, tol: float = TOL_CLASSIFY,
                      grid_points: int = 4001) -> CorollaryCResult:
    """Closed-form slope criterion for linear maps:

        lhs(t) = 2 P(t) * (sigma2(t) / alpha(t)^2)
               = 2 log(sum m^-t) * [ (sum m^-t (log m)^2)(sum m^-t)
                                     / (sum m^-t log m)^2  -  1 ],

    and the spectrum is concave iff lhs(t) <= 1 everywhere.  Violations
    require positive pressure, so scanning (t_lo, t_d] is exhaustive.
    Since lhs - 1 = G / alpha^2 this agrees with `classify` by
    construction; both are tested against each other as an oracle pair.
    """
    if cookie.degenerate:
        return CorollaryCResult(concave=True, worst_t=0.0, worst_lhs=None,
                                degenerate=True)
    model = LinearPressureModel(cookie)
    _, _, ts, G = _scan_candidates(model, grid_points)
    _, a, _, _ = model.profile(ts)
    lhs = 1.0 + G / (a * a)
    i = int(np.argmax(lhs))
    worst = float(lhs[i])
    return CorollaryCResult(
        concave=worst <= 1.0 + tol,
        worst_t=float(ts[i]),
        worst_lhs=worst,
        boundary=abs(worst - 1.0) <= tol,
    )


def verify_left_concavity(model: PressureModel, samples: int = 200,
                          span: float = 15.0, tol: float = 1e-12) -> bool:
    """Check the unconditional half of the variance criterion: the spectrum
    is concave on [alpha_min, alpha_d], i.e. d2L/dalpha2 <= 0 for every
    t > t_d."""
    t_d = bowen_root(model)
    ts = t_d + span * (np.arange(1, samples + 1) / samples)
    return all(d2L_dalpha2(model, float(t)) <= tol for t in ts)
