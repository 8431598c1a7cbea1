"""Thermodynamic quantities of expanding full-branch interval maps.

Sign convention used everywhere in this package: for branch slope
magnitudes m_i > 1 the pressure of the log-derivative potential is

    P(t) = log sum_i m_i ** (-t),

so that

    alpha(t)  = -P'(t) = sum_i p_i(t) log m_i  > 0,
    sigma2(t) =  P''(t)                        >= 0,
    p_i(t)    = m_i**(-t) / sum_j m_j**(-t)    (equilibrium weights),

alpha is strictly decreasing from max log m_i (t -> -inf) down to
min log m_i (t -> +inf), the entropy of the equilibrium state is
h(t) = P(t) + t * alpha(t), and the dimension spectrum evaluates to
L(alpha(t)) = h(t) / alpha(t).  The repeller dimension t_d is the unique
positive root of P.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np

from ._atoms import AtomMeasure
from .errors import (
    BracketingError,
    DegenerateMapError,
    DomainError,
    InvalidMapError,
)

_PARTITION_SLACK = 1e-12


@dataclass(frozen=True)
class LinearCookieCutter:
    """A linear full-branch expanding map, recorded as slope magnitudes.

    The i-th branch is affine with |T'| = slopes[i] on an interval of
    length 1/slopes[i]; the branch intervals fit disjointly in [0, 1],
    hence sum(1/m_i) <= 1.  Every derived quantity depends only on the
    multiset of slopes.
    """

    slopes: tuple[float, ...]

    def __init__(self, slopes):
        object.__setattr__(self, "slopes", tuple(float(m) for m in slopes))
        if len(self.slopes) < 2:
            raise InvalidMapError("need at least two branches")
        for m in self.slopes:
            if not (m > 1.0) or not math.isfinite(m):
                raise InvalidMapError(f"slope magnitude {m!r} must be finite and > 1")
        if sum(1.0 / m for m in self.slopes) > 1.0 + _PARTITION_SLACK:
            raise InvalidMapError(
                "branch domains of lengths 1/m_i do not fit in [0, 1] "
                f"(sum of reciprocals = {sum(1.0 / m for m in self.slopes)!r})"
            )

    @property
    def n(self) -> int:
        return len(self.slopes)

    @property
    def log_slopes(self) -> tuple[float, ...]:
        return tuple(math.log(m) for m in self.slopes)

    @property
    def degenerate(self) -> bool:
        return min(self.slopes) == max(self.slopes)


@dataclass(frozen=True)
class ThermoPoint:
    """One sample of the thermodynamic profile at parameter t."""

    t: float
    pressure: float
    alpha: float
    sigma2: float
    entropy: float
    spectrum_value: float
    degenerate: bool = False


@dataclass(frozen=True)
class SpectrumDomain:
    alpha_min: float
    alpha_max: float
    alpha_M: float      # exponent of the measure of maximal entropy (t = 0)
    t_d: float          # positive root of the pressure
    alpha_d: float      # exponent at t_d; location of the spectrum maximum
    dimension: float    # equals t_d


@dataclass(frozen=True)
class SpectrumCurve:
    """Samples of (alpha, L) ordered by strictly increasing alpha."""

    points: tuple[ThermoPoint, ...]
    domain: SpectrumDomain
    source: dict = field(default_factory=dict)
    degenerate: bool = False

    @property
    def samples(self) -> tuple[tuple[float, float], ...]:
        return tuple((p.alpha, p.spectrum_value) for p in self.points)

    @property
    def alphas(self) -> np.ndarray:
        return np.array([p.alpha for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p.spectrum_value for p in self.points])


class PressureModel(ABC):
    """The contract "given t, return P(t), alpha(t) = -P', sigma2(t) = P''"."""

    @abstractmethod
    def pressure(self, t: float) -> float: ...

    @abstractmethod
    def alpha(self, t: float) -> float: ...

    @abstractmethod
    def sigma2(self, t: float) -> float: ...

    @abstractmethod
    def sigma2_prime(self, t: float) -> float:
        """d sigma2 / dt, i.e. P'''(t)."""

    def entropy(self, t: float) -> float:
        """h(t) = P(t) + t * alpha(t); backends may evaluate a
        cancellation-free equivalent."""
        return self.pressure(t) + t * self.alpha(t)

    @property
    @abstractmethod
    def alpha_min(self) -> float: ...

    @property
    @abstractmethod
    def alpha_max(self) -> float: ...

    @property
    @abstractmethod
    def degenerate(self) -> bool: ...

    def describe(self) -> dict:
        return {"type": type(self).__name__}

    def profile(self, ts):
        """Arrays (P, alpha, sigma2, sigma2_prime) over a t-grid."""
        ts = np.asarray(ts, dtype=float)
        out = np.array([
            [self.pressure(t), self.alpha(t), self.sigma2(t), self.sigma2_prime(t)]
            for t in ts
        ])
        return out[:, 0], out[:, 1], out[:, 2], out[:, 3]

    def scan_floor(self, t_d: float, eps: float = 1e-12) -> float:
        """Left edge for concavity scans: below this t the steepest branch
        carries all but eps of the equilibrium weight and the variance is
        exponentially negligible.  Fallback t_d - 40."""
        return t_d - 40.0


class _AtomicPressureModel(PressureModel):
    """Pressure model backed by a finite atom measure: P = log_z / norm."""

    def __init__(self, atoms: AtomMeasure, norm: float = 1.0):
        self._atoms = atoms
        self._norm = float(norm)

    def pressure(self, t):
        return self._atoms.log_z(t) / self._norm

    def alpha(self, t):
        return self._atoms.moments(t)[0] / self._norm

    def sigma2(self, t):
        return self._atoms.moments(t)[1] / self._norm

    def sigma2_prime(self, t):
        # P''' = -kappa_3 of the tilted atom distribution (per unit norm)
        return -self._atoms.moments(t)[2] / self._norm

    def entropy(self, t):
        # Shannon form of P + t*alpha: exact and nonnegative in the tails
        return self._atoms.entropy(t) / self._norm

    def profile(self, ts):
        logz, mean, var, mu3 = self._atoms.profile(ts)
        n = self._norm
        return logz / n, mean / n, var / n, -mu3 / n

    @property
    def alpha_min(self):
        return self._atoms.x_min / self._norm

    @property
    def alpha_max(self):
        return self._atoms.x_max / self._norm

    @property
    def degenerate(self):
        return self._atoms.degenerate

    def scan_floor(self, t_d, eps=1e-12):
        x = self._atoms.x
        xmax = self._atoms.x_max
        below = x[x < xmax]
        if below.size == 0:
            return t_d - 40.0
        gap = xmax - below.max()
        k = x.size - below.size
        rest = below.size
        t_lo = math.log(eps * k / rest) / gap
        return max(min(t_d - 5.0, t_lo), t_d - 1e5)


class LinearPressureModel(_AtomicPressureModel):
    """Closed-form backend for linear maps: P(t) = log sum m_i**(-t)."""

    def __init__(self, cookie: LinearCookieCutter):
        super().__init__(AtomMeasure(cookie.log_slopes), norm=1.0)
        self.map = cookie

    def describe(self):
        return {"type": "linear", "slopes": list(self.map.slopes)}


def pressure(cookie: LinearCookieCutter, t: float) -> float:
    """log sum_i m_i**(-t); strictly convex and strictly decreasing in t
    unless all slopes coincide."""
    return AtomMeasure(cookie.log_slopes).log_z(t)


def equilibrium_weights(cookie: LinearCookieCutter, t: float) -> np.ndarray:
    """Bernoulli weights p_i = m_i**(-t) / sum_j m_j**(-t)."""
    return AtomMeasure(cookie.log_slopes).tilted_weights(t)


def thermo_point(model: PressureModel, t: float) -> ThermoPoint:
    p = model.pressure(t)
    a = model.alpha(t)
    s2 = model.sigma2(t)
    h = model.entropy(t)
    return ThermoPoint(
        t=float(t),
        pressure=p,
        alpha=a,
        sigma2=s2,
        entropy=h,
        spectrum_value=h / a,
        degenerate=model.degenerate,
    )


def bowen_root(model: PressureModel, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Unique positive root of the pressure (the repeller dimension).

    Bracketed bisection to |P| < tol followed by one Newton polish,
    deterministic iteration cap.
    """
    if model.pressure(0.0) <= 0.0:
        raise BracketingError("pressure at t = 0 is not positive; malformed model")
    lo = 0.0
    hi = 1.0
    fhi = model.pressure(hi)
    expansions = 0
    while fhi > 0.0:
        hi *= 2.0
        fhi = model.pressure(hi)
        expansions += 1
        if expansions > 60:
            raise BracketingError("pressure has no positive root; model not expanding")
    if fhi == 0.0:
        return hi
    root = 0.5 * (lo + hi)
    for _ in range(max_iter):
        root = 0.5 * (lo + hi)
        f = model.pressure(root)
        if abs(f) < tol:
            break
        if f > 0.0:
            lo = root
        else:
            hi = root
    # Newton polish: P' = -alpha
    a = model.alpha(root)
    if a > 0.0:
        polished = root + model.pressure(root) / a
        if lo <= polished <= hi and abs(model.pressure(polished)) <= abs(model.pressure(root)):
            root = polished
    return root


def t_of_alpha(model: PressureModel, alpha: float, tol: float = 1e-12,
               max_iter: int = 200) -> float:
    """Invert t -> alpha(t) for alpha strictly inside (alpha_min, alpha_max)."""
    if model.degenerate:
        raise DegenerateMapError(
            "alpha(t) is constant for an equal-slope map; inversion undefined")
    if not (model.alpha_min < alpha < model.alpha_max):
        raise DomainError(
            f"alpha={alpha!r} outside the open exponent interval "
            f"({model.alpha_min!r}, {model.alpha_max!r}); the boundary values "
            "are attained only in the t -> +-inf limits")
    # alpha(t) is strictly decreasing: bracket with f(lo) > 0 > f(hi)
    lo, hi = -1.0, 1.0
    while model.alpha(lo) <= alpha:
        lo *= 2.0
        if lo < -1e7:
            raise DomainError("alpha is too close to the spectrum boundary to invert")
    while model.alpha(hi) >= alpha:
        hi *= 2.0
        if hi > 1e7:
            raise DomainError("alpha is too close to the spectrum boundary to invert")
    t = 0.5 * (lo + hi)
    for _ in range(max_iter):
        t = 0.5 * (lo + hi)
        f = model.alpha(t) - alpha
        if abs(f) < tol:
            break
        if f > 0.0:
            lo = t
        else:
            hi = t
    s2 = model.sigma2(t)
    if s2 > 0.0:
        polished = t + (model.alpha(t) - alpha) / s2
        if lo <= polished <= hi and abs(model.alpha(polished) - alpha) <= abs(model.alpha(t) - alpha):
            t = polished
    return t


def spectrum_domain(model: PressureModel) -> SpectrumDomain:
    t_d = bowen_root(model)
    return SpectrumDomain(
        alpha_min=model.alpha_min,
        alpha_max=model.alpha_max,
        alpha_M=model.alpha(0.0),
        t_d=t_d,
        alpha_d=model.alpha(t_d),
        dimension=t_d,
    )


def _solve_alpha_level(model, level, t_inside, t_outside, iters=200):
    """Bisect for t with alpha(t) = level between an inside and an outside point.

    Works for either orientation (t_outside may lie left or right of
    t_inside); `lo` tracks the inside of the level set.
    """
    lo, hi = t_inside, t_outside
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if (model.alpha(mid) - level) * (model.alpha(t_inside) - level) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_t_grid(model: PressureModel, points: int = 2001, half_width: float = 15.0,
                   boundary_gap: float = 1e-9) -> np.ndarray:
    """Default sampling grid: `points` values on [t_d - w, t_d + w], clipped
    where alpha(t) comes within `boundary_gap` of an exponent boundary.

    Built as two half-grids joined at t_d so that the dimension point is
    always sampled exactly.
    """
    t_d = bowen_root(model)
    if model.degenerate:
        return np.linspace(t_d - half_width, t_d + half_width, points)
    lo = t_d - half_width
    hi = t_d + half_width
    gap = min(boundary_gap, 0.25 * (model.alpha_max - model.alpha_min))
    if model.alpha(lo) > model.alpha_max - gap:
        lo = _solve_alpha_level(model, model.alpha_max - gap, t_d, lo)
    if model.alpha(hi) < model.alpha_min + gap:
        hi = _solve_alpha_level(model, model.alpha_min + gap, t_d, hi)
    n_left = points // 2 + 1
    n_right = points - n_left + 1
    left = np.linspace(lo, t_d, n_left)
    right = np.linspace(t_d, hi, n_right)
    return np.concatenate([left, right[1:]])


def sample_spectrum(model: PressureModel, t_grid) -> SpectrumCurve:
    """Evaluate (alpha(t), L(alpha(t))) over the grid, reordered by alpha.

    Equal-slope maps collapse to the single point (log m, log n / log m)
    and the curve is flagged degenerate.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise DomainError("t grid must be a nonempty 1-d sequence")
    if np.any(np.diff(t_grid) < 0):
        raise DomainError("t grid must be sorted")
    dom = spectrum_domain(model)
    if model.degenerate:
        mid = float(t_grid[t_grid.size // 2])
        return SpectrumCurve(points=(thermo_point(model, mid),), domain=dom,
                             source=model.describe(), degenerate=True)
    P, a, s2, _ = model.profile(t_grid)
    h = np.array([model.entropy(float(t)) for t in t_grid])
    pts = [ThermoPoint(float(t), float(p), float(al), float(v), float(hh), float(hh / al))
           for t, p, al, v, hh in zip(t_grid, P, a, s2, h)]
    pts.sort(key=lambda q: q.alpha)
    deduped = []
    for q in pts:
        if deduped and q.alpha == deduped[-1].alpha:
            continue
        deduped.append(q)
    return SpectrumCurve(points=tuple(deduped), domain=dom,
                         source=model.describe(), degenerate=False)
