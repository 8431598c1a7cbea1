"""Cylinder-sum pressure approximation for nonlinear expanding maps.

A map is supplied branch by branch: each branch carries its interval, the
forward map, the derivative magnitude and the inverse branch as callables.
Level-n cylinders are represented by one point each (inverse-branch
composition applied to a fixed anchor), the log-derivative is accumulated
along the forward orbit, and

    P_n(t) = (1/n) log sum_w exp(-t * S_w)

is a log-sum-exp over the cylinder sums.  On linear maps P_n reproduces the
closed-form pressure exactly at every depth (the multinomial identity); for
C^{1+eps} maps with bounded distortion the depth differences decay
geometrically, which `convergence_report` records without asserting.

No rigorous error bars are produced: the module provides convergence
diagnostics, not certified enclosures.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ._atoms import AtomMeasure
from .errors import CylinderBudgetError, InvalidMapError
from .thermo import _AtomicPressureModel

_ONTO_TOL = 1e-12
DEFAULT_BUDGET = 2 ** 20


@dataclass(frozen=True)
class BranchSpec:
    """One full branch of an expanding map.

    `forward` maps `interval` onto [0, 1]; `derivative` is |T'| on the
    interval; `inverse` maps [0, 1] back onto the interval.  The declared
    expansion margin delta must satisfy |T'| >= 1 + delta.
    """

    interval: tuple[float, float]
    forward: Callable[[float], float]
    derivative: Callable[[float], float]
    inverse: Callable[[float], float]
    increasing: bool = True
    expansion_margin: float = 0.0


def validate_branches(branches) -> None:
    """Check the full-branch contract: endpoint images within 1e-12 of
    {0, 1}, expansion above the declared margin, intervals with pairwise
    disjoint interiors inside [0, 1]."""
    if len(branches) < 2:
        raise InvalidMapError("need at least two branches")
    for br in branches:
        l, r = br.interval
        if not (0.0 <= l < r <= 1.0):
            raise InvalidMapError(f"branch interval {br.interval!r} invalid")
        lo_img, hi_img = br.forward(l), br.forward(r)
        if not br.increasing:
            lo_img, hi_img = hi_img, lo_img
        if abs(lo_img) > _ONTO_TOL or abs(hi_img - 1.0) > _ONTO_TOL:
            raise InvalidMapError(
                f"branch on {br.interval!r} does not map onto [0, 1] "
                f"(endpoint images {lo_img!r}, {hi_img!r})")
        if br.expansion_margin <= 0.0:
            raise InvalidMapError("declared expansion margin must be positive")
        for u in np.linspace(l, r, 17):
            if br.derivative(float(u)) < 1.0 + 0.5 * br.expansion_margin:
                raise InvalidMapError(
                    f"derivative magnitude drops to {br.derivative(float(u))!r} "
                    f"at x={u!r}; expansion margin violated")
    ivs = sorted(br.interval for br in branches)
    for (l1, r1), (l2, r2) in zip(ivs, ivs[1:]):
        if l2 < r1 - 1e-15:
            raise InvalidMapError(f"branch intervals {(l1, r1)} and {(l2, r2)} overlap")


@dataclass(frozen=True)
class CylinderTable:
    """All level-`depth` cylinder representatives and their sums
    S_w = sum_{k<depth} log |T'(T^k x_w)|, in lexicographic word order."""

    depth: int
    n_branches: int
    anchor: float
    reps: np.ndarray
    sums: np.ndarray
    label: dict = field(default_factory=dict)


def max_depth_for_budget(n_branches: int, budget: int = DEFAULT_BUDGET) -> int:
    return int(math.floor(math.log(budget) / math.log(n_branches)))


def build_cylinders(branches, depth: int, anchor: float = 0.5,
                    budget: int = DEFAULT_BUDGET, label: dict | None = None) -> CylinderTable:
    """Enumerate all words of length `depth`; the representative of a word
    is the inverse-branch composition applied to the anchor, which lands
    inside the cylinder without any periodic-point solving."""
    validate_branches(branches)
    if depth < 1:
        raise InvalidMapError("depth must be >= 1")
    k = len(branches)
    if k ** depth > budget:
        raise CylinderBudgetError(
            f"{k}^{depth} cylinder entries exceed the budget of {budget}; "
            f"maximal affordable depth is {max_depth_for_budget(k, budget)}",
            suggested_depth=max_depth_for_budget(k, budget))
    reps = np.empty(k ** depth)
    sums = np.empty(k ** depth)
    for i, word in enumerate(itertools.product(range(k), repeat=depth)):
        x = anchor
        for idx in reversed(word):
            x = branches[idx].inverse(x)
        reps[i] = x
        s = 0.0
        for idx in word:
            br = branches[idx]
            s += math.log(br.derivative(x))
            x = br.forward(x)
        sums[i] = s
    return CylinderTable(depth=depth, n_branches=k, anchor=anchor,
                         reps=reps, sums=sums, label=dict(label or {}))


def pressure_approx(table: CylinderTable, t: float) -> float:
    """(1/n) log sum_w exp(-t S_w), max-shifted."""
    return AtomMeasure(table.sums).log_z(t) / table.depth


class CylinderPressureModel(_AtomicPressureModel):
    """Pressure model whose alpha and sigma2 are the exact t-derivatives of
    the cylinder pressure, so convexity and monotone alpha hold by
    construction and the model plugs directly into the concavity scan."""

    def __init__(self, table: CylinderTable):
        super().__init__(AtomMeasure(table.sums), norm=float(table.depth))
        self.table = table

    def describe(self):
        d = {"type": "cylinder", "depth": self.table.depth,
             "branches": self.table.n_branches}
        d.update(self.table.label)
        return d


def model_from_cylinders(table: CylinderTable) -> CylinderPressureModel:
    return CylinderPressureModel(table)


@dataclass(frozen=True)
class ConvergenceRow:
    t: float
    depth_lo: int
    depth_hi: int
    pressure_lo: float
    pressure_hi: float
    diff: float


def convergence_report(branches, t_probe, depths, anchor: float = 0.5,
                       budget: int = DEFAULT_BUDGET) -> list[ConvergenceRow]:
    """|P_n(t) - P_{n+1}(t)| for consecutive depths at each probe t.

    Reported, not asserted: bounded distortion makes the differences decay
    geometrically, linear maps give exact zeros.
    """
    depths = list(depths)
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise InvalidMapError("depths must be strictly increasing")
    tables = {n: build_cylinders(branches, n, anchor=anchor, budget=budget)
              for n in depths}
    rows = []
    for t in t_probe:
        for n_lo, n_hi in zip(depths, depths[1:]):
            p_lo = pressure_approx(tables[n_lo], t)
            p_hi = pressure_approx(tables[n_hi], t)
            rows.append(ConvergenceRow(t=float(t), depth_lo=n_lo, depth_hi=n_hi,
                                       pressure_lo=p_lo, pressure_hi=p_hi,
                                       diff=abs(p_lo - p_hi)))
    return rows


def anchor_sensitivity(branches, depth: int, t: float,
                       anchors: tuple[float, float] = (0.5, 1.0 / 3.0),
                       budget: int = DEFAULT_BUDGET):
    """Pressure shift under a change of anchor, next to a crude per-word
    oscillation bound on the log-derivative over the iterated cylinder.

    Returns (delta, crude_bound) with delta = |P_n(a0) - P_n(a1)| and
    crude_bound = (|t|/n) * max_w sum_k osc(log |T'|, T^k I_w), the
    oscillation estimated by sampling.
    """
    t0 = build_cylinders(branches, depth, anchor=anchors[0], budget=budget)
    t1 = build_cylinders(branches, depth, anchor=anchors[1], budget=budget)
    delta = abs(pressure_approx(t0, t) - pressure_approx(t1, t))

    k = len(branches)
    worst = 0.0
    for word in itertools.product(range(k), repeat=depth):
        lo = 0.0
        hi = 1.0
        for idx in reversed(word):
            lo = branches[idx].inverse(lo)
            hi = branches[idx].inverse(hi)
        lo, hi = min(lo, hi), max(lo, hi)
        osc = 0.0
        for idx in word:
            br = branches[idx]
            us = np.linspace(lo, hi, 9)
            vals = [math.log(br.derivative(float(u))) for u in us]
            osc += max(vals) - min(vals)
            lo, hi = br.forward(lo), br.forward(hi)
            lo, hi = min(lo, hi), max(lo, hi)
        worst = max(worst, osc)
    return delta, abs(t) * worst / depth


# ---------------------------------------------------------------------------
# Builtin branch families
# ---------------------------------------------------------------------------

def _packed_intervals(slopes):
    """Branch intervals of lengths 1/m_i packed left-to-right from 0.

    Steepest branches are packed first so that very short intervals sit
    near 0, where floating point still resolves their endpoints (a width
    of exp(-45) next to an offset of 0.37 would collapse).
    """
    slopes = sorted((float(m) for m in slopes), reverse=True)
    if len(slopes) < 2:
        raise InvalidMapError("need at least two branches")
    for m in slopes:
        if m <= 1.0:
            raise InvalidMapError(f"base slope {m!r} must exceed 1")
    if sum(1.0 / m for m in slopes) > 1.0 + _ONTO_TOL:
        raise InvalidMapError("branch domains do not fit in [0, 1]")
    out = []
    left = 0.0
    for m in slopes:
        out.append((left, left + 1.0 / m))
        left += 1.0 / m
    return slopes, out


def linear_branches(slopes) -> list[BranchSpec]:
    slopes, intervals = _packed_intervals(slopes)
    branches = []
    for m, (l, r) in zip(slopes, intervals):
        branches.append(BranchSpec(
            interval=(l, r),
            forward=(lambda x, m=m, l=l: (x - l) * m),
            derivative=(lambda x, m=m: m),
            inverse=(lambda y, m=m, l=l: l + y / m),
            expansion_margin=m - 1.0,
        ))
    return branches


def mobius_branches(slopes, c: float) -> list[BranchSpec]:
    """Moebius-perturbed linear branches: the unit-interval profile
    u -> (1+c) u / (1 + c u) composed with the affine rescale of each
    branch interval."""
    c = float(c)
    if c <= -0.9:
        raise InvalidMapError("moebius parameter must exceed -0.9")
    slopes, intervals = _packed_intervals(slopes)
    phi_min = min(1.0 + c, 1.0 / (1.0 + c))
    branches = []
    for m, (l, r) in zip(slopes, intervals):
        margin = phi_min * m - 1.0
        if margin <= 0.0:
            raise InvalidMapError(
                f"moebius perturbation c={c!r} destroys expansion on the "
                f"branch with base slope {m!r}")
        branches.append(BranchSpec(
            interval=(l, r),
            forward=(lambda x, m=m, l=l, c=c:
                     (1.0 + c) * ((x - l) * m) / (1.0 + c * ((x - l) * m))),
            derivative=(lambda x, m=m, l=l, c=c:
                        m * (1.0 + c) / (1.0 + c * ((x - l) * m)) ** 2),
            inverse=(lambda y, m=m, l=l, c=c:
                     l + (y / ((1.0 + c) - c * y)) / m),
            expansion_margin=margin,
        ))
    return branches


def _sine_profile(u, eps):
    return u + eps * math.sin(2.0 * math.pi * u) / (2.0 * math.pi)


def _sine_profile_inverse(y, eps):
    # monotone on [0,1] since psi' = 1 + eps cos >= 1 - eps > 0
    u = min(max(y, 0.0), 1.0)
    for _ in range(100):
        f = _sine_profile(u, eps) - y
        fp = 1.0 + eps * math.cos(2.0 * math.pi * u)
        step = f / fp
        u_new = min(max(u - step, 0.0), 1.0)
        if abs(u_new - u) < 1e-16:
            u = u_new
            break
        u = u_new
    return u


def sine_branches(slopes, eps: float) -> list[BranchSpec]:
    """Sine-perturbed linear branches with derivative profile
    1 + eps cos(2 pi u); the amplitude must stay below each branch's
    expansion margin."""
    eps = float(eps)
    if not (0.0 <= eps < 1.0):
        raise InvalidMapError("sine amplitude must lie in [0, 1)")
    slopes, intervals = _packed_intervals(slopes)
    branches = []
    for m, (l, r) in zip(slopes, intervals):
        margin = (1.0 - eps) * m - 1.0
        if margin <= 0.0:
            raise InvalidMapError(
                f"sine amplitude {eps!r} destroys expansion on the branch "
                f"with base slope {m!r}")
        branches.append(BranchSpec(
            interval=(l, r),
            forward=(lambda x, m=m, l=l, eps=eps: _sine_profile((x - l) * m, eps)),
            derivative=(lambda x, m=m, l=l, eps=eps:
                        m * (1.0 + eps * math.cos(2.0 * math.pi * (x - l) * m))),
            inverse=(lambda y, m=m, l=l, eps=eps:
                     l + _sine_profile_inverse(y, eps) / m),
            expansion_margin=margin,
        ))
    return branches


FAMILIES = ("linear", "mobius", "sine")


def branch_family(name: str, params: dict) -> tuple[list[BranchSpec], dict]:
    """Builtin families selectable by name, as used by the CLI and the
    service; returns (branches, label)."""
    params = dict(params or {})
    slopes = params.pop("slopes", None)
    if slopes is None:
        raise InvalidMapError("family parameters must include 'slopes'")
    if name == "linear":
        extra = {}
        branches = linear_branches(slopes)
    elif name == "mobius":
        c = params.pop("c", 0.3)
        extra = {"c": float(c)}
        branches = mobius_branches(slopes, c)
    elif name == "sine":
        eps = params.pop("eps", 0.2)
        extra = {"eps": float(eps)}
        branches = sine_branches(slopes, eps)
    else:
        raise InvalidMapError(
            f"unknown branch family {name!r}; available: {', '.join(FAMILIES)}")
    if params:
        raise InvalidMapError(f"unused family parameters: {sorted(params)}")
    label = {"family": name, "base_slopes": [float(m) for m in slopes]}
    label.update(extra)
    return branches, label
