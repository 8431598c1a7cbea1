"""Operation layer shared by the HTTP service and the CLI.

Builds pressure models from map configurations and runs the four top-level
operations, returning the pydantic response models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import concavity, cylinders, thermo, twobranch
from .errors import InvalidMapError
from .schemas import (
    BifurcationResponse,
    BowenResponse,
    ClassifyResponse,
    CorollaryCInfo,
    DomainInfo,
    InflectionInfo,
    MapConfig,
    SpectrumPoint,
    SpectrumResponse,
    TheoremAInfo,
)

DEFAULT_DEPTH_TWO_BRANCH = 10
DEFAULT_DEPTH_MANY_BRANCH = 7


@dataclass
class BuiltModel:
    model: thermo.PressureModel
    cookie: thermo.LinearCookieCutter | None = None
    two_branch: twobranch.TwoBranchMap | None = None
    table: cylinders.CylinderTable | None = None


def default_depth(n_branches: int) -> int:
    return DEFAULT_DEPTH_TWO_BRANCH if n_branches == 2 else DEFAULT_DEPTH_MANY_BRANCH


def build_model(cfg: MapConfig) -> BuiltModel:
    """Instantiate the pressure model described by a map configuration.

    Negative branch slopes are accepted and reduced to their magnitudes
    immediately; only |T'| enters any formula.
    """
    if cfg.slopes is not None or cfg.log_slopes is not None:
        if cfg.slopes is not None:
            mags = [abs(m) for m in cfg.slopes]
        else:
            try:
                mags = [math.exp(v) for v in cfg.log_slopes]
            except OverflowError:
                raise InvalidMapError(
                    f"log slopes {cfg.log_slopes!r} overflow the float range") from None
        cookie = thermo.LinearCookieCutter(mags)
        built = BuiltModel(model=thermo.LinearPressureModel(cookie), cookie=cookie)
        if cookie.n == 2 and not cookie.degenerate:
            built.two_branch = twobranch.TwoBranchMap(min(mags), max(mags))
        return built
    if cfg.two_branch is not None:
        a, b = sorted(abs(v) for v in cfg.two_branch)
        tb = twobranch.TwoBranchMap(a, b)
        cookie = tb.as_cookie()
        return BuiltModel(model=thermo.LinearPressureModel(cookie),
                          cookie=cookie, two_branch=tb)
    branches, label = cylinders.branch_family(cfg.family, cfg.params)
    depth = cfg.depth if cfg.depth is not None else default_depth(len(branches))
    table = cylinders.build_cylinders(branches, depth, label=label)
    return BuiltModel(model=cylinders.model_from_cylinders(table), table=table)


def _domain_info(dom: thermo.SpectrumDomain) -> DomainInfo:
    return DomainInfo(alpha_min=dom.alpha_min, alpha_max=dom.alpha_max,
                      alpha_M=dom.alpha_M, t_d=dom.t_d, alpha_d=dom.alpha_d,
                      dimension=dom.dimension)


def run_spectrum(cfg: MapConfig, grid="auto") -> SpectrumResponse:
    built = build_model(cfg)
    if grid == "auto":
        ts = thermo.default_t_grid(built.model)
    else:
        lo, hi, count = grid
        ts = np.linspace(float(lo), float(hi), int(count))
    curve = thermo.sample_spectrum(built.model, ts)
    samples = [SpectrumPoint(t=p.t, alpha=p.alpha, pressure=p.pressure,
                             sigma2=p.sigma2, entropy=p.entropy,
                             L=p.spectrum_value,
                             G=2.0 * p.sigma2 * p.pressure - p.alpha ** 2)
               for p in curve.points]
    return SpectrumResponse(domain=_domain_info(curve.domain),
                            degenerate=curve.degenerate,
                            source=curve.source, samples=samples)


def run_classify(cfg: MapConfig, tol: float = concavity.TOL_CLASSIFY) -> ClassifyResponse:
    built = build_model(cfg)
    report = concavity.classify(built.model, tol=tol,
                                map_hint=built.two_branch or built.cookie)
    verdict_bools = [report.concave]

    thm = None
    if built.two_branch is not None:
        v = twobranch.theorem_a_check(built.two_branch)
        thm = TheoremAInfo(ratio=v.ratio, critical_ratio=v.critical_ratio,
                           concave=v.concave, boundary=v.boundary, margin=v.margin)
        verdict_bools.append(v.concave)

    coro = None
    if built.cookie is not None:
        c = concavity.corollary_c_check(built.cookie, tol=tol)
        coro = CorollaryCInfo(concave=c.concave, boundary=c.boundary,
                              degenerate=c.degenerate, worst_t=c.worst_t,
                              worst_lhs=c.worst_lhs)
        verdict_bools.append(c.concave)

    return ClassifyResponse(
        verdict=report.verdict,
        degenerate=report.degenerate,
        worst_margin=report.worst_margin,
        worst_t=report.worst_t,
        dimension=report.dimension,
        scan_t_lo=None if math.isnan(report.scan_lo) else report.scan_lo,
        scan_t_hi=None if math.isnan(report.scan_hi) else report.scan_hi,
        inflections=[InflectionInfo(t=p.t_star, alpha=p.alpha_star,
                                    transversality=p.transversality)
                     for p in report.inflections],
        two_branch_threshold=thm,
        slope_criterion=coro,
        agreement=all(v == verdict_bools[0] for v in verdict_bools),
    )


def run_bifurcation(a: float, rel_offset: float = 1e-6) -> BifurcationResponse:
    if not (a > 1.0 and math.isfinite(a)):
        raise InvalidMapError(f"slope must exceed 1, got {a!r}")
    ratio = twobranch.critical_ratio()
    b_star = twobranch.bifurcation_slope(a)
    log_b_star = ratio * math.log(a)

    def _verdict(b):
        cookie = thermo.LinearCookieCutter((a, b))
        report = concavity.classify(thermo.LinearPressureModel(cookie),
                                    map_hint=cookie)
        return report.verdict

    below = _verdict(math.exp(log_b_star) * (1.0 - rel_offset))
    above = _verdict(math.exp(log_b_star) * (1.0 + rel_offset))
    flipped = (below != concavity.VERDICT_NON_CONCAVE
               and above == concavity.VERDICT_NON_CONCAVE)
    return BifurcationResponse(a=a, critical_ratio=ratio,
                               log_b_star=log_b_star, b_star=b_star,
                               verdict_below=below, verdict_above=above,
                               flip_verified=flipped)


def run_bowen(cfg: MapConfig) -> BowenResponse:
    built = build_model(cfg)
    t_d = thermo.bowen_root(built.model)
    alpha_d = built.model.alpha(t_d)
    out = BowenResponse(t_d=t_d, alpha_d=alpha_d, L_at_alpha_d=t_d)
    if built.table is not None and built.table.depth >= 2:
        # depth-stability note: shift of the root one level down
        branches, _ = cylinders.branch_family(cfg.family, cfg.params)
        shallower = cylinders.build_cylinders(branches, built.table.depth - 1,
                                              anchor=built.table.anchor)
        t_d_prev = thermo.bowen_root(cylinders.model_from_cylinders(shallower))
        out = BowenResponse(t_d=t_d, alpha_d=alpha_d, L_at_alpha_d=t_d,
                            depth=built.table.depth,
                            depth_stability=abs(t_d - t_d_prev))
    return out
