"""Pydantic request/response models shared by the HTTP service and the CLI."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, Field, model_validator


class Tolerances(BaseModel):
    root: float = Field(1e-12, gt=0.0, description="Bowen / inversion root tolerance")
    classify: float = Field(1e-9, gt=0.0, description="concavity verdict band on G")


class MapConfig(BaseModel):
    """Exactly one map specification: raw slopes, log-scale slopes, a
    two-branch pair, or a named nonlinear branch family with parameters."""

    slopes: list[float] | None = None
    log_slopes: list[float] | None = None
    two_branch: tuple[float, float] | None = None
    family: str | None = None
    params: dict[str, Any] = Field(default_factory=dict)
    depth: int | None = Field(None, ge=1)

    @model_validator(mode="after")
    def _exactly_one_spec(self):
        given = [name for name in ("slopes", "log_slopes", "two_branch", "family")
                 if getattr(self, name) is not None]
        if len(given) != 1:
            raise ValueError(
                f"exactly one map specification required, got {given or 'none'}")
        if self.family is None and (self.params or self.depth is not None):
            raise ValueError("'params' and 'depth' apply only to family maps")
        return self


GridSpec = Literal["auto"] | tuple[float, float, int]


class RunConfig(MapConfig):
    grid: GridSpec = "auto"
    format: Literal["csv", "json"] = "csv"
    out: str | None = None
    tolerances: Tolerances = Field(default_factory=Tolerances)

    @model_validator(mode="after")
    def _grid_count(self):
        if self.grid != "auto":
            lo, hi, count = self.grid
            if count < 3:
                raise ValueError("grid count must be >= 3")
            if not lo < hi:
                raise ValueError("grid requires lo < hi")
        return self


class SpectrumRequest(MapConfig):
    grid: GridSpec = "auto"

    @model_validator(mode="after")
    def _grid_count(self):
        if self.grid != "auto":
            if self.grid[2] < 3:
                raise ValueError("grid count must be >= 3")
            if not self.grid[0] < self.grid[1]:
                raise ValueError("grid requires lo < hi")
        return self


class ClassifyRequest(MapConfig):
    pass


class BowenRequest(MapConfig):
    pass


class BifurcationRequest(BaseModel):
    a: float = Field(gt=1.0, description="shallow slope; must exceed 1")


class DomainInfo(BaseModel):
    alpha_min: float
    alpha_max: float
    alpha_M: float
    t_d: float
    alpha_d: float
    dimension: float


class SpectrumPoint(BaseModel):
    t: float
    alpha: float
    pressure: float
    sigma2: float
    entropy: float
    L: float
    G: float


class SpectrumResponse(BaseModel):
    domain: DomainInfo
    degenerate: bool
    source: dict[str, Any]
    samples: list[SpectrumPoint]


class InflectionInfo(BaseModel):
    t: float
    alpha: float
    transversality: float | None = None


class TheoremAInfo(BaseModel):
    ratio: float
    critical_ratio: float
    concave: bool
    boundary: bool
    margin: float


class CorollaryCInfo(BaseModel):
    concave: bool
    boundary: bool
    degenerate: bool
    worst_t: float
    worst_lhs: float | None


class ClassifyResponse(BaseModel):
    verdict: Literal["concave", "concave_boundary", "non_concave"]
    degenerate: bool
    worst_margin: float
    worst_t: float
    dimension: float
    scan_t_lo: float | None
    scan_t_hi: float | None
    inflections: list[InflectionInfo]
    two_branch_threshold: TheoremAInfo | None = None
    slope_criterion: CorollaryCInfo | None = None
    agreement: bool | None = None

    @property
    def concave(self) -> bool:
        return self.verdict != "non_concave"


class BifurcationResponse(BaseModel):
    a: float
    critical_ratio: float
    log_b_star: float
    b_star: float
    verdict_below: str
    verdict_above: str
    flip_verified: bool


class BowenResponse(BaseModel):
    t_d: float
    alpha_d: float
    L_at_alpha_d: float
    depth: int | None = None
    depth_stability: float | None = None
