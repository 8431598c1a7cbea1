"""Closed-form machinery for two-branch linear maps.

For slopes 1 < a < b put D = log(b/a) and, for an exponent
alpha in [log a, log b],

    p = (log b - alpha) / D        weight of the shallow branch,
    q = (alpha - log a) / D        weight of the steep branch,
    h(alpha) = -p log p - q log q  entropy of the Bernoulli state,
    L(alpha) = h(alpha) / alpha    dimension of the level set.

The concavity of L is governed by the inflection function
F(alpha) = 2 L'(alpha) - h''(alpha); F = -alpha * L''(alpha), so zeros of
F are exactly the inflection exponents and sign(F) = -sign(L'').  L is
concave if and only if log b / log a stays at or below the threshold
ratio (sqrt(2 log 2) + 1) / (sqrt(2 log 2) - 1) = 12.27332025...
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DomainError,
    InconclusiveError,
    InvalidMapError,
    PreconditionError,
)
from .thermo import LinearCookieCutter

#: Verdict band on the ratio margin; at |margin| <= TOL_CLASS the verdict is
#: "concave (boundary)", matching the closed inequality of the threshold.
TOL_CLASS = 1e-9


def critical_ratio() -> float:
    """(sqrt(2 log 2) + 1) / (sqrt(2 log 2) - 1), evaluated, not hard-coded."""
    s = math.sqrt(2.0 * math.log(2.0))
    return (s + 1.0) / (s - 1.0)


@dataclass(frozen=True)
class TwoBranchMap:
    """Slopes 1 < a < b of a two-branch linear map on [0, 1/a] u [1 - 1/b, 1]."""

    a: float
    b: float

    def __post_init__(self):
        if not (1.0 < self.a < self.b):
            raise InvalidMapError(f"need 1 < a < b, got a={self.a!r}, b={self.b!r}")
        if 1.0 / self.a + 1.0 / self.b > 1.0 + 1e-12:
            raise InvalidMapError("branch domains [0,1/a] and [1-1/b,1] overlap")

    @property
    def log_a(self) -> float:
        return math.log(self.a)

    @property
    def log_b(self) -> float:
        return math.log(self.b)

    @property
    def log_ratio(self) -> float:
        """D = log(b/a)."""
        return self.log_b - self.log_a

    @property
    def ratio(self) -> float:
        return self.log_b / self.log_a

    @property
    def alpha_M(self) -> float:
        return 0.5 * (self.log_a + self.log_b)

    def as_cookie(self) -> LinearCookieCutter:
        return LinearCookieCutter((self.a, self.b))


@dataclass(frozen=True)
class TheoremAVerdict:
    ratio: float
    critical_ratio: float
    concave: bool
    margin: float          # critical_ratio - ratio
    boundary: bool = False


def _weights(m: TwoBranchMap, alpha: float):
    la, lb = m.log_a, m.log_b
    if not (la <= alpha <= lb):
        raise DomainError(f"alpha={alpha!r} outside [{la!r}, {lb!r}]")
    d = m.log_ratio
    return (lb - alpha) / d, (alpha - la) / d


def _interior(m: TwoBranchMap, alpha: float):
    if not (m.log_a < alpha < m.log_b):
        raise DomainError(
            f"alpha={alpha!r} must lie strictly inside ({m.log_a!r}, {m.log_b!r})")


def entropy_of_alpha(m: TwoBranchMap, alpha: float) -> float:
    """Bernoulli entropy of the equilibrium state with exponent alpha,
    with the convention 0 log 0 = 0 at the endpoints."""
    p, q = _weights(m, alpha)
    h = 0.0
    if p > 0.0:
        h -= p * math.log(p)
    if q > 0.0:
        h -= q * math.log(q)
    return h


def spectrum_closed_form(m: TwoBranchMap, alpha: float) -> float:
    """L(alpha) = h(alpha) / alpha on [log a, log b]."""
    return entropy_of_alpha(m, alpha) / alpha


def entropy_derivative(m: TwoBranchMap, alpha: float, order: int) -> float:
    """d^order h / d alpha^order for order in 1..4, interior alpha only.

    Order 1 equals the dual parameter t_alpha.  Order 2 is always negative,
    order 3 vanishes exactly at the midpoint exponent, order 4 is <= 0;
    orders 2..4 diverge at the endpoints.
    """
    _interior(m, alpha)
    d = m.log_ratio
    u = alpha - m.log_a
    v = m.log_b - alpha
    if order == 1:
        # equals t_alpha; positive left of the midpoint, negative right of it
        return (math.log(v) - math.log(u)) / d
    if order == 2:
        return -(1.0 / d) * (1.0 / u + 1.0 / v)
    if order == 3:
        return (1.0 / d) * (1.0 / (u * u) - 1.0 / (v * v))
    if order == 4:
        return (-2.0 / d) * (1.0 / (u ** 3) + 1.0 / (v ** 3))
    raise DomainError(f"order must be 1..4, got {order!r}")


def two_dL_dalpha(m: TwoBranchMap, alpha: float) -> float:
    """2 L'(alpha) in closed form:

        (2 / (alpha^2 D)) * [log b * log p - log a * log q].

    Equals -8 log 2 / (log a + log b)^2 at the midpoint exponent, tends to
    +inf at log a and -inf at log b, and vanishes exactly at alpha_d.
    """
    _interior(m, alpha)
    p, q = _weights(m, alpha)
    d = m.log_ratio
    return (2.0 / (alpha * alpha * d)) * (m.log_b * math.log(p) - m.log_a * math.log(q))


def _d2L(m: TwoBranchMap, alpha: float) -> float:
    """L''(alpha) = (h''(alpha) - 2 L'(alpha)) / alpha."""
    return (entropy_derivative(m, alpha, 2) - two_dL_dalpha(m, alpha)) / alpha


def inflection_equation(m: TwoBranchMap, alpha: float) -> float:
    """F(alpha) = 2 L'(alpha) - h''(alpha) = -alpha * L''(alpha).

    Zeros of F are exactly the zeros of L''; F > 0 where the spectrum is
    strictly concave and F -> +inf at both endpoints, so sign changes come
    in pairs.
    """
    return two_dL_dalpha(m, alpha) - entropy_derivative(m, alpha, 2)


def inflection_equation_derivative(m: TwoBranchMap, alpha: float) -> float:
    """F'(alpha) = 2 L''(alpha) - h'''(alpha), the transversality quantity."""
    return 2.0 * _d2L(m, alpha) - entropy_derivative(m, alpha, 3)


def theorem_a_check(m: TwoBranchMap, tol_class: float = TOL_CLASS) -> TheoremAVerdict:
    """Concave iff log b / log a <= critical ratio (closed inequality)."""
    cr = critical_ratio()
    margin = cr - m.ratio
    return TheoremAVerdict(
        ratio=m.ratio,
        critical_ratio=cr,
        concave=margin >= -tol_class,
        margin=margin,
        boundary=abs(margin) <= tol_class,
    )


def bifurcation_slope(a: float) -> float:
    """The unique steep slope b* = a ** critical_ratio at which concavity
    of the two-branch spectrum is lost."""
    if not (a > 1.0) or not math.isfinite(a):
        raise InvalidMapError(f"slope must exceed 1, got {a!r}")
    log_bstar = critical_ratio() * math.log(a)
    try:
        return math.exp(log_bstar)
    except OverflowError:
        return math.inf


def transversality_check(m: TwoBranchMap, alpha_i: float,
                         root_tol: float = 1e-6,
                         midpoint_tol: float = 1e-7) -> float:
    """|F'(alpha_i)| at a detected inflection exponent.

    Strictly positive for any inflection off the midpoint exponent, which
    certifies that the detected zero is a genuine sign change persisting
    under slope perturbations.  At the midpoint (the tangential case) the
    certificate is undefined and InconclusiveError is raised; an alpha_i
    that is not actually a zero of the inflection function raises
    PreconditionError.
    """
    _interior(m, alpha_i)
    if abs(alpha_i - m.alpha_M) <= midpoint_tol * m.log_ratio:
        raise InconclusiveError(
            "transversality is undefined at the midpoint exponent")
    f = inflection_equation(m, alpha_i)
    scale = max(1.0, abs(entropy_derivative(m, alpha_i, 2)),
                abs(two_dL_dalpha(m, alpha_i)))
    if abs(f) > root_tol * scale:
        raise PreconditionError(
            f"alpha_i={alpha_i!r} is not a zero of the inflection function "
            f"(F = {f!r})")
    return abs(inflection_equation_derivative(m, alpha_i))
