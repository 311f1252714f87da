"""Error probabilities and Bayes risk under label-noise contamination.

A threshold rule on the contaminated likelihood ratio induces closed-form
error rates for gaussian and exponential models (through an equivalent
threshold on the pure ratio) and exact piecewise-linear rates for tabulated
densities.  For a fixed rule the Bayes risk is a linear-fractional function
of the contamination proportions, which is what the worst-case search
exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import ContamTestError, FamilyError
from .models import (
    ContaminatedPair,
    ContaminationParams,
    Density,
    Exponential,
    Gaussian,
    MixtureDensity,
    Tabulated,
)
from .mixprop import nu_star

_SQRT2 = math.sqrt(2.0)


def q_function(y: float) -> float:
    """Standard normal upper-tail probability Q(y) = P(Z > y)."""
    return 0.5 * math.erfc(y / _SQRT2)


class RegionKind(Enum):
    H1_OUTSIDE_INTERVAL = "h1-outside-interval"
    H1_INSIDE_INTERVAL = "h1-inside-interval"
    H1_ABOVE = "h1-above"
    H1_BELOW = "h1-below"
    ALL_H0 = "all-h0"
    ALL_H1 = "all-h1"


@dataclass(frozen=True)
class DecisionRegion:
    """Observation set on which the rule declares the alternative."""

    kind: RegionKind
    y_minus: Optional[float] = None
    y_plus: Optional[float] = None
    y_star: Optional[float] = None

    def __post_init__(self) -> None:
        if self.kind in (RegionKind.H1_OUTSIDE_INTERVAL, RegionKind.H1_INSIDE_INTERVAL):
            if self.y_minus is None or self.y_plus is None or self.y_minus > self.y_plus:
                raise ContamTestError("interval region requires ordered y_minus <= y_plus")
        if self.kind in (RegionKind.H1_ABOVE, RegionKind.H1_BELOW) and self.y_star is None:
            raise ContamTestError("half-line region requires y_star")

    def h1_intervals(self) -> tuple[tuple[float, float], ...]:
        kind = self.kind
        if kind is RegionKind.ALL_H0:
            return ()
        if kind is RegionKind.ALL_H1:
            return ((-math.inf, math.inf),)
        if kind is RegionKind.H1_ABOVE:
            return ((self.y_star, math.inf),)
        if kind is RegionKind.H1_BELOW:
            return ((-math.inf, self.y_star),)
        if kind is RegionKind.H1_OUTSIDE_INTERVAL:
            return ((-math.inf, self.y_minus), (self.y_plus, math.inf))
        return ((self.y_minus, self.y_plus),)


@dataclass(frozen=True)
class ThresholdRule:
    """Decide the alternative when the contaminated ratio exceeds lam."""

    lam: float

    def __post_init__(self) -> None:
        if not self.lam > 0.0:
            raise ContamTestError(f"threshold must be positive, got {self.lam}")


@dataclass(frozen=True)
class ErrorPair:
    """Type I / Type II error probabilities, optionally flagged.

    The flag records when the pair was produced by clamping or by a
    threshold outside its attainable range.
    """

    r0: float
    r1: float
    flag: Optional[str] = None

    def __post_init__(self) -> None:
        for name, value in (("r0", self.r0), ("r1", self.r1)):
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise ContamTestError(f"{name} must lie in [0, 1], got {value}")
        object.__setattr__(self, "r0", min(max(self.r0, 0.0), 1.0))
        object.__setattr__(self, "r1", min(max(self.r1, 0.0), 1.0))


@dataclass(frozen=True)
class BayesConfig:
    """Prior on the null plus the two misclassification costs."""

    q0: float
    c01: float = 1.0
    c10: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 < self.q0 < 1.0:
            raise ContamTestError(f"q0 must lie in (0, 1), got {self.q0}")
        if not (self.c01 > 0.0 and self.c10 > 0.0):
            raise ContamTestError("error costs must be positive")

    @property
    def weight0(self) -> float:
        return self.c01 * self.q0

    @property
    def weight1(self) -> float:
        return self.c10 * (1.0 - self.q0)


@dataclass(frozen=True)
class RiskCoeffs:
    """Coefficients of the linear-fractional risk (c . pi + d) / (1 - pi0 - pi1)."""

    c0: float
    c1: float
    d: float

    def evaluate(self, pi0: float, pi1: float) -> float:
        return (self.c0 * pi0 + self.c1 * pi1 + self.d) / (1.0 - pi0 - pi1)


def bayes_risk(rates: ErrorPair, config: BayesConfig) -> float:
    """Cost- and prior-weighted combination of the two error rates."""
    return config.weight0 * rates.r0 + config.weight1 * rates.r1


def _gaussian_region(p0: Gaussian, p1: Gaussian, gamma: float) -> DecisionRegion:
    m0, s0 = p0.mean, p0.stddev
    m1, s1 = p1.mean, p1.stddev
    a = s1 * s1 - s0 * s0
    b = 2.0 * (m1 * s0 * s0 - m0 * s1 * s1)
    c = m0 * m0 * s1 * s1 - m1 * m1 * s0 * s0 - 2.0 * s0 * s0 * s1 * s1 * math.log(gamma * s1 / s0)
    if a == 0.0:
        if m0 == m1:
            kind = RegionKind.ALL_H1 if gamma < 1.0 else RegionKind.ALL_H0
            return DecisionRegion(kind)
        y = -c / b
        kind = RegionKind.H1_ABOVE if m1 > m0 else RegionKind.H1_BELOW
        return DecisionRegion(kind, y_star=y)
    disc = b * b - 4.0 * a * c
    if disc <= 0.0:
        kind = RegionKind.ALL_H1 if a > 0.0 else RegionKind.ALL_H0
        return DecisionRegion(kind)
    root = math.sqrt(disc)
    y1 = (-b - root) / (2.0 * a)
    y2 = (-b + root) / (2.0 * a)
    y_minus, y_plus = min(y1, y2), max(y1, y2)
    kind = RegionKind.H1_OUTSIDE_INTERVAL if a > 0.0 else RegionKind.H1_INSIDE_INTERVAL
    return DecisionRegion(kind, y_minus=y_minus, y_plus=y_plus)


def _exponential_region(p0: Exponential, p1: Exponential, gamma: float) -> DecisionRegion:
    a0, a1 = p0.rate, p1.rate
    if a0 == a1:
        kind = RegionKind.ALL_H1 if gamma < 1.0 else RegionKind.ALL_H0
        return DecisionRegion(kind)
    y_star = math.log(gamma * a0 / a1) / (a0 - a1)
    if a0 < a1:
        if y_star <= 0.0:
            return DecisionRegion(RegionKind.ALL_H0)
        return DecisionRegion(RegionKind.H1_BELOW, y_star=y_star)
    if y_star <= 0.0:
        return DecisionRegion(RegionKind.ALL_H1)
    return DecisionRegion(RegionKind.H1_ABOVE, y_star=y_star)


def decision_region(p0, p1, gamma: float) -> DecisionRegion:
    """Decision set of the pure-ratio threshold rule p1/p0 > gamma.

    For gaussian models with unequal spreads the boundary is the root pair
    of a quadratic; for exponential models it is a single point.  Ties at
    the boundary go to the null, which is immaterial for continuous models.
    """
    if not (gamma > 0.0 and math.isfinite(gamma)):
        raise ContamTestError(f"gamma must be positive and finite, got {gamma}")
    if isinstance(p0, Gaussian) and isinstance(p1, Gaussian):
        return _gaussian_region(p0, p1, gamma)
    if isinstance(p0, Exponential) and isinstance(p1, Exponential):
        return _exponential_region(p0, p1, gamma)
    raise FamilyError(
        "closed-form decision regions exist for gaussian and exponential models; "
        "use threshold_rule_rates for tabulated densities"
    )


def _cdf(model, y: float) -> float:
    """P(Y <= y) for a single model or mixture."""
    if y == math.inf:
        return _total_mass(model)
    if y == -math.inf:
        return 0.0
    if isinstance(model, Gaussian):
        return q_function((model.mean - y) / model.stddev)
    if isinstance(model, Exponential):
        if y <= 0.0:
            return 0.0
        return -math.expm1(-model.rate * y)
    if isinstance(model, Tabulated):
        grid, vals = model.grid, model.density_values
        if y <= grid[0]:
            return 0.0
        if y >= grid[-1]:
            return _total_mass(model)
        i = int(np.searchsorted(grid, y, side="right")) - 1
        cells = 0.5 * (vals[1:] + vals[:-1]) * np.diff(grid)
        head = float(np.sum(cells[:i]))
        v_y = float(np.interp(y, grid, vals))
        return head + 0.5 * (vals[i] + v_y) * (y - grid[i])
    if isinstance(model, MixtureDensity):
        return sum(w * _cdf(c, y) for w, c in zip(model.weights, model.components) if w > 0.0)
    raise FamilyError(f"no cdf for {type(model).__name__}")


def _total_mass(model) -> float:
    if isinstance(model, Tabulated):
        grid, vals = model.grid, model.density_values
        return float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid)))
    if isinstance(model, MixtureDensity):
        return sum(w * _total_mass(c) for w, c in zip(model.weights, model.components) if w > 0.0)
    return 1.0


def _prob_h1(model, region: DecisionRegion) -> float:
    return sum(_cdf(model, b) - _cdf(model, a) for a, b in region.h1_intervals())


def pure_error_rates(p0, p1, region: DecisionRegion) -> ErrorPair:
    """Error rates of a decision region under the given pure models."""
    r0 = _prob_h1(p0, region)
    r1 = _total_mass(p1) - _prob_h1(p1, region)
    return ErrorPair(min(max(r0, 0.0), 1.0), min(max(r1, 0.0), 1.0))


def lambda_from_gamma(gamma: float, params: ContaminationParams) -> float:
    """Contaminated-ratio value corresponding to a pure-ratio value."""
    pi0, pi1 = params.pi0, params.pi1
    return ((1.0 - pi1) * gamma + pi1) / (pi0 * gamma + (1.0 - pi0))


def gamma_from_lambda(lam: float, params: ContaminationParams) -> float:
    """Pure-ratio threshold equivalent to a contaminated-ratio threshold."""
    pi0, pi1 = params.pi0, params.pi1
    den = (1.0 - pi1) - pi0 * lam
    num = (1.0 - pi0) * lam - pi1
    if den <= 0.0 or num <= 0.0:
        raise ContamTestError(
            f"threshold {lam} lies outside the attainable contaminated-ratio range"
        )
    return num / den


def pair_ratio_range(pair: ContaminatedPair) -> tuple[float, float]:
    """Attainable values of the contaminated likelihood ratio."""
    lo = nu_star(pair.p1_tilde, pair.p0_tilde).value
    nu01 = nu_star(pair.p0_tilde, pair.p1_tilde).value
    hi = math.inf if nu01 == 0.0 else 1.0 / nu01
    return (lo, hi)


def _linear_nodes(density) -> np.ndarray:
    if isinstance(density, Tabulated):
        return density.grid
    if isinstance(density, MixtureDensity) and density.family == "tabulated":
        return np.unique(np.concatenate([c.grid for c in density.components]))
    raise FamilyError("threshold_rule_rates requires tabulated densities")


def threshold_rule_rates(p0: Density, p1: Density, lam: float) -> ErrorPair:
    """Rates of the rule "p1/p0 > lam" for piecewise-linear densities.

    p1 - lam * p0 is itself piecewise linear, so the decision boundary is
    located exactly within each cell and the rates are exact integrals of
    the interpolants.
    """
    nodes = np.unique(np.concatenate([_linear_nodes(p0), _linear_nodes(p1)]))
    f0 = np.asarray(p0.pdf(nodes), dtype=float)
    f1 = np.asarray(p1.pdf(nodes), dtype=float)
    g = f1 - lam * f0

    def cell_area(width, va, vb):
        return 0.5 * (va + vb) * width

    acc0 = acc1 = 0.0
    for i in range(len(nodes) - 1):
        xa, xb = nodes[i], nodes[i + 1]
        ga, gb = g[i], g[i + 1]
        if ga <= 0.0 and gb <= 0.0:
            continue
        if ga > 0.0 and gb > 0.0:
            acc0 += cell_area(xb - xa, f0[i], f0[i + 1])
            acc1 += cell_area(xb - xa, f1[i], f1[i + 1])
            continue
        t = ga / (ga - gb)
        xm = xa + t * (xb - xa)
        fm0 = f0[i] + t * (f0[i + 1] - f0[i])
        fm1 = f1[i] + t * (f1[i + 1] - f1[i])
        if ga > 0.0:
            acc0 += cell_area(xm - xa, f0[i], fm0)
            acc1 += cell_area(xm - xa, f1[i], fm1)
        else:
            acc0 += cell_area(xb - xm, fm0, f0[i + 1])
            acc1 += cell_area(xb - xm, fm1, f1[i + 1])
    total1 = float(np.sum(0.5 * (f1[1:] + f1[:-1]) * np.diff(nodes)))
    return ErrorPair(min(max(acc0, 0.0), 1.0), min(max(total1 - acc1, 0.0), 1.0))


def contaminated_error_rates(
    pair: ContaminatedPair,
    rule: ThresholdRule,
    ratio_range: Optional[tuple[float, float]] = None,
) -> ErrorPair:
    """Error rates of a contaminated-ratio threshold rule, measured under
    the contaminated densities.

    Thresholds outside the attainable ratio range correspond to constant
    rules; their degenerate rates are returned with a flag.
    """
    lam = rule.lam
    lo, hi = ratio_range if ratio_range is not None else pair_ratio_range(pair)
    if lam <= lo:
        return ErrorPair(1.0, 0.0, flag="lambda-at-or-below-range")
    if lam >= hi:
        return ErrorPair(0.0, 1.0, flag="lambda-at-or-above-range")
    if pair.p0.family == "tabulated":
        return threshold_rule_rates(pair.p0_tilde, pair.p1_tilde, lam)
    gamma = gamma_from_lambda(lam, pair.params)
    region = decision_region(pair.p0, pair.p1, gamma)
    pure = pure_error_rates(pair.p0, pair.p1, region)
    pi0, pi1 = pair.params.pi0, pair.params.pi1
    r0_tilde = (1.0 - pi0) * pure.r0 + pi0 * (1.0 - pure.r1)
    r1_tilde = (1.0 - pi1) * pure.r1 + pi1 * (1.0 - pure.r0)
    return ErrorPair(r0_tilde, r1_tilde)


def decontaminate_raw(rates_tilde: ErrorPair, params: ContaminationParams) -> tuple[float, float]:
    """Algebraic inversion of the contamination map; may leave [0, 1]."""
    pi0, pi1 = params.pi0, params.pi1
    den = 1.0 - pi0 - pi1
    r0 = ((1.0 - pi1) * rates_tilde.r0 - pi0 * (1.0 - rates_tilde.r1)) / den
    r1 = ((1.0 - pi0) * rates_tilde.r1 - pi1 * (1.0 - rates_tilde.r0)) / den
    return r0, r1


def decontaminate(rates_tilde: ErrorPair, params: ContaminationParams) -> ErrorPair:
    """Error rates under the true densities implied by assumed proportions.

    Proportions inconsistent with the rule can push the algebra outside
    [0, 1]; the result is then clamped and flagged so that risk searches
    stay finite.
    """
    r0, r1 = decontaminate_raw(rates_tilde, params)
    clamped = not (-1e-12 <= r0 <= 1.0 + 1e-12 and -1e-12 <= r1 <= 1.0 + 1e-12)
    return ErrorPair(
        min(max(r0, 0.0), 1.0),
        min(max(r1, 0.0), 1.0),
        flag="clamped" if clamped else None,
    )


def risk_coeffs(rates_tilde: ErrorPair, config: BayesConfig) -> RiskCoeffs:
    """Linear-fractional representation of the risk as a function of the
    proportions, for a rule with the given contaminated rates.

    Substituting the decontamination identities into the weighted risk
    gives numerator coefficients that do not depend on the proportions.
    """
    w0, w1 = config.weight0, config.weight1
    r0, r1 = rates_tilde.r0, rates_tilde.r1
    d = w0 * r0 + w1 * r1
    c0 = -(w0 * (1.0 - r1) + w1 * r1)
    c1 = -(w0 * r0 + w1 * (1.0 - r0))
    return RiskCoeffs(c0=c0, c1=c1, d=d)


def decontaminated_rate_partials(
    rates_tilde: ErrorPair, params: ContaminationParams
) -> tuple[tuple[float, float], tuple[float, float]]:
    """Partial derivatives of the decontaminated rates w.r.t. (pi0, pi1).

    Both gradients are nonpositive whenever the rule beats random guessing
    (r0 + r1 <= 1), which is what confines worst-case proportions to
    cone-filtered vertices.
    """
    pi0, pi1 = params.pi0, params.pi1
    den = 1.0 - pi0 - pi1
    k = (1.0 - rates_tilde.r0 - rates_tilde.r1) / (den * den)
    d_r0 = (-(1.0 - pi1) * k, -pi0 * k)
    d_r1 = (-pi1 * k, -(1.0 - pi0) * k)
    return d_r0, d_r1


def risk_gradient(
    rates_tilde: ErrorPair, params: ContaminationParams, config: BayesConfig
) -> tuple[float, float]:
    """Gradient of the Bayes risk w.r.t. the proportions at fixed rates."""
    (d00, d01), (d10, d11) = decontaminated_rate_partials(rates_tilde, params)
    w0, w1 = config.weight0, config.weight1
    return (w0 * d00 + w1 * d10, w0 * d01 + w1 * d11)
