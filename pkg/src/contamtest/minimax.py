"""Worst-case risk over the feasible polygon and the threshold search.

The inner maximization of the risk over feasible proportions reduces to the
cone-filtered polygon vertices; the outer minimization sweeps a log-spaced
threshold grid and refines the best bracket by golden section.  A
bisection on the equivalent linear program serves as an independent check
of the inner maximization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Protocol

import numpy as np

from ._golden import golden_min
from .errors import EmptyRegionError, NoValidThresholdError
from .region import FeasibleRegion
from .risk import BayesConfig, ErrorPair, risk_coeffs

RANGE_MARGIN = 1e-6


class RateModel(Protocol):
    """What the threshold search needs from a scenario."""

    pi_true: Optional[tuple[float, float]]

    def rates(self, lam: float) -> ErrorPair: ...

    def lambda_range(self) -> tuple[float, float]: ...


@dataclass(frozen=True)
class MinimaxResult:
    """Optimal threshold, its worst-case vertex and risk, and diagnostics.

    The three curves share one threshold grid: the worst-case risk over the
    polygon, the risk at the true proportions (nan when unknown), and the
    risk under the no-contamination assumption.
    """

    lambda_star: float
    minimax_risk: float
    worst_vertex: tuple[float, float]
    risk_curve_max: tuple[tuple[float, float], ...]
    risk_curve_true: tuple[tuple[float, float], ...]
    risk_curve_zero: tuple[tuple[float, float], ...]
    min_risk_true: Optional[float]
    min_risk_zero: float


def inner_max(
    rates_tilde: ErrorPair, region: FeasibleRegion, config: BayesConfig
) -> tuple[tuple[float, float], float]:
    """Worst-case (vertex, risk) over the region for the given rule rates.

    Cone-filtered vertices suffice for rules no worse than random guessing;
    otherwise every vertex is scanned.
    """
    if not region.vertices:
        raise EmptyRegionError("region has no vertices")
    coeffs = risk_coeffs(rates_tilde, config)
    vertices = [v for v in region.vertices if v.candidate]
    if rates_tilde.r0 + rates_tilde.r1 > 1.0 + 1e-12 or not vertices:
        vertices = list(region.vertices)
    best_vertex = vertices[0].point
    best_value = coeffs.evaluate(*best_vertex)
    for v in vertices[1:]:
        value = coeffs.evaluate(*v.point)
        if value > best_value:
            best_vertex, best_value = v.point, value
    return best_vertex, best_value


def lp_bisection_oracle(
    rates_tilde: ErrorPair,
    region: FeasibleRegion,
    config: BayesConfig,
    tol: float = 1e-9,
) -> float:
    """Worst-case risk via bisection on the superlevel-set linear program.

    For each candidate risk level t, the program maximizes
    c . pi + d - t * (1 - pi0 - pi1) over the polygon; a vertex is always
    optimal, and the set of t with nonnegative optimum is a ray whose
    endpoint is the worst-case risk.
    """
    if not region.vertices:
        raise EmptyRegionError("region has no vertices")
    coeffs = risk_coeffs(rates_tilde, config)
    points = [v.point for v in region.vertices]

    def lp_value(t: float) -> float:
        return max(
            coeffs.c0 * x + coeffs.c1 * y + coeffs.d - t * (1.0 - x - y)
            for x, y in points
        )

    t_lo, t_hi = 0.0, 3.0 * max(config.weight0, config.weight1)
    if lp_value(t_lo) < 0.0:
        return 0.0
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        if lp_value(mid) >= 0.0:
            t_lo = mid
        else:
            t_hi = mid
    return t_lo


def _effective_range(
    model: RateModel, config: BayesConfig
) -> tuple[float, float]:
    lo, hi = model.lambda_range()
    gamma_ref = config.weight0 / config.weight1
    lam_lo = lo * (1.0 + RANGE_MARGIN) if lo > 0.0 else gamma_ref * 1e-9
    lam_hi = hi * (1.0 - RANGE_MARGIN) if math.isfinite(hi) else gamma_ref * 1e9
    if not lam_lo < lam_hi:
        raise NoValidThresholdError(
            f"attainable threshold range ({lo}, {hi}) is empty"
        )
    return lam_lo, lam_hi


def _refine_log_min(f, grid: np.ndarray, values: np.ndarray, rel_tol: float):
    """Golden-section refinement of the best grid bracket, in log-threshold."""
    idx = int(np.argmin(values))
    a = math.log(grid[max(idx - 1, 0)])
    b = math.log(grid[min(idx + 1, len(grid) - 1)])
    t, val = golden_min(lambda u: f(math.exp(u)), a, b, xtol=rel_tol)
    if values[idx] < val:
        return float(grid[idx]), float(values[idx])
    return math.exp(t), val


def minimax_search(
    model: RateModel,
    region: FeasibleRegion,
    config: BayesConfig,
    *,
    grid_points: int = 2000,
    rel_tol: float = 1e-8,
) -> MinimaxResult:
    """Minimize the worst-case risk over the attainable threshold range.

    The range is shrunk by a relative margin to stay strictly inside the
    attainable open interval, swept on a log-spaced grid, and the best
    bracket refined by golden section.  The true-proportion and
    no-contamination curves are diagnostics and are evaluated even where
    those proportions lie outside the region.
    """
    lam_lo, lam_hi = _effective_range(model, config)
    grid = np.geomspace(lam_lo, lam_hi, max(int(grid_points), 2))
    pi_true = model.pi_true

    risk_max = np.empty(len(grid))
    risk_true = np.empty(len(grid))
    risk_zero = np.empty(len(grid))
    for i, lam in enumerate(grid):
        rates = model.rates(float(lam))
        coeffs = risk_coeffs(rates, config)
        _, risk_max[i] = inner_max(rates, region, config)
        risk_true[i] = coeffs.evaluate(*pi_true) if pi_true is not None else math.nan
        risk_zero[i] = coeffs.d

    def f_max(lam: float) -> float:
        return inner_max(model.rates(lam), region, config)[1]

    lambda_star, minimax_risk = _refine_log_min(f_max, grid, risk_max, rel_tol)
    worst_vertex, _ = inner_max(model.rates(lambda_star), region, config)

    min_risk_true = None
    if pi_true is not None:

        def f_true(lam: float) -> float:
            return risk_coeffs(model.rates(lam), config).evaluate(*pi_true)

        _, min_risk_true = _refine_log_min(f_true, grid, risk_true, rel_tol)

    def f_zero(lam: float) -> float:
        return risk_coeffs(model.rates(lam), config).d

    _, min_risk_zero = _refine_log_min(f_zero, grid, risk_zero, rel_tol)

    pack = lambda values: tuple((float(l), float(v)) for l, v in zip(grid, values))
    return MinimaxResult(
        lambda_star=float(lambda_star),
        minimax_risk=float(minimax_risk),
        worst_vertex=worst_vertex,
        risk_curve_max=pack(risk_max),
        risk_curve_true=pack(risk_true),
        risk_curve_zero=pack(risk_zero),
        min_risk_true=min_risk_true,
        min_risk_zero=float(min_risk_zero),
    )
