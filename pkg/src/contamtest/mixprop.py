"""Maximal mixture proportions and the contamination identity system.

The maximal mixture proportion of P with respect to Q is the largest alpha
such that P decomposes as alpha * Q + (1 - alpha) * S for some distribution
S; for densities it equals the infimum of p(y) / q(y) over the support of Q.
Everything downstream (feasible-region geometry, proportion recovery) is
driven by four such values: the pure pair in both orders, and the
contaminated pair in both orders.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._golden import golden_min
from .errors import (
    FamilyError,
    InfeasibleParamsError,
    OrderingError,
    SingularSystemError,
    SupportError,
)
from .models import (
    ContaminatedPair,
    ContaminationParams,
    Density,
    Exponential,
    Gaussian,
    MixtureDensity,
    Tabulated,
)

GRID_POINTS = 2001
ARGUMENT_TOL = 1e-8
_CLAMP_WARN = 1e-6


@dataclass(frozen=True)
class NuStarValue:
    """Infimum of a density ratio, clamped to [0, 1].

    attained_at is the minimizing point; +/-inf marks an infimum reached
    only in the corresponding tail limit.
    """

    value: float
    attained_at: float


@dataclass(frozen=True)
class NuStarQuartet:
    """The four mixture proportions of a contaminated scenario."""

    nu_tilde_01: float
    nu_tilde_10: float
    nu_pure_01: float
    nu_pure_10: float

    def __post_init__(self) -> None:
        for name in ("nu_tilde_01", "nu_tilde_10", "nu_pure_01", "nu_pure_10"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise OrderingError(f"{name} must lie in [0, 1], got {value}")
        if self.nu_pure_01 > self.nu_tilde_01 + 1e-9:
            raise OrderingError("nu_pure_01 cannot exceed nu_tilde_01")
        if self.nu_pure_10 > self.nu_tilde_10 + 1e-9:
            raise OrderingError("nu_pure_10 cannot exceed nu_tilde_10")


def _components(density: Density) -> tuple[str, list]:
    if isinstance(density, MixtureDensity):
        pairs = [(w, c) for w, c in zip(density.weights, density.components) if w > 0.0]
        return density.family, pairs
    if isinstance(density, (Gaussian, Exponential, Tabulated)):
        return density.family, [(1.0, density)]
    raise FamilyError(f"unsupported density object {type(density).__name__}")


def _gaussian_tail_limit(comps_p: list, comps_q: list, sign: int) -> float:
    # The component with the largest stddev dominates as y -> sign * inf;
    # ties are broken by the mean furthest out in that direction.
    def dominant(comps):
        key = max((c.stddev, sign * c.mean) for _, c in comps)
        weight = sum(w for w, c in comps if (c.stddev, sign * c.mean) == key)
        return key, weight

    key_p, weight_p = dominant(comps_p)
    key_q, weight_q = dominant(comps_q)
    if key_p > key_q:
        return math.inf
    if key_p < key_q:
        return 0.0
    return weight_p / weight_q


def _exponential_tail_limit(comps_p: list, comps_q: list) -> float:
    # The smallest rate dominates as y -> inf.
    def dominant(comps):
        rate = min(c.rate for _, c in comps)
        weight = sum(w for w, c in comps if c.rate == rate)
        return rate, weight

    rate_p, weight_p = dominant(comps_p)
    rate_q, weight_q = dominant(comps_q)
    if rate_p < rate_q:
        return math.inf
    if rate_p > rate_q:
        return 0.0
    return weight_p / weight_q


def _clamped(value: float) -> float:
    if value < -_CLAMP_WARN or value > 1.0 + _CLAMP_WARN:
        warnings.warn(
            f"mixture-proportion estimate {value} outside [0, 1]; clamping",
            stacklevel=3,
        )
    return min(max(value, 0.0), 1.0)


def _nu_star_tabulated(p: Density, q: Density, comps_p: list, comps_q: list) -> NuStarValue:
    nodes = np.unique(np.concatenate([c.grid for _, c in comps_p + comps_q]))
    p_vals = np.asarray(p.pdf(nodes), dtype=float)
    q_vals = np.asarray(q.pdf(nodes), dtype=float)
    mask = q_vals > 0.0
    if not np.any(mask):
        raise SupportError("reference density vanishes on the whole grid")
    ratios = p_vals[mask] / q_vals[mask]
    idx = int(np.argmin(ratios))
    return NuStarValue(_clamped(float(ratios[idx])), float(nodes[mask][idx]))


def nu_star(p: Density, q: Density) -> NuStarValue:
    """Maximal mixture proportion of p with respect to q.

    Combines a fixed interior grid search with golden-section refinement
    and the analytic tail limits of the ratio, so infima that are reached
    only in a tail (common for gaussian models) are exact.
    """
    family_p, comps_p = _components(p)
    family_q, comps_q = _components(q)
    if family_p != family_q:
        raise SupportError(
            f"cannot compare densities across families ({family_p} vs {family_q})"
        )
    if family_p == "tabulated":
        return _nu_star_tabulated(p, q, comps_p, comps_q)

    if family_p == "gaussian":
        sigma_max = max(c.stddev for _, c in comps_p + comps_q)
        mu_lo = min(c.mean for _, c in comps_p + comps_q)
        mu_hi = max(c.mean for _, c in comps_p + comps_q)
        lo, hi = mu_lo - 12.0 * sigma_max, mu_hi + 12.0 * sigma_max
        tails = (
            (_gaussian_tail_limit(comps_p, comps_q, +1), math.inf),
            (_gaussian_tail_limit(comps_p, comps_q, -1), -math.inf),
        )
    else:
        rate_min = min(c.rate for _, c in comps_p + comps_q)
        lo, hi = 0.0, 40.0 / rate_min
        tails = ((_exponential_tail_limit(comps_p, comps_q), math.inf),)

    def log_ratio(y):
        return p.log_pdf(y) - q.log_pdf(y)

    ys = np.linspace(lo, hi, GRID_POINTS)
    values = np.asarray(log_ratio(ys), dtype=float)
    idx = int(np.argmin(values))
    bracket_lo = ys[max(idx - 1, 0)]
    bracket_hi = ys[min(idx + 1, len(ys) - 1)]
    y_best, log_best = golden_min(
        lambda t: float(log_ratio(t)), bracket_lo, bracket_hi, xtol=ARGUMENT_TOL
    )
    with np.errstate(over="ignore"):
        best = float(np.exp(log_best))
    attained = float(y_best)
    for limit, marker in tails:
        if limit < best:
            best, attained = limit, marker
    return NuStarValue(_clamped(best), attained)


def nu_quartet(pair: ContaminatedPair) -> NuStarQuartet:
    """Compute all four mixture proportions for a contaminated scenario."""
    nu_tilde_01 = nu_star(pair.p0_tilde, pair.p1_tilde).value
    nu_tilde_10 = nu_star(pair.p1_tilde, pair.p0_tilde).value
    nu_pure_01 = min(nu_star(pair.p0, pair.p1).value, nu_tilde_01)
    nu_pure_10 = min(nu_star(pair.p1, pair.p0).value, nu_tilde_10)
    return NuStarQuartet(nu_tilde_01, nu_tilde_10, nu_pure_01, nu_pure_10)


def nu_mixed_from_pure(nu_pure: float, pi_other: float) -> float:
    """Mixture proportion of a pure model w.r.t. the other side's mixture.

    Contaminating the reference distribution can only raise the proportion:
    the output lies in [nu_pure, nu_pure / (1 - pi_other)] and is monotone
    increasing in nu_pure.
    """
    if not 0.0 <= nu_pure <= 1.0:
        raise OrderingError(f"nu_pure must lie in [0, 1], got {nu_pure}")
    if not 0.0 <= pi_other < 1.0:
        raise OrderingError(f"pi_other must lie in [0, 1), got {pi_other}")
    return nu_pure / (1.0 - pi_other + pi_other * nu_pure)


def reduced_from_nustars(nu_tilde: float, nu_mixed: float) -> float:
    """Recover a reduced proportion from contaminated and mixed values."""
    if not 0.0 <= nu_tilde <= 1.0:
        raise OrderingError(f"nu_tilde must lie in [0, 1], got {nu_tilde}")
    if not 0.0 <= nu_mixed < 1.0:
        raise OrderingError(f"nu_mixed must lie in [0, 1), got {nu_mixed}")
    if nu_mixed > nu_tilde:
        raise OrderingError(
            f"nu_mixed ({nu_mixed}) cannot exceed nu_tilde ({nu_tilde})"
        )
    return (nu_tilde - nu_mixed) / (1.0 - nu_mixed)


def _rhs(nu_tilde: float, nu_pure: float) -> float:
    return (nu_tilde - nu_pure) / (1.0 - nu_pure)


def recover_proportions(
    nu_pure_01: float,
    nu_pure_10: float,
    nu_tilde_01: float,
    nu_tilde_10: float,
) -> ContaminationParams:
    """Solve the 2x2 linear system tying proportions to the four nu values.

    The system reads pi0 + nu_tilde_01 * pi1 = rhs0 and
    nu_tilde_10 * pi0 + pi1 = rhs1 with rhs_i determined by the pure and
    contaminated proportions; it is invertible whenever the contaminated
    densities differ.
    """
    for name, value in (("nu_pure_01", nu_pure_01), ("nu_pure_10", nu_pure_10)):
        if not 0.0 <= value < 1.0:
            raise OrderingError(f"{name} must lie in [0, 1), got {value}")
    for name, value in (("nu_tilde_01", nu_tilde_01), ("nu_tilde_10", nu_tilde_10)):
        if not 0.0 <= value <= 1.0:
            raise OrderingError(f"{name} must lie in [0, 1], got {value}")
    if nu_pure_01 > nu_tilde_01 or nu_pure_10 > nu_tilde_10:
        raise OrderingError("pure proportions cannot exceed contaminated ones")
    det = 1.0 - nu_tilde_01 * nu_tilde_10
    if det <= 0.0:
        raise SingularSystemError(
            "contaminated proportions multiply to >= 1: the observable mixtures coincide"
        )
    rhs0 = _rhs(nu_tilde_01, nu_pure_01)
    rhs1 = _rhs(nu_tilde_10, nu_pure_10)
    pi0 = (rhs0 - nu_tilde_01 * rhs1) / det
    pi1 = (rhs1 - nu_tilde_10 * rhs0) / det
    if pi0 < -1e-9 or pi1 < -1e-9:
        raise InfeasibleParamsError(
            f"nu values are mutually inconsistent (implied pi = ({pi0}, {pi1}))"
        )
    try:
        return ContaminationParams(pi0=max(pi0, 0.0), pi1=max(pi1, 0.0))
    except ValueError as exc:
        raise InfeasibleParamsError(str(exc)) from exc


def implied_pure_nustars(
    params: ContaminationParams,
    nu_tilde_01: float,
    nu_tilde_10: float,
) -> tuple[float, float]:
    """Recover the pure-pair proportions implied by known (pi0, pi1).

    Implied values within 1e-3 of [0, 1] are snapped into the interval, so
    contaminated proportions rounded to four decimals do not trip the
    infeasibility error.
    """
    for name, value in (("nu_tilde_01", nu_tilde_01), ("nu_tilde_10", nu_tilde_10)):
        if not 0.0 <= value <= 1.0:
            raise OrderingError(f"{name} must lie in [0, 1], got {value}")
    rhs0 = params.pi0 + nu_tilde_01 * params.pi1
    rhs1 = nu_tilde_10 * params.pi0 + params.pi1
    nu_pure = []
    for nu_tilde, rhs in ((nu_tilde_01, rhs0), (nu_tilde_10, rhs1)):
        if rhs >= 1.0:
            raise InfeasibleParamsError("proportions imply a degenerate pure pair")
        value = (nu_tilde - rhs) / (1.0 - rhs)
        if value < -1e-3 or value > 1.0 + 1e-3:
            raise InfeasibleParamsError(
                f"proportions imply a pure mixture proportion of {value}, outside [0, 1]"
            )
        nu_pure.append(min(max(value, 0.0), 1.0))
    return nu_pure[0], nu_pure[1]
