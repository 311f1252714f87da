"""Likelihood families and label-noise contamination mixtures.

Under label noise each hypothesis's observable density is a two-component
mixture: the true density blended with a proportion of the other one.  This
module holds the density families (gaussian, exponential, tabulated), the
contamination proportions, and the mixture construction itself.  All types
are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import FamilyError, InvalidProportionsError, SupportError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Gaussian:
    """Normal density with the given mean and standard deviation."""

    mean: float
    stddev: float

    family = "gaussian"

    def __post_init__(self) -> None:
        if not self.stddev > 0.0:
            raise FamilyError(f"stddev must be positive, got {self.stddev}")

    @property
    def support(self) -> tuple[float, float]:
        return (-math.inf, math.inf)

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        z = (y - self.mean) / self.stddev
        return -0.5 * z * z - math.log(self.stddev) - _LOG_SQRT_2PI

    def pdf(self, y):
        return np.exp(self.log_pdf(y))


@dataclass(frozen=True)
class Exponential:
    """Exponential density rate * exp(-rate * y) supported on [0, inf)."""

    rate: float

    family = "exponential"

    def __post_init__(self) -> None:
        if not self.rate > 0.0:
            raise FamilyError(f"rate must be positive, got {self.rate}")

    @property
    def support(self) -> tuple[float, float]:
        return (0.0, math.inf)

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        inside = math.log(self.rate) - self.rate * np.maximum(y, 0.0)
        return np.where(y >= 0.0, inside, -np.inf)

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y >= 0.0, self.rate * np.exp(-self.rate * np.maximum(y, 0.0)), 0.0)


@dataclass(frozen=True, eq=False)
class Tabulated:
    """Piecewise-linear density on a finite grid; zero outside the grid."""

    grid: np.ndarray
    density_values: np.ndarray

    family = "tabulated"

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        vals = np.asarray(self.density_values, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "density_values", vals)
        if grid.ndim != 1 or grid.size < 2:
            raise FamilyError("tabulated grid must be 1-D with at least two points")
        if vals.shape != grid.shape:
            raise FamilyError("grid and density_values must have the same length")
        if not np.all(np.diff(grid) > 0.0):
            raise FamilyError("tabulated grid must be strictly increasing")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0.0):
            raise FamilyError("tabulated density values must be finite and nonnegative")
        mass = float(np.sum(0.5 * (vals[1:] + vals[:-1]) * np.diff(grid)))
        if abs(mass - 1.0) > 1e-6:
            raise FamilyError(f"tabulated density must integrate to 1, got {mass:.8f}")

    @property
    def support(self) -> tuple[float, float]:
        return (float(self.grid[0]), float(self.grid[-1]))

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        return np.interp(y, self.grid, self.density_values, left=0.0, right=0.0)

    def log_pdf(self, y):
        with np.errstate(divide="ignore"):
            return np.log(self.pdf(y))


DensityModel = Union[Gaussian, Exponential, Tabulated]


@dataclass(frozen=True, eq=False)
class MixtureDensity:
    """Convex combination of component densities from one family."""

    weights: tuple[float, ...]
    components: tuple[DensityModel, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        components = tuple(self.components)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", components)
        if not weights or len(weights) != len(components):
            raise FamilyError("weights and components must be nonempty and match")
        if any(w < 0.0 for w in weights) or abs(sum(weights) - 1.0) > 1e-12:
            raise FamilyError("mixture weights must be nonnegative and sum to 1")
        families = {c.family for c in components}
        if len(families) != 1:
            raise FamilyError(f"mixture components must share one family, got {sorted(families)}")

    @property
    def family(self) -> str:
        return self.components[0].family

    @property
    def support(self) -> tuple[float, float]:
        los, his = zip(*(c.support for c in self.components))
        return (min(los), max(his))

    def log_pdf(self, y):
        y = np.asarray(y, dtype=float)
        parts = [
            math.log(w) + c.log_pdf(y)
            for w, c in zip(self.weights, self.components)
            if w > 0.0
        ]
        out = parts[0]
        for part in parts[1:]:
            out = np.logaddexp(out, part)
        return out

    def pdf(self, y):
        y = np.asarray(y, dtype=float)
        out = np.zeros(y.shape)
        for w, c in zip(self.weights, self.components):
            if w > 0.0:
                out = out + w * c.pdf(y)
        return out


Density = Union[DensityModel, MixtureDensity]


@dataclass(frozen=True)
class ContaminationParams:
    """Label-switch proportions (pi0, pi1), constrained to pi0 + pi1 < 1.

    At pi0 + pi1 = 1 the two contaminated densities coincide and the
    hypotheses cannot be told apart; beyond it the labels are merely
    interchanged, so the constraint loses no generality.
    """

    pi0: float
    pi1: float

    def __post_init__(self) -> None:
        for name, value in (("pi0", self.pi0), ("pi1", self.pi1)):
            if not 0.0 <= value <= 1.0:
                raise InvalidProportionsError(f"{name} must lie in [0, 1], got {value}")
        if not self.pi0 + self.pi1 < 1.0:
            raise InvalidProportionsError(
                f"pi0 + pi1 must be strictly below 1, got {self.pi0 + self.pi1}"
            )


@dataclass(frozen=True)
class ReducedContamination:
    """Proportions of the self-referential mixture form, each in [0, 1)."""

    pi0_tilde: float
    pi1_tilde: float

    def __post_init__(self) -> None:
        for name, value in (("pi0_tilde", self.pi0_tilde), ("pi1_tilde", self.pi1_tilde)):
            if not 0.0 <= value < 1.0:
                raise InvalidProportionsError(f"{name} must lie in [0, 1), got {value}")


@dataclass(frozen=True)
class ContaminatedPair:
    """Observable mixture densities together with their ground truth."""

    p0_tilde: MixtureDensity
    p1_tilde: MixtureDensity
    p0: DensityModel
    p1: DensityModel
    params: ContaminationParams

    def common_support(self) -> tuple[float, float]:
        lo0, hi0 = self.p0_tilde.support
        lo1, hi1 = self.p1_tilde.support
        return (max(lo0, lo1), min(hi0, hi1))


def _check_comparable(p0: DensityModel, p1: DensityModel) -> None:
    if p0.family != p1.family:
        raise FamilyError(
            f"models must come from the same family, got {p0.family} and {p1.family}"
        )
    lo0, hi0 = p0.support
    lo1, hi1 = p1.support
    if max(lo0, lo1) >= min(hi0, hi1):
        raise SupportError("models have disjoint supports")


def contaminate(p0: DensityModel, p1: DensityModel, params: ContaminationParams) -> ContaminatedPair:
    """Build the observable pair of cross-contaminated mixture densities.

    The null observable blends p0 with proportion pi0 of p1; the alternative
    observable blends p1 with proportion pi1 of p0.
    """
    _check_comparable(p0, p1)
    p0_tilde = MixtureDensity((1.0 - params.pi0, params.pi0), (p0, p1))
    p1_tilde = MixtureDensity((1.0 - params.pi1, params.pi1), (p1, p0))
    return ContaminatedPair(p0_tilde, p1_tilde, p0, p1, params)


def likelihood_ratio(pair: ContaminatedPair, y: float) -> float:
    """Evaluate the contaminated likelihood ratio p1_tilde(y) / p0_tilde(y).

    Computed in log space so that extreme tails yield the correct limit
    instead of a 0/0 underflow.
    """
    lo, hi = pair.common_support()
    if not lo <= y <= hi:
        raise SupportError(f"point {y} lies outside the common support [{lo}, {hi}]")
    log0 = float(pair.p0_tilde.log_pdf(y))
    log1 = float(pair.p1_tilde.log_pdf(y))
    if math.isinf(log0) and log0 < 0 and math.isinf(log1) and log1 < 0:
        raise SupportError(f"both contaminated densities vanish at {y}")
    with np.errstate(over="ignore"):
        return float(np.exp(log1 - log0))


def reduce_params(params: ContaminationParams) -> ReducedContamination:
    """Convert proportions to the self-referential mixture form."""
    return ReducedContamination(
        pi0_tilde=params.pi0 / (1.0 - params.pi1),
        pi1_tilde=params.pi1 / (1.0 - params.pi0),
    )


def expand_params(reduced: ReducedContamination) -> ContaminationParams:
    """Invert reduce_params back to the plain proportions."""
    t0, t1 = reduced.pi0_tilde, reduced.pi1_tilde
    det = 1.0 - t0 * t1
    return ContaminationParams(
        pi0=t0 * (1.0 - t1) / det,
        pi1=t1 * (1.0 - t0) / det,
    )
