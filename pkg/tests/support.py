"""Randomized-instance builders shared by the property and acceptance tests."""

import numpy as np

from contamtest import (
    ContaminationParams,
    Exponential,
    Gaussian,
    HalfPlane,
    add_constraints,
    base_region,
    contaminate,
)


def random_params(rng, max_sum=0.75):
    pi0 = rng.uniform(0.02, max_sum - 0.04)
    pi1 = rng.uniform(0.02, max_sum - pi0)
    return ContaminationParams(float(pi0), float(pi1))


def random_pair(rng, family=None):
    """Contaminated pair with random models and proportions."""
    family = family or rng.choice(["gaussian", "exponential"])
    if family == "gaussian":
        mu0 = rng.uniform(-1.0, 1.0)
        mu1 = mu0 + rng.uniform(-0.8, 0.8)
        s0 = rng.uniform(0.5, 1.5)
        s1 = s0 * rng.uniform(1.05, 2.5)
        p0, p1 = Gaussian(float(mu0), float(s0)), Gaussian(float(mu1), float(s1))
    else:
        a0 = rng.uniform(0.3, 2.0)
        a1 = a0 * rng.uniform(1.1, 3.0)
        p0, p1 = Exponential(float(a0)), Exponential(float(a1))
    return contaminate(p0, p1, random_params(rng))


def random_lambda(rng, ratio_range, low=0.05, high=0.95):
    """Log-uniform threshold strictly inside the attainable range."""
    lo, hi = ratio_range
    lo = lo * (1.0 + 1e-4)
    hi = hi * (1.0 - 1e-4)
    t = rng.uniform(low, high)
    return float(lo * (hi / lo) ** t)


def random_region(rng, nu_tilde_01, nu_tilde_10, extra_count=2):
    """Random nonempty sub-region of the base polygon.

    Constraints are anchored at a point known to be interior, so the result
    can never be empty.
    """
    region = base_region(nu_tilde_01, nu_tilde_10)
    pts = np.array([v.point for v in region.vertices])
    weights = rng.dirichlet(np.ones(len(pts)))
    anchor = 0.7 * weights @ pts + 0.3 * pts.mean(axis=0)
    extra = []
    for _ in range(extra_count):
        kind = rng.integers(0, 3)
        if kind == 0:
            bound = anchor[0] * rng.uniform(0.0, 0.9)
            extra.append(HalfPlane(-1.0, 0.0, -float(bound)))
        elif kind == 1:
            bound = anchor[1] * rng.uniform(0.0, 0.9)
            extra.append(HalfPlane(0.0, -1.0, -float(bound)))
        else:
            a = (1.0, nu_tilde_01) if rng.integers(0, 2) == 0 else (nu_tilde_10, 1.0)
            value = a[0] * anchor[0] + a[1] * anchor[1]
            bound = value * rng.uniform(0.0, 0.95)
            extra.append(HalfPlane(-a[0], -a[1], -float(bound)))
    return add_constraints(region, extra) if extra else region


def random_instance(rng, family=None):
    """(pair, region, rates-range) triple for oracle-equivalence tests."""
    import math

    from contamtest import nu_star

    pair = random_pair(rng, family)
    nt01 = nu_star(pair.p0_tilde, pair.p1_tilde).value
    nt10 = nu_star(pair.p1_tilde, pair.p0_tilde).value
    region = random_region(rng, nt01, nt10)
    ratio_range = (nt10, math.inf if nt01 == 0.0 else 1.0 / nt01)
    return pair, region, ratio_range
