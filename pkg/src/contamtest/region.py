"""Feasible contamination region: half-planes, vertices, cone filter.

The set of proportion pairs consistent with the observed mixtures is a
convex polygon.  Its outer boundary comes from the contaminated mixture
proportions; side knowledge adds further half-planes.  The worst-case risk
search only ever needs the polygon's vertices, and of those only the ones
whose active constraint normals can produce a nonpositive gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateRegionError, EmptyRegionError, FamilyError

FEASIBILITY_TOL = 1e-9
DEDUP_TOL = 1e-8
SUM_GUARD = 1e-9


@dataclass(frozen=True)
class HalfPlane:
    """Linear constraint a0 * pi0 + a1 * pi1 <= b."""

    a0: float
    a1: float
    b: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.a0 == 0.0 and self.a1 == 0.0:
            raise FamilyError("half-plane normal must be nonzero")

    @property
    def normal(self) -> tuple[float, float]:
        return (self.a0, self.a1)

    def residual(self, pi0: float, pi1: float) -> float:
        """Signed slack, normalized by the normal's length; <= 0 is feasible."""
        scale = max(1.0, math.hypot(self.a0, self.a1))
        return (self.a0 * pi0 + self.a1 * pi1 - self.b) / scale


@dataclass(frozen=True)
class PolygonVertex:
    """Polygon corner with the indices of its tight constraints."""

    point: tuple[float, float]
    active_set: tuple[int, ...]
    candidate: bool


@dataclass(frozen=True)
class FeasibleRegion:
    """Half-plane intersection with its enumerated, cone-flagged vertices."""

    half_planes: tuple[HalfPlane, ...]
    vertices: tuple[PolygonVertex, ...]


def _in_cone_of_pair(target, n_i, n_j) -> bool:
    det = n_i[0] * n_j[1] - n_i[1] * n_j[0]
    if abs(det) <= 1e-12:
        return False
    mu_i = (target[0] * n_j[1] - target[1] * n_j[0]) / det
    mu_j = (n_i[0] * target[1] - n_i[1] * target[0]) / det
    return mu_i >= -1e-9 and mu_j >= -1e-9


def _on_ray(target, n) -> bool:
    cross = n[0] * target[1] - n[1] * target[0]
    dot = n[0] * target[0] + n[1] * target[1]
    return abs(cross) <= 1e-12 and dot > 0.0


def cone_contains_nonpositive(normals: Iterable[tuple[float, float]]) -> bool:
    """True when the conic hull of the normals meets the closed third
    quadrant in a nonzero vector.

    By the conic Caratheodory theorem any such vector is a nonnegative
    combination of at most two generators, so it suffices to check the
    generators themselves against the quadrant and the quadrant's extreme
    rays (-1, 0), (0, -1) for cone membership.
    """
    units = []
    for n in normals:
        norm = math.hypot(n[0], n[1])
        if norm > 0.0:
            units.append((n[0] / norm, n[1] / norm))
    if not units:
        return False
    for n in units:
        if n[0] <= 1e-12 and n[1] <= 1e-12:
            return True
    for target in ((-1.0, 0.0), (0.0, -1.0)):
        if any(_on_ray(target, n) for n in units):
            return True
        for i in range(len(units)):
            for j in range(i + 1, len(units)):
                if _in_cone_of_pair(target, units[i], units[j]):
                    return True
    return False


def cone_condition(vertex: PolygonVertex, region: FeasibleRegion) -> bool:
    """Whether the vertex can maximize a risk whose gradient is nonpositive."""
    normals = [region.half_planes[i].normal for i in vertex.active_set]
    return cone_contains_nonpositive(normals)


def _enumerate(half_planes: Sequence[HalfPlane]) -> tuple[PolygonVertex, ...]:
    points: list[tuple[float, float]] = []
    m = len(half_planes)
    for i in range(m):
        hi = half_planes[i]
        for j in range(i + 1, m):
            hj = half_planes[j]
            det = hi.a0 * hj.a1 - hi.a1 * hj.a0
            scale = max(1.0, math.hypot(hi.a0, hi.a1) * math.hypot(hj.a0, hj.a1))
            if abs(det) <= 1e-12 * scale:
                continue
            x = (hi.b * hj.a1 - hi.a1 * hj.b) / det
            y = (hi.a0 * hj.b - hi.b * hj.a0) / det
            if all(hp.residual(x, y) <= FEASIBILITY_TOL for hp in half_planes):
                points.append((x, y))

    unique: list[tuple[float, float]] = []
    for p in points:
        if not any(max(abs(p[0] - q[0]), abs(p[1] - q[1])) <= DEDUP_TOL for q in unique):
            unique.append(p)
    if not unique:
        return ()

    cx = sum(p[0] for p in unique) / len(unique)
    cy = sum(p[1] for p in unique) / len(unique)
    unique.sort(key=lambda p: (math.atan2(p[1] - cy, p[0] - cx), p[0], p[1]))

    vertices = []
    for p in unique:
        active = tuple(
            k
            for k, hp in enumerate(half_planes)
            if abs(hp.residual(p[0], p[1])) <= FEASIBILITY_TOL
        )
        vertices.append(PolygonVertex(point=p, active_set=active, candidate=False))
    return tuple(vertices)


def build_region(half_planes: Sequence[HalfPlane]) -> FeasibleRegion:
    """Intersect the half-planes and enumerate their polygon's vertices."""
    planes = tuple(half_planes)
    vertices = _enumerate(planes)
    if not vertices:
        raise EmptyRegionError("constraints leave no feasible contamination pair")
    region = FeasibleRegion(half_planes=planes, vertices=vertices)
    flagged = tuple(
        PolygonVertex(v.point, v.active_set, cone_condition(v, region))
        for v in vertices
    )
    return FeasibleRegion(half_planes=planes, vertices=flagged)


def base_region(nu_tilde_01: float, nu_tilde_10: float) -> FeasibleRegion:
    """Outer feasible polygon implied by the contaminated mixture proportions.

    The two slanted boundary lines correspond to a mutually irreducible
    pure pair; interior points correspond to strictly positive pure
    proportions.  The strict constraint pi0 + pi1 < 1 is represented by a
    closed guard shifted inward by 1e-9.
    """
    for name, value in (("nu_tilde_01", nu_tilde_01), ("nu_tilde_10", nu_tilde_10)):
        if not 0.0 <= value < 1.0:
            raise DegenerateRegionError(f"{name} must lie in [0, 1), got {value}")
    planes = (
        HalfPlane(-1.0, 0.0, 0.0, "pi0 >= 0"),
        HalfPlane(0.0, -1.0, 0.0, "pi1 >= 0"),
        HalfPlane(1.0, nu_tilde_01, nu_tilde_01, f"pi0 + {nu_tilde_01:g}*pi1 <= {nu_tilde_01:g}"),
        HalfPlane(nu_tilde_10, 1.0, nu_tilde_10, f"{nu_tilde_10:g}*pi0 + pi1 <= {nu_tilde_10:g}"),
        HalfPlane(1.0, 1.0, 1.0 - SUM_GUARD, "pi0 + pi1 < 1"),
    )
    return build_region(planes)


def add_constraints(region: FeasibleRegion, extra: Iterable[HalfPlane]) -> FeasibleRegion:
    """Shrink the region by additional half-planes; errors when emptied."""
    return build_region(region.half_planes + tuple(extra))


def enumerate_vertices(region: FeasibleRegion) -> list[PolygonVertex]:
    """Vertices in counterclockwise order, each with its active set."""
    if not region.vertices:
        raise EmptyRegionError("region has no vertices")
    return list(region.vertices)
