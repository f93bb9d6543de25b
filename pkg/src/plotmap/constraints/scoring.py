"""Satisfaction scoring for the 12 constraint families.

Every scorer returns a SatisfactionResult whose score lies in [0, 1] and
equals 1 exactly when the crisp predicate holds; shaped partial credit is
capped at 0.99. All tunable distances/angles live in Thresholds so the
environment, the solvers, and the test oracles share one set of numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidConstraintError, MissingReferenceError
from ..geometry import dist, point_segment_distance, project_on_segment
from ..mapindex import MapIndex
from ..worldgen.types import BiomeType
from .types import Constraint, ConstraintType, Direction, SatisfactionResult, satisfied, unsatisfied


@dataclass(frozen=True)
class Thresholds:
    close_facility: float = 0.15   # satisfied when d <= this
    close_biome: float = 0.10
    far_facility: float = 0.40     # satisfied when d >= this
    far_biome: float = 0.25
    close_falloff: float = 0.5     # shaping length beyond the close threshold
    inside_falloff: float = 0.3    # shaping length outside the target biome
    outside_falloff: float = 0.2   # shaping length for escaping a biome
    cone_half_angle: float = 45.0  # degrees; directional acceptance cone
    cone_falloff: float = 135.0    # degrees from cone edge to zero score
    min_offset: float = 0.02       # directional anchors closer than this score 0
    edge_band: float = 0.30        # OnMapSide acceptance depth and falloff
    between_t_lo: float = 0.15
    between_t_hi: float = 0.85
    between_h_max: float = 0.08
    between_falloff: float = 0.3
    across_falloff: float = 0.2
    eye_height: float = 0.04
    sight_samples: int = 64


THRESHOLDS = Thresholds()


def evaluate(constraint: Constraint, layout: dict, index: MapIndex,
             th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    """Score one constraint against a layout (facility id -> (x, y))."""
    constraint.validate()
    points = []
    for fid in constraint.facilities:
        if fid not in layout:
            raise MissingReferenceError(f"facility {fid!r} not in layout")
        points.append(layout[fid])

    ct = constraint.ctype
    if ct == ConstraintType.INSIDE:
        return score_containment(True, constraint.biome, points[0], index, th)
    if ct == ConstraintType.OUTSIDE:
        return score_containment(False, constraint.biome, points[0], index, th)
    if ct == ConstraintType.CLOSE_TO_BIOME:
        return score_proximity("close", points[0], index, th, biome=constraint.biome)
    if ct == ConstraintType.AWAY_FROM_BIOME:
        return score_proximity("away", points[0], index, th, biome=constraint.biome)
    if ct == ConstraintType.CLOSE_TO_FACILITY:
        return score_proximity("close", points[0], index, th, other=points[1])
    if ct == ConstraintType.AWAY_FROM_FACILITY:
        return score_proximity("away", points[0], index, th, other=points[1])
    if ct == ConstraintType.DIR_OF_FACILITY:
        return score_directional(constraint.direction, points[1], points[0], th)
    if ct == ConstraintType.DIR_OF_BIOME:
        anchor = index.biome_centroid(constraint.biome)
        if anchor is None:
            return unsatisfied(0.0)
        return score_directional(constraint.direction, anchor, points[0], th)
    if ct == ConstraintType.ON_MAP_SIDE:
        return score_map_side(constraint.direction, points[0], th)
    if ct == ConstraintType.IN_BETWEEN:
        return score_between(points[0], points[1], points[2], th)
    if ct == ConstraintType.ACROSS_BIOME_FROM:
        return score_across_biome(constraint.biome, points[0], points[1], index, th)
    if ct == ConstraintType.VISIBLE_FROM:
        return score_visibility(points[0], points[1], index, th)
    raise InvalidConstraintError(f"unknown constraint type {ct!r}")


def distance_to_biome(point, biome: BiomeType, index: MapIndex) -> float:
    """0 iff the containing cell has the biome; +inf when absent."""
    return index.distance_to_biome(point, biome)


def score_containment(inside: bool, biome: BiomeType, point, index: MapIndex,
                      th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    here = index.biome_at(point) if index.has_biome(biome) else None
    if inside:
        if not index.has_biome(biome):
            return unsatisfied(0.0)
        if here == biome:
            return satisfied()
        d = index.distance_to_biome(point, biome)
        return unsatisfied(0.99 * max(0.0, 1.0 - d / th.inside_falloff))
    # outside
    if not index.has_biome(biome) or here != biome:
        return satisfied()
    depth = index.depth_in_biome(point, biome)
    return unsatisfied(0.99 * max(0.0, 1.0 - depth / th.outside_falloff))


def score_proximity(kind: str, point, index: MapIndex, th: Thresholds = THRESHOLDS,
                    biome: BiomeType | None = None, other=None) -> SatisfactionResult:
    if biome is not None:
        if not index.has_biome(biome):
            return satisfied() if kind == "away" else unsatisfied(0.0)
        d = index.distance_to_biome(point, biome)
        near, far = th.close_biome, th.far_biome
    else:
        d = dist(point, other)
        near, far = th.close_facility, th.far_facility
    if kind == "close":
        if d <= near:
            return satisfied()
        return unsatisfied(0.99 * max(0.0, 1.0 - (d - near) / th.close_falloff))
    if d >= far:
        return satisfied()
    return unsatisfied(0.99 * (d / far))


def score_directional(direction: Direction, anchor, subject,
                      th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    vx = subject[0] - anchor[0]
    vy = subject[1] - anchor[1]
    norm = math.hypot(vx, vy)
    if norm < th.min_offset:
        return unsatisfied(0.0)
    ux, uy = direction.unit
    cos_theta = max(-1.0, min(1.0, (vx * ux + vy * uy) / norm))
    theta = math.degrees(math.acos(cos_theta))
    if theta <= th.cone_half_angle + 1e-9:  # tolerate acos rounding at the rim
        return satisfied()
    return unsatisfied(
        0.99 * max(0.0, 1.0 - (theta - th.cone_half_angle) / th.cone_falloff)
    )


def score_map_side(direction: Direction, point, th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    x, y = point
    edge_distance = {
        Direction.N: 1.0 - y,
        Direction.S: y,
        Direction.E: 1.0 - x,
        Direction.W: x,
    }[direction]
    if edge_distance <= th.edge_band:
        return satisfied()
    excess = edge_distance - th.edge_band
    return unsatisfied(0.99 * max(0.0, 1.0 - excess / th.edge_band))


def score_between(p1, p2, p3, th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    if dist(p2, p3) <= 1e-12:
        if dist(p1, p2) <= th.between_h_max:
            return satisfied()
        return unsatisfied(0.99 * max(0.0, 1.0 - dist(p1, p2) / th.between_falloff))
    t, h = project_on_segment(p1, p2, p3)
    if th.between_t_lo <= t <= th.between_t_hi and h <= th.between_h_max:
        return satisfied()
    d_seg = point_segment_distance(p1, p2, p3)
    return unsatisfied(0.99 * max(0.0, 1.0 - d_seg / th.between_falloff))


def score_across_biome(biome: BiomeType, p1, p2, index: MapIndex,
                       th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    if not index.has_biome(biome):
        return unsatisfied(0.0)
    if index.biome_at(p1) == biome or index.biome_at(p2) == biome:
        return unsatisfied(0.0)
    if index.segment_crosses_biome(p1, p2, biome):
        return satisfied()
    d_seg = index.segment_distance_to_biome(p1, p2, biome)
    return unsatisfied(0.99 * max(0.0, 1.0 - d_seg / th.across_falloff) * 0.5)


def score_visibility(p1, p2, index: MapIndex,
                     th: Thresholds = THRESHOLDS) -> SatisfactionResult:
    """Line of sight over the elevation field with a fixed eye height."""
    n = th.sight_samples
    ts = np.linspace(0.0, 1.0, n)
    pts = np.column_stack([
        p1[0] + ts * (p2[0] - p1[0]),
        p1[1] + ts * (p2[1] - p1[1]),
    ])
    terrain = index.elevations_at(pts)
    h1 = index.elevation_at(p1) + th.eye_height
    h2 = index.elevation_at(p2) + th.eye_height
    sight = h1 + ts * (h2 - h1)
    blocked = int(np.sum(terrain > sight))
    if blocked == 0:
        return satisfied()
    return unsatisfied(0.99 * (n - blocked) / n)
