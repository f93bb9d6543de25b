"""Small 2D geometry kernel used by worldgen and the constraint scorers.

Points are (x, y) tuples or length-2 numpy arrays in the unit square,
y increasing northward. Polygons are lists of CCW vertices.
"""

from __future__ import annotations

import math

import numpy as np

Point = tuple[float, float]


def clamp01(v: float) -> float:
    return 0.0 if v < 0.0 else (1.0 if v > 1.0 else v)


def clamp_point(p) -> Point:
    return (clamp01(float(p[0])), clamp01(float(p[1])))


def dist(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def polygon_area(vertices) -> float:
    """Signed area; positive for CCW winding."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def polygon_centroid(vertices) -> Point:
    """Area centroid; falls back to vertex mean for degenerate polygons."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    cross = x * yn - xn * y
    a = 0.5 * float(np.sum(cross))
    if abs(a) < 1e-14:
        return (float(np.mean(x)), float(np.mean(y)))
    cx = float(np.sum((x + xn) * cross)) / (6.0 * a)
    cy = float(np.sum((y + yn) * cross)) / (6.0 * a)
    return (cx, cy)


def point_in_polygon(point, vertices) -> bool:
    """Crossing-number test, boundary-inclusive (within 1e-12)."""
    x, y = float(point[0]), float(point[1])
    n = len(vertices)
    inside = False
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if point_segment_distance(point, (x1, y1), (x2, y2)) < 1e-12:
            return True
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < xi:
                inside = not inside
    return inside


def point_segment_distance(p, a, b) -> float:
    px, py = float(p[0]), float(p[1])
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / seg2
    t = clamp01(t)
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def point_polygon_distance(p, vertices) -> float:
    """0 inside or on the boundary, else distance to the nearest edge."""
    if point_in_polygon(p, vertices):
        return 0.0
    n = len(vertices)
    return min(
        point_segment_distance(p, vertices[i], vertices[(i + 1) % n])
        for i in range(n)
    )


def segment_segment_distance(a1, a2, b1, b2) -> float:
    if segments_intersect(a1, a2, b1, b2):
        return 0.0
    return min(
        point_segment_distance(a1, b1, b2),
        point_segment_distance(a2, b1, b2),
        point_segment_distance(b1, a1, a2),
        point_segment_distance(b2, a1, a2),
    )


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def segments_intersect(a1, a2, b1, b2) -> bool:
    """Closed-segment intersection, collinear overlaps included."""
    d1 = _orient(b1, b2, a1)
    d2 = _orient(b1, b2, a2)
    d3 = _orient(a1, a2, b1)
    d4 = _orient(a1, a2, b2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)):
        return True

    def on_seg(p, q, r):
        return (
            min(p[0], r[0]) - 1e-15 <= q[0] <= max(p[0], r[0]) + 1e-15
            and min(p[1], r[1]) - 1e-15 <= q[1] <= max(p[1], r[1]) + 1e-15
        )

    if d1 == 0 and on_seg(b1, a1, b2):
        return True
    if d2 == 0 and on_seg(b1, a2, b2):
        return True
    if d3 == 0 and on_seg(a1, b1, a2):
        return True
    if d4 == 0 and on_seg(a1, b2, a2):
        return True
    return False


def segment_convex_polygon_overlap(p1, p2, vertices, min_span: float = 1e-12) -> bool:
    """True iff the open segment p1->p2 crosses the polygon interior.

    Clips the segment parameter range against each CCW half-plane
    (Cyrus-Beck); an overlap shorter than min_span (a graze along an
    edge or a single touch point) does not count.
    """
    t_lo, t_hi = 0.0, 1.0
    dx = p2[0] - p1[0]
    dy = p2[1] - p1[1]
    n = len(vertices)
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        # Inward normal of CCW edge (a->b) is (-(by-ay), bx-ax).
        nx, ny = -(by - ay), bx - ax
        denom = nx * dx + ny * dy
        num = nx * (p1[0] - ax) + ny * (p1[1] - ay)
        if abs(denom) < 1e-18:
            if num < 0.0:
                return False
            continue
        t = -num / denom
        if denom > 0.0:
            t_lo = max(t_lo, t)
        else:
            t_hi = min(t_hi, t)
        if t_lo >= t_hi:
            return False
    return (t_hi - t_lo) > min_span


def segment_polygon_distance(p1, p2, vertices) -> float:
    if segment_convex_polygon_overlap(p1, p2, vertices, min_span=0.0):
        return 0.0
    if point_in_polygon(p1, vertices):
        return 0.0
    n = len(vertices)
    return min(
        segment_segment_distance(p1, p2, vertices[i], vertices[(i + 1) % n])
        for i in range(n)
    )


def project_on_segment(p, a, b) -> tuple[float, float]:
    """Return (t, h): parameter of the projection onto segment a->b
    (unclamped) and the perpendicular distance from p to the line."""
    ax, ay = float(a[0]), float(a[1])
    bx, by = float(b[0]), float(b[1])
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    if seg2 <= 0.0:
        return 0.0, math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / seg2
    h = abs((p[0] - ax) * dy - (p[1] - ay) * dx) / math.sqrt(seg2)
    return t, h
