"""Query acceleration over a WorldMap.

Constraint scoring hits the same geometric questions millions of times per
evaluation run (containing cell, distance to a biome, biome centroid), so
everything slow is precomputed here once per map. All answers are exact with
respect to the cell polygons; containing-cell lookups use nearest-site, which
coincides with polygon containment because cells are Voronoi regions.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from .geometry import (
    point_polygon_distance,
    point_segment_distance,
    polygon_area,
    polygon_centroid,
)
from .worldgen.types import BiomeType, Cell, WorldMap

INFINITE_DISTANCE = math.inf


class MapIndex:
    def __init__(self, world: WorldMap):
        self.world = world
        self.cells = world.cells
        self._tree = cKDTree(np.array([c.site for c in self.cells]))
        self._elevations = np.array([c.elevation for c in self.cells])
        self._biome_ids = np.array([list(BiomeType).index(c.biome) for c in self.cells])
        self._biome_cells: dict[BiomeType, list[Cell]] = {}
        for cell in self.cells:
            self._biome_cells.setdefault(cell.biome, []).append(cell)
        self._centroids: dict[BiomeType, tuple[float, float]] = {}
        self._region_edges: dict[BiomeType, np.ndarray] = {}

    # -- cell lookup ---------------------------------------------------

    def containing_cell(self, point) -> Cell:
        return self.cells[int(self._tree.query(point)[1])]

    def containing_cells(self, points: np.ndarray) -> np.ndarray:
        """Vectorized containing-cell ids for an (M, 2) array."""
        return self._tree.query(points)[1]

    def elevation_at(self, point) -> float:
        return float(self._elevations[int(self._tree.query(point)[1])])

    def elevations_at(self, points: np.ndarray) -> np.ndarray:
        return self._elevations[self._tree.query(points)[1]]

    def biome_at(self, point) -> BiomeType:
        return self.containing_cell(point).biome

    # -- biome regions ---------------------------------------------------

    def has_biome(self, biome: BiomeType) -> bool:
        return biome in self._biome_cells

    def biome_cells(self, biome: BiomeType) -> list[Cell]:
        return self._biome_cells.get(biome, [])

    def biome_centroid(self, biome: BiomeType) -> tuple[float, float] | None:
        """Area-weighted centroid of all cells of the biome."""
        if biome not in self._biome_cells:
            return None
        if biome not in self._centroids:
            ax = ay = total = 0.0
            for cell in self._biome_cells[biome]:
                a = abs(polygon_area(cell.vertices))
                cx, cy = polygon_centroid(cell.vertices)
                ax += a * cx
                ay += a * cy
                total += a
            self._centroids[biome] = (ax / total, ay / total)
        return self._centroids[biome]

    def _edges_of(self, biome: BiomeType) -> np.ndarray:
        """(K, 4) segment array [ax, ay, bx, by] of all polygon edges of the
        biome's cells (interior shared edges included; they never win a
        minimum-distance query from outside the region)."""
        if biome not in self._region_edges:
            segs = []
            for cell in self._biome_cells.get(biome, []):
                vs = cell.vertices
                for i in range(len(vs)):
                    a, b = vs[i], vs[(i + 1) % len(vs)]
                    segs.append((a[0], a[1], b[0], b[1]))
            self._region_edges[biome] = (
                np.array(segs) if segs else np.zeros((0, 4))
            )
        return self._region_edges[biome]

    def distance_to_biome(self, point, biome: BiomeType) -> float:
        """0 inside the biome, +inf if absent, else distance to its edges."""
        if biome not in self._biome_cells:
            return INFINITE_DISTANCE
        if self.biome_at(point) == biome:
            return 0.0
        return self._min_edge_distance(point, biome)

    def _min_edge_distance(self, point, biome: BiomeType) -> float:
        segs = self._edges_of(biome)
        ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
        px, py = float(point[0]), float(point[1])
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        seg2[seg2 == 0.0] = 1.0
        t = np.clip(((px - ax) * dx + (py - ay) * dy) / seg2, 0.0, 1.0)
        qx, qy = ax + t * dx, ay + t * dy
        return float(np.sqrt(np.min((px - qx) ** 2 + (py - qy) ** 2)))

    def depth_in_biome(self, point, biome: BiomeType) -> float:
        """Distance from an interior point to the biome region's boundary.

        Only edges between a biome cell and a different-biome (or border)
        face count; edges shared by two cells of the same biome are interior.
        """
        key = (biome, "boundary")
        if key not in self._region_edges:
            segs = []
            for cell in self._biome_cells.get(biome, []):
                vs = cell.vertices
                for i in range(len(vs)):
                    a, b = vs[i], vs[(i + 1) % len(vs)]
                    mid = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
                    # Probe just across the edge: step outward from the site.
                    out = self._outward_probe(cell, mid)
                    other = self.containing_cell(out)
                    if other.id == cell.id or other.biome != biome:
                        segs.append((a[0], a[1], b[0], b[1]))
            self._region_edges[key] = np.array(segs) if segs else np.zeros((0, 4))
        segs = self._region_edges[key]
        if len(segs) == 0:
            return 0.0
        px, py = float(point[0]), float(point[1])
        ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
        dx, dy = bx - ax, by - ay
        seg2 = dx * dx + dy * dy
        seg2[seg2 == 0.0] = 1.0
        t = np.clip(((px - ax) * dx + (py - ay) * dy) / seg2, 0.0, 1.0)
        qx, qy = ax + t * dx, ay + t * dy
        return float(np.sqrt(np.min((px - qx) ** 2 + (py - qy) ** 2)))

    @staticmethod
    def _outward_probe(cell: Cell, edge_mid) -> tuple[float, float]:
        vx = edge_mid[0] - cell.site[0]
        vy = edge_mid[1] - cell.site[1]
        norm = math.hypot(vx, vy) or 1.0
        eps = 1e-6
        return (edge_mid[0] + vx / norm * eps, edge_mid[1] + vy / norm * eps)

    def _bboxes_of(self, biome: BiomeType) -> np.ndarray:
        """(K, 4) per-cell bounding boxes [minx, miny, maxx, maxy]."""
        key = (biome, "bbox")
        if key not in self._region_edges:
            rows = []
            for cell in self._biome_cells.get(biome, []):
                vs = np.asarray(cell.vertices)
                rows.append((vs[:, 0].min(), vs[:, 1].min(), vs[:, 0].max(), vs[:, 1].max()))
            self._region_edges[key] = np.array(rows) if rows else np.zeros((0, 4))
        return self._region_edges[key]

    def segment_crosses_biome(self, p1, p2, biome: BiomeType) -> bool:
        """Does the open segment p1->p2 pass through any cell of the biome?

        Exact convex clipping, bbox-prefiltered; a graze along a cell edge
        does not count as a crossing.
        """
        from .geometry import segment_convex_polygon_overlap

        cells = self._biome_cells.get(biome, [])
        if not cells:
            return False
        bb = self._bboxes_of(biome)
        lox, hix = min(p1[0], p2[0]), max(p1[0], p2[0])
        loy, hiy = min(p1[1], p2[1]), max(p1[1], p2[1])
        mask = (bb[:, 0] <= hix) & (bb[:, 2] >= lox) & (bb[:, 1] <= hiy) & (bb[:, 3] >= loy)
        for k in np.flatnonzero(mask):
            if segment_convex_polygon_overlap(p1, p2, cells[k].vertices):
                return True
        return False

    def segment_distance_to_biome(self, p1, p2, biome: BiomeType) -> float:
        """Min distance from the segment to the biome region (0 on crossing)."""
        if biome not in self._biome_cells:
            return INFINITE_DISTANCE
        if self.segment_crosses_biome(p1, p2, biome):
            return 0.0
        segs = self._edges_of(biome)
        d = min(
            _point_to_segments(p1, segs).min(),
            _point_to_segments(p2, segs).min(),
            _points_to_segment(segs[:, 0:2], p1, p2).min(),
            _points_to_segment(segs[:, 2:4], p1, p2).min(),
        )
        return float(d)

    def distance_to_rivers(self, point) -> float:
        best = INFINITE_DISTANCE
        for path in self.world.rivers:
            for k in range(len(path) - 1):
                best = min(best, point_segment_distance(point, path[k], path[k + 1]))
            if len(path) == 1:
                best = min(best, point_segment_distance(point, path[0], path[0]))
        return best

    def verify_containment(self, point, cell: Cell) -> bool:
        """Slow polygon-containment check, used by test oracles."""
        return point_polygon_distance(point, cell.vertices) == 0.0


def _point_to_segments(p, segs: np.ndarray) -> np.ndarray:
    """Distances from one point to (K, 4) segments [ax, ay, bx, by]."""
    ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
    px, py = float(p[0]), float(p[1])
    dx, dy = bx - ax, by - ay
    seg2 = dx * dx + dy * dy
    seg2 = np.where(seg2 == 0.0, 1.0, seg2)
    t = np.clip(((px - ax) * dx + (py - ay) * dy) / seg2, 0.0, 1.0)
    return np.sqrt((px - (ax + t * dx)) ** 2 + (py - (ay + t * dy)) ** 2)


def _points_to_segment(pts: np.ndarray, a, b) -> np.ndarray:
    """Distances from (K, 2) points to the single segment a->b."""
    ax, ay = float(a[0]), float(a[1])
    dx, dy = float(b[0]) - ax, float(b[1]) - ay
    seg2 = dx * dx + dy * dy
    if seg2 == 0.0:
        return np.sqrt((pts[:, 0] - ax) ** 2 + (pts[:, 1] - ay) ** 2)
    t = np.clip(((pts[:, 0] - ax) * dx + (pts[:, 1] - ay) * dy) / seg2, 0.0, 1.0)
    return np.sqrt((pts[:, 0] - (ax + t * dx)) ** 2 + (pts[:, 1] - (ay + t * dy)) ** 2)
