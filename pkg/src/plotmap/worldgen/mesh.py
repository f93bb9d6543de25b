"""Relaxed Voronoi mesh over the unit square.

Cells are obtained by mirroring the sites across all four square edges and
computing one Voronoi diagram of the 5N points: the bisector between a site
and its mirror is exactly the square edge, so every original cell comes out
finite and already clipped to [0,1]^2, and the original cells partition the
square exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Voronoi

from ..geometry import polygon_area, polygon_centroid
from .types import Cell, MapGenConfig

_SNAP = 1e-9  # vertices this close to a square edge are snapped onto it


@dataclass
class Edge:
    """One polygon edge of the mesh; border edges have a single cell."""

    corners: tuple[int, int]  # indices into MeshGraph.corner_points
    cell_ids: tuple[int, ...]  # 1 (border) or 2 (interior) cells
    is_border: bool

    @property
    def key(self) -> tuple[int, int]:
        return self.corners


@dataclass
class MeshGraph:
    """Corner/edge structure shared by the flooding and river stages."""

    corner_points: np.ndarray  # (C, 2)
    edges: list[Edge]
    corner_edges: dict[int, list[int]] = field(default_factory=dict)  # corner -> edge idx
    corner_cells: dict[int, set[int]] = field(default_factory=dict)  # corner -> cell ids
    cell_edges: dict[int, list[int]] = field(default_factory=dict)  # cell -> edge idx

    def corner_neighbors(self, corner: int) -> list[int]:
        out = []
        for ei in self.corner_edges.get(corner, ()):
            a, b = self.edges[ei].corners
            out.append(b if a == corner else a)
        return out


def _mirrored(sites: np.ndarray) -> np.ndarray:
    left = sites * (-1, 1)
    right = sites * (-1, 1) + (2, 0)
    down = sites * (1, -1)
    up = sites * (1, -1) + (0, 2)
    return np.vstack([sites, left, right, down, up])


def _clipped_voronoi(sites: np.ndarray) -> tuple[list[list[int]], np.ndarray, list[tuple[int, int]]]:
    """Voronoi of the mirrored point set, restricted to the original sites.

    Returns (region vertex-index lists in CCW order, global vertex array,
    neighbor pairs among original sites).
    """
    n = len(sites)
    vor = Voronoi(_mirrored(sites))
    verts = vor.vertices.copy()
    # Snap coordinates that are numerically on a square edge.
    for axis in (0, 1):
        col = verts[:, axis]
        col[np.abs(col) < _SNAP] = 0.0
        col[np.abs(col - 1.0) < _SNAP] = 1.0
    regions: list[list[int]] = []
    for i in range(n):
        region = vor.regions[vor.point_region[i]]
        if -1 in region:  # cannot happen with full mirroring; guard anyway
            raise RuntimeError("unbounded Voronoi region for interior site")
        pts = verts[region]
        order = np.argsort(np.arctan2(pts[:, 1] - sites[i, 1], pts[:, 0] - sites[i, 0]))
        regions.append([region[k] for k in order])
    pairs = [
        (int(a), int(b))
        for a, b in vor.ridge_points
        if a < n and b < n
    ]
    return regions, verts, pairs


def lloyd_relax(sites: np.ndarray, iterations: int) -> np.ndarray:
    for _ in range(iterations):
        regions, verts, _ = _clipped_voronoi(sites)
        sites = np.array([polygon_centroid(verts[r]) for r in regions])
    return sites


def build_cells(config: MapGenConfig, rng: np.random.Generator) -> list[Cell]:
    """Generate relaxed Voronoi cells clipped to the unit square."""
    config.validate()
    sites = rng.random((config.cell_count, 2))
    sites = lloyd_relax(sites, config.lloyd_iterations)
    regions, verts, pairs = _clipped_voronoi(sites)

    neighbors: dict[int, set[int]] = {i: set() for i in range(len(sites))}
    for a, b in pairs:
        neighbors[a].add(b)
        neighbors[b].add(a)

    cells = []
    for i, region in enumerate(regions):
        poly = [(float(verts[v][0]), float(verts[v][1])) for v in region]
        if polygon_area(poly) < 0:
            poly.reverse()
        cells.append(
            Cell(
                id=i,
                site=(float(sites[i][0]), float(sites[i][1])),
                vertices=poly,
                neighbor_ids=sorted(neighbors[i]),
            )
        )
    return cells


def _on_border_line(p: tuple[float, float], q: tuple[float, float]) -> bool:
    for axis in (0, 1):
        for edge_val in (0.0, 1.0):
            if abs(p[axis] - edge_val) < _SNAP and abs(q[axis] - edge_val) < _SNAP:
                return True
    return False


def build_mesh_graph(cells: list[Cell]) -> MeshGraph:
    """Recover the shared corner/edge structure from cell polygons.

    Corners are deduplicated by rounded coordinates so the graph can also be
    rebuilt from a JSON round-trip.
    """
    corner_index: dict[tuple[float, float], int] = {}
    corner_pts: list[tuple[float, float]] = []

    def corner_of(p: tuple[float, float]) -> int:
        key = (round(p[0], 12), round(p[1], 12))
        idx = corner_index.get(key)
        if idx is None:
            idx = len(corner_pts)
            corner_index[key] = idx
            corner_pts.append(p)
        return idx

    edge_cells: dict[tuple[int, int], list[int]] = {}
    cell_corner_ids: dict[int, list[int]] = {}
    for cell in cells:
        ids = [corner_of(v) for v in cell.vertices]
        cell_corner_ids[cell.id] = ids
        for k in range(len(ids)):
            a, b = ids[k], ids[(k + 1) % len(ids)]
            key = (a, b) if a < b else (b, a)
            edge_cells.setdefault(key, []).append(cell.id)

    pts = np.asarray(corner_pts, dtype=float)
    graph = MeshGraph(corner_points=pts, edges=[])
    for (a, b), owners in sorted(edge_cells.items()):
        border = len(owners) == 1 and _on_border_line(tuple(pts[a]), tuple(pts[b]))
        edge = Edge(corners=(a, b), cell_ids=tuple(sorted(owners)), is_border=border)
        ei = len(graph.edges)
        graph.edges.append(edge)
        for c in (a, b):
            graph.corner_edges.setdefault(c, []).append(ei)
        for cid in owners:
            graph.cell_edges.setdefault(cid, []).append(ei)
    for cid, ids in cell_corner_ids.items():
        for c in ids:
            graph.corner_cells.setdefault(c, set()).add(cid)
    return graph


def mean_site_centroid_distance(cells: list[Cell]) -> float:
    total = 0.0
    for cell in cells:
        cx, cy = polygon_centroid(cell.vertices)
        total += math.hypot(cell.site[0] - cx, cell.site[1] - cy)
    return total / len(cells)
