"""Raster rendering of a map to a fixed-size RGB grid."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .types import PALETTE, WorldMap


def rasterize(world: WorldMap) -> np.ndarray:
    """Paint each pixel with the palette color of its containing cell.

    Pixel (row r, col c) probes the point ((c+0.5)/S, 1-(r+0.5)/S), so row 0
    is the north edge. Containment reduces to nearest-site because cells are
    Voronoi regions of their sites.
    """
    size = world.config.raster_size
    sites = np.array([c.site for c in world.cells])
    tree = cKDTree(sites)
    coords = (np.arange(size) + 0.5) / size
    xs, ys = np.meshgrid(coords, 1.0 - coords)  # ys[0] is the north row
    probes = np.column_stack([xs.ravel(), ys.ravel()])
    _, owner = tree.query(probes)
    colors = np.array([PALETTE[c.biome] for c in world.cells], dtype=np.uint8)
    return colors[owner].reshape(size, size, 3)


def save_png(raster: np.ndarray, path) -> None:
    from PIL import Image

    Image.fromarray(raster, mode="RGB").save(path, format="PNG")
