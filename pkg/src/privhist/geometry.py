"""Axis-aligned rectangles, square grid partitions, and overlap fractions.

Cell membership is half-open: a point sitting exactly on an interior cell
boundary belongs to the neighbouring cell with the larger index along that
axis, and the domain's maximum edges are closed so every in-domain point
lands in exactly one cell. The same rule governs query-region membership
(see :func:`privhist.histogram.true_count`), which makes responses on
cell-aligned regions exact. The boundary rule is a convention of this
library, not a mathematical necessity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np


def _require_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        _require_finite(x=self.x, y=self.y)


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle with strictly positive width and height."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        _require_finite(x_min=self.x_min, y_min=self.y_min,
                        x_max=self.x_max, y_max=self.y_max)
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be < x_max, got [{self.x_min}, {self.x_max}]")
        if not self.y_min < self.y_max:
            raise ValueError(f"y_min must be < y_max, got [{self.y_min}, {self.y_max}]")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height


@dataclass(frozen=True)
class GridSpec:
    """A g x g partition of a rectangular domain.

    Cells are indexed row-major: ``index = row * g + col`` where ``col``
    counts along x and ``row`` along y, both from the domain's minimum
    corner. Cell edges come from ``np.linspace`` so the cells tile the
    domain exactly, endpoints included.
    """

    domain: Rect
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise ValueError(f"grid size must be >= 1, got {self.g}")

    @cached_property
    def x_edges(self) -> np.ndarray:
        return np.linspace(self.domain.x_min, self.domain.x_max, self.g + 1)

    @cached_property
    def y_edges(self) -> np.ndarray:
        return np.linspace(self.domain.y_min, self.domain.y_max, self.g + 1)

    @property
    def n_cells(self) -> int:
        return self.g * self.g


def cell_rect(grid: GridSpec, index: int) -> Rect:
    """Closed rectangle of cell ``index`` (row-major)."""
    if not 0 <= index < grid.n_cells:
        raise IndexError(f"cell index {index} out of range for g={grid.g}")
    row, col = divmod(index, grid.g)
    xe, ye = grid.x_edges, grid.y_edges
    return Rect(float(xe[col]), float(ye[row]), float(xe[col + 1]), float(ye[row + 1]))


def _axis_index(edges: np.ndarray, values) -> np.ndarray:
    # side="right" sends boundary values to the higher cell; the clip sends
    # the domain max edge back into the last cell.
    idx = np.searchsorted(edges, values, side="right") - 1
    return np.clip(idx, 0, len(edges) - 2)


def locate(grid: GridSpec, p: Point) -> int:
    """Index of the cell containing ``p`` under the half-open convention."""
    d = grid.domain
    if not (d.x_min <= p.x <= d.x_max and d.y_min <= p.y <= d.y_max):
        raise ValueError(f"point ({p.x}, {p.y}) outside domain")
    col = int(_axis_index(grid.x_edges, p.x))
    row = int(_axis_index(grid.y_edges, p.y))
    return row * grid.g + col


def locate_many(grid: GridSpec, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Vectorised :func:`locate` for coordinate arrays already inside the domain."""
    d = grid.domain
    in_dom = (xs >= d.x_min) & (xs <= d.x_max) & (ys >= d.y_min) & (ys <= d.y_max)
    if not np.all(in_dom):
        bad = int(np.argmin(in_dom))
        raise ValueError(f"point ({xs[bad]}, {ys[bad]}) outside domain")
    cols = _axis_index(grid.x_edges, xs)
    rows = _axis_index(grid.y_edges, ys)
    return rows * grid.g + cols


def overlap_fraction(cell: Rect, qr: Rect) -> float:
    """Area(qr ∩ cell) / Area(cell).

    Per-axis overlap lengths are ``max(0, min(highs) - max(lows))``; the
    rectangles' intersection area is their product. Disjoint rectangles
    give 0. The result is clipped to 1 to absorb last-ulp rounding.
    """
    x_overlap = max(0.0, min(cell.x_max, qr.x_max) - max(cell.x_min, qr.x_min))
    y_overlap = max(0.0, min(cell.y_max, qr.y_max) - max(cell.y_min, qr.y_min))
    return min(1.0, (x_overlap * y_overlap) / cell.area)


def _axis_overlap_run(edges: np.ndarray, lo: float, hi: float) -> tuple[int, np.ndarray]:
    """Contiguous run of positive per-interval overlap lengths with [lo, hi]."""
    lengths = np.minimum(edges[1:], hi) - np.maximum(edges[:-1], lo)
    pos = np.nonzero(lengths > 0.0)[0]
    if pos.size == 0:
        return 0, np.empty(0)
    return int(pos[0]), lengths[pos[0]:pos[-1] + 1]


def axis_overlap_fractions(grid: GridSpec, qr: Rect) -> tuple[int, np.ndarray, int, np.ndarray]:
    """Overlap of ``qr`` with the grid, factorised along axes.

    Returns ``(col0, x_fracs, row0, y_fracs)`` where the overlap fraction of
    cell ``(row0 + j, col0 + i)`` is ``y_fracs[j] * x_fracs[i]``. Empty
    arrays mean no overlap.
    """
    col0, ox = _axis_overlap_run(grid.x_edges, qr.x_min, qr.x_max)
    row0, oy = _axis_overlap_run(grid.y_edges, qr.y_min, qr.y_max)
    if ox.size == 0 or oy.size == 0:
        return 0, np.empty(0), 0, np.empty(0)
    wx = np.diff(grid.x_edges)[col0:col0 + ox.size]
    wy = np.diff(grid.y_edges)[row0:row0 + oy.size]
    return col0, np.minimum(ox / wx, 1.0), row0, np.minimum(oy / wy, 1.0)


def overlap_vector(grid: GridSpec, qr: Rect) -> dict[int, float]:
    """Sparse map from cell index to overlap fraction; only positive entries."""
    col0, ax, row0, ay = axis_overlap_fractions(grid, qr)
    out: dict[int, float] = {}
    for j, fy in enumerate(ay):
        base = (row0 + j) * grid.g + col0
        for i, fx in enumerate(ax):
            out[base + i] = float(fx * fy)
    return out
