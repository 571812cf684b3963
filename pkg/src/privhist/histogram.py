"""Grid histograms over planar point sets and uniformity-based range queries.

A range query against a histogram weighs each cell count by the fraction of
the cell covered by the query region, i.e. it assumes points are uniformly
spread within a cell. Responses on cell-aligned regions are therefore exact;
elsewhere they carry aggregation error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .geometry import GridSpec, Point, Rect, axis_overlap_fractions, locate_many


def _frozen_array(obj, name: str, values, dtype) -> None:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True)
class PointSet:
    """A planar dataset: coordinate arrays plus the (public) domain rectangle."""

    xs: np.ndarray
    ys: np.ndarray
    domain: Rect

    def __post_init__(self):
        _frozen_array(self, "xs", self.xs, float)
        _frozen_array(self, "ys", self.ys, float)
        if self.xs.ndim != 1 or self.xs.shape != self.ys.shape:
            raise ValueError("xs and ys must be 1-d arrays of equal length")
        if self.xs.size and not (np.all(np.isfinite(self.xs)) and np.all(np.isfinite(self.ys))):
            raise ValueError("coordinates must be finite")
        d = self.domain
        inside = (self.xs >= d.x_min) & (self.xs <= d.x_max) & \
                 (self.ys >= d.y_min) & (self.ys <= d.y_max)
        if self.xs.size and not np.all(inside):
            bad = int(np.argmin(inside))
            raise ValueError(
                f"point ({self.xs[bad]}, {self.ys[bad]}) outside domain {d}")

    @classmethod
    def from_points(cls, points: Iterable[Point | tuple[float, float]], domain: Rect) -> "PointSet":
        xs, ys = [], []
        for p in points:
            if isinstance(p, Point):
                xs.append(p.x)
                ys.append(p.y)
            else:
                xs.append(p[0])
                ys.append(p[1])
        return cls(np.asarray(xs, float), np.asarray(ys, float), domain)

    def __len__(self) -> int:
        return int(self.xs.size)

    def with_extra_point(self, x: float, y: float) -> "PointSet":
        """A neighbouring dataset: this one plus a single additional point."""
        return PointSet(np.append(self.xs, x), np.append(self.ys, y), self.domain)


@dataclass(frozen=True)
class Histogram:
    """Exact per-cell counts for a grid partition."""

    grid: GridSpec
    counts: np.ndarray

    def __post_init__(self):
        _frozen_array(self, "counts", self.counts, np.int64)
        if self.counts.shape != (self.grid.n_cells,):
            raise ValueError(f"expected {self.grid.n_cells} counts, got {self.counts.shape}")
        if self.counts.size and self.counts.min() < 0:
            raise ValueError("counts must be non-negative")


@dataclass(frozen=True)
class NoisyHistogram:
    """Perturbed per-cell counts; values are real and may be negative."""

    grid: GridSpec
    counts: np.ndarray

    def __post_init__(self):
        _frozen_array(self, "counts", self.counts, float)
        if self.counts.shape != (self.grid.n_cells,):
            raise ValueError(f"expected {self.grid.n_cells} counts, got {self.counts.shape}")


AnyHistogram = Union[Histogram, NoisyHistogram]


def build(ps: PointSet, grid: GridSpec) -> Histogram:
    """Count points per cell. The counts always sum to ``len(ps)``."""
    if grid.domain != ps.domain:
        raise ValueError("grid domain must match point set domain")
    if len(ps) == 0:
        return Histogram(grid, np.zeros(grid.n_cells, dtype=np.int64))
    cells = locate_many(grid, ps.xs, ps.ys)
    return Histogram(grid, np.bincount(cells, minlength=grid.n_cells))


def _in_rect_mask(ps: PointSet, qr: Rect) -> np.ndarray:
    # Half-open membership, closed where the region reaches the domain's
    # max edge -- the same rule locate() applies to cells.
    d = ps.domain
    x_hi = ps.xs <= qr.x_max if qr.x_max >= d.x_max else ps.xs < qr.x_max
    y_hi = ps.ys <= qr.y_max if qr.y_max >= d.y_max else ps.ys < qr.y_max
    return (ps.xs >= qr.x_min) & x_hi & (ps.ys >= qr.y_min) & y_hi


def true_count(ps: PointSet, qr: Rect) -> int:
    """Exact number of points inside ``qr`` under the half-open rule."""
    return int(np.count_nonzero(_in_rect_mask(ps, qr)))


def response_and_alpha_l1(h: AnyHistogram, qr: Rect) -> tuple[float, float]:
    """Range-query response together with the L1 mass of the overlap vector."""
    col0, ax, row0, ay = axis_overlap_fractions(h.grid, qr)
    if ax.size == 0 or ay.size == 0:
        return 0.0, 0.0
    g = h.grid.g
    block = np.asarray(h.counts, float).reshape(g, g)[row0:row0 + ay.size, col0:col0 + ax.size]
    return float(ay @ block @ ax), float(ax.sum() * ay.sum())


def range_query(h: AnyHistogram, qr: Rect) -> float:
    """Approximate count of points in ``qr``: sum of overlap-weighted cell counts."""
    return response_and_alpha_l1(h, qr)[0]
