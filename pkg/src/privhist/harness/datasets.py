"""Point-set ingestion from CSV and synthetic cluster/uniform mixtures."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from ..geometry import Point, Rect
from ..histogram import PointSet
from ..mechanisms import RngStream


class CsvParseError(ValueError):
    """Malformed points CSV; the message names the offending line."""


class CsvLoadResult(NamedTuple):
    points: PointSet
    rejected: int


_HEADER_TOKENS = ("x", "y")


def load_points_csv(path: str | Path, domain: Rect | None = None) -> CsvLoadResult:
    """Read ``x,y`` rows (optional literal ``x,y`` header) into a point set.

    Without an explicit domain the bounding box of the data is used, so
    every row is kept. With a domain override, rows outside it are dropped
    and counted in ``rejected``.
    """
    xs: list[float] = []
    ys: list[float] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if lineno == 1 and tuple(p.lower() for p in parts) == _HEADER_TOKENS:
                continue
            if len(parts) != 2:
                raise CsvParseError(f"{path}: line {lineno}: expected 'x,y', got {line!r}")
            try:
                x, y = float(parts[0]), float(parts[1])
            except ValueError:
                raise CsvParseError(
                    f"{path}: line {lineno}: could not parse coordinates from {line!r}") from None
            xs.append(x)
            ys.append(y)
    if not xs:
        raise CsvParseError(f"{path}: empty dataset")
    axs = np.asarray(xs)
    ays = np.asarray(ys)
    if domain is None:
        lo_x, hi_x = float(axs.min()), float(axs.max())
        lo_y, hi_y = float(ays.min()), float(ays.max())
        # Degenerate extents (single point / collinear data) get a unit pad.
        if lo_x == hi_x:
            hi_x = lo_x + 1.0
        if lo_y == hi_y:
            hi_y = lo_y + 1.0
        domain = Rect(lo_x, lo_y, hi_x, hi_y)
        keep = np.ones(axs.size, dtype=bool)
    else:
        keep = (axs >= domain.x_min) & (axs <= domain.x_max) & \
               (ays >= domain.y_min) & (ays <= domain.y_max)
    rejected = int(axs.size - keep.sum())
    return CsvLoadResult(PointSet(axs[keep], ays[keep], domain), rejected)


def write_points_csv(path: str | Path, ps: PointSet) -> None:
    """Emit a point set in the same ``x,y`` format the loader reads."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x,y\n")
        for x, y in zip(ps.xs, ps.ys):
            fh.write(f"{x!r},{y!r}\n")


@dataclass(frozen=True)
class SynthSpec:
    """Mixture of Gaussian clusters plus a uniform background.

    ``clusters`` holds ``(weight, center, std)`` triples; together with
    ``uniform_weight`` the weights must be non-negative and sum to 1.
    """

    n_points: int
    domain: Rect
    clusters: tuple[tuple[float, Point, float], ...] = ()
    uniform_weight: float = 0.0

    def __post_init__(self):
        if self.n_points < 0:
            raise ValueError("n_points must be non-negative")
        weights = [w for w, _, _ in self.clusters] + [self.uniform_weight]
        if any(w < 0 for w in weights):
            raise ValueError("mixture weights must be non-negative")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise ValueError(f"mixture weights must sum to 1, got {sum(weights)}")
        for _, center, std in self.clusters:
            if std <= 0:
                raise ValueError("cluster std must be positive")
            d = self.domain
            if not (d.x_min <= center.x <= d.x_max and d.y_min <= center.y <= d.y_max):
                raise ValueError("cluster centers must lie inside the domain")


def synth_points(spec: SynthSpec, rng: RngStream) -> PointSet:
    """Sample a deterministic point set from the mixture, clipped by rejection."""
    gen = rng.generator()
    d = spec.domain
    n = spec.n_points
    if n == 0:
        return PointSet(np.empty(0), np.empty(0), d)
    weights = np.array([w for w, _, _ in spec.clusters] + [spec.uniform_weight])
    component = gen.choice(weights.size, size=n, p=weights / weights.sum())
    xs = np.empty(n)
    ys = np.empty(n)
    uniform_idx = weights.size - 1
    for k in range(weights.size):
        mask = component == k
        m = int(mask.sum())
        if m == 0:
            continue
        if k == uniform_idx:
            xs[mask] = gen.uniform(d.x_min, d.x_max, m)
            ys[mask] = gen.uniform(d.y_min, d.y_max, m)
        else:
            _, center, std = spec.clusters[k]
            cx = np.empty(m)
            cy = np.empty(m)
            todo = np.arange(m)
            while todo.size:
                cand_x = center.x + std * gen.standard_normal(todo.size)
                cand_y = center.y + std * gen.standard_normal(todo.size)
                ok = (cand_x >= d.x_min) & (cand_x <= d.x_max) & \
                     (cand_y >= d.y_min) & (cand_y <= d.y_max)
                cx[todo[ok]] = cand_x[ok]
                cy[todo[ok]] = cand_y[ok]
                todo = todo[~ok]
            xs[mask] = cx
            ys[mask] = cy
    return PointSet(xs, ys, d)
