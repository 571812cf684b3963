"""Random rectangular query workloads over a domain."""

from __future__ import annotations

from dataclasses import dataclass

from ..geometry import Rect
from ..mechanisms import RngStream


@dataclass(frozen=True)
class WorkloadSpec:
    """Query sizes as side-length fractions of each axis, plus positions per size.

    A fraction f covers f*f of the total area (0.3 means 9%).
    """

    size_fractions: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5, 0.8)
    positions_per_size: int = 100
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "size_fractions", tuple(self.size_fractions))
        if not self.size_fractions:
            raise ValueError("size_fractions must be non-empty")
        if any(not 0.0 < f <= 1.0 for f in self.size_fractions):
            raise ValueError("size fractions must lie in (0, 1]")
        if self.positions_per_size < 1:
            raise ValueError("positions_per_size must be >= 1")


def gen_workload_by_size(domain: Rect, spec: WorkloadSpec,
                         rng: RngStream | None = None) -> dict[float, list[Rect]]:
    """Per size fraction, uniformly positioned rectangles lying inside the domain."""
    if rng is None:
        if spec.seed is None:
            raise ValueError("either pass an rng or set WorkloadSpec.seed")
        rng = RngStream(spec.seed)
    gen = rng.generator()
    out: dict[float, list[Rect]] = {}
    for frac in spec.size_fractions:
        if frac == 1.0:
            out[frac] = [domain] * spec.positions_per_size
            continue
        w = frac * domain.width
        h = frac * domain.height
        x_hi = max(domain.x_min, domain.x_max - w)
        y_hi = max(domain.y_min, domain.y_max - h)
        rects = []
        for _ in range(spec.positions_per_size):
            x0 = gen.uniform(domain.x_min, x_hi)
            y0 = gen.uniform(domain.y_min, y_hi)
            rects.append(Rect(x0, y0, x0 + w, y0 + h))
        out[frac] = rects
    return out


def gen_workload(domain: Rect, spec: WorkloadSpec,
                 rng: RngStream | None = None) -> list[Rect]:
    """Flat workload: all positions of the first fraction, then the next, etc."""
    by_size = gen_workload_by_size(domain, spec, rng)
    return [qr for frac in spec.size_fractions for qr in by_size[frac]]
