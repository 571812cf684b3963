"""Flat ``key=value`` experiment config files.

Keys match :class:`ExperimentConfig` field names. Comma-separated lists
express tuples (``grids=30,40,50``); the synthetic mixture uses
semicolon-separated ``weight,cx,cy,std`` components; the domain is
``x_min,y_min,x_max,y_max``. Blank lines and ``#`` comments are ignored.
CLI flags are merged on top of file values.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping

from ..geometry import Rect
from .experiment import ExperimentConfig


def parse_config_text(text: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def read_config_file(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text(encoding="utf-8"))


def _parse_domain(value: str) -> Rect:
    parts = [float(p) for p in value.split(",")]
    if len(parts) != 4:
        raise ValueError(f"domain needs 4 numbers, got {value!r}")
    return Rect(*parts)


def _parse_mixture(value: str) -> tuple[tuple[float, float, float, float], ...]:
    components = []
    for chunk in value.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [float(p) for p in chunk.split(",")]
        if len(parts) != 4:
            raise ValueError(f"mixture component needs weight,cx,cy,std, got {chunk!r}")
        components.append(tuple(parts))
    return tuple(components)


_PARSERS = {
    "method": str,
    "dataset": str,
    "dataset_name": str,
    "dataset_path": str,
    "domain": _parse_domain,
    "synth_points": int,
    "synth_mixture": _parse_mixture,
    "synth_uniform": float,
    "grids": lambda v: tuple(int(p) for p in v.split(",") if p.strip()),
    "epsilon": float,
    "eps1_frac": float,
    "delta": float,
    "sensitivity_mode": str,
    "tune_qr_fracs": lambda v: tuple(float(p) for p in v.split(",") if p.strip()),
    "tune_positions": int,
    "eval_qr_fracs": lambda v: tuple(float(p) for p in v.split(",") if p.strip()),
    "eval_positions": int,
    "repeats": int,
    "seed": int,
    "heuristic_c": float,
}


def build_experiment_config(file_values: Mapping[str, str] | None = None,
                            overrides: Mapping[str, object] | None = None) -> ExperimentConfig:
    """Typed config from file values with (already typed or raw) overrides on top."""
    kwargs: dict[str, object] = {}
    for key, raw in (file_values or {}).items():
        if key not in _PARSERS:
            raise ValueError(f"unknown config key {key!r}")
        kwargs[key] = _PARSERS[key](raw)
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _PARSERS:
            raise ValueError(f"unknown config key {key!r}")
        kwargs[key] = _PARSERS[key](value) if isinstance(value, str) else value
    if "method" not in kwargs:
        raise ValueError("config must set 'method'")
    return ExperimentConfig(**kwargs)
