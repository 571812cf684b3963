"""Command line client for the service.

Every subcommand builds a request model and dispatches it either to a
running server (``--server URL``) or straight to the in-process handlers,
so the CLI works offline and over HTTP with identical semantics.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from .harness.config import read_config_file
from .harness.datasets import load_points_csv
from .service.app import bench as _bench_endpoint
from .service.app import query as _query_endpoint
from .service.app import release as _release_endpoint
from .service.app import run_oracle as _oracle_endpoint
from .service.app import synth as _synth_endpoint
from .service.app import tune as _tune_endpoint
from .service.schemas import (BenchRequest, BenchResponse, HistogramModel,
                              MixtureComponent, OracleRequest, OracleResponse,
                              QueryRequest, QueryResponse, RectModel,
                              ReleaseRequest, ReleaseResponse, SynthRequest,
                              SynthResponse, TuneRequest, TuneResponse, WorkloadModel)

_HANDLERS = {
    "/synth": (_synth_endpoint, SynthResponse),
    "/tune": (_tune_endpoint, TuneResponse),
    "/release": (_release_endpoint, ReleaseResponse),
    "/query": (_query_endpoint, QueryResponse),
    "/bench": (_bench_endpoint, BenchResponse),
    "/oracle": (_oracle_endpoint, OracleResponse),
}


def _dispatch(ctx, path, request):
    handler, response_cls = _HANDLERS[path]
    server = ctx.obj.get("server")
    if not server:
        return handler(request)
    import httpx

    resp = httpx.post(server.rstrip("/") + path,
                      json=request.model_dump(mode="json"), timeout=None)
    resp.raise_for_status()
    return response_cls.model_validate(resp.json())


def _write_out(ctx, text: str) -> None:
    out = ctx.obj.get("out")
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _parse_rect(value: str) -> RectModel:
    parts = [float(p) for p in value.split(",")]
    if len(parts) != 4:
        raise click.BadParameter(f"expected x_min,y_min,x_max,y_max, got {value!r}")
    return RectModel(x_min=parts[0], y_min=parts[1], x_max=parts[2], y_max=parts[3])


def _parse_floats(value: str) -> list[float]:
    return [float(p) for p in value.split(",") if p.strip()]


def _parse_ints(value: str) -> list[int]:
    return [int(p) for p in value.split(",") if p.strip()]


@click.group()
@click.option("--seed", type=int, default=0, show_default=True,
              help="Master seed; identical seeds replay identical runs.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="key=value config file (bench keys).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None,
              help="Output file; stdout when omitted.")
@click.option("--server", default=None,
              help="Base URL of a running service; in-process when omitted.")
@click.pass_context
def main(ctx, seed, config_path, out_path, server):
    """Differentially private spatial histogram release."""
    ctx.obj = {"seed": seed, "config": config_path, "out": out_path, "server": server}


@main.command()
@click.option("--n", type=int, default=10000, show_default=True)
@click.option("--domain", default="0,0,1,1", show_default=True,
              help="x_min,y_min,x_max,y_max")
@click.option("--cluster", "clusters", multiple=True,
              help="weight,cx,cy,std (repeatable)")
@click.option("--uniform-weight", type=float, default=None,
              help="Uniform background weight [default: 1 minus cluster weights].")
@click.pass_context
def synth(ctx, n, domain, clusters, uniform_weight):
    """Sample a synthetic point set and emit it as a points CSV."""
    components = []
    for spec in clusters:
        w, cx, cy, std = (float(p) for p in spec.split(","))
        components.append(MixtureComponent(weight=w, cx=cx, cy=cy, std=std))
    if uniform_weight is None:
        uniform_weight = max(0.0, 1.0 - sum(c.weight for c in components))
    req = SynthRequest(n_points=n, domain=_parse_rect(domain),
                       components=components, uniform_weight=uniform_weight,
                       seed=ctx.obj["seed"])
    resp = _dispatch(ctx, "/synth", req)
    lines = ["x,y"] + [f"{x!r},{y!r}" for x, y in resp.points]
    _write_out(ctx, "\n".join(lines) + "\n")


def _data_options(fn):
    fn = click.option("--data", "data_path", required=True,
                      type=click.Path(exists=True, dir_okay=False),
                      help="Points CSV (x,y rows).")(fn)
    fn = click.option("--domain", default=None,
                      help="x_min,y_min,x_max,y_max [default: data bounding box]")(fn)
    fn = click.option("--grids", default="", help="Comma-separated candidates.")(fn)
    fn = click.option("--epsilon", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--eps1-frac", type=float, default=0.2, show_default=True)(fn)
    fn = click.option("--delta", type=float, default=0.1, show_default=True)(fn)
    fn = click.option("--sensitivity-mode", default="response_dependent",
                      show_default=True,
                      type=click.Choice(["response_dependent", "global_maxr",
                                         "global_maxcells"]))(fn)
    fn = click.option("--qr-fracs", default="0.1,0.2,0.3,0.4,0.5,0.8",
                      show_default=True, help="Tuning query side fractions.")(fn)
    fn = click.option("--positions", type=int, default=100, show_default=True,
                      help="Tuning positions per size.")(fn)
    return fn


def _load_inline(data_path, domain):
    rect = _parse_rect(domain).to_rect() if domain else None
    loaded = load_points_csv(data_path, rect)
    if loaded.rejected:
        click.echo(f"note: dropped {loaded.rejected} out-of-domain rows", err=True)
    ps = loaded.points
    points = [(float(x), float(y)) for x, y in zip(ps.xs, ps.ys)]
    return points, RectModel.from_rect(ps.domain)


def _tune_request(ctx, data_path, domain, grids, epsilon, eps1_frac, delta,
                  sensitivity_mode, qr_fracs, positions, cls=TuneRequest, **extra):
    points, domain_model = _load_inline(data_path, domain)
    return cls(points=points, domain=domain_model, grids=_parse_ints(grids),
               tune_workload=WorkloadModel(qr_fracs=_parse_floats(qr_fracs),
                                           positions_per_size=positions),
               epsilon=epsilon, eps1_frac=eps1_frac, delta=delta,
               sensitivity_mode=sensitivity_mode, seed=ctx.obj["seed"], **extra)


@main.command()
@_data_options
@click.pass_context
def tune(ctx, **kwargs):
    """Privately select a grid size; prints only the selected g."""
    resp = _dispatch(ctx, "/tune", _tune_request(ctx, **kwargs))
    _write_out(ctx, f"{resp.selected_g}\n")


@main.command()
@_data_options
@click.option("--g", "grid_size", type=int, default=None,
              help="Fixed grid size; skips tuning and spends the whole budget"
                   " on the release.")
@click.pass_context
def release(ctx, grid_size, **kwargs):
    """Release a noisy histogram as a cell_index,count CSV."""
    req = _tune_request(ctx, cls=ReleaseRequest, grid_size=grid_size, **kwargs)
    resp = _dispatch(ctx, "/release", req)
    lines = ["cell_index,count"]
    lines += [f"{i},{c!r}" for i, c in enumerate(resp.histogram.counts)]
    click.echo(f"selected_g={resp.selected_g} epsilon_spent={resp.epsilon_spent}",
               err=True)
    _write_out(ctx, "\n".join(lines) + "\n")


@main.command()
@click.option("--hist", "hist_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Released histogram CSV (cell_index,count).")
@click.option("--domain", required=True, help="x_min,y_min,x_max,y_max")
@click.option("--rect", required=True, help="Query region x_min,y_min,x_max,y_max")
@click.pass_context
def query(ctx, hist_path, domain, rect):
    """Answer one rectangular range query against a released histogram."""
    counts: list[float] = []
    with open(hist_path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or (lineno == 1 and line.lower().startswith("cell_index")):
                continue
            idx_s, val_s = line.split(",")
            idx = int(idx_s)
            if idx != len(counts):
                raise click.ClickException(
                    f"{hist_path}: line {lineno}: expected cell {len(counts)}, got {idx}")
            counts.append(float(val_s))
    g = math.isqrt(len(counts))
    if g * g != len(counts):
        raise click.ClickException(f"{hist_path}: {len(counts)} cells is not a square grid")
    hist = HistogramModel(domain=_parse_rect(domain), g=g, counts=counts)
    resp = _dispatch(ctx, "/query", QueryRequest(histogram=hist, rect=_parse_rect(rect)))
    _write_out(ctx, f"{resp.estimate!r}\n")


@main.command()
@click.option("--set", "overrides", multiple=True,
              help="key=value override of a config entry (repeatable).")
@click.pass_context
def bench(ctx, overrides):
    """Run a full experiment; appends rows to the results CSV."""
    values = read_config_file(ctx.obj["config"]) if ctx.obj["config"] else {}
    for item in overrides:
        if "=" not in item:
            raise click.BadParameter(f"--set needs key=value, got {item!r}")
        key, _, val = item.partition("=")
        values[key.strip()] = val.strip()
    values.setdefault("seed", str(ctx.obj["seed"]))
    req = _bench_request(values)
    resp = _dispatch(ctx, "/bench", req)
    out = ctx.obj.get("out")
    if out:
        path = Path(out)
        write_header = not path.exists()
        csv_text = resp.csv if write_header else resp.csv.split("\n", 1)[1]
        with open(path, "a", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
        manifest_path = path.with_suffix(path.suffix + ".manifest.json")
        manifest_path.write_text(json.dumps(resp.manifest, indent=2, sort_keys=True) + "\n",
                                 encoding="utf-8")
    else:
        click.echo(resp.csv, nl=False)


def _bench_request(values: dict[str, str]) -> BenchRequest:
    kwargs: dict = {}
    passthrough = {"method": str, "dataset": str, "dataset_name": str,
                   "dataset_path": str, "synth_points": int, "synth_uniform": float,
                   "epsilon": float, "eps1_frac": float, "delta": float,
                   "sensitivity_mode": str, "tune_positions": int,
                   "eval_positions": int, "repeats": int, "seed": int,
                   "heuristic_c": float}
    for key, raw in values.items():
        if key in passthrough:
            kwargs[key] = passthrough[key](raw)
        elif key == "domain":
            kwargs["domain"] = _parse_rect(raw)
        elif key == "grids":
            kwargs["grids"] = _parse_ints(raw)
        elif key in ("tune_qr_fracs", "eval_qr_fracs"):
            kwargs[key] = _parse_floats(raw)
        elif key == "synth_mixture":
            comps = []
            for chunk in raw.split(";"):
                if chunk.strip():
                    w, cx, cy, std = (float(p) for p in chunk.split(","))
                    comps.append(MixtureComponent(weight=w, cx=cx, cy=cy, std=std))
            kwargs["synth_mixture"] = comps
        else:
            raise click.BadParameter(f"unknown config key {key!r}")
    if "method" not in kwargs:
        raise click.BadParameter("config must set 'method'")
    return BenchRequest(**kwargs)


@main.command()
@click.option("--cases", type=int, default=2000, show_default=True,
              help="Randomised overlap-conservation cases.")
@click.option("--instances", type=int, default=3, show_default=True,
              help="Random small instances for the bound/privacy checks.")
@click.option("--trials", type=int, default=10000, show_default=True,
              help="Monte-Carlo trials per error-bound check.")
@click.pass_context
def oracle(ctx, cases, instances, trials):
    """Run the verification suite; emits one JSON report line per check."""
    req = OracleRequest(seed=ctx.obj["seed"], conservation_cases=cases,
                        instances=instances, trials=trials)
    resp = _dispatch(ctx, "/oracle", req)
    lines = [json.dumps(r, sort_keys=True) for r in resp.reports]
    _write_out(ctx, "\n".join(lines) + "\n")
    if not resp.all_pass:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("privhist.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
