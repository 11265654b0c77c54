"""Command-line front end: batch projection, oracle verification, solver runs.

Requests are JSON objects (one per file or on stdin); results are JSON
lines, one record per input pair, with floats serialized at 17
significant digits so they re-parse bit for bit.  Exit codes: 0 success,
1 analytic failure (optimality gap exceeded / non-convergence), 2 usage
or input error.
"""
from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor

import click
import numpy as np

from . import jsonio
from .bilinear import bilinear_residual, project_bilinear, representative
from .hyperbola import (Singleton, SphereFamily, hyperbola_residual,
                        project_hgamma)
from .oracle import Reduced2D, best_sample_objective, oracle_min_2d
from .solver import Ball, FixedCoordinates, aux_distance, dr_solve, map_solve
from .space import Pair, as_point, check_gamma, dist_sq, rotate_quarter

_DEFAULT_TOL_FEAS = 1e-9
_DEFAULT_TOL_DEG = 1e-12
_DEFAULT_GAP_TOL = 1e-6
_DEFAULT_SAMPLES = 1000
_DEFAULT_EPS = 1e-6


@click.group()
@click.version_option(package_name="hyproj")
def cli():
    """Projections onto bilinear constraint sets and hyperbolas."""


def main():
    cli(auto_envvar_prefix="HYPROJ")


def _io_options(fn):
    fn = click.option("--output", "output_path", default="-", show_default=True,
                      help="File for JSON-lines records, or - for stdout.")(fn)
    fn = click.option("--input", "input_path", default="-", show_default=True,
                      help="Path of the JSON request, or - for stdin.")(fn)
    return fn


def _problem_options(fn):
    fn = click.option("--workers", type=int, default=None,
                      help="Width of the worker pool (default 1).")(fn)
    fn = click.option("--tol-deg", type=float, default=None,
                      envvar="HYPROJ_TOL_DEG",
                      help="Relative cutoff for degenerate-branch routing "
                           "(default 1e-12).")(fn)
    fn = click.option("--tol-feas", type=float, default=None,
                      envvar="HYPROJ_TOL_FEAS",
                      help="Relative feasibility tolerance (default 1e-9).")(fn)
    fn = click.option("--tol-root", type=float, default=None,
                      envvar="HYPROJ_TOL_ROOT",
                      help="Multiplier-equation tolerance "
                           "(default 1e-12 scaled by the data).")(fn)
    fn = click.option("--set", "set_kind",
                      type=click.Choice(["bilinear", "hyperbola"]),
                      default=None,
                      help="Constraint set; <x,y>=gamma or "
                           "||u||^2-||v||^2=2*gamma (default bilinear).")(fn)
    fn = click.option("--gamma", type=float, default=None,
                      help="Constraint level (nonzero).")(fn)
    return fn


def _read_request(input_path: str) -> dict:
    try:
        if input_path == "-":
            text = click.get_text_stream("stdin").read()
        else:
            with open(input_path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise click.UsageError(f"cannot read request: {exc}")
    try:
        return jsonio.load_request(text)
    except ValueError as exc:
        raise click.UsageError(str(exc))


def _check_command(req: dict, name: str) -> None:
    cmd = req.get("command")
    if cmd is not None and cmd != name:
        raise click.UsageError(
            f"request names command '{cmd}' but '{name}' was invoked")


def _request_pairs(req: dict) -> list[Pair]:
    raw = req.get("pairs")
    if not isinstance(raw, list) or not raw:
        raise click.UsageError("request must contain a nonempty 'pairs' list")
    try:
        pairs = [jsonio.parse_pair(p) for p in raw]
    except ValueError as exc:
        raise click.UsageError(str(exc))
    dim = pairs[0].dim
    for i, p in enumerate(pairs):
        if p.dim != dim:
            raise click.UsageError(
                f"pair {i} has dimension {p.dim}, expected {dim}")
    return pairs


def _request_gamma(flag, req: dict) -> float:
    g = flag if flag is not None else req.get("gamma")
    if g is None:
        raise click.UsageError("gamma must be given via --gamma or the request")
    try:
        return check_gamma(g)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(str(exc))


def _request_kind(flag, req: dict) -> str:
    kind = flag if flag is not None else req.get("set", "bilinear")
    if kind not in ("bilinear", "hyperbola"):
        raise click.UsageError("set must be 'bilinear' or 'hyperbola'")
    return kind


def _options(req: dict) -> dict:
    opts = req.get("options") or {}
    if not isinstance(opts, dict):
        raise click.UsageError("request 'options' must be an object")
    return opts


def _resolve(flag, opts: dict, key: str, default=None):
    if flag is not None:
        return flag
    if key in opts and opts[key] is not None:
        return opts[key]
    return default


def _resolve_workers(flag, opts: dict) -> int:
    workers = int(_resolve(flag, opts, "workers", 1))
    if workers < 1:
        raise click.UsageError("workers must be at least 1")
    return workers


def _parse_hint(flag, opts: dict):
    raw = flag if flag is not None else opts.get("hint")
    if raw is None:
        return None
    try:
        if isinstance(raw, str):
            return as_point([float(t) for t in raw.split(",") if t.strip()])
        return as_point(raw)
    except ValueError as exc:
        raise click.UsageError(f"bad hint vector: {exc}")


def _pmap(fn, items, workers: int) -> list:
    if workers <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _emit(records, output_path: str) -> None:
    text = "".join(jsonio.dumps(r) + "\n" for r in records)
    if output_path == "-":
        click.echo(text, nl=False)
    else:
        with open(output_path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _project(kind: str, z: Pair, gamma: float, tol_root, tol_deg):
    if kind == "bilinear":
        return project_bilinear(z.first, z.second, gamma, tol=tol_root,
                                deg_tol=tol_deg)
    return project_hgamma(z.first, z.second, gamma, tol=tol_root,
                          deg_tol=tol_deg)


def _residual(kind: str, z: Pair, gamma: float) -> float:
    if kind == "bilinear":
        return bilinear_residual(z, gamma)
    return hyperbola_residual(z, gamma)


def _feas_scale(kind: str, z: Pair, gamma: float) -> float:
    if kind == "bilinear":
        nx = float(np.linalg.norm(z.first))
        ny = float(np.linalg.norm(z.second))
        return max(1.0, abs(gamma), 1.0 + nx * ny)
    return 1.0 + z.norm() ** 2


def _result_fields(res) -> dict:
    if isinstance(res, Singleton):
        return {
            "kind": "singleton",
            "case": res.case,
            "lambda": res.multiplier,
            "ill_conditioned": res.ill_conditioned,
            "point": jsonio.pair_json(res.point),
            "family": None,
        }
    fam: SphereFamily = res
    return {
        "kind": "sphere-family",
        "case": fam.case,
        "lambda": None,
        "ill_conditioned": False,
        "point": None,
        "family": {
            "base_first": jsonio.point_json(fam.base_first),
            "base_second": jsonio.point_json(fam.base_second),
            "coeff_first": fam.coeff_first,
            "coeff_second": fam.coeff_second,
            "radius": fam.radius,
        },
    }


@cli.command()
@_io_options
@_problem_options
@click.option("--hint", default=None,
              help="Comma-separated vector steering sphere-family "
                   "representatives.")
def project(input_path, output_path, gamma, set_kind, tol_root, tol_feas,
            tol_deg, workers, hint):
    """Project every input pair; one JSON record per line."""
    req = _read_request(input_path)
    _check_command(req, "project")
    opts = _options(req)
    g = _request_gamma(gamma, req)
    kind = _request_kind(set_kind, req)
    tol_root = _resolve(tol_root, opts, "tol_root")
    tol_feas = float(_resolve(tol_feas, opts, "tol_feas", _DEFAULT_TOL_FEAS))
    tol_deg = float(_resolve(tol_deg, opts, "tol_deg", _DEFAULT_TOL_DEG))
    workers = _resolve_workers(workers, opts)
    hint_vec = _parse_hint(hint, opts)
    pairs = _request_pairs(req)

    def work(item):
        i, z = item
        res = _project(kind, z, g, tol_root, tol_deg)
        rep = representative(res, hint_vec)
        resid = _residual(kind, rep, g)
        rec = {"index": i, "set": kind, "gamma": g}
        rec.update(_result_fields(res))
        rec["representative"] = jsonio.pair_json(rep)
        rec["residual"] = resid
        rec["feasible"] = bool(abs(resid) <= tol_feas * _feas_scale(kind, z, g))
        return rec

    try:
        records = _pmap(work, list(enumerate(pairs)), workers)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(records, output_path)


@cli.command()
@_io_options
@_problem_options
@click.option("--plot", "plot_path", default=None, type=click.Path(),
              help="Render a gap/objective figure to this file.")
@click.option("--gap-tol", type=float, default=None,
              envvar="HYPROJ_GAP_TOL",
              help="Relative optimality-gap tolerance (default 1e-6).")
@click.option("--seed", type=int, default=None,
              help="Seed for the feasible-point sampler (default 0).")
@click.option("--samples", type=int, default=None,
              help="Feasible points sampled per input (default 1000).")
@click.pass_context
def verify(ctx, input_path, output_path, gamma, set_kind, tol_root, tol_feas,
           tol_deg, workers, samples, seed, gap_tol, plot_path):
    """Check projections against the scan oracle and feasible sampling.

    Exits 1 if any input shows an optimality gap or feasibility defect
    beyond tolerance.  The 2-D scan oracle runs for dimensions up to 3
    and away from the degenerate branches; feasible sampling runs
    everywhere.
    """
    req = _read_request(input_path)
    _check_command(req, "verify")
    opts = _options(req)
    g = _request_gamma(gamma, req)
    kind = _request_kind(set_kind, req)
    tol_root = _resolve(tol_root, opts, "tol_root")
    tol_feas = float(_resolve(tol_feas, opts, "tol_feas", _DEFAULT_TOL_FEAS))
    tol_deg = float(_resolve(tol_deg, opts, "tol_deg", _DEFAULT_TOL_DEG))
    gap_tol = float(_resolve(gap_tol, opts, "gap_tol", _DEFAULT_GAP_TOL))
    samples = int(_resolve(samples, opts, "samples", _DEFAULT_SAMPLES))
    seed = int(_resolve(seed, opts, "seed", 0))
    workers = _resolve_workers(workers, opts)
    if samples < 1:
        raise click.UsageError("samples must be at least 1")
    pairs = _request_pairs(req)

    def work(item):
        i, z = item
        res = _project(kind, z, g, tol_root, tol_deg)
        rep = representative(res, None)
        objective = dist_sq(z, rep)
        resid = abs(_residual(kind, rep, g))
        feas_ok = resid <= tol_feas * _feas_scale(kind, z, g)

        oracle_value = oracle_gap = None
        oracle_ok = True
        if z.dim <= 3:
            if kind == "bilinear":
                h = rotate_quarter(z, -1)
                a = float(np.linalg.norm(h.first))
                b = float(np.linalg.norm(h.second))
            else:
                a = float(np.linalg.norm(z.first))
                b = float(np.linalg.norm(z.second))
            deg_scale = 1.0 + a + b
            if a > tol_deg * deg_scale and b > tol_deg * deg_scale:
                _, _, oracle_value = oracle_min_2d(Reduced2D(a, b, g))
                oracle_gap = objective - oracle_value
                oracle_ok = oracle_gap <= gap_tol * (1.0 + oracle_value)

        rng = np.random.default_rng([seed, i])
        best = best_sample_objective(z, g, samples, rng, kind=kind)
        sample_gap = objective - best
        sample_ok = sample_gap <= gap_tol * (1.0 + objective)

        ill = isinstance(res, Singleton) and res.ill_conditioned
        return {
            "index": i,
            "set": kind,
            "gamma": g,
            "case": res.case,
            "objective": objective,
            "feasibility_residual": resid,
            "oracle_value": oracle_value,
            "oracle_gap": oracle_gap,
            "best_sample": best,
            "sample_gap": sample_gap,
            "ill_conditioned": ill,
            "ok": bool(feas_ok and oracle_ok and sample_ok),
        }

    try:
        records = _pmap(work, list(enumerate(pairs)), workers)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(records, output_path)
    if plot_path is not None:
        from .plots import save_verify_figure

        save_verify_figure(records, plot_path)
    if not all(r["ok"] for r in records):
        ctx.exit(1)


def _parse_aux(obj, dim: int):
    if not isinstance(obj, dict):
        raise click.UsageError("solve requests need an 'aux' object")
    kind = obj.get("kind")
    try:
        if kind in ("fixed-coordinates", "fixed"):
            if "mask" in obj or "values" in obj:
                return FixedCoordinates(np.asarray(obj.get("mask")),
                                        np.asarray(obj.get("values")))
            mask = np.zeros(2 * dim, dtype=bool)
            values = np.zeros(2 * dim)
            found = False
            if "fix_first" in obj:
                v = as_point(obj["fix_first"])
                if v.size != dim:
                    raise ValueError("fix_first has the wrong dimension")
                mask[:dim] = True
                values[:dim] = v
                found = True
            if "fix_second" in obj:
                v = as_point(obj["fix_second"])
                if v.size != dim:
                    raise ValueError("fix_second has the wrong dimension")
                mask[dim:] = True
                values[dim:] = v
                found = True
            if not found:
                raise ValueError(
                    "fixed-coordinates aux needs mask/values or "
                    "fix_first/fix_second")
            return FixedCoordinates(mask, values)
        if kind == "ball":
            center = jsonio.parse_pair(obj.get("center"))
            return Ball(center, float(obj.get("radius")))
    except (TypeError, ValueError) as exc:
        raise click.UsageError(f"bad aux set: {exc}")
    raise click.UsageError("aux kind must be 'fixed-coordinates' or 'ball'")


def _write_trace_csv(path: str, traces) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["pair_index", "iteration", "constraint_residual",
                         "aux_distance"])
        for i, tr in enumerate(traces):
            for k, (rc, ra) in enumerate(tr.residuals, start=1):
                writer.writerow([i, k, jsonio.format_float(rc),
                                 jsonio.format_float(ra)])


@cli.command()
@_io_options
@_problem_options
@click.option("--plot", "plot_path", default=None, type=click.Path(),
              help="Render residual curves to this file.")
@click.option("--trace-csv", "trace_path", default=None, type=click.Path(),
              help="Write per-iteration residuals to this CSV file.")
@click.option("--eps", type=float, default=None,
              help="Convergence tolerance on both residuals (default 1e-6).")
@click.option("--max-iter", type=int, default=None,
              help="Iteration budget (default 200 for map, 500 for dr).")
@click.option("--method", type=click.Choice(["map", "dr"]), default=None,
              help="Alternating projections or Douglas-Rachford "
                   "(default map).")
@click.pass_context
def solve(ctx, input_path, output_path, gamma, set_kind, tol_root, tol_feas,
          tol_deg, workers, method, max_iter, eps, trace_path, plot_path):
    """Run a feasibility solve from every input pair as a starting point.

    The request must carry an 'aux' object describing the second set.
    Exits 1 when any instance fails to converge.
    """
    req = _read_request(input_path)
    _check_command(req, "solve")
    opts = _options(req)
    g = _request_gamma(gamma, req)
    if _request_kind(set_kind, req) != "bilinear":
        raise click.UsageError("solve runs against the bilinear set only")
    tol_root = _resolve(tol_root, opts, "tol_root")
    tol_deg = float(_resolve(tol_deg, opts, "tol_deg", _DEFAULT_TOL_DEG))
    method = _resolve(method, opts, "method", "map")
    if method not in ("map", "dr"):
        raise click.UsageError("method must be 'map' or 'dr'")
    eps = float(_resolve(eps, opts, "eps", _DEFAULT_EPS))
    if eps <= 0.0:
        raise click.UsageError("eps must be positive")
    max_iter = int(_resolve(max_iter, opts, "max_iter",
                            200 if method == "map" else 500))
    if max_iter < 1:
        raise click.UsageError("max_iter must be at least 1")
    workers = _resolve_workers(workers, opts)
    pairs = _request_pairs(req)
    aux = _parse_aux(req.get("aux"), pairs[0].dim)

    run = map_solve if method == "map" else dr_solve

    def work(item):
        _, z0 = item
        return run(z0, g, aux, max_iter=max_iter, eps=eps, tol=tol_root,
                   deg_tol=tol_deg)

    try:
        traces = _pmap(work, list(enumerate(pairs)), workers)
    except ValueError as exc:
        raise click.UsageError(str(exc))

    records = []
    for i, tr in enumerate(traces):
        # Re-verify the reported solution independently of the trace.
        rc = abs(bilinear_residual(tr.solution, g))
        ra = aux_distance(tr.solution, aux)
        records.append({
            "index": i,
            "method": method,
            "converged": tr.converged and rc <= eps and ra <= eps,
            "iterations": tr.iterations,
            "constraint_residual": rc,
            "aux_distance": ra,
            "solution": jsonio.pair_json(tr.solution),
        })
    _emit(records, output_path)
    if trace_path is not None:
        _write_trace_csv(trace_path, traces)
    if plot_path is not None:
        from .plots import save_trace_figure

        save_trace_figure([(f"pair {i}", tr) for i, tr in enumerate(traces)],
                          plot_path, eps=eps)
    if not all(r["converged"] for r in records):
        ctx.exit(1)


if __name__ == "__main__":
    main()
