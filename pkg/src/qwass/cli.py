"""Command-line front end.

Every experiment command writes delimited output (CSV), a rendered figure
where one is defined, and a run manifest JSON sufficient to reproduce the run.
Exit codes: 0 success, 2 invalid input, 3 solver failure.
"""

from __future__ import annotations

import functools
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import __version__
from .channels import subadditivity_report, wasserstein_complexity
from .divergence import divergence, triangle_gap
from .errors import ConcavityViolationError, InputError, QwassError, SolverFailureError
from .experiments import (
    LatticeSpec,
    SURFACE_SCENARIOS,
    SurfaceSpec,
    SweepSpec,
    gap_surface,
    lattice_scan,
    min_gap_sweep,
)
from .io import (
    load_density,
    parse_channel_selector,
    parse_cost_selector,
    write_gap_csv,
    write_lattice_csv,
    write_manifest,
    write_surface_csv,
    write_sweep_csv,
)
from .linalg import RngStream, random_state
from .transport import SolverConfig, solve_dual, solve_primal

# Substream layout shared by commands that draw their own inputs.
_STREAM_RHO = 0
_STREAM_TAU = 1
_STREAM_OBS = 2


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (SolverFailureError, ConcavityViolationError) as exc:
            click.echo(f"solver failure: {exc}", err=True)
            sys.exit(3)
        except (InputError, QwassError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _solver_options(fn):
    fn = click.option("--solver-gap-tol", type=float, default=1e-8, show_default=True,
                      help="Duality-gap tolerance of the interior-point solver.")(fn)
    fn = click.option("--solver-feas-tol", type=float, default=1e-8, show_default=True,
                      help="Feasibility tolerance of the interior-point solver.")(fn)
    fn = click.option("--solver-max-iter", type=int, default=200, show_default=True,
                      help="Iteration cap of the interior-point solver.")(fn)
    return fn


def _out_option(fn):
    return click.option("--out", type=click.Path(file_okay=False), default=".", show_default=True,
                        help="Directory receiving CSV/SVG outputs and the run manifest.")(fn)


def _cfg(kwargs) -> SolverConfig:
    try:
        return SolverConfig(
            gap_tol=kwargs.pop("solver_gap_tol"),
            feas_tol=kwargs.pop("solver_feas_tol"),
            max_iter=kwargs.pop("solver_max_iter"),
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _outdir(kwargs) -> Path:
    out = Path(kwargs.pop("out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(out: Path, command: str, params: dict, seed: int, started: float) -> None:
    write_manifest(
        out / f"{command}.manifest.json",
        command=command,
        parameters=params,
        seed=seed,
        tool_version=__version__,
        wall_time_s=time.time() - started,
    )


@click.group()
@click.version_option(version=__version__)
def main():
    """Quantum Wasserstein distances, divergences, and triangle-inequality experiments."""
    try:
        from threadpoolctl import threadpool_limits

        threadpool_limits(1)  # tiny dense problems; BLAS threading only hurts
    except ImportError:
        pass


@main.command()
@click.option("--rho", "rho_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--omega", "omega_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cost", "cost_sel", default="symmetric", show_default=True,
              help="symmetric | pauli-products:<n> | random:<k> | file:<path>")
@click.option("--dual", is_flag=True, help="Also solve the dual and print the certificates.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for random:<k> costs.")
@_solver_options
@_out_option
@_guard
def dist(rho_path, omega_path, cost_sel, dual, seed, **kwargs):
    """Squared transport distance between two states from matrix-JSON files."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    rho = load_density(rho_path)
    omega = load_density(omega_path)
    cost = parse_cost_selector(cost_sel, dim=rho.shape[0], seed=seed, stream=_STREAM_OBS)
    result = solve_primal(rho, omega, cost, cfg)
    click.echo(f"D^2 = {result.squared_distance!r}")
    click.echo(f"D   = {float(np.sqrt(result.squared_distance))!r}")
    click.echo(f"duality gap = {result.duality_gap:.3e} ({result.iterations} iterations)")
    if dual:
        dual_result = solve_dual(rho, omega, cost, cfg)
        cert_x, cert_y = dual_result.certificates
        click.echo(f"dual value = {dual_result.squared_distance!r}")
        click.echo("certificate X =")
        click.echo(np.array2string(cert_x, precision=8, suppress_small=True))
        click.echo("certificate Y =")
        click.echo(np.array2string(cert_y, precision=8, suppress_small=True))
    _manifest(out, "dist", {
        "rho": str(rho_path), "omega": str(omega_path), "cost": cost_sel, "dual": dual,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }, seed, started)


@main.command("divergence")
@click.option("--rho", "rho_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--omega", "omega_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cost", "cost_sel", default="symmetric", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_solver_options
@_out_option
@_guard
def divergence_cmd(rho_path, omega_path, cost_sel, seed, **kwargs):
    """Wasserstein divergence between two states."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    rho = load_density(rho_path)
    omega = load_density(omega_path)
    cost = parse_cost_selector(cost_sel, dim=rho.shape[0], seed=seed, stream=_STREAM_OBS)
    value = divergence(rho, omega, cost.observables, cfg, cost=cost)
    path = out / "divergence.csv"
    with open(path, "w") as fh:
        fh.write("value,raw_squared,d2_rho_omega,d2_rho_rho,d2_omega_omega\n")
        cells = [value.value, value.raw_squared, *value.components]
        fh.write(",".join(repr(float(v)) for v in cells) + "\n")
    _manifest(out, "divergence", {
        "rho": str(rho_path), "omega": str(omega_path), "cost": cost_sel,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }, seed, started)
    click.echo(f"divergence = {value.value!r}")


@main.command()
@click.option("--rho", "rho_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--omega", "omega_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tau", "tau_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--cost", "cost_sel", default="symmetric", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_solver_options
@_out_option
@_guard
def triangle(rho_path, omega_path, tau_path, cost_sel, seed, **kwargs):
    """Triangle-inequality gap of one state triplet."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    rho = load_density(rho_path)
    omega = load_density(omega_path)
    tau = load_density(tau_path)
    cost = parse_cost_selector(cost_sel, dim=rho.shape[0], seed=seed, stream=_STREAM_OBS)
    record = triangle_gap(rho, omega, tau, cost.observables, cfg, cost=cost, seed=seed,
                          sampler_tag="files")
    write_gap_csv(out / "triangle.csv", [record])
    _manifest(out, "triangle", {
        "rho": str(rho_path), "omega": str(omega_path), "tau": str(tau_path), "cost": cost_sel,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }, seed, started)
    click.echo(f"gap = {record.gap!r}")


@main.command()
@click.option("--rho", "rho_path", type=click.Path(exists=True, dir_okay=False),
              help="Endpoint state file; drawn from the seed when omitted.")
@click.option("--tau", "tau_path", type=click.Path(exists=True, dir_okay=False),
              help="Endpoint state file; drawn from the seed when omitted.")
@click.option("--cost", "cost_sel", default="random:3", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--step", type=float, default=0.1, show_default=True, help="Lattice spacing.")
@click.option("--radius-bound", type=int, default=100, show_default=True,
              help="Integer bound on j^2 + k^2 + l^2.")
@_solver_options
@_out_option
@_guard
def lattice(rho_path, tau_path, cost_sel, seed, step, radius_bound, **kwargs):
    """Minimal gap over the Bloch-lattice middle states for a qubit pair."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    rho = load_density(rho_path) if rho_path else random_state(2, 2, RngStream(seed, _STREAM_RHO))
    tau = load_density(tau_path) if tau_path else random_state(2, 2, RngStream(seed, _STREAM_TAU))
    cost = parse_cost_selector(cost_sel, dim=2, seed=seed, stream=_STREAM_OBS)
    spec = LatticeSpec(step=step, radius_bound=radius_bound)
    tag = "files" if rho_path and tau_path else f"wishart(rank=2)+{cost_sel}"
    result = lattice_scan(rho, tau, cost.observables, spec, cfg, seed=seed, sampler_tag=tag)
    write_lattice_csv(out / "lattice.csv", result)
    from .report import gap_histogram

    gap_histogram((p.record.gap for p in result.points), out / "lattice.svg",
                  title="triangle-inequality gap over the Bloch lattice")
    _manifest(out, "lattice", {
        "rho": str(rho_path) if rho_path else None,
        "tau": str(tau_path) if tau_path else None,
        "cost": cost_sel, "step": step, "radius_bound": radius_bound,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }, seed, started)
    click.echo(f"min gap = {result.min_gap!r} over {len(result.points)} lattice points")


@main.command()
@click.option("--dim", type=int, required=True, help="State dimension, 2 to 5.")
@click.option("--samples", type=int, default=4000, show_default=True)
@click.option("--observables", "observables_per_sample", type=int, default=3, show_default=True)
@click.option("--rank", type=int, default=None, help="Wishart rank; defaults to the dimension.")
@click.option("--seed", type=int, default=0, show_default=True)
@_solver_options
@_out_option
@_guard
def sweep(dim, samples, observables_per_sample, rank, seed, **kwargs):
    """Minimal gap over random Wishart triplets with random observables."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    spec = SweepSpec(dim=dim, samples=samples, observables_per_sample=observables_per_sample,
                     rank=rank, seed=seed)
    result = min_gap_sweep(spec, cfg)
    write_sweep_csv(out / "sweep.csv", result)
    from .report import gap_histogram

    gap_histogram((r.record.gap for r in result.records), out / "sweep.svg",
                  title=f"triangle-inequality gap, dim {dim}, {samples} samples")
    _manifest(out, "sweep", {
        "dim": dim, "samples": samples, "observables": observables_per_sample,
        "rank": rank if rank is not None else dim,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }, seed, started)
    click.echo(f"min gap = {result.min_gap!r} over {samples} samples")


@main.command()
@click.option("--scenario", type=click.Choice(SURFACE_SCENARIOS), required=True)
@click.option("--resolution", type=int, default=41, show_default=True, help="Grid points per axis.")
@click.option("--seed", type=int, default=0, show_default=True)
@_solver_options
@_out_option
@_guard
def surface(scenario, resolution, seed, **kwargs):
    """Gap surface over a planar section of the state space."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    spec = SurfaceSpec(scenario=scenario, grid_resolution=resolution, seed=seed)
    result = gap_surface(spec, cfg)
    write_surface_csv(out / "surface.csv", result)
    from .report import surface_heatmap

    surface_heatmap(result, out / "surface.svg")
    _manifest(out, "surface", {
        "scenario": scenario, "resolution": resolution,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }, seed, started)
    evaluated = sum(1 for p in result.points if p.gap is not None)
    click.echo(f"min gap = {result.min_gap!r} over {evaluated} evaluated grid points")


@main.command()
@click.option("--channel", "channel_sel", required=True,
              help="identity | unitary:<file> | depolarizing:<p> | dephasing:<p> | file:<path>")
@click.option("--channel2", "channel2_sel", default=None,
              help="Second channel; when set, reports concatenation subadditivity.")
@click.option("--cost", "cost_sel", default="symmetric", show_default=True)
@click.option("--dim", type=int, default=None, help="Dimension for the identity channel.")
@click.option("--restarts", type=int, default=16, show_default=True)
@click.option("--maxfev", type=int, default=300, show_default=True,
              help="Objective-evaluation budget per restart.")
@click.option("--seed", type=int, default=0, show_default=True)
@_solver_options
@_out_option
@_guard
def complexity(channel_sel, channel2_sel, cost_sel, dim, restarts, maxfev, seed, **kwargs):
    """Wasserstein complexity of a channel (reported value is a lower bound)."""
    started = time.time()
    cfg = _cfg(kwargs)
    out = _outdir(kwargs)
    phi = parse_channel_selector(channel_sel, dim=dim)
    cost = parse_cost_selector(cost_sel, dim=phi.dim, seed=seed, stream=_STREAM_OBS)
    params = {
        "channel": channel_sel, "channel2": channel2_sel, "cost": cost_sel, "dim": phi.dim,
        "restarts": restarts, "maxfev": maxfev,
        "solver_gap_tol": cfg.gap_tol, "solver_feas_tol": cfg.feas_tol,
        "solver_max_iter": cfg.max_iter,
    }
    if channel2_sel is None:
        result = wasserstein_complexity(phi, cost.observables, restarts, cfg,
                                        RngStream(seed, 100), maxfev=maxfev)
        with open(out / "complexity.csv", "w") as fh:
            fh.write("value,converged,restarts\n")
            fh.write(f"{result.value!r},{result.converged},{result.restarts_used}\n")
        _manifest(out, "complexity", params, seed, started)
        click.echo(f"complexity >= {result.value!r} (lower bound; converged={result.converged})")
    else:
        phi2 = parse_channel_selector(channel2_sel, dim=dim)
        report = subadditivity_report(phi, phi2, cost.observables, restarts, cfg,
                                      RngStream(seed, 100), maxfev=maxfev)
        with open(out / "complexity.csv", "w") as fh:
            fh.write("complexity_first,complexity_second,complexity_composed,slack,warning\n")
            fh.write(
                f"{report.complexity_first!r},{report.complexity_second!r},"
                f"{report.complexity_composed!r},{report.slack!r},{report.warning}\n"
            )
        _manifest(out, "complexity", params, seed, started)
        click.echo(f"slack = {report.slack!r} (warning={report.warning})")


if __name__ == "__main__":
    main()
