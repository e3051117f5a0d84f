"""Command-line interface: generate, solve, sweep, check."""

from __future__ import annotations

import json
import sys

import click

from . import core
from .scenario import apply_load, build_paper_scenario, load_scenario, save_scenario
from .solvers import SOLVERS, solve_baseline_uniform, solve_exact, solve_heuristic
from .sweep import SweepSpec, run_sweep, write_sweep_csv


@click.group()
def main():
    """Min-max fair x-haul and DU/CU allocation for multi-tenant O-RAN."""


@main.command()
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--ratio", "edge_ratio", default=0.5, show_default=True, type=float,
              help="Edge:O-Cloud compute ratio (edge share).")
@click.option("--load", "load_fraction", default=1.0, show_default=True, type=float)
@click.option("--low-latency-fraction", default=0.25, show_default=True, type=float)
@click.option("--multi-branch/--single-branch", default=True, show_default=True)
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False))
def generate(seed, edge_ratio, load_fraction, low_latency_fraction, multi_branch, out):
    """Write a reference-deployment scenario file."""
    s = build_paper_scenario(seed=seed, edge_ratio=edge_ratio,
                             load_fraction=load_fraction,
                             low_latency_fraction=low_latency_fraction,
                             multi_branch=multi_branch)
    save_scenario(s, out)
    click.echo(f"wrote {out}: {s.n_ru} RUs, {len(s.edges)} edges, {len(s.oclouds)} O-Clouds")


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--solver", type=click.Choice(sorted(SOLVERS)), default="heuristic",
              show_default=True)
@click.option("--tau", default=0.2, show_default=True, type=float,
              help="Relative demand-similarity tolerance for reassignment.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--limit", default=10_000_000, show_default=True, type=int,
              help="Exact-solver search-space cap.")
@click.option("--load", "load_fraction", default=None, type=float,
              help="Rescale demands to this load fraction before solving.")
@click.option("--out", "-o", type=click.Path(dir_okay=False),
              help="Write the per-RU allocation report CSV here.")
def solve(scenario_path, solver, tau, seed, limit, load_fraction, out):
    """Solve a scenario and print a summary."""
    s = load_scenario(scenario_path)
    if load_fraction is not None:
        s = apply_load(s, load_fraction)
    if solver == "heuristic":
        result = solve_heuristic(s, tau=tau, seed=seed)
    elif solver == "exact":
        result = solve_exact(s, limit=limit)
    else:
        result = solve_baseline_uniform(s, seed=seed)

    click.echo(f"solver={solver} objective={result.report.max_cost:.6f} "
               f"outages={len(result.outage_rus)} iterations={result.iterations} "
               f"wall={result.wall_time_s:.3f}s")
    for mno, cost in sorted(result.report.per_mno_cost.items()):
        click.echo(f"  {mno}: {cost:.6f}")
    if result.outage_rus:
        click.echo(f"  outage RUs: {', '.join(result.outage_rus)}")
    if out:
        with open(out, "w", newline="") as f:
            f.write(core.report_to_csv(result.report, result.assignment, s))
        click.echo(f"wrote {out}")


@main.command()
@click.option("--spec", "spec_path", type=click.Path(exists=True),
              help="Sweep spec YAML (loads, ratios, seeds, solvers, tau).")
@click.option("--out", "-o", required=True, type=click.Path(dir_okay=False))
def sweep(spec_path, out):
    """Run a (load, ratio, seed, solver) sweep and write tidy CSV."""
    spec = SweepSpec.from_yaml(spec_path) if spec_path else SweepSpec()
    rows = run_sweep(spec)
    write_sweep_csv(rows, out)
    click.echo(f"wrote {out}: {len(rows)} rows")


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(exists=True))
@click.option("--assignment", "assignment_path", required=True,
              type=click.Path(exists=True),
              help="JSON mapping of RU id to cloud id (null = unassigned).")
def check(scenario_path, assignment_path):
    """Check an assignment file against every constraint family."""
    s = load_scenario(scenario_path)
    with open(assignment_path) as f:
        mapping = json.load(f)

    cloud_index = {c.id: ("e", j) for j, c in enumerate(s.edges)}
    cloud_index.update({c.id: ("q", j) for j, c in enumerate(s.oclouds)})
    ru_index = {ru.id: r for r, ru in enumerate(s.rus)}
    choices: list = [None] * s.n_ru
    for ru_id, cloud_id in mapping.items():
        if ru_id not in ru_index:
            raise click.ClickException(f"unknown RU id {ru_id!r}")
        if cloud_id is None:
            continue
        if cloud_id not in cloud_index:
            raise click.ClickException(f"unknown cloud id {cloud_id!r}")
        choices[ru_index[ru_id]] = cloud_index[cloud_id]

    a = core.Assignment.from_vector(choices, len(s.edges), len(s.oclouds))
    feas = core.check_feasible(a, s)
    click.echo(f"feasible: {feas.feasible}")
    for fam, ok in sorted(feas.family_ok.items()):
        click.echo(f"  {fam}: {'ok' if ok else 'VIOLATED'}")
    for r, fam in sorted(feas.first_violation.items()):
        click.echo(f"  {s.rus[r].id}: {fam}")
    if feas.unassigned:
        click.echo(f"  unassigned: {', '.join(s.rus[r].id for r in feas.unassigned)}")
    if not feas.feasible:
        sys.exit(1)


if __name__ == "__main__":
    main()
