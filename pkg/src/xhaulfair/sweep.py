"""Experiment sweeps over load, edge:ocloud ratio, and seeds.

Emits tidy CSV (one row per cell per metric) with a versioned header
comment. Cells are independent and evaluated in sorted key order so the
output bytes are reproducible for a fixed spec.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import yaml

from .scenario import apply_load, build_paper_scenario
from .solvers import SOLVERS

CSV_SCHEMA = "# xhaulfair-sweep-v1 value units: gbps/gops-tti/currency-per-day"


@dataclass
class SweepSpec:
    loads: list[float] = field(default_factory=lambda: [0.4, 0.6, 0.8])
    ratios: list[float] = field(default_factory=lambda: [0.25, 0.50, 0.75])
    seeds: list[int] = field(default_factory=lambda: list(range(5)))
    solvers: list[str] = field(default_factory=lambda: ["heuristic", "baseline"])
    tau: float = 0.2
    low_latency_fraction: float = 0.25

    def __post_init__(self):
        if any(not 0.0 < f <= 1.0 for f in self.loads):
            raise ValueError("load fractions must lie in (0, 1]")
        if any(not 0.0 < r < 1.0 for r in self.ratios):
            raise ValueError("edge ratios must lie in (0, 1)")
        for s in self.solvers:
            if s not in SOLVERS:
                raise ValueError(f"unknown solver {s!r}")

    @classmethod
    def from_yaml(cls, path: str) -> "SweepSpec":
        with open(path) as f:
            return cls(**(yaml.safe_load(f) or {}))


def _cell_metrics(result, scenario) -> dict[str, float]:
    a = result.assignment
    report = result.report
    thpt_edge = thpt_oc = gops_edge = gops_oc = 0.0
    n_edge_attached = 0
    n_assigned = 0
    for r, ru in enumerate(scenario.rus):
        where = a.cloud_of(r)
        if where is None:
            continue
        n_assigned += 1
        side, _ = where
        demand = ru.w_ul_bps + ru.w_dl_bps
        gops = ru.gamma_ul_gops + ru.gamma_dl_gops
        if side == "e":
            n_edge_attached += 1
            thpt_edge += demand
            gops_edge += gops
        else:
            thpt_oc += demand
            gops_oc += gops
    metrics = {
        "outage_count": float(len(result.outage_rus)),
        "edge_attached_fraction": n_edge_attached / n_assigned if n_assigned else 0.0,
        "thpt_edge_gbps": thpt_edge / 1e9,
        "thpt_ocloud_gbps": thpt_oc / 1e9,
        "gops_edge": gops_edge,
        "gops_ocloud": gops_oc,
        "opex_total": sum(report.per_mno_cost.values()),
        "objective": report.max_cost,
    }
    for mno, cost in sorted(report.per_mno_cost.items()):
        metrics[f"opex_mno:{mno}"] = cost
    return metrics


def run_sweep(spec: SweepSpec) -> list[dict]:
    """Evaluate every (load, ratio, seed, solver) cell.

    Returns tidy rows; cell failures become metric='error' rows and the
    sweep continues. When both the heuristic and the baseline ran in a
    cell, derived OPEX-reduction rows are appended under the pseudo-solver
    'heuristic_vs_baseline'.
    """
    rows: list[dict] = []
    for ratio in sorted(spec.ratios):
        for seed in sorted(spec.seeds):
            base = build_paper_scenario(
                seed=seed, edge_ratio=ratio,
                low_latency_fraction=spec.low_latency_fraction,
            )
            for load in sorted(spec.loads):
                scenario = apply_load(base, load)
                cell_reports: dict[str, dict[str, float]] = {}
                for solver_name in sorted(spec.solvers):
                    kwargs = {"tau": spec.tau} if solver_name == "heuristic" else {}
                    try:
                        solver = SOLVERS[solver_name](seed=seed, **kwargs) \
                            if solver_name != "exact" else SOLVERS[solver_name]()
                        result = solver._solve(scenario)
                        metrics = _cell_metrics(result, scenario)
                    except Exception as exc:   # noqa: BLE001 - error rows, sweep continues
                        rows.append({"load_fraction": load, "edge_ratio": ratio,
                                     "seed": seed, "solver": solver_name,
                                     "metric": "error", "value": repr(exc)})
                        continue
                    cell_reports[solver_name] = metrics
                    for metric in sorted(metrics):
                        rows.append({"load_fraction": load, "edge_ratio": ratio,
                                     "seed": seed, "solver": solver_name,
                                     "metric": metric, "value": metrics[metric]})
                if "heuristic" in cell_reports and "baseline" in cell_reports:
                    h, b = cell_reports["heuristic"], cell_reports["baseline"]
                    derived = {}
                    if b["opex_total"] > 0:
                        derived["opex_reduction_pct"] = 100.0 * (1.0 - h["opex_total"] / b["opex_total"])
                    for key in sorted(b):
                        if key.startswith("opex_mno:") and b[key] > 0 and key in h:
                            derived[f"opex_reduction_pct_{key.split(':', 1)[1]}"] = \
                                100.0 * (1.0 - h[key] / b[key])
                    for metric in sorted(derived):
                        rows.append({"load_fraction": load, "edge_ratio": ratio,
                                     "seed": seed, "solver": "heuristic_vs_baseline",
                                     "metric": metric, "value": derived[metric]})
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(CSV_SCHEMA + "\r\n")
    writer = csv.DictWriter(
        buf, fieldnames=["load_fraction", "edge_ratio", "seed", "solver", "metric", "value"],
        lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        out = dict(row)
        if isinstance(out["value"], float):
            out["value"] = f"{out['value']:.6f}"
        writer.writerow(out)
    return buf.getvalue()


def write_sweep_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(rows_to_csv(rows))
