"""Sweep harness: tidy CSV, reproducibility, derived reduction rows."""

import pytest

from xhaulfair import SweepSpec, run_sweep
from xhaulfair.solvers import SOLVERS, solve_heuristic
from xhaulfair.scenario import apply_load, build_paper_scenario
from xhaulfair.sweep import CSV_SCHEMA, rows_to_csv


def tiny_spec(**overrides):
    params = dict(loads=[0.5], ratios=[0.5], seeds=[0],
                  solvers=["heuristic", "baseline"])
    params.update(overrides)
    return SweepSpec(**params)


class TestSpecValidation:
    def test_bad_load_rejected(self):
        with pytest.raises(ValueError):
            SweepSpec(loads=[0.0])

    def test_bad_ratio_rejected(self):
        with pytest.raises(ValueError):
            SweepSpec(ratios=[1.0])

    def test_unknown_solver_rejected(self):
        with pytest.raises(ValueError):
            SweepSpec(solvers=["magic"])

    def test_from_yaml(self, tmp_path):
        p = tmp_path / "spec.yaml"
        p.write_text("loads: [0.4]\nratios: [0.25]\nseeds: [1, 2]\n")
        spec = SweepSpec.from_yaml(str(p))
        assert spec.loads == [0.4]
        assert spec.seeds == [1, 2]


class TestRunSweep:
    def test_empty_load_list_gives_header_only(self):
        rows = run_sweep(tiny_spec(loads=[]))
        assert rows == []
        csv_text = rows_to_csv(rows)
        assert csv_text.startswith(CSV_SCHEMA)
        assert "load_fraction" in csv_text

    def test_single_cell_matches_direct_invocation(self):
        rows = run_sweep(tiny_spec(solvers=["heuristic"]))
        by_metric = {r["metric"]: r["value"] for r in rows}
        s = apply_load(build_paper_scenario(seed=0, edge_ratio=0.5), 0.5)
        direct = solve_heuristic(s, tau=0.2, seed=0)
        assert by_metric["objective"] == pytest.approx(direct.report.max_cost)
        assert by_metric["opex_total"] == pytest.approx(
            sum(direct.report.per_mno_cost.values()))
        assert by_metric["outage_count"] == len(direct.outage_rus)

    def test_derived_reduction_rows_present(self):
        rows = run_sweep(tiny_spec())
        derived = [r for r in rows if r["solver"] == "heuristic_vs_baseline"]
        metrics = {r["metric"] for r in derived}
        assert "opex_reduction_pct" in metrics
        for m in ("MNO-1", "MNO-2", "MNO-3"):
            assert f"opex_reduction_pct_{m}" in metrics

    def test_reproducible_bytes(self):
        spec = tiny_spec()
        a = rows_to_csv(run_sweep(spec))
        b = rows_to_csv(run_sweep(spec))
        assert a == b

    def test_per_mno_opex_sums_to_total(self):
        rows = run_sweep(tiny_spec(solvers=["heuristic"]))
        total = next(r["value"] for r in rows if r["metric"] == "opex_total")
        parts = sum(r["value"] for r in rows
                    if r["metric"].startswith("opex_mno:"))
        assert parts == pytest.approx(total)


def test_heuristic_beats_baseline_on_average():
    # statistical trend over 20 seeds: aggregate OPEX reduction is positive
    # at every load point from 40% up. Under the equal per-operator baseline
    # split, the largest operator's reduction hovers near zero (its demand
    # share exceeds an equal third), so per-operator positivity is asserted
    # for the two smaller operators at the 80% operating point.
    per_mno = {"heuristic": {}, "baseline": {}}
    for load in (0.4, 0.6, 0.8):
        totals = {"heuristic": 0.0, "baseline": 0.0}
        for seed in range(20):
            s = build_paper_scenario(seed=seed, edge_ratio=0.5, load_fraction=load)
            for name in ("heuristic", "baseline"):
                res = SOLVERS[name](seed=seed)._solve(s)
                totals[name] += sum(res.report.per_mno_cost.values())
                if load == 0.8:
                    for m, c in res.report.per_mno_cost.items():
                        per_mno[name][m] = per_mno[name].get(m, 0.0) + c
        assert totals["heuristic"] < totals["baseline"]
    for m in ("MNO-1", "MNO-2"):
        assert per_mno["heuristic"][m] < per_mno["baseline"][m]
