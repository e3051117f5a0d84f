"""CLI smoke tests through the click runner."""

import json

from click.testing import CliRunner

from xhaulfair import MinMaxHeuristicAllocator, load_scenario
from xhaulfair.cli import main


def test_generate_solve_check_roundtrip(tmp_path):
    runner = CliRunner()
    scen = tmp_path / "scen.yaml"
    report = tmp_path / "report.csv"

    res = runner.invoke(main, ["generate", "--seed", "3", "--load", "0.6",
                               "-o", str(scen)])
    assert res.exit_code == 0, res.output
    assert "38 RUs" in res.output

    res = runner.invoke(main, ["solve", "--scenario", str(scen),
                               "--solver", "heuristic", "--seed", "3",
                               "-o", str(report)])
    assert res.exit_code == 0, res.output
    assert "objective=" in res.output
    assert report.read_text().startswith("ru_id,")

    # feed the solver's own mapping back through `check`
    mapping = MinMaxHeuristicAllocator(seed=3).fit(load_scenario(str(scen))).predict()
    assn = tmp_path / "assn.json"
    assn.write_text(json.dumps(mapping))
    res = runner.invoke(main, ["check", "--scenario", str(scen),
                               "--assignment", str(assn)])
    assert res.exit_code == 0, res.output
    assert "feasible: True" in res.output


def test_check_rejects_infeasible(tmp_path):
    runner = CliRunner()
    scen = tmp_path / "scen.yaml"
    runner.invoke(main, ["generate", "--seed", "3", "--load", "0.6", "-o", str(scen)])

    s = load_scenario(str(scen))
    # pile every RU onto one edge; capacity and latency checks must trip
    mapping = {ru.id: s.edges[0].id for ru in s.rus}
    assn = tmp_path / "assn.json"
    assn.write_text(json.dumps(mapping))
    res = runner.invoke(main, ["check", "--scenario", str(scen),
                               "--assignment", str(assn)])
    assert res.exit_code == 1
    assert "VIOLATED" in res.output


def test_solve_baseline_and_load_flag(tmp_path):
    runner = CliRunner()
    scen = tmp_path / "scen.yaml"
    runner.invoke(main, ["generate", "--seed", "1", "-o", str(scen)])
    res = runner.invoke(main, ["solve", "--scenario", str(scen),
                               "--solver", "baseline", "--load", "0.5"])
    assert res.exit_code == 0, res.output
    assert "MNO-1" in res.output


def test_sweep_writes_csv(tmp_path):
    runner = CliRunner()
    spec = tmp_path / "spec.yaml"
    out = tmp_path / "sweep.csv"
    spec.write_text("loads: [0.5]\nratios: [0.5]\nseeds: [0]\n"
                    "solvers: [heuristic, baseline]\n")
    res = runner.invoke(main, ["sweep", "--spec", str(spec), "-o", str(out)])
    assert res.exit_code == 0, res.output
    text = out.read_text()
    assert text.startswith("# xhaulfair-sweep-v1")
    assert "opex_reduction_pct" in text


def test_check_unknown_ru_errors(tmp_path):
    runner = CliRunner()
    scen = tmp_path / "scen.yaml"
    runner.invoke(main, ["generate", "--seed", "1", "-o", str(scen)])
    assn = tmp_path / "assn.json"
    assn.write_text(json.dumps({"NOPE": "E0"}))
    res = runner.invoke(main, ["check", "--scenario", str(scen),
                               "--assignment", str(assn)])
    assert res.exit_code != 0
    assert "unknown RU id" in res.output
