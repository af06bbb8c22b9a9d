"""Tests for the fleet-design command line."""

from __future__ import annotations

import argparse
import json
from fractions import Fraction
from pathlib import Path

import pytest

from fleet_design.harness.spec import ExperimentSpec
from fleet_design.main import EXIT_DATA, EXIT_OK, EXIT_USAGE, build_parser, main
from fleet_design.models import LnsParams, Method
from fleet_design.scenarios import load_solution, save_scenario, save_spec
from fleet_design.scenarios.files import save_model
from fleet_design.seeding import seed_from_bytes
from tests.conftest import make_problem, tiny_spec


@pytest.fixture
def scenario(tmp_path: Path) -> Path:
    spec_path = save_spec(tiny_spec(seed=2, task_count=4), tmp_path / "tiny-spec.json")
    path = tmp_path / "tiny.json"
    assert main(["gen", "--spec", str(spec_path), "-o", str(path)]) == EXIT_OK
    return path


def _stdout_lines(capsys: pytest.CaptureFixture[str]) -> list[str]:
    return capsys.readouterr().out.splitlines()


# ======================================================================
# gen
# ======================================================================


class TestGen:
    def test_preset_with_overrides(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        out = tmp_path / "s.json"
        spec_out = tmp_path / "effective.json"
        code = main(
            [
                "gen",
                "--preset",
                "exp1",
                "--task-count",
                "5",
                "--budget",
                "45",
                "--seed",
                "3",
                "-o",
                str(out),
                "--save-spec",
                str(spec_out),
            ]
        )
        assert code == EXIT_OK
        assert _stdout_lines(capsys) == ["seed: 3"]
        problem = json.loads(out.read_text())["problem"]
        assert len(problem["tasks"]) == 5
        assert problem["budget"] == 45
        assert json.loads(spec_out.read_text())["seed"] == 3

    def test_spec_and_preset_are_exclusive(self, tmp_path: Path) -> None:
        code = main(["gen", "--preset", "exp1", "--spec", "x.json", "-o", str(tmp_path / "s")])
        assert code == EXIT_USAGE

    def test_unknown_preset(self, tmp_path: Path) -> None:
        assert main(["gen", "--preset", "exp9", "-o", str(tmp_path / "s")]) == EXIT_USAGE

    def test_too_many_tasks_is_a_data_error(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        spec_path = save_spec(tiny_spec(), tmp_path / "spec.json")
        code = main(
            ["gen", "--spec", str(spec_path), "--task-count", "40", "-o", str(tmp_path / "s")]
        )
        assert code == EXIT_DATA
        assert "Cannot place 40 tasks" in capsys.readouterr().err


# ======================================================================
# solve / greedy / random / oracle
# ======================================================================


class TestSolve:
    def test_writes_checkable_solution(
        self, scenario: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        sol = tmp_path / "sol.json"
        log = tmp_path / "iterations.csv"
        code = main(
            [
                "solve",
                str(scenario),
                "-o",
                str(sol),
                "--seed",
                "7",
                "--k",
                "20",
                "--log-iterations",
                str(log),
            ]
        )
        assert code == EXIT_OK
        lines = _stdout_lines(capsys)
        assert lines[0] == "seed: 7"
        reward = int(lines[1].removeprefix("reward: "))
        record = load_solution(sol)
        assert record.reward == reward
        assert record.seed == 7
        assert record.method is Method.LNS
        log_lines = log.read_text().splitlines()
        assert log_lines[0] == "iteration,mode,current_reward,best_reward,accepted"
        assert len(log_lines) == 22

        assert main(["check", str(scenario), str(sol)]) == EXIT_OK
        assert _stdout_lines(capsys) == [f"feasible: reward {reward}"]

    def test_same_seed_same_file(self, scenario: Path, tmp_path: Path) -> None:
        for name in ("a.json", "b.json"):
            args = ["solve", str(scenario), "-o", str(tmp_path / name), "--seed", "4", "--k", "15"]
            assert main(args) == EXIT_OK
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_seed_derived_from_scenario_bytes(
        self, scenario: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        assert main(["solve", str(scenario), "-o", str(tmp_path / "s.json"), "--k", "5"]) == 0
        expected = seed_from_bytes(scenario.read_bytes())
        assert _stdout_lines(capsys)[0] == f"seed: {expected}"

    def test_fixed_fleet(self, scenario: Path, tmp_path: Path) -> None:
        sol = tmp_path / "fixed.json"
        args = ["solve", str(scenario), "-o", str(sol), "--seed", "1", "--k", "10"]
        assert main([*args, "--fleet", "0:1"]) == EXIT_OK
        record = load_solution(sol)
        assert set(record.solution.active_robots()) <= {0}

    def test_fixed_fleet_too_large(
        self, scenario: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        args = ["solve", str(scenario), "-o", str(tmp_path / "x.json"), "--fleet", "1:9"]
        assert main(args) == EXIT_USAGE
        assert "--fleet" in capsys.readouterr().err

    def test_fixed_fleet_without_iteration_log(self, scenario: Path, tmp_path: Path) -> None:
        args = [
            "solve",
            str(scenario),
            "-o",
            str(tmp_path / "x.json"),
            "--fleet",
            "0:1",
            "--log-iterations",
            str(tmp_path / "log.csv"),
        ]
        assert main(args) == EXIT_USAGE

    @pytest.mark.parametrize(
        "flag, value", [("--k", "0"), ("--p-removal", "1.5"), ("--sa-cooling", "1")]
    )
    def test_out_of_range_parameter(
        self,
        scenario: Path,
        tmp_path: Path,
        capsys: pytest.CaptureFixture[str],
        flag: str,
        value: str,
    ) -> None:
        args = ["solve", str(scenario), "-o", str(tmp_path / "x.json"), flag, value]
        assert main(args) == EXIT_USAGE
        assert f"{flag}:" in capsys.readouterr().err

    def test_missing_scenario_is_a_data_error(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        args = ["solve", str(tmp_path / "none.json"), "-o", str(tmp_path / "x.json"), "--seed", "1"]
        assert main(args) == EXIT_DATA
        assert "error:" in capsys.readouterr().err


class TestBaselineCommands:
    def test_greedy_with_trace(self, scenario: Path, tmp_path: Path) -> None:
        trace = tmp_path / "trace.csv"
        args = ["greedy", str(scenario), "-o", str(tmp_path / "g.json"), "--seed", "2", "--k", "10"]
        assert main([*args, "--trace", str(trace)]) == EXIT_OK
        header = trace.read_text().splitlines()[0]
        assert header == "step,type_id,marginal_gain,cost,ratio,reward_after"
        assert load_solution(tmp_path / "g.json").method is Method.GREEDY

    def test_random(self, scenario: Path, tmp_path: Path) -> None:
        args = ["random", str(scenario), "-o", str(tmp_path / "r.json"), "--seed", "2", "--k", "10"]
        assert main(args) == EXIT_OK
        assert main(["check", str(scenario), str(tmp_path / "r.json")]) == EXIT_OK

    def test_oracle(self, scenario: Path, tmp_path: Path) -> None:
        sol = tmp_path / "o.json"
        assert main(["oracle", str(scenario), "-o", str(sol)]) == EXIT_OK
        record = load_solution(sol)
        assert record.method is Method.ORACLE
        assert record.seed is None

    def test_oracle_size_limit(
        self, scenario: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        args = ["oracle", str(scenario), "-o", str(tmp_path / "o.json"), "--max-tasks", "2"]
        assert main(args) == EXIT_DATA
        assert "SizeExceeded" in capsys.readouterr().err


# ======================================================================
# export-milp / check
# ======================================================================


class TestExportMilp:
    def test_prints_model_size(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = save_scenario(make_problem((1, 2), budget=20), tmp_path / "line.json")
        lp = tmp_path / "out" / "model.lp"
        assert main(["export-milp", str(path), "-o", str(lp)]) == EXIT_OK
        assert _stdout_lines(capsys) == ["variables: 46", "constraints: 49"]
        assert lp.read_text().startswith("\\ Problem name: test\n")


class TestCheck:
    def test_tampered_reward(
        self, scenario: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        sol = tmp_path / "sol.json"
        assert main(["solve", str(scenario), "-o", str(sol), "--seed", "3", "--k", "10"]) == 0
        data = json.loads(sol.read_text())
        data["reward"] += 1
        sol.write_text(json.dumps(data))
        capsys.readouterr()
        assert main(["check", str(scenario), str(sol)]) == EXIT_DATA
        assert "differs from recomputed" in capsys.readouterr().err

    def test_infeasible_solution(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        problem = make_problem(deadlines=[10, 1, 10, 10])
        scenario = save_scenario(problem, tmp_path / "s.json")
        sol = tmp_path / "sol.json"
        sol.write_text(
            json.dumps(
                {
                    "format_version": 1,
                    "kind": "solution",
                    "scenario": "test",
                    "method": "lns",
                    "reward": 2,
                    "cost": 10,
                    "solution": {"tours": [{"robot_index": 0, "visits": [0, 1]}]},
                }
            )
        )
        assert main(["check", str(scenario), str(sol)]) == EXIT_DATA
        assert "violation: DEADLINE" in capsys.readouterr().err

    def test_malformed_solution_file(self, scenario: Path, tmp_path: Path) -> None:
        sol = tmp_path / "sol.json"
        sol.write_text('{"format_version": 1, ')
        assert main(["check", str(scenario), str(sol)]) == EXIT_DATA


# ======================================================================
# experiment / report
# ======================================================================


class TestExperimentAndReport:
    def setup_method(self) -> None:
        self.spec = ExperimentSpec(
            experiment="cli-sweep",
            scenario=tiny_spec(),
            budgets=(Fraction(20), Fraction(30)),
            task_counts=(4,),
            trials=2,
            methods=(Method.LNS, Method.GREEDY),
            params=LnsParams(iterations=10),
        )

    def _run(self, tmp_path: Path, *extra: str) -> int:
        spec_path = save_model(self.spec, tmp_path / "sweep.json")
        out = tmp_path / "results"
        return main(
            ["experiment", "--spec", str(spec_path), "-o", str(out), "--workers", "1", *extra]
        )

    def test_sweep_then_report(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert self._run(tmp_path, "--no-timing", "--trials", "1") == EXIT_OK
        assert _stdout_lines(capsys) == ["experiment: cli-sweep", "records: 4", "failures: 0"]
        results = tmp_path / "results" / "results.csv"
        assert len(results.read_text().splitlines()) == 5

        report_dir = tmp_path / "report"
        assert main(["report", str(results), "-o", str(report_dir)]) == EXIT_OK
        text = capsys.readouterr().out
        assert "lns - greedy:" in text
        assert (report_dir / "summary.csv").exists()
        assert (report_dir / "summary.txt").read_text() == text

    def test_overrides_reach_the_sweep(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        code = self._run(
            tmp_path, "--methods", "random", "--budgets", "15", "--trials", "1", "--k", "5"
        )
        assert code == EXIT_OK
        assert _stdout_lines(capsys)[1] == "records: 1"
        row = (tmp_path / "results" / "results.csv").read_text().splitlines()[1]
        assert row.startswith("cli-sweep,random,4,15,0,")
        assert row.endswith(",5")

    def test_rerun_without_timing_is_identical(self, tmp_path: Path) -> None:
        assert self._run(tmp_path / "a", "--no-timing") == EXIT_OK
        assert self._run(tmp_path / "b", "--no-timing") == EXIT_OK
        first = (tmp_path / "a" / "results" / "results.csv").read_bytes()
        assert first == (tmp_path / "b" / "results" / "results.csv").read_bytes()

    def test_zero_workers(self, tmp_path: Path) -> None:
        spec_path = save_model(self.spec, tmp_path / "sweep.json")
        args = ["experiment", "--spec", str(spec_path), "-o", str(tmp_path), "--workers", "0"]
        assert main(args) == EXIT_USAGE

    def test_unknown_bundled(self, tmp_path: Path) -> None:
        assert main(["experiment", "--bundled", "exp9", "-o", str(tmp_path)]) == EXIT_USAGE

    def test_bad_method_list(self, tmp_path: Path) -> None:
        assert self._run(tmp_path, "--methods", "lns,annealing") == EXIT_USAGE

    def test_report_on_empty_results(self, tmp_path: Path) -> None:
        results = tmp_path / "results.csv"
        results.write_text("experiment,method,N,B,trial,reward,fleet,cost,wall_ms,iters\n")
        assert main(["report", str(results)]) == EXIT_USAGE

    def test_report_on_missing_file(self, tmp_path: Path) -> None:
        assert main(["report", str(tmp_path / "none.csv")]) == EXIT_USAGE


# ======================================================================
# Global options and help
# ======================================================================


class TestGlobalOptions:
    def test_no_command(self) -> None:
        assert main([]) == EXIT_USAGE

    def test_unknown_flag(self, scenario: Path, tmp_path: Path) -> None:
        assert main(["solve", str(scenario), "-o", str(tmp_path / "x"), "--iters", "5"]) == 1

    def test_abbreviated_flag_rejected(self, tmp_path: Path) -> None:
        args = ["gen", "--preset", "exp1", "--task", "5", "-o", str(tmp_path / "s.json")]
        assert main(args) == EXIT_USAGE

    def test_bad_log_level(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        args = ["--log-level", "chatty", "gen", "--preset", "exp1", "-o", str(tmp_path / "s")]
        assert main(args) == EXIT_USAGE
        assert "unknown log level" in capsys.readouterr().err

    def test_json_logs_go_to_stderr(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        path = save_scenario(make_problem((1, 2), budget=20), tmp_path / "line.json")
        args = ["--log-format", "json", "--log-level", "info", "export-milp", str(path)]
        assert main([*args, "-o", str(tmp_path / "m.lp")]) == EXIT_OK
        captured = capsys.readouterr()
        events = [json.loads(line) for line in captured.err.splitlines()]
        assert "milp_exported" in {e["event"] for e in events}
        assert captured.out.startswith("variables: ")

    def test_help_exits_cleanly(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["--help"]) == EXIT_OK
        assert "experiment" in capsys.readouterr().out


class TestHelpCoverage:
    def _parsers(self) -> dict[str, argparse.ArgumentParser]:
        parser = build_parser()
        found: dict[str, argparse.ArgumentParser] = {"": parser}
        for action in parser._actions:
            if isinstance(action, argparse._SubParsersAction):
                found.update(action.choices)
        return found

    def test_every_subcommand_is_present(self) -> None:
        assert set(self._parsers()) == {
            "",
            "gen",
            "solve",
            "greedy",
            "random",
            "oracle",
            "export-milp",
            "experiment",
            "report",
            "check",
        }

    def test_every_option_has_help(self) -> None:
        for name, parser in self._parsers().items():
            for action in parser._actions:
                if isinstance(action, argparse._SubParsersAction):
                    continue
                assert action.help, f"{name or 'fleet-design'}: {action.dest} has no help"
