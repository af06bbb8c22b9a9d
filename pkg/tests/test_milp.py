"""Tests for the MILP model and the LP text format."""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from fleet_design.errors import ParseError
from fleet_design.milp import build_milp, export_milp, load_lp, read_lp, save_lp, write_lp
from fleet_design.milp.model import LE
from fleet_design.models import RobotType
from tests.conftest import make_problem


class TestBuildMilp:
    def setup_method(self) -> None:
        # two tasks on a unit line, two robots of one type
        self.problem = make_problem((1, 2), budget=20)
        self.model = build_milp(self.problem)

    def test_variable_counts(self) -> None:
        assert self.model.variable_counts() == {"x": 32, "y": 4, "z": 2, "s": 8}

    def test_row_counts(self) -> None:
        assert self.model.row_counts() == {
            "c3b": 4,
            "c3c": 8,
            "c3d": 24,
            "c3e": 2,
            "c3f": 4,
            "c3g": 4,
            "c3h": 2,
            "c3i": 1,
        }
        assert len(self.model.constraints) == 49

    def test_big_m(self) -> None:
        assert self.model.big_m == 103

    def test_every_reference_is_declared(self) -> None:
        assert self.model.undeclared_references() == set()

    @pytest.mark.parametrize(
        "name, fixed",
        [
            ("x_0_0_1", True),
            ("x_1_0_1", True),
            ("x_3_1_2", True),
            ("x_0_3_1", True),
            ("x_0_1_1", False),
            ("x_2_3_2", False),
        ],
    )
    def test_impossible_arcs_are_fixed(self, name: str, fixed: bool) -> None:
        assert self.model.variable(name).fixed is fixed

    def test_budget_row(self) -> None:
        budget = next(row for row in self.model.constraints if row.name == "c3i")
        assert budget.terms == ((Fraction(10), "z_1"), (Fraction(10), "z_2"))
        assert budget.sense == LE
        assert budget.rhs == 20

    def test_capability_row_uses_constant(self) -> None:
        problem = make_problem((1, 2), requirements=[{3}, set()], budget=10)
        model = build_milp(problem)
        rows = {row.name: row for row in model.constraints}
        assert rows["c3f_1_1"].rhs == 0
        assert rows["c3f_2_1"].rhs == 1

    def test_infinite_deadline_uses_largest_battery(self) -> None:
        rows = {row.name: row for row in self.model.constraints}
        assert rows["c3g_1_1"].terms == ((Fraction(1), "s_1_1"), (Fraction(-100), "y_1_1"))

    def test_fractional_data_is_scaled_to_integers(self) -> None:
        problem = make_problem(
            (1,),
            robot_types=(RobotType(id=0, deploy_cost=Fraction(5, 2), battery=Fraction(7, 2)),),
            budget=5,
        )
        model = build_milp(problem)
        for row in model.constraints:
            assert all(coef.denominator == 1 for coef, _ in row.terms)
            assert row.rhs.denominator == 1
        budget = next(row for row in model.constraints if row.name == "c3i")
        assert budget.rhs == 10

    def test_battery_row_for_every_robot(self) -> None:
        problem = make_problem(
            (1, 2),
            robot_types=(
                RobotType(id=0, deploy_cost=10, battery=100),
                RobotType(
                    id=1, deploy_cost=10, battery=50, allowed_edge_classes=frozenset({"air"})
                ),
            ),
            budget=10,
        )
        model = build_milp(problem)
        assert model.row_counts()["c3h"] == 2
        rows = {row.name: row for row in model.constraints}
        assert rows["c3h_2"].terms == ((Fraction(0), "z_2"),)
        assert rows["c3h_2"].rhs == 50
        assert read_lp(write_lp(model)) == model

    def test_empty_fleet(self) -> None:
        model = build_milp(make_problem(budget=0))
        assert model.constraints == ()
        assert model.variables == ()
        assert model.objective == ()


class TestLpFormat:
    def setup_method(self) -> None:
        self.model, self.text = export_milp(make_problem((1, 2), budget=20))

    def test_layout(self) -> None:
        lines = self.text.splitlines()
        assert lines[0] == "\\ Problem name: test"
        assert lines[1] == "\\ big_m = 103"
        assert "Subject To" in lines
        assert " c3i: + 10 z_1 + 10 z_2 <= 20" in lines
        assert " x_0_0_1 = 0" in lines
        assert " s_0_1 >= 0" in lines
        assert lines[-1] == "End"

    def test_write_equals_export(self) -> None:
        assert write_lp(self.model) == self.text

    def test_read_restores_the_model(self) -> None:
        assert read_lp(self.text) == self.model

    def test_read_restores_an_empty_model(self) -> None:
        model = build_milp(make_problem(budget=0))
        assert read_lp(write_lp(model)) == model

    def test_save_and_load(self, tmp_path: Path) -> None:
        path = save_lp(self.model, tmp_path / "lp" / "model.lp")
        assert load_lp(path) == self.model

    def test_missing_section(self) -> None:
        text = self.text.replace("Bounds\n", "")
        with pytest.raises(ParseError, match="missing section 'Bounds'"):
            read_lp(text)

    def test_missing_big_m(self) -> None:
        text = "\n".join(self.text.splitlines()[:1] + self.text.splitlines()[2:])
        with pytest.raises(ParseError, match="big_m"):
            read_lp(text)

    def test_malformed_constraint(self) -> None:
        text = self.text.replace(" c3i: + 10 z_1 + 10 z_2 <= 20", " c3i: + 10 z_1 + 10 z_2")
        with pytest.raises(ParseError, match="malformed constraint"):
            read_lp(text)

    def test_unreadable_file(self, tmp_path: Path) -> None:
        with pytest.raises(ParseError, match="cannot read file"):
            load_lp(tmp_path / "missing.lp")
