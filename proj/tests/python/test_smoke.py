import math
import os
from pathlib import Path

import pytest

import commitplan as cp

FIXTURES = Path(os.environ.get("COMMITPLAN_FIXTURE_DIR", Path(__file__).resolve().parents[1] / "fixtures"))


@pytest.fixture
def worked():
    return cp.load_task(FIXTURES / "worked_example.json")


def test_worked_example_compiles_to_four_actions(worked):
    compiled = cp.compile(worked)
    assert compiled.task.actions == ["a1", "a1--commit--x", "a2--sim", "a2--sim--y"]
    assert compiled.task.goal == ["x--commit", "y--commit"]
    assert compiled.pending_goals == ["x", "y"]
    assert compiled.commit_fluent("x") == "x--commit"
    assert compiled.variant("a2--sim--y") == "simultaneous"
    assert cp.forecast_size(worked) == (4, 1)


def test_optimal_cost_is_preserved(worked):
    compiled = cp.compile(worked)
    base = cp.solve(worked)
    commit = cp.solve(compiled.task, heuristic="blind")
    assert base["outcome"] == commit["outcome"] == "solved"
    assert base["cost"] == commit["cost"] == 3


def test_plan_mappings(worked):
    compiled = cp.compile(worked)
    forward = cp.forward_map(worked, ["a1", "a2", "a1"], compiled)
    assert forward == ["a1", "a2--sim--y", "a1--commit--x"]
    assert cp.backward_map(compiled, forward) == ["a1", "a2", "a1"]
    assert cp.validate_plan(compiled.task, forward)["valid"]


def test_achievers_on_sokoban():
    task = cp.load_task(FIXTURES / "sokoban.json")
    plan = ["push-orange-c1-c2-c3", "push-orange-c2-c3-c4", "push-orange-c3-c4-c5", "push-blue-t3-u3-c3"]
    report = cp.permanent_achievers(task, plan)
    assert report["filled-c3"] == {"achiever": 3, "transient": [(0, 1)]}
    assert report["filled-c5"]["achiever"] == 2


def test_pddl_round_trip_and_gripper():
    task = cp.load_task(FIXTURES / "gripper-domain.pddl", FIXTURES / "gripper.pddl")
    assert len(task.actions) == 18
    assert cp.solve(task)["cost"] == 5
    random = cp.generate(seed=11)
    assert cp.Task.from_json(random.to_json()) == random


def test_scores():
    assert cp.sat_score(3, 4) == 0.75
    assert cp.sat_score(3, None) == 0.0
    assert cp.agl_score(900.0) == 0.0
    assert cp.agl_score(0.5) == 1.0
    assert math.isclose(cp.agl_score(30.0), 1 - math.log(30) / math.log(900), abs_tol=1e-12)


def test_errors_map_to_python_exceptions(worked):
    with pytest.raises(ValueError):
        cp.Task.from_json("{}")
    with pytest.raises(cp.InputError):
        cp.forward_map(worked, ["nope"], cp.compile(worked))
    with pytest.raises(cp.Error):
        cp.compile(worked, max_exponent=0)


def test_benchmark(tmp_path, worked):
    suite = tmp_path / "suite" / "worked"
    suite.mkdir(parents=True)
    (suite / "we.json").write_text(worked.to_json())
    table = cp.run_benchmark(tmp_path / "suite", tmp_path / "out.csv")
    assert "total" in table
    rows = (tmp_path / "out.csv").read_text().splitlines()
    assert rows[0] == "# commitplan-bench/1"
    assert len(rows) == 4
