"""Commit compilation of STRIPS planning tasks."""

from ._core import (
    CompiledTask,
    Error,
    InputError,
    LimitExceededError,
    Task,
    agl_score,
    backward_map,
    compile,
    forecast_size,
    forward_map,
    generate,
    permanent_achievers,
    run_benchmark,
    sat_score,
    solve,
    validate_plan,
)

__all__ = [
    "CompiledTask",
    "Error",
    "InputError",
    "LimitExceededError",
    "Task",
    "agl_score",
    "backward_map",
    "compile",
    "forecast_size",
    "forward_map",
    "generate",
    "load_task",
    "permanent_achievers",
    "run_benchmark",
    "sat_score",
    "solve",
    "validate_plan",
]


def load_task(path, problem=None):
    """Reads a JSON task, or a PDDL domain and problem when `problem` is given."""
    with open(path, encoding="utf-8") as f:
        first = f.read()
    if problem is None:
        return Task.from_json(first)
    with open(problem, encoding="utf-8") as f:
        return Task.from_pddl(first, f.read())
