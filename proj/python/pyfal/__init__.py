"""Constrained minimax solvers with certified KKT residuals."""

import json
from dataclasses import dataclass
from os import PathLike
from typing import Union

from ._pyfal import (
    ConfigError,
    Error,
    InvalidParameter,
    alm_iteration_count,
    list_instances,
    positive_part,
    project_nonneg_ball,
)
from . import _pyfal

__all__ = [
    "ConfigError",
    "Error",
    "InvalidParameter",
    "SolveResult",
    "alm_iteration_count",
    "bounds",
    "list_instances",
    "positive_part",
    "project_nonneg_ball",
    "solve",
]

Config = Union[dict, str, PathLike]


@dataclass
class SolveResult:
    exit_code: int
    report: dict
    trace_csv: str
    plot_csv: str

    @property
    def certified(self) -> bool:
        return bool(self.report.get("certified", False))


def _config_text(config: Config) -> str:
    if isinstance(config, dict):
        return json.dumps(config)
    with open(config, encoding="utf-8") as fh:
        return fh.read()


def solve(config: Config, include_timing: bool = True) -> SolveResult:
    """Run a config (a dict or a path to a JSON file) in memory."""
    code, report, trace, plot = _pyfal.solve_json(_config_text(config), include_timing)
    return SolveResult(code, json.loads(report), trace, plot)


def bounds(config: Config) -> dict:
    return json.loads(_pyfal.bounds_json(_config_text(config)))
