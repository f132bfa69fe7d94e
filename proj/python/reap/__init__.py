"""Anytime-feasible MPC: configuration checks, closed-loop simulation and a
primal-dual QP flow."""

from ._core import (
    ConfigError,
    NumericalError,
    RunConfig,
    SimulationError,
    check,
    load_config,
    parse_config,
    simulate,
    solve_dare,
    solve_qp,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "RunConfig",
    "SimulationError",
    "check",
    "load_config",
    "parse_config",
    "simulate",
    "solve_dare",
    "solve_qp",
]
