"""Gresilience game solver and collaborative-cell simulator."""

from ._gresilience import (
    DegenerateGameError,
    DomainError,
    Error,
    IntegrityError,
    InvariantError,
    ValidationError,
    co2e_g,
    decide,
    report_csv_columns,
    run_scenario,
    solve,
)

__all__ = [
    "DegenerateGameError",
    "DomainError",
    "Error",
    "IntegrityError",
    "InvariantError",
    "ValidationError",
    "co2e_g",
    "decide",
    "report_csv_columns",
    "run_scenario",
    "solve",
]
