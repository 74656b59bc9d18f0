"""Optimal physical-layer spoofing power allocation for TIN and SIC receivers."""

from .benchmarks import heuristic_cancel, naive_spoof
from .scenario import (FeasibilityResult, InapplicableError, InfeasibleError, RateReport,
                       Scenario, Scheme, SpoofingDesign, capacity, db_to_linear, evaluate,
                       linear_to_db, load_scenario)
from .sic import compare_receivers, sic_feasibility, solve_sic
from .tin import gamma_tilde, solve_tin, tin_feasibility, tin_profile

__version__ = "0.1.0"

__all__ = [
    "FeasibilityResult", "InapplicableError", "InfeasibleError", "RateReport", "Scenario",
    "Scheme", "SpoofingDesign", "capacity", "compare_receivers", "db_to_linear", "evaluate",
    "gamma_tilde", "heuristic_cancel", "linear_to_db", "load_scenario", "naive_spoof",
    "sic_feasibility", "solve_sic", "solve_tin", "tin_feasibility", "tin_profile",
]
