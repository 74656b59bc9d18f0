"""Optimal spoofing against a successive-interference-cancelation receiver.

Spoofing succeeds when the source message stays undecodable even after
the target is decoded and removed, i.e. the residual source power keeps
its interference-free rate below Alice's rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scenario import (FeasibilityResult, InfeasibleError, RateReport, Scenario,
                       Scheme, SpoofingDesign, design_from_alpha_tilde, evaluate)
from .tin import stationary_points, tin_min_power


@dataclass(frozen=True)
class SicProfile:
    chi_lo: float | None
    chi_hi: float | None
    alpha_tilde_1: float


@dataclass(frozen=True)
class ReceiverComparison:
    min_power_tin: float
    min_power_sic: float
    sic_easier: bool
    threshold_predicate: bool
    predicate_agrees: bool

    def as_dict(self):
        return {
            "min_power_tin": self.min_power_tin,
            "min_power_sic": self.min_power_sic,
            "sic_easier": self.sic_easier,
            "threshold_predicate": self.threshold_predicate,
            "predicate_agrees": self.predicate_agrees,
        }


def _chi(sc: Scenario, delta2: float | None = None) -> tuple[float, float] | None:
    d2 = sc.delta2 if delta2 is None else delta2
    allowed = 2.0 ** (sc.R - d2) - 1.0
    if allowed < 0.0:
        # R < delta2: even perfect cancelation leaves log2(1+0) + delta2 > R
        return None
    root = math.sqrt(allowed)
    return (sc.a - root) / sc.b, (sc.a + root) / sc.b


def sic_min_power(sc: Scenario, delta2: float | None = None) -> float:
    chi = _chi(sc, delta2)
    return math.inf if chi is None else chi[0] ** 2


def sic_profile(sc: Scenario) -> SicProfile:
    chi = _chi(sc)
    lo, hi = chi if chi is not None else (None, None)
    return SicProfile(lo, hi, stationary_points(sc)[0])


def sic_feasibility(sc: Scenario) -> FeasibilityResult:
    chi = _chi(sc)
    if chi is None:
        return FeasibilityResult(False, math.inf)
    lo, hi = chi
    mp = lo * lo
    if sc.Q < mp:
        return FeasibilityResult(False, mp)
    return FeasibilityResult(True, mp, lo, min(hi, math.sqrt(sc.Q)))


def solve_sic(sc: Scenario) -> tuple[SpoofingDesign, RateReport]:
    """Rate-optimal combined spoofing design for a SIC receiver.

    Raises
    ------
    InfeasibleError
        If ``Q < chi_lo**2``; carries ``min_power``.
    """
    feas = sic_feasibility(sc)
    if not feas.feasible:
        raise InfeasibleError(
            f"SIC spoofing infeasible: Q={sc.Q} < min power {feas.min_power}",
            feas.min_power)
    a1, _ = stationary_points(sc)
    # a1 < min(|h|sqrt(P)/|g|, sqrt(Q)); the outer clamp only absorbs rounding
    at = min(max(feas.interval_lo, a1), math.sqrt(sc.Q))
    d = design_from_alpha_tilde(sc, at, Scheme.OPTIMAL_SIC)
    return d, evaluate(sc, d)


def threshold_predicate(sc: Scenario) -> bool:
    """Closed-form test for "SIC needs less power than TIN" with both slacks dropped."""
    return 2.0 ** sc.R - 1.0 > (1.0 - 1.0 / math.sqrt(2.0)) ** 2 * abs(sc.h) ** 2 * sc.P


def compare_receivers(sc: Scenario) -> ReceiverComparison:
    mt = tin_min_power(sc)
    ms = sic_min_power(sc)
    easier = ms < mt
    pred = threshold_predicate(sc)
    return ReceiverComparison(mt, ms, easier, pred, pred == easier)
