"""Optimal spoofing against a receiver that treats interference as noise.

With the cancelation component phase-aligned against Alice's signal and
the full budget spent, the problem reduces to maximizing the SINR profile
:func:`gamma_tilde` over the cancelation magnitude ``alpha_tilde`` inside
the interval where the target is received strictly stronger than the
source.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .scenario import (FeasibilityResult, InfeasibleError, RateReport, Scenario,
                       Scheme, SpoofingDesign, design_from_alpha_tilde, evaluate)


@dataclass(frozen=True)
class TinProfile:
    alpha_tilde_1: float
    alpha_tilde_2: float
    omega_lo: float | None
    omega_hi: float | None


def gamma_tilde(sc: Scenario, alpha_tilde):
    """SINR of the target message when the cancelation magnitude is ``alpha_tilde``.

    Works elementwise on numpy arrays.  Defined for every ``alpha_tilde >= 0``
    and negative beyond ``sqrt(Q)``.
    """
    a, b = sc.a, sc.b
    return b * b * (sc.Q - alpha_tilde * alpha_tilde) / ((a - b * alpha_tilde) ** 2 + 1.0)


def tin_min_power(sc: Scenario) -> float:
    return (abs(sc.h) ** 2 * sc.P + 2.0 * sc.delta1) / (2.0 * sc.b ** 2)


def _omega(sc: Scenario) -> tuple[float, float] | None:
    disc = 2.0 * sc.b ** 2 * sc.Q - abs(sc.h) ** 2 * sc.P - 2.0 * sc.delta1
    if disc < 0.0:
        if sc.Q < tin_min_power(sc):
            return None
        disc = 0.0  # Q sits on the minimum power up to rounding
    root = math.sqrt(disc)
    return (sc.a - root) / (2.0 * sc.b), (sc.a + root) / (2.0 * sc.b)


def tin_feasibility(sc: Scenario) -> FeasibilityResult:
    """Feasibility of successful TIN spoofing and the feasible ``alpha_tilde`` range.

    The interval is ``[max(0, omega_lo), min(omega_hi, sqrt(Q))]``.
    """
    mp = tin_min_power(sc)
    om = _omega(sc)
    if om is None:
        return FeasibilityResult(False, mp)
    lo, hi = om
    return FeasibilityResult(True, mp, max(0.0, lo), min(hi, math.sqrt(sc.Q)))


def stationary_points(sc: Scenario) -> tuple[float, float]:
    """Local maximum and local minimum of :func:`gamma_tilde`, ascending."""
    a, b, Q = sc.a, sc.b, sc.Q
    ab = a * b
    A = a * a + b * b * Q + 1.0
    root = math.sqrt(A * A - 4.0 * ab * ab * Q)
    upper = (A + root) / (2.0 * ab)
    # product of the two roots is Q; avoids cancelation in A - root
    lower = 2.0 * ab * Q / (A + root)
    return lower, upper


def tin_profile(sc: Scenario) -> TinProfile:
    a1, a2 = stationary_points(sc)
    om = _omega(sc)
    lo, hi = om if om is not None else (None, None)
    return TinProfile(a1, a2, lo, hi)


def solve_tin(sc: Scenario) -> tuple[SpoofingDesign, RateReport]:
    """Rate-optimal combined spoofing design for a TIN receiver.

    Raises
    ------
    InfeasibleError
        If ``Q`` is below the minimum spoofing power; carries ``min_power``.
    """
    feas = tin_feasibility(sc)
    if not feas.feasible:
        raise InfeasibleError(
            f"TIN spoofing infeasible: Q={sc.Q} < min power {feas.min_power}",
            feas.min_power)
    a1, _ = stationary_points(sc)
    # a1 < min(|h|sqrt(P)/|g|, sqrt(Q)); the outer clamp only absorbs rounding
    at = min(max(feas.interval_lo, a1), math.sqrt(sc.Q))
    d = design_from_alpha_tilde(sc, at, Scheme.OPTIMAL_TIN)
    return d, evaluate(sc, d)
