"""The two reference spoofing schemes used for comparison curves.

Both need the spoofer to out-power Alice's received signal outright,
``Q > |h|^2 P / |g|^2``; at equality they are reported as inapplicable.
"""

from __future__ import annotations

import math

from .scenario import (InapplicableError, RateReport, Scenario, Scheme,
                       SpoofingDesign, evaluate)


def cancel_power(sc: Scenario) -> float:
    """Power ``|h|^2 P / |g|^2`` needed to null Alice's signal at Bob."""
    return abs(sc.h) ** 2 * sc.P / sc.b ** 2


def _check(sc: Scenario, name: str) -> float:
    need = cancel_power(sc)
    if not sc.Q > need:
        raise InapplicableError(
            f"{name} needs Q > {need}, got Q={sc.Q}", need)
    return need


def heuristic_cancel(sc: Scenario) -> tuple[SpoofingDesign, RateReport]:
    """Null the source message completely, spend what is left on the target."""
    need = _check(sc, "heuristic cancelation")
    alpha = -sc.h * sc.g.conjugate() * math.sqrt(sc.P) / sc.b ** 2
    d = SpoofingDesign(alpha, complex(math.sqrt(sc.Q - need)), Scheme.HEURISTIC_CANCEL)
    return d, evaluate(sc, d)


def naive_spoof(sc: Scenario) -> tuple[SpoofingDesign, RateReport]:
    """Send only the target message at full power (TIN receivers only)."""
    _check(sc, "naive spoofing")
    d = SpoofingDesign(0j, complex(math.sqrt(sc.Q)), Scheme.NAIVE)
    return d, evaluate(sc, d)
