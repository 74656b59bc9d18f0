"""Channel model, shared value types and the basic rate formulas.

All powers are linear and normalized to Bob's receiver noise, whose
variance is fixed at 1.  Decibels only appear at I/O boundaries
(:func:`db_to_linear`, :func:`linear_to_db`, :func:`load_scenario`).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Mapping

DEFAULT_DELTA1 = 1e-6
DEFAULT_DELTA2 = 1e-6

# relative slack when checking |alpha|^2 + |beta|^2 <= Q
POWER_TOL = 1e-9
# relative slack on the success inequalities; closed-form designs sit exactly on them
SUCCESS_TOL = 1e-12


class ScenarioError(ValueError):
    """Invalid scenario parameters or scenario document."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key


class DesignError(ValueError):
    """A spoofing design violates the spoofer's power budget."""


class InfeasibleError(Exception):
    """No design achieves successful spoofing for this scenario."""

    def __init__(self, message: str, min_power: float):
        super().__init__(message)
        self.min_power = min_power


class InapplicableError(InfeasibleError):
    """A benchmark scheme's operating condition does not hold."""


class Scheme(str, enum.Enum):
    OPTIMAL_TIN = "OptimalTIN"
    OPTIMAL_SIC = "OptimalSIC"
    HEURISTIC_CANCEL = "HeuristicCancel"
    NAIVE = "Naive"
    MANUAL = "Manual"


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if not x > 0:
        raise ValueError(f"linear_to_db needs a positive value, got {x!r}")
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class Scenario:
    """A single spoofing-channel instance.

    Parameters
    ----------
    h, g : complex
        Alice->Bob and spoofer->Bob channel coefficients.
    P : float
        Alice's transmit power (linear).
    R : float
        Alice's communication rate in bps/Hz, ``0 < R <= log2(1 + |h|^2 P)``.
    Q : float
        Spoofer's total power budget (linear).
    delta1, delta2 : float
        Slacks turning the strict TIN and SIC success inequalities into
        non-strict ones.
    """

    h: complex
    g: complex
    P: float
    R: float
    Q: float
    delta1: float = DEFAULT_DELTA1
    delta2: float = DEFAULT_DELTA2

    def __post_init__(self):
        object.__setattr__(self, "h", complex(self.h))
        object.__setattr__(self, "g", complex(self.g))
        for name in ("P", "R", "Q", "delta1", "delta2"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ScenarioError(f"{name} must be finite, got {v!r}", name)
            object.__setattr__(self, name, v)
        if abs(self.h) == 0:
            raise ScenarioError("|h| must be positive", "h")
        if abs(self.g) == 0:
            raise ScenarioError("|g| must be positive", "g")
        if self.P <= 0:
            raise ScenarioError("P must be positive", "P")
        if self.Q < 0:
            raise ScenarioError("Q must be non-negative", "Q")
        if self.delta1 <= 0:
            raise ScenarioError("delta1 must be positive", "delta1")
        if self.delta2 <= 0:
            raise ScenarioError("delta2 must be positive", "delta2")
        if self.R <= 0:
            raise ScenarioError("R must be positive", "R")
        if self.R > self.capacity:
            raise ScenarioError(
                f"R={self.R} exceeds the link capacity C={self.capacity}", "R")

    @property
    def capacity(self) -> float:
        return math.log2(1.0 + abs(self.h) ** 2 * self.P)

    @property
    def a(self) -> float:
        """Received source amplitude ``|h| sqrt(P)``."""
        return abs(self.h) * math.sqrt(self.P)

    @property
    def b(self) -> float:
        """Spoofing link gain ``|g|``."""
        return abs(self.g)

    @property
    def cancel_phase(self) -> complex:
        """Unit phasor ``-h g* / (|h||g|)`` for destructive combining at Bob."""
        return -self.h * self.g.conjugate() / (abs(self.h) * abs(self.g))

    def with_q(self, Q: float) -> "Scenario":
        return replace(self, Q=Q)


@dataclass(frozen=True)
class SpoofingDesign:
    alpha: complex
    beta: complex
    scheme: Scheme = Scheme.MANUAL

    @property
    def power(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2

    @property
    def alpha_tilde(self) -> float:
        return abs(self.alpha)


@dataclass(frozen=True)
class RateReport:
    gamma: float
    r: float
    r_s_I: float
    r_x_I: float
    r_s_II: float
    r_x_II: float
    tin_success: bool
    sic_success: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "gamma": self.gamma, "r": self.r,
            "r_s_I": self.r_s_I, "r_x_I": self.r_x_I,
            "r_s_II": self.r_s_II, "r_x_II": self.r_x_II,
            "tin_success": self.tin_success, "sic_success": self.sic_success,
        }


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    min_power: float
    interval_lo: float | None = None
    interval_hi: float | None = None


def capacity(sc: Scenario) -> float:
    """Capacity ``log2(1 + |h|^2 P)`` of the Alice->Bob link, bps/Hz."""
    return sc.capacity


def _log2_1p(x: float) -> float:
    return math.log1p(x) / math.log(2.0)


def design_from_alpha_tilde(sc: Scenario, alpha_tilde: float,
                            scheme: Scheme = Scheme.MANUAL) -> SpoofingDesign:
    """Destructive-phase design with magnitude ``alpha_tilde`` and full power on ``beta``."""
    beta2 = max(sc.Q - alpha_tilde * alpha_tilde, 0.0)
    return SpoofingDesign(sc.cancel_phase * alpha_tilde, complex(math.sqrt(beta2)), scheme)


def evaluate(sc: Scenario, d: SpoofingDesign) -> RateReport:
    """All achievable-rate quantities of design ``d`` at Bob.

    Raises
    ------
    DesignError
        If ``|alpha|^2 + |beta|^2`` exceeds ``Q`` by more than the relative
        tolerance :data:`POWER_TOL`.
    """
    if d.power > sc.Q + POWER_TOL * max(sc.Q, 1e-3):
        raise DesignError(
            f"design power {d.power} exceeds the spoofing budget Q={sc.Q}")
    source = abs(sc.h * math.sqrt(sc.P) + sc.g * d.alpha) ** 2
    target = abs(sc.g * d.beta) ** 2
    gamma = target / (source + 1.0)
    r = _log2_1p(gamma)
    r_s_I = _log2_1p(source / (target + 1.0))
    r_x_I = _log2_1p(target)
    r_s_II = _log2_1p(source)
    tin_margin = target - source - sc.delta1
    tin_ok = tin_margin >= -SUCCESS_TOL * (target + source + sc.delta1)
    sic_ok = r_s_II + sc.delta2 <= sc.R + SUCCESS_TOL * max(1.0, sc.R)
    return RateReport(gamma, r, r_s_I, r_x_I, r_s_II, r, bool(tin_ok), bool(sic_ok))


# -- JSON documents ---------------------------------------------------------

def _pick_power(doc: Mapping[str, Any], stem: str, required: bool) -> float | None:
    db_key, lin_key = f"{stem}_db", f"{stem}_linear"
    has_db, has_lin = db_key in doc, lin_key in doc
    if has_db and has_lin:
        raise ScenarioError(f"give only one of {db_key!r} and {lin_key!r}", db_key)
    if not (has_db or has_lin):
        if required:
            raise ScenarioError(f"missing key {db_key!r} (or {lin_key!r})", db_key)
        return None
    key = db_key if has_db else lin_key
    v = _number(doc, key)
    return db_to_linear(v) if has_db else v


def _number(doc: Mapping[str, Any], key: str, default: float | None = None) -> float:
    if key not in doc:
        if default is None:
            raise ScenarioError(f"missing key {key!r}", key)
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"key {key!r} must be a number, got {v!r}", key)
    return float(v)


def scenario_from_dict(doc: Mapping[str, Any], require_q: bool = True,
                       default_q: float = 0.0) -> Scenario:
    """Build a :class:`Scenario` from the JSON document layout.

    Keys: ``h_re, h_im, g_re, g_im, P_db|P_linear, R, Q_db|Q_linear,
    delta1, delta2``.  Imaginary parts and deltas are optional.
    """
    if not isinstance(doc, Mapping):
        raise ScenarioError("scenario document must be a JSON object")
    h = complex(_number(doc, "h_re"), _number(doc, "h_im", 0.0))
    g = complex(_number(doc, "g_re"), _number(doc, "g_im", 0.0))
    P = _pick_power(doc, "P", required=True)
    Q = _pick_power(doc, "Q", required=require_q)
    R = _number(doc, "R")
    return Scenario(
        h=h, g=g, P=P, R=R, Q=default_q if Q is None else Q,
        delta1=_number(doc, "delta1", DEFAULT_DELTA1),
        delta2=_number(doc, "delta2", DEFAULT_DELTA2),
    )


def scenario_to_dict(sc: Scenario) -> dict[str, float]:
    return {
        "h_re": sc.h.real, "h_im": sc.h.imag,
        "g_re": sc.g.real, "g_im": sc.g.imag,
        "P_linear": sc.P, "R": sc.R, "Q_linear": sc.Q,
        "delta1": sc.delta1, "delta2": sc.delta2,
    }


def load_json(path: str | Path) -> dict[str, Any]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path} is not valid JSON: {exc}") from exc


def load_scenario(path: str | Path, require_q: bool = True) -> Scenario:
    return scenario_from_dict(load_json(path), require_q=require_q)
