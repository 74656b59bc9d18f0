"""Brute-force ground truth for the closed-form solvers.

Nothing here uses the closed-form interval endpoints or stationary
points.  Searches run on a polar grid over the complex cancelation
coefficient, then refine along the best ray:

1. coarse polar grid ``|alpha| in [0, sqrt(Q)]`` x ``arg(alpha) in [0, 2pi)``;
2. golden-section on the phase at fixed magnitude;
3. fine grid over the magnitude along the refined ray;
4. bisection onto the feasibility edges of the bracketing cell, then
   golden-section on the SINR inside it.

Ties on a grid resolve to the smallest magnitude, then the smallest phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .scenario import Scenario, Scheme, SpoofingDesign
from .tin import gamma_tilde, stationary_points

TWO_PI = 2.0 * math.pi
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class GridSpec:
    """Grid sizes for the brute-force searches.

    ``resolution`` and ``phase_resolution`` set the coarse polar grid,
    ``fine_resolution`` the magnitude grid along the refined ray (the
    default gives a step of ``1e-5 * sqrt(Q)``).  Each refine pass is one
    phase plus one magnitude golden-section.
    """

    resolution: int = 401
    phase_resolution: int = 360
    fine_resolution: int = 100_001
    refine_passes: int = 2
    nonsat_fractions: tuple[float, ...] = (0.25, 0.5, 0.75)
    nonsat_resolution: int = 101
    nonsat_phase_resolution: int = 90

    def __post_init__(self):
        if self.resolution < 100:
            raise ValueError("resolution must be at least 100")
        if self.fine_resolution < 100:
            raise ValueError("fine_resolution must be at least 100")
        if self.phase_resolution < 8:
            raise ValueError("phase_resolution must be at least 8")
        if self.refine_passes < 0:
            raise ValueError("refine_passes must be non-negative")

    @property
    def phase_step(self) -> float:
        return TWO_PI / self.phase_resolution


SCAN_GRID = GridSpec(resolution=101, phase_resolution=90, fine_resolution=10_001,
                     refine_passes=1, nonsat_fractions=())


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    rate: float
    design: SpoofingDesign | None = None
    alpha_tilde: float = math.nan
    phase: float = math.nan
    grid_phase: float = math.nan
    grid_magnitude: float = math.nan
    grid_rate: float = math.nan
    slack: float = math.nan
    nonsat_rate: float = math.nan
    margin: float = math.nan


@dataclass(frozen=True)
class ScanResult:
    feasible: bool
    margin: float
    alpha_tilde: float


# -- scalar helpers ---------------------------------------------------------

def golden_max(f, lo: float, hi: float, max_iter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; endpoints are candidates too."""
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    a, b = lo, hi
    for _ in range(max_iter):
        if b - a <= 4.0 * np.finfo(float).eps * max(1.0, abs(a), abs(b)):
            break
        if f1 >= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INV_PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INV_PHI * (b - a)
            f2 = f(x2)
    best_x, best_f = (x1, f1) if f1 >= f2 else (x2, f2)
    for x in (lo, hi):
        fx = f(x)
        if fx > best_f:
            best_x, best_f = x, fx
    return best_x, best_f


def bisect_edge(ok, bad: float, good: float, iters: int = 200) -> float:
    """Point on the ``good`` side of the boundary of ``ok`` between two points."""
    for _ in range(iters):
        mid = 0.5 * (bad + good)
        if mid == bad or mid == good:
            break
        if ok(mid):
            good = mid
        else:
            bad = mid
    return good


class _Problem:
    """Constraint margin and SINR as functions of the complex coefficient."""

    def __init__(self, sc: Scenario, mode: int, budget: float | None = None):
        self.sc = sc
        self.mode = mode
        self.hsp = sc.h * math.sqrt(sc.P)
        self.g = sc.g
        self.g2 = abs(sc.g) ** 2
        self.budget = sc.Q if budget is None else budget
        self.thresh = sc.delta1 if mode == kernels.TIN else sc.R - sc.delta2

    def source(self, m: float, ph: float) -> float:
        return abs(self.hsp + self.g * cmath.rect(m, ph)) ** 2

    def target(self, m: float) -> float:
        return self.g2 * max(self.budget - m * m, 0.0)

    def margin(self, m: float, ph: float) -> float:
        src = self.source(m, ph)
        if self.mode == kernels.TIN:
            return self.target(m) - src - self.thresh
        return self.thresh - math.log1p(src) / math.log(2.0)

    def gamma(self, m: float, ph: float) -> float:
        return self.target(m) / (self.source(m, ph) + 1.0)

    def kernel_args(self):
        sc = self.sc
        return (sc.h.real, sc.h.imag, sc.g.real, sc.g.imag, math.sqrt(sc.P),
                self.budget, self.mode, self.thresh)

    def refine_phase(self, m: float, ph0: float, half_width: float) -> float:
        if m <= 0.0:
            return ph0
        ph, _ = golden_max(lambda p: -self.source(m, p), ph0 - half_width, ph0 + half_width)
        return ph % TWO_PI


def _rate(gamma: float) -> float:
    return math.log1p(gamma) / math.log(2.0)


def phase_deviation(sc: Scenario, phase: float) -> float:
    """Circular distance between ``phase`` and the destructive phase ``arg(-h g*)``."""
    target = cmath.phase(-sc.h * sc.g.conjugate())
    d = (phase - target) % TWO_PI
    return min(d, TWO_PI - d)


# -- searches ---------------------------------------------------------------

def _polar(pb: _Problem, n_mag: int, n_phase: int):
    mags = np.linspace(0.0, math.sqrt(pb.budget), n_mag)
    phases = TWO_PI * np.arange(n_phase) / n_phase
    out = kernels.polar_search(*pb.kernel_args(), mags, phases)
    return mags, phases, out


def _least_phase(pb: _Problem, mags, phases, li: int, lj: int) -> float:
    """Phase of the least-violating grid point, ignoring the phase-free origin."""
    if li > 0 or mags.size < 2:
        return phases[lj]
    # at m = 0 every phase ties; a narrow feasible band may sit between the first two rows
    out = kernels.polar_search(*pb.kernel_args(), mags[1:2], phases)
    return phases[out[4]]


def _refine_magnitude(pb: _Problem, m: float, ph: float, step: float) -> tuple[float, float]:
    top = math.sqrt(pb.budget)
    lo, hi = max(0.0, m - step), min(top, m + step)
    ok = lambda t: pb.margin(t, ph) >= 0.0  # noqa: E731
    if not ok(lo):
        lo = bisect_edge(ok, lo, m)
    if not ok(hi):
        hi = bisect_edge(ok, hi, m)
    best_m, best_g = golden_max(lambda t: pb.gamma(t, ph) if ok(t) else -math.inf, lo, hi)
    return best_m, best_g


def _search(sc: Scenario, grid: GridSpec, mode: int) -> OracleResult:
    pb = _Problem(sc, mode)
    top = math.sqrt(sc.Q)
    mags, phases, (bi, bj, bg, li, lj, lm) = _polar(pb, grid.resolution, grid.phase_resolution)
    nonsat = _nonsaturating(sc, grid, mode)
    if top == 0.0:
        if bi < 0:
            return OracleResult(False, math.nan, margin=lm, nonsat_rate=nonsat)
        return OracleResult(True, _rate(bg), SpoofingDesign(0j, 0j, Scheme.MANUAL),
                            0.0, 0.0, 0.0, 0.0, _rate(bg), 0.0, nonsat, lm)

    if bi >= 0:
        m0, ph0 = mags[bi], phases[bj]
        grid_phase, grid_mag, grid_rate = ph0, m0, _rate(bg)
    else:
        m0, ph0 = mags[li], _least_phase(pb, mags, phases, li, lj)
        grid_phase = grid_mag = grid_rate = math.nan
    ph = pb.refine_phase(m0 if m0 > 0.0 else top, ph0, grid.phase_step)

    fine = np.linspace(0.0, top, grid.fine_resolution)
    step = fine[1] - fine[0]
    u = cmath.rect(1.0, ph)
    fb, fg, fl, flm = kernels.ray_search(*pb.kernel_args(), u.real, u.imag, fine)
    if fb >= 0:
        m = float(fine[fb])
        g_best = fg
        neighbours = [pb.gamma(t, ph) for t in fine[max(fb - 1, 0):fb + 2]
                      if pb.margin(t, ph) >= 0.0]
        slack = max(abs(_rate(x) - _rate(g_best)) for x in neighbours)
    else:
        lo, hi = fine[max(fl - 1, 0)], fine[min(fl + 1, fine.size - 1)]
        m, margin = golden_max(lambda t: pb.margin(t, ph), lo, hi)
        if margin < 0.0:
            return OracleResult(False, math.nan, margin=margin, grid_phase=grid_phase,
                                nonsat_rate=nonsat)
        g_best = pb.gamma(m, ph)
        slack = math.nan

    for _ in range(grid.refine_passes):
        m, g_new = _refine_magnitude(pb, m, ph, step)
        if g_new >= g_best:
            g_best = g_new
        new_ph = pb.refine_phase(m, ph, grid.phase_step)
        if pb.margin(m, new_ph) >= 0.0 and pb.gamma(m, new_ph) >= g_best:
            ph, g_best = new_ph, pb.gamma(m, new_ph)

    beta = math.sqrt(max(sc.Q - m * m, 0.0))
    design = SpoofingDesign(cmath.rect(m, ph), complex(beta), Scheme.MANUAL)
    return OracleResult(True, _rate(g_best), design, m, ph, grid_phase, grid_mag,
                        grid_rate, slack, nonsat, pb.margin(m, ph))


def _nonsaturating(sc: Scenario, grid: GridSpec, mode: int) -> float:
    best = -math.inf
    for frac in grid.nonsat_fractions:
        pb = _Problem(sc, mode, budget=frac * sc.Q)
        _, _, (bi, _, bg, _, _, _) = _polar(pb, grid.nonsat_resolution,
                                            grid.nonsat_phase_resolution)
        if bi >= 0:
            best = max(best, _rate(bg))
    return best if best > -math.inf else math.nan


def grid_search_tin(sc: Scenario, grid: GridSpec = GridSpec()) -> OracleResult:
    """Best TIN-successful design by exhaustive search; ``feasible=False`` if none found."""
    return _search(sc, grid, kernels.TIN)


def grid_search_sic(sc: Scenario, grid: GridSpec = GridSpec()) -> OracleResult:
    """Best SIC-successful design by exhaustive search; ``feasible=False`` if none found."""
    return _search(sc, grid, kernels.SIC)


def line_search(sc: Scenario, mode: int, n: int = 100_001, refine: bool = True):
    """1-D search of ``gamma_tilde`` along the destructive ray only.

    Returns ``(alpha_tilde, rate)`` or ``(nan, nan)`` when no grid point
    is feasible.
    """
    pb = _Problem(sc, mode)
    ph = cmath.phase(sc.cancel_phase)
    fine = np.linspace(0.0, math.sqrt(sc.Q), n)
    u = sc.cancel_phase
    fb, fg, _, _ = kernels.ray_search(*pb.kernel_args(), u.real, u.imag, fine)
    if fb < 0:
        return math.nan, math.nan
    m, g_best = float(fine[fb]), fg
    if refine and n > 1:
        m2, g2 = _refine_magnitude(pb, m, ph, fine[1] - fine[0])
        if g2 >= g_best:
            m, g_best = m2, g2
    return m, _rate(g_best)


def scan_feasibility(sc: Scenario, mode: int, grid: GridSpec = SCAN_GRID) -> ScanResult:
    """Look for any successful design by maximizing the constraint margin."""
    pb = _Problem(sc, mode)
    top = math.sqrt(sc.Q)
    mags, phases, (bi, bj, _, li, lj, lm) = _polar(pb, grid.resolution, grid.phase_resolution)
    if bi >= 0:
        return ScanResult(True, float(pb.margin(mags[bi], phases[bj])), float(mags[bi]))
    if top == 0.0:
        return ScanResult(False, float(lm), 0.0)
    ph = pb.refine_phase(top, _least_phase(pb, mags, phases, li, lj), grid.phase_step)
    fine = np.linspace(0.0, top, grid.fine_resolution)
    u = cmath.rect(1.0, ph)
    _, _, fl, _ = kernels.ray_search(*pb.kernel_args(), u.real, u.imag, fine)
    lo, hi = fine[max(fl - 1, 0)], fine[min(fl + 1, fine.size - 1)]
    m, margin = golden_max(lambda t: pb.margin(t, ph), lo, hi)
    return ScanResult(bool(margin >= 0.0), float(margin), float(m))


def derivative_scan(sc: Scenario, n_points: int = 10_000) -> tuple[float, float]:
    """Estimate the local maximum and minimum of ``gamma_tilde`` from finite differences.

    Scans ``[0, 3 * alpha_tilde_2]`` for sign changes of the central
    difference and interpolates the zero crossing linearly.  The maximum
    is reported as 0 when the slope starts out non-positive.
    """
    if n_points < 1000:
        raise ValueError("n_points must be at least 1000")
    upper = 3.0 * stationary_points(sc)[1]
    t = np.linspace(0.0, upper, n_points)
    hstep = t[1] - t[0]
    slope = (gamma_tilde(sc, t + hstep / 2) - gamma_tilde(sc, t - hstep / 2)) / hstep
    slope[0] = (gamma_tilde(sc, hstep / 2) - gamma_tilde(sc, 0.0)) / (hstep / 2)
    sign = np.sign(slope)
    down = np.nonzero((sign[:-1] > 0) & (sign[1:] <= 0))[0]
    up = np.nonzero((sign[:-1] < 0) & (sign[1:] >= 0))[0]

    def crossing(i):
        s0, s1 = slope[i], slope[i + 1]
        return float(t[i] + hstep * s0 / (s0 - s1)) if s0 != s1 else float(t[i])

    a1 = crossing(down[0]) if down.size else 0.0
    a2 = crossing(up[0]) if up.size else math.nan
    return a1, a2


# -- random scenarios -------------------------------------------------------

def random_scenarios(n: int, seed: int, delta1: float = 1e-6, delta2: float = 1e-6,
                     q_max: float = 100.0) -> list[Scenario]:
    """Draw ``n`` scenarios for equivalence testing.

    ``|h|, |g|`` log-uniform on [0.1, 10] with uniform phases, ``P`` uniform
    on [0.1, 100], ``R`` uniform on (0, C], ``Q`` uniform on [0, q_max].
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        mh, mg = 10.0 ** rng.uniform(-1.0, 1.0, size=2)
        ph_h, ph_g = rng.uniform(0.0, TWO_PI, size=2)
        P = rng.uniform(0.1, 100.0)
        C = math.log2(1.0 + mh * mh * P)
        R = C * (1.0 - rng.random())
        Q = rng.uniform(0.0, q_max)
        out.append(Scenario(cmath.rect(mh, ph_h), cmath.rect(mg, ph_g), P, min(R, C), Q,
                            delta1, delta2))
    return out
