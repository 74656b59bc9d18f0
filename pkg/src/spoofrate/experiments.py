"""Rate-versus-budget sweeps over the spoofer's power ``Q``.

Every scheme is evaluated at each grid point; points where a scheme is
infeasible or inapplicable carry ``None`` (``NA`` in CSV output) rather
than a zero rate.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping, Sequence
from xml.sax.saxutils import escape

from .benchmarks import cancel_power, heuristic_cancel, naive_spoof
from .scenario import (InfeasibleError, Scenario, ScenarioError, db_to_linear,
                       linear_to_db, load_json, scenario_from_dict)
from .sic import _chi, sic_min_power, solve_sic
from .tin import _omega, solve_tin, stationary_points, tin_min_power

SCHEMES = ("opt_tin", "opt_sic", "heuristic", "naive")
CSV_HEADER = "q_db,q_linear," + ",".join(SCHEMES)

_SOLVERS = {
    "opt_tin": solve_tin,
    "opt_sic": solve_sic,
    "heuristic": heuristic_cancel,
    "naive": naive_spoof,
}

LABELS = {
    "opt_tin": "optimal combined (TIN)",
    "opt_sic": "optimal combined (SIC)",
    "heuristic": "heuristic perfect cancelation",
    "naive": "naive spoofing",
}


@dataclass(frozen=True)
class SweepSpec:
    base: Scenario
    q_db_start: float = 0.0
    q_db_stop: float = 20.0
    q_db_step: float = 0.5
    schemes: tuple[str, ...] = SCHEMES
    csv_path: str | None = None
    svg_path: str | None = None
    reference_onsets_db: Mapping[str, float] = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if not self.q_db_step > 0:
            raise ScenarioError("q_db_step must be positive", "q_db_step")
        if self.q_db_start > self.q_db_stop:
            raise ScenarioError("q_db_start must not exceed q_db_stop", "q_db_start")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ScenarioError(f"unknown scheme(s) {bad}; choose from {list(SCHEMES)}",
                                "schemes")

    def q_grid_db(self) -> list[float]:
        n = int(math.floor((self.q_db_stop - self.q_db_start) / self.q_db_step + 1e-9)) + 1
        return [round(self.q_db_start + i * self.q_db_step, 12) for i in range(n)]


@dataclass(frozen=True)
class SweepPoint:
    q_db: float
    q_linear: float
    rates: Mapping[str, float | None]


@dataclass
class SweepResult:
    points: list[SweepPoint]
    schemes: tuple[str, ...] = SCHEMES
    markers: dict[str, float | None] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def column(self, scheme: str) -> list[float | None]:
        return [p.rates.get(scheme) for p in self.points]

    def first_feasible_db(self, scheme: str) -> float | None:
        for p in self.points:
            if p.rates.get(scheme) is not None:
                return p.q_db
        return None

    def as_dict(self) -> dict[str, Any]:
        return {
            "schemes": list(self.schemes),
            "markers_db": dict(self.markers),
            "notes": list(self.notes),
            "points": [{"q_db": p.q_db, "q_linear": p.q_linear,
                        **{s: p.rates.get(s) for s in SCHEMES}} for p in self.points],
        }


def _rate_or_none(scheme: str, sc: Scenario) -> float | None:
    try:
        return _SOLVERS[scheme](sc)[1].r
    except InfeasibleError:
        return None


def _point(spec: SweepSpec, q_db: float) -> SweepPoint:
    q = db_to_linear(q_db)
    sc = spec.base.with_q(q)
    return SweepPoint(q_db, q, {s: _rate_or_none(s, sc) for s in spec.schemes})


def coincidence_onset(base: Scenario, q_max: float) -> float | None:
    """Smallest ``Q <= q_max`` from which the TIN and SIC optimal designs coincide.

    That happens once the unconstrained SINR maximizer clears both lower
    feasibility bounds; the gap is increasing in ``Q`` so bisection applies.
    """
    chi = _chi(base)
    if chi is None:
        return None

    def gap(q):
        sc = base.with_q(q)
        om = _omega(sc)
        if om is None:
            return -math.inf
        return stationary_points(sc)[0] - max(om[0], chi[0], 0.0)

    lo = max(tin_min_power(base), chi[0] ** 2)
    if lo > q_max or gap(q_max) < 0.0:
        return None
    if gap(lo) >= 0.0:
        return lo
    hi = q_max
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if gap(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
    return hi


def _db_or_none(x: float | None) -> float | None:
    if x is None or not math.isfinite(x) or x <= 0.0:
        return None
    return linear_to_db(x)


def run_sweep(spec: SweepSpec) -> SweepResult:
    grid = spec.q_grid_db()
    if spec.workers > 1:
        with ThreadPoolExecutor(max_workers=spec.workers) as ex:
            points = list(ex.map(lambda q: _point(spec, q), grid))
    else:
        points = [_point(spec, q) for q in grid]

    base = spec.base
    q_max = db_to_linear(spec.q_db_stop)
    markers = {
        "opt_tin": _db_or_none(tin_min_power(base)),
        "opt_sic": _db_or_none(sic_min_power(base)),
        "heuristic": _db_or_none(cancel_power(base)),
        "naive": _db_or_none(cancel_power(base)),
        "coincide": _db_or_none(coincidence_onset(base, q_max)),
    }
    result = SweepResult(points, tuple(spec.schemes), markers)
    for scheme, ref in spec.reference_onsets_db.items():
        got = markers.get(scheme)
        if got is None:
            result.notes.append(f"{scheme}: no feasibility threshold, reference {ref:g} dB")
        elif abs(got - ref) > spec.q_db_step:
            result.notes.append(
                f"{scheme}: minimum-power threshold {got:.2f} dB differs from reference "
                f"{ref:g} dB by more than the {spec.q_db_step:g} dB grid step")
    if spec.csv_path:
        emit_csv(result, spec.csv_path)
    if spec.svg_path:
        emit_plot(result, spec.svg_path)
    return result


def monotone_violations(result: SweepResult, tol: float = 1e-12) -> list[tuple[str, float]]:
    """Grid points where a scheme's rate drops as ``Q`` grows."""
    bad = []
    for s in result.schemes:
        prev = None
        for p in result.points:
            r = p.rates.get(s)
            if r is None:
                continue
            if prev is not None and r < prev - tol:
                bad.append((s, p.q_db))
            prev = r
    return bad


# -- I/O --------------------------------------------------------------------

def load_sweep_spec(path: str | Path, csv_path: str | None = None,
                    svg_path: str | None = None) -> SweepSpec:
    """Read a scenario document with a ``sweep`` stanza.

    The stanza holds ``q_db_start, q_db_stop, q_db_step, schemes`` and
    optionally ``reference_onsets_db`` (scheme -> dB) to compare against the
    computed feasibility thresholds.
    """
    doc = load_json(path)
    base = scenario_from_dict(doc, require_q=False)
    sw = doc.get("sweep", {})
    if not isinstance(sw, Mapping):
        raise ScenarioError("'sweep' must be an object", "sweep")
    kw: dict[str, Any] = {}
    for key in ("q_db_start", "q_db_stop", "q_db_step"):
        if key in sw:
            v = sw[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ScenarioError(f"key {key!r} must be a number", key)
            kw[key] = float(v)
    if "schemes" in sw:
        kw["schemes"] = tuple(sw["schemes"])
    refs = sw.get("reference_onsets_db", {})
    return SweepSpec(base, csv_path=csv_path, svg_path=svg_path,
                     reference_onsets_db=dict(refs), **kw)


def _fmt(v: float | None) -> str:
    return "NA" if v is None else format(v, ".6g")


def emit_csv(result: SweepResult, path: str | Path) -> None:
    lines = [CSV_HEADER]
    for p in result.points:
        cells = [_fmt(p.q_db), _fmt(p.q_linear)] + [_fmt(p.rates.get(s)) for s in SCHEMES]
        lines.append(",".join(cells))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


_COLORS = {"opt_tin": "#1f77b4", "opt_sic": "#d62728",
           "heuristic": "#2ca02c", "naive": "#9467bd"}
_MARKER_LABELS = {"opt_tin": "TIN min Q", "opt_sic": "SIC min Q",
                  "heuristic": "cancelation Q", "coincide": "TIN = SIC"}


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for m in (1.0, 2.0, 2.5, 5.0, 10.0):
        if m * mag >= raw:
            return m * mag
    return 10.0 * mag


def _ticks(lo: float, hi: float) -> list[float]:
    step = _nice_step(hi - lo)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    t = first
    while t <= hi + 1e-9 * step:
        out.append(round(t, 10))
        t += step
    return out


def _runs(xs: Sequence[float], ys: Sequence[float | None]) -> list[list[tuple[float, float]]]:
    runs, cur = [], []
    for x, y in zip(xs, ys):
        if y is None:
            if cur:
                runs.append(cur)
            cur = []
        else:
            cur.append((x, y))
    if cur:
        runs.append(cur)
    return runs


def emit_plot(result: SweepResult, path: str | Path) -> None:
    """Write the rate curves as a self-contained SVG.

    One ``<polyline>`` per contiguous feasible run of each scheme; vertical
    dashed lines mark the feasibility thresholds inside the plotted range.
    """
    if not result.points:
        raise ValueError("cannot plot an empty sweep")
    W, H = 720, 460
    ml, mr, mt, mb = 70, 230, 30, 60
    pw, ph = W - ml - mr, H - mt - mb
    xs = [p.q_db for p in result.points]
    x0, x1 = xs[0], xs[-1]
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    ymax = max([r for s in result.schemes for r in result.column(s) if r is not None],
               default=1.0)
    y1 = max(1.0, math.ceil(ymax * 1.05 * 2) / 2)

    def X(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return mt + ph - v / y1 * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{X(t):.2f}" y1="{mt + ph}" x2="{X(t):.2f}" y2="{mt + ph + 5}" '
                   'stroke="black"/>')
        out.append(f'<text x="{X(t):.2f}" y="{mt + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(0.0, y1):
        out.append(f'<line x1="{ml - 5}" y1="{Y(t):.2f}" x2="{ml}" y2="{Y(t):.2f}" '
                   'stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{Y(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{H - 15}" text-anchor="middle">'
               'spoofing power Q (dB)</text>')
    out.append(f'<text x="18" y="{mt + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 18 {mt + ph / 2})">spoofing rate (bps/Hz)</text>')

    for key, label in _MARKER_LABELS.items():
        v = result.markers.get(key)
        if v is None or not (x0 <= v <= x1):
            continue
        out.append(f'<line class="threshold" x1="{X(v):.2f}" y1="{mt}" x2="{X(v):.2f}" '
                   f'y2="{mt + ph}" stroke="gray" stroke-dasharray="5,4"/>')
        out.append(f'<text x="{X(v) + 3:.2f}" y="{mt + 12}" fill="gray" font-size="10">'
                   f'{escape(label)}</text>')

    for s in result.schemes:
        color = _COLORS[s]
        for run in _runs(xs, result.column(s)):
            pts = " ".join(f"{X(x):.2f},{Y(y):.2f}" for x, y in run)
            out.append(f'<polyline data-scheme="{s}" points="{pts}" fill="none" '
                       f'stroke="{color}" stroke-width="2"/>')
            if len(run) == 1:
                x, y = run[0]
                out.append(f'<circle cx="{X(x):.2f}" cy="{Y(y):.2f}" r="2.5" fill="{color}"/>')

    lx, ly = ml + pw + 15, mt + 10
    for i, s in enumerate(result.schemes):
        yy = ly + 20 * i
        out.append(f'<line x1="{lx}" y1="{yy}" x2="{lx + 25}" y2="{yy}" '
                   f'stroke="{_COLORS[s]}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{yy + 4}">{escape(LABELS[s])}</text>')
    out.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")
