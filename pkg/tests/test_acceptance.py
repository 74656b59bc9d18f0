"""Acceptance criteria, one recorded PASS/FAIL line each.

Run ``pytest tests/test_acceptance.py -v`` and read the "acceptance
criteria" section of the terminal summary.  Seeds are fixed up front.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from spoofrate import kernels, oracle
from spoofrate.benchmarks import heuristic_cancel
from spoofrate.experiments import SweepSpec, run_sweep
from spoofrate.montecarlo import SimConfig, simulate
from spoofrate.scenario import Scenario, db_to_linear
from spoofrate.sic import compare_receivers, sic_feasibility, sic_min_power, solve_sic
from spoofrate.tin import (gamma_tilde, solve_tin, stationary_points, tin_feasibility,
                           tin_min_power)

BASE = Scenario(1.0, 1.0, 10.0, 2.0, 0.0)
SEED_ORACLE, SEED_FEAS, SEED_SHAPE, SEED_PRED = 101, 202, 303, 404
MC_SEEDS = {4.0: 11, 10.0: 12, 20.0: 13}


@pytest.fixture(scope="module")
def sweep():
    run_sweep(SweepSpec(BASE, 10.0, 10.0, 0.5))  # warm-up
    t0 = time.perf_counter()
    res = run_sweep(SweepSpec(BASE))
    return res, time.perf_counter() - t0


def test_sweep_runtime(sweep, record):
    _, dt = sweep
    assert record("reference sweep runtime < 1 s", dt < 1.0, f"{dt:.3f} s")


def test_sweep_a_benchmarks_need_more_than_10db(sweep, record):
    res, _ = sweep
    bad = [(p.q_db, s) for p in res.points for s in ("heuristic", "naive")
           if (p.rates[s] is None) != (p.q_db <= 10.0)]
    assert record("sweep (a) naive/heuristic feasible iff Q > 10 dB", not bad,
                  f"first feasible {res.first_feasible_db('heuristic')} / "
                  f"{res.first_feasible_db('naive')} dB, mismatches {bad}")


def test_sweep_b_sic_onset(sweep, record):
    res, _ = sweep
    exact = 10 * math.log10((math.sqrt(10.0) - math.sqrt(3.0)) ** 2)
    marker = res.markers["opt_sic"]
    first = res.first_feasible_db("opt_sic")
    # delta2 shifts the threshold by ~5e-6 dB
    ok = abs(marker - exact) < 1e-4 and first == 3.5 and 3.0 < marker < 3.5
    assert record("sweep (b) SIC first feasible at ~3.11 dB", ok,
                  f"threshold {marker:.6f} dB, first grid point {first} dB")


def test_sweep_c_tin_equals_sic_from_7db(sweep, record):
    res, _ = sweep
    diffs = [(p.q_db, abs(p.rates["opt_tin"] - p.rates["opt_sic"]))
             for p in res.points if p.q_db >= 7.0]
    bad = [(q, d) for q, d in diffs if not d < 1e-9]
    detail = (f"{len(bad)} grid point(s) differ; worst at {bad[0][0]} dB by {bad[0][1]:.3e}; "
              f"designs coincide from {res.markers['coincide']:.3f} dB"
              if bad else f"max diff {max(d for _, d in diffs):.2e}")
    assert record("sweep (c) TIN == SIC (< 1e-9) for all grid Q >= 7 dB", not bad, detail)


def test_sweep_d_ordering(sweep, record):
    res, _ = sweep
    bad = []
    for p in res.points:
        r = p.rates
        for opt in ("opt_tin", "opt_sic"):
            if r[opt] is not None and r["heuristic"] is not None and r[opt] < r["heuristic"] - 1e-12:
                bad.append((p.q_db, opt))
        if r["heuristic"] is not None and r["naive"] is not None \
                and r["heuristic"] < r["naive"] - 1e-12:
            bad.append((p.q_db, "naive"))
    assert record("sweep (d) optimal >= heuristic >= naive pointwise", not bad, f"violations {bad}")


def test_oracle_equivalence(record):
    grid = oracle.GridSpec()
    scenarios = oracle.random_scenarios(1000, SEED_ORACLE)
    oracle.grid_search_tin(scenarios[0], grid)
    t0 = time.perf_counter()
    worst_rate = worst_steps = 0.0
    bad = []
    n_feasible = 0
    for i, sc in enumerate(scenarios):
        for name, feas, solve, search in (("tin", tin_feasibility, solve_tin, oracle.grid_search_tin),
                                          ("sic", sic_feasibility, solve_sic, oracle.grid_search_sic)):
            found = search(sc, grid)
            if found.feasible != feas(sc).feasible:
                bad.append((i, name, "feasibility"))
                continue
            if not found.feasible:
                continue
            n_feasible += 1
            dev = abs(solve(sc)[1].r - found.rate)
            worst_rate = max(worst_rate, dev)
            steps = 0.0
            if found.grid_magnitude > 0:
                steps = oracle.phase_deviation(sc, found.grid_phase) / grid.phase_step
            worst_steps = max(worst_steps, steps)
            if dev > 1e-6 or steps > 1.0:
                bad.append((i, name, dev, steps))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60.0
    assert record("oracle equivalence (1000 scenarios, 1e-6, phase <= 1 step, < 60 s)", ok,
                  f"{n_feasible} feasible cases, max dev {worst_rate:.2e}, max phase "
                  f"{worst_steps:.3f} steps, {dt:.1f} s, failures {bad[:3]}")


def _probes(sc):
    out = [sc.Q]
    for mp, d in ((tin_min_power(sc), sc.delta1), (sic_min_power(sc), sc.delta2)):
        if math.isfinite(mp):
            out += [q for q in (mp - 10 * d, mp + 10 * d) if q >= 0.0]
    return out


def test_feasibility_closed_forms(record):
    bad = []
    n = 0
    for i, base in enumerate(oracle.random_scenarios(1000, SEED_FEAS)):
        for q in _probes(base):
            sc = base.with_q(q)
            for name, mode, feas in (("tin", kernels.TIN, tin_feasibility),
                                     ("sic", kernels.SIC, sic_feasibility)):
                n += 1
                if oracle.scan_feasibility(sc, mode).feasible != feas(sc).feasible:
                    bad.append((i, name, q))
    assert record("closed-form feasibility match exhaustive scans incl. +-10 delta probes", not bad,
                  f"{n} verdicts, {len(bad)} disagreements {bad[:3]}")


def _shape_violations(sc, n=20_001):
    a1, a2 = stationary_points(sc)
    t = np.linspace(0.0, 3.0 * a2, n)
    f = gamma_tilde(sc, t)
    df = np.diff(f)
    tol = 1e-10 * (1.0 + np.abs(f[1:]))
    lo, hi = t[:-1], t[1:]
    # cells that contain a stationary point may go either way
    rising = (hi <= a1) | (lo >= a2)
    falling = (lo >= a1) & (hi <= a2)
    return int(np.sum(rising & (df < -tol)) + np.sum(falling & (df > tol)))


def test_unimodality(record):
    bad_shape, bad_tail = [], []
    for i, sc in enumerate(oracle.random_scenarios(200, SEED_SHAPE)):
        if _shape_violations(sc):
            bad_shape.append(i)
        far = 1e4 * max(math.sqrt(sc.Q), sc.a / sc.b)
        if not abs(float(gamma_tilde(sc, far)) + 1.0) < 0.01:
            bad_tail.append(i)
    ok = not bad_shape and not bad_tail
    assert record("unimodality: rise/fall/rise around the stationary points, tail -> -1", ok,
                  f"shape failures {bad_shape[:5]}, tail failures {bad_tail[:5]}")


def test_monte_carlo(record):
    t0 = time.perf_counter()
    checks = []
    for q, seed in MC_SEEDS.items():
        sc = BASE.with_q(q)
        solvers = [solve_sic] if q < tin_min_power(sc) else [solve_tin, solve_sic]
        for solve in solvers:
            d, rep = solve(sc)
            emp = simulate(sc, d, SimConfig(1_000_000, seed))
            z_sinr = (emp.sinr - rep.gamma) / emp.sinr_se
            z_rate = (emp.rate - rep.r) / emp.rate_se
            checks.append((q, d.scheme.value, z_sinr, z_rate))
    sc = BASE.with_q(10.0)
    d, _ = solve_tin(sc)
    repro = simulate(sc, d, SimConfig(1_000_000, 99)) == simulate(sc, d, SimConfig(1_000_000, 99))
    dt = time.perf_counter() - t0
    worst = max(max(abs(c[2]), abs(c[3])) for c in checks)
    ok = worst < 3.0 and repro and dt < 30.0
    assert record("monte carlo within 3 SE at Q in {4, 10, 20}, reproducible, < 30 s", ok,
                  f"{len(checks)} designs, max |z| {worst:.2f}, reproducible {repro}, {dt:.1f} s")


def test_comparison_remarks(record):
    problems = []
    for sc in [BASE.with_q(1.0)] + oracle.random_scenarios(20, SEED_PRED + 1):
        rs = sc.capacity * np.arange(1, 51) / 50
        rs[-1] = sc.capacity  # keep rounding from stepping past C
        sic = [sic_min_power(replace(sc, R=float(r))) for r in rs]
        tin = {tin_min_power(replace(sc, R=float(r))) for r in rs}
        if not all(x > y for x, y in zip(sic, sic[1:])):
            problems.append("sic not strictly decreasing")
        if len(tin) != 1:
            problems.append("tin varies with R")
    disagree = []
    for i, sc in enumerate(oracle.random_scenarios(1000, SEED_PRED, delta1=1e-9, delta2=1e-9)):
        if not compare_receivers(sc).predicate_agrees:
            disagree.append(i)
    ok = not problems and not disagree
    assert record("comparison: SIC min power decreasing in R, TIN constant, predicate agrees",
                  ok, f"monotonicity issues {problems[:3]}, predicate disagreements "
                      f"{len(disagree)}/1000")


def test_heuristic_convergence(record):
    sc = BASE.with_q(db_to_linear(20.0))
    r_opt = solve_tin(sc)[1].r
    r_heur = heuristic_cancel(sc)[1].r
    gap = abs(r_opt - r_heur) / r_opt
    assert record("heuristic within 1% of optimal at Q = 20 dB", gap < 0.01,
                  f"relative gap {gap:.2e} ({r_opt:.6f} vs {r_heur:.6f})")
