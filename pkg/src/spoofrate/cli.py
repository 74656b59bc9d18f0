"""Command-line interface: ``spoofrate {solve,sweep,verify,simulate,compare}``.

Power flags are in dB unless ``--linear`` is given.  Exit codes: 0 ok,
1 input error, 2 infeasible, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from . import benchmarks, montecarlo, oracle, sic, tin
from .experiments import SCHEMES, load_sweep_spec, run_sweep
from .scenario import (InfeasibleError, Scenario, ScenarioError, SpoofingDesign,
                       DesignError, db_to_linear, evaluate, linear_to_db, load_scenario,
                       scenario_to_dict)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY = 3


def _db(x: float) -> float | None:
    return linear_to_db(x) if x > 0 and math.isfinite(x) else None


def _dump(doc) -> str:
    return json.dumps(doc, indent=2)


def _power_flags(p: argparse.ArgumentParser):
    p.add_argument("--q", type=float, help="override the spoofing budget Q (dB)")
    p.add_argument("--p", type=float, help="override Alice's power P (dB)")
    p.add_argument("--linear", action="store_true",
                   help="interpret --q/--p as linear powers instead of dB")


def _scenario(args) -> Scenario:
    sc = load_scenario(args.scenario)
    conv = (lambda v: v) if args.linear else db_to_linear
    if args.q is not None:
        sc = replace(sc, Q=conv(args.q))
    if args.p is not None:
        sc = replace(sc, P=conv(args.p))
    return sc


def _feasibility(sc: Scenario, receiver: str):
    return tin.tin_feasibility(sc) if receiver == "tin" else sic.sic_feasibility(sc)


def _design(sc: Scenario, receiver: str, scheme: str):
    if scheme == "optimal":
        return tin.solve_tin(sc) if receiver == "tin" else sic.solve_sic(sc)
    if scheme == "heuristic":
        return benchmarks.heuristic_cancel(sc)
    if scheme == "naive":
        if receiver != "tin":
            raise ScenarioError("naive spoofing applies to TIN receivers only", "receiver")
        return benchmarks.naive_spoof(sc)
    raise ScenarioError(f"unknown scheme {scheme!r}", "scheme")


def _design_dict(d: SpoofingDesign) -> dict:
    return {
        "scheme": d.scheme.value,
        "alpha_re": d.alpha.real, "alpha_im": d.alpha.imag,
        "beta_re": d.beta.real, "beta_im": d.beta.imag,
        "alpha_tilde": d.alpha_tilde, "power": d.power,
    }


# -- commands ---------------------------------------------------------------

def cmd_solve(args) -> int:
    sc = _scenario(args)
    feas = _feasibility(sc, args.receiver)
    feas_doc = {
        "feasible": feas.feasible, "min_power": feas.min_power,
        "min_power_db": _db(feas.min_power),
        "interval_lo": feas.interval_lo, "interval_hi": feas.interval_hi,
    }
    try:
        d, rep = _design(sc, args.receiver, args.scheme)
    except InfeasibleError as exc:
        mdb = _db(exc.min_power)
        if args.json:
            print(_dump({"receiver": args.receiver, "scheme": args.scheme,
                         "scenario": scenario_to_dict(sc), "feasibility": feas_doc,
                         "design": None, "report": None, "message": str(exc)}))
        else:
            where = f"{mdb:.2f} dB" if mdb is not None else "unbounded"
            print(f"infeasible, min Q = {where} (linear {exc.min_power:.6g})")
        return EXIT_INFEASIBLE
    if args.json:
        print(_dump({"receiver": args.receiver, "scheme": args.scheme,
                     "scenario": scenario_to_dict(sc), "feasibility": feas_doc,
                     "design": _design_dict(d), "report": rep.as_dict()}))
        return EXIT_OK
    print(f"receiver      {args.receiver}")
    print(f"scheme        {d.scheme.value}")
    print(f"alpha         {d.alpha.real:+.6f} {d.alpha.imag:+.6f}j")
    print(f"alpha_tilde   {d.alpha_tilde:.6f}")
    print(f"beta          {d.beta.real:+.6f} {d.beta.imag:+.6f}j")
    print(f"power         {d.power:.6g} of Q={sc.Q:.6g}")
    if feas.feasible:
        mdb = _db(feas.min_power)
        shown = f"{mdb:.2f} dB" if mdb is not None else f"{feas.min_power:g}"
        print(f"feasible      yes, min Q = {shown}, "
              f"alpha_tilde in [{feas.interval_lo:.6f}, {feas.interval_hi:.6f}]")
    else:
        print("feasible      no (optimal scheme)")
    for k, v in rep.as_dict().items():
        print(f"{k:<13} {v if isinstance(v, bool) else format(v, '.6g')}")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.random:
        scenarios = oracle.random_scenarios(args.random, args.seed)
    elif args.scenario:
        scenarios = [_scenario(args)]
    else:
        raise ScenarioError("give a scenario file or --random N")
    grid = oracle.GridSpec(resolution=args.resolution, phase_resolution=args.phase_resolution,
                           fine_resolution=args.fine_resolution,
                           refine_passes=args.refine_passes)
    checks = (("tin", tin.solve_tin, tin.tin_feasibility, oracle.grid_search_tin),
              ("sic", sic.solve_sic, sic.sic_feasibility, oracle.grid_search_sic))
    worst = {"rate_dev": 0.0, "phase_dev_steps": 0.0}
    failures = []
    n_feasible = 0
    for i, sc in enumerate(scenarios):
        for name, solve, feasibility, search in checks:
            closed = feasibility(sc).feasible
            found = search(sc, grid)
            if closed != found.feasible:
                failures.append((math.inf, i, name,
                                 f"feasibility closed={closed} oracle={found.feasible}"))
                continue
            if not closed:
                continue
            n_feasible += 1
            rate = solve(sc)[1].r
            dev = abs(rate - found.rate)
            steps = (oracle.phase_deviation(sc, found.grid_phase) / grid.phase_step
                     if math.isfinite(found.grid_phase) and found.grid_magnitude > 0 else 0.0)
            if dev > worst["rate_dev"]:
                worst["rate_dev"] = dev
            worst["phase_dev_steps"] = max(worst["phase_dev_steps"], steps)
            if dev > args.tol:
                failures.append((dev, i, name, f"rate closed={rate:.12g} oracle={found.rate:.12g}"))
            elif steps > 1.0:
                failures.append((steps, i, name, f"oracle phase {steps:.2f} grid steps off"))
    summary = {
        "scenarios": len(scenarios), "feasible_checks": n_feasible,
        "max_rate_deviation": worst["rate_dev"],
        "max_phase_deviation_steps": worst["phase_dev_steps"],
        "tolerance": args.tol, "failures": len(failures), "ok": not failures,
    }
    if failures:
        _, i, name, why = max(failures, key=lambda f: f[0])
        summary["worst"] = {"index": i, "receiver": name, "reason": why,
                            "scenario": scenario_to_dict(scenarios[i])}
    if args.json:
        print(_dump(summary))
    else:
        print(f"checked {len(scenarios)} scenarios ({n_feasible} feasible receiver cases)")
        print(f"max |rate - oracle|   {worst['rate_dev']:.3e} bps/Hz (tol {args.tol:g})")
        print(f"max phase deviation   {worst['phase_dev_steps']:.3f} grid steps")
        if failures:
            print(f"FAILED {len(failures)} check(s); worst:")
            w = summary["worst"]
            print(f"  #{w['index']} {w['receiver']}: {w['reason']}")
            print(f"  {json.dumps(w['scenario'])}")
        else:
            print("OK")
    return EXIT_VERIFY if failures else EXIT_OK


def cmd_simulate(args) -> int:
    sc = _scenario(args)
    if args.scheme == "manual":
        if args.alpha is None or args.beta is None:
            raise ScenarioError("--scheme manual needs --alpha RE IM and --beta RE IM", "alpha")
        d = SpoofingDesign(complex(*args.alpha), complex(*args.beta))
        rep = evaluate(sc, d)
    else:
        d, rep = _design(sc, args.receiver, args.scheme)
    cfg = montecarlo.SimConfig(n_samples=args.samples, seed=args.seed, workers=args.workers)
    emp = montecarlo.simulate(sc, d, cfg)
    z_sinr = (emp.sinr - rep.gamma) / emp.sinr_se if emp.sinr_se > 0 else 0.0
    z_rate = (emp.rate - rep.r) / emp.rate_se if emp.rate_se > 0 else 0.0
    doc = {
        "design": _design_dict(d),
        "analytic": rep.as_dict(),
        "empirical": emp.as_dict(),
        "z_sinr": z_sinr, "z_rate": z_rate,
        "sinr_rel_error": abs(emp.sinr - rep.gamma) / rep.gamma if rep.gamma > 0 else None,
    }
    if args.json:
        print(_dump(doc))
        return EXIT_OK
    print(f"design        {d.scheme.value}, alpha={d.alpha:.6f}, beta={d.beta:.6f}")
    print(f"samples       {emp.n} (seed {args.seed})")
    print(f"source power  {emp.source_power:.6g} +- {emp.source_power_se:.2g}")
    print(f"target power  {emp.target_power:.6g} +- {emp.target_power_se:.2g}")
    print(f"noise power   {emp.noise_power:.6g} +- {emp.noise_power_se:.2g}")
    print(f"SINR          {emp.sinr:.6g} +- {emp.sinr_se:.2g}  (analytic {rep.gamma:.6g}, "
          f"z={z_sinr:+.2f})")
    print(f"rate          {emp.rate:.6g} +- {emp.rate_se:.2g}  (analytic {rep.r:.6g}, "
          f"z={z_rate:+.2f})")
    print(f"tin_success   {emp.tin_success} (analytic {rep.tin_success})")
    return EXIT_OK


def cmd_compare(args) -> int:
    sc = _scenario(args)
    cmp = sic.compare_receivers(sc)
    doc = cmp.as_dict()
    doc["min_power_tin_db"] = _db(cmp.min_power_tin)
    doc["min_power_sic_db"] = _db(cmp.min_power_sic)
    if args.json:
        print(_dump(doc))
        return EXIT_OK

    def show(x):
        d = _db(x)
        return f"{d:.2f} dB" if d is not None else f"{x:g}"

    print(f"min Q (TIN)          {show(cmp.min_power_tin)}")
    print(f"min Q (SIC)          {show(cmp.min_power_sic)}")
    print(f"sic_easier           {cmp.sic_easier}")
    print(f"threshold predicate  {cmp.threshold_predicate} "
          f"({'agrees' if cmp.predicate_agrees else 'DISAGREES'})")
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = load_sweep_spec(args.config, csv_path=args.csv, svg_path=args.svg)
    try:
        result = run_sweep(spec)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        print(_dump(result.as_dict()))
        return EXIT_OK
    print("q_db   " + " ".join(f"{s:>10}" for s in SCHEMES))
    for p in result.points:
        cells = " ".join(f"{'NA' if p.rates.get(s) is None else format(p.rates[s], '.4f'):>10}"
                         for s in SCHEMES)
        print(f"{p.q_db:6.2f} {cells}")
    for k, v in result.markers.items():
        print(f"threshold {k:<10} {'none' if v is None else f'{v:.2f} dB'}")
    for note in result.notes:
        print(f"note: {note}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spoofrate",
                                 description="Optimal physical-layer spoofing power allocation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="design the spoofing signal for one scenario")
    p.add_argument("scenario")
    p.add_argument("--receiver", choices=("tin", "sic"), default="tin")
    p.add_argument("--scheme", choices=("optimal", "heuristic", "naive"), default="optimal")
    p.add_argument("--json", action="store_true")
    _power_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check closed forms against the brute-force oracle")
    p.add_argument("scenario", nargs="?")
    p.add_argument("--random", type=int, default=0, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--resolution", type=int, default=401)
    p.add_argument("--phase-resolution", type=int, default=360)
    p.add_argument("--fine-resolution", type=int, default=100_001)
    p.add_argument("--refine-passes", type=int, default=2)
    p.add_argument("--json", action="store_true")
    _power_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo check of a design")
    p.add_argument("scenario")
    p.add_argument("--receiver", choices=("tin", "sic"), default="tin")
    p.add_argument("--scheme", choices=("optimal", "heuristic", "naive", "manual"),
                   default="optimal")
    p.add_argument("--alpha", type=float, nargs=2, metavar=("RE", "IM"))
    p.add_argument("--beta", type=float, nargs=2, metavar=("RE", "IM"))
    p.add_argument("-n", "--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    _power_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="minimum spoofing power for TIN vs SIC")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    _power_flags(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="rate versus spoofing power for all schemes")
    p.add_argument("config")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, DesignError, ValueError) as exc:
        key = getattr(exc, "key", None)
        where = f" [key: {key}]" if key else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
