"""
Command-line front end.
=======================

Subcommands
-----------
analyze       spectral report: eigenvalue groups, bound/active split, c table,
              pairing fits, monodromy, best search eigenvalue
search        plan and run one search, report the mass split and samples
sweep         scan N (linear or log spaced), one CSV row per point
tolerance     detuning sweep: t, eps0, naive/compensated success
oracle-check  full-graph vs collapsed evolution deviation (regression guard)
demo          narrated end-to-end run on the bundled 'bolo' fixture

Exit codes: 0 ok; 2 spec validation failure; 3 numerical diagnostic;
4 oracle-check deviation above threshold.  CSV output is byte-deterministic
for a fixed config and seed; set STARWALK_LOG=debug|info|... for verbosity.
"""
from __future__ import annotations

import argparse
import cmath
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import graph, search as search_mod, spectral, tolerance as tol_mod
from .graph import NumericsError, SpecError

logger = logging.getLogger("starwalk")

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_NUMERICS = 3
EXIT_ORACLE = 4

ORACLE_TOL = 1e-8


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path: str, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _emit(args, header, rows, payload) -> None:
    """Write the tabular rows and the full JSON sidecar."""
    out = args.out or f"starwalk_{args.command.replace('-', '_')}"
    if args.format == "csv":
        csv_path = out if out.endswith(".csv") else out + ".csv"
        _write_csv(csv_path, header, rows)
        _write_json(os.path.splitext(csv_path)[0] + ".json", payload)
        print(f"{args.command}: wrote {csv_path} ({len(rows)} rows)")
    else:
        json_path = out if out.endswith(".json") else out + ".json"
        _write_json(json_path, payload)
        print(f"{args.command}: wrote {json_path}")


def _parse_lambda(text: str):
    if text == "auto":
        return "auto"
    try:
        re_s, im_s = text.split(",")
        return complex(float(re_s), float(im_s))
    except ValueError as exc:
        raise SpecError(f'--lambda must be "auto" or "re,im", got {text!r}') from exc


def _parse_n_range(text: str) -> tuple[int, int | None]:
    if ".." in text:
        a, b = text.split("..")
        return int(a), int(b)
    return int(text), None


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------

def cmd_analyze(args) -> int:
    spec = graph.load_spec(args.spec)
    report = spectral.spectral_report(spec, phi=args.phi)
    rows = [
        [lam, c]
        for lam, c in sorted(report["c_table"].items())
    ]
    _emit(args, ["lambda0", "c"], rows, report)
    best = report["best"]
    print(f"best lambda0 = {best['lambda0'][0]:+.6f}{best['lambda0'][1]:+.6f}i, "
          f"c = {best['c']:.6f}, d = {best['d']}")
    return EXIT_OK


def cmd_search(args) -> int:
    spec = graph.load_spec(args.spec)
    N, hi = _parse_n_range(args.n)
    if hi is not None:
        raise SpecError("search takes a single --n; use sweep for ranges")
    plan = search_mod.plan_search(spec, N, M=args.m_copies, lambda0=args.lam)
    result = search_mod.run_search(plan, spec)
    counts = (search_mod.sample_measurement(result, args.seed, args.shots)
              if args.shots else None)
    row = [plan.N, plan.M, plan.lambda0.real, plan.lambda0.imag, plan.phi,
           plan.c, plan.m, result.p_marked, result.p_null, result.p_unmarked,
           result.overlap_r0]
    payload = {
        "plan": {"N": plan.N, "M": plan.M,
                 "lambda0": [plan.lambda0.real, plan.lambda0.imag],
                 "phi": plan.phi, "branch": plan.branch, "c": plan.c,
                 "m": plan.m, "predicted_success": plan.predicted_success},
        "result": {"p_marked": result.p_marked, "p_null": result.p_null,
                   "p_unmarked": result.p_unmarked,
                   "overlap_r0": result.overlap_r0},
        "counts": counts,
    }
    _emit(args, ["N", "M", "lambda0_re", "lambda0_im", "phi", "c", "m",
                 "p_marked", "p_null", "p_unmarked", "overlap_r0"],
          [row], payload)
    print(f"m = {plan.m}, p_marked = {result.p_marked:.6f}")
    return EXIT_OK


def _sweep_point(task):
    spec_dict, N, M, lam_sel = task
    spec = graph.SubgraphSpec.from_dict(spec_dict)
    plan = search_mod.plan_search(spec, N, M=M, lambda0=lam_sel)
    result = search_mod.run_search(plan, spec)
    return [plan.N, plan.M, plan.lambda0.real, plan.lambda0.imag, plan.phi,
            plan.c, plan.m, result.p_marked, result.p_null,
            result.p_unmarked, result.overlap_r0]


def cmd_sweep(args) -> int:
    spec = graph.load_spec(args.spec)
    lo, hi = _parse_n_range(args.n)
    if hi is None:
        ns = [lo]
    elif args.log:
        ns = sorted({int(round(v)) for v in
                     np.logspace(math.log10(lo), math.log10(hi), args.points)})
    else:
        ns = sorted({int(round(v)) for v in np.linspace(lo, hi, args.points)})
    tasks = [(spec.to_dict(), N, args.m_copies, args.lam) for N in ns]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks))
    else:
        rows = [_sweep_point(t) for t in tasks]
    payload = {"points": [
        dict(zip(["N", "M", "lambda0_re", "lambda0_im", "phi", "c", "m",
                  "p_marked", "p_null", "p_unmarked", "overlap_r0"], row))
        for row in rows]}
    _emit(args, ["N", "M", "lambda0_re", "lambda0_im", "phi", "c", "m",
                 "p_marked", "p_null", "p_unmarked", "overlap_r0"],
          rows, payload)
    return EXIT_OK


def cmd_tolerance(args) -> int:
    spec = graph.load_spec(args.spec)
    N, hi = _parse_n_range(args.n)
    if hi is not None:
        raise SpecError("tolerance takes a single --n")
    M = args.m_copies
    if args.lam == "auto":
        lam, c, _ = spectral.best_target(spectral.right_classifications(spec))
    else:
        lam = args.lam
        c = spectral.classify_right(spec, lam).c
        if c is None:
            raise SpecError(f"lambda0={lam} has no active right eigenvector")
    if args.delta_grid == "auto":
        unit = c * math.sqrt(2.0 / N)
        deltas = [0.0, 0.5 * unit, 1.0 * unit, 1.5 * unit]
    else:
        deltas = [float(v) for v in args.delta_grid.split(",")]
    profiles = tol_mod.tolerance_sweep(spec, N, M, lam, deltas)
    rows = [[p.N, p.M, p.delta, p.t, p.epsilon0.real, p.epsilon0.imag,
             p.m_naive, p.m_compensated, p.P_measured_naive, p.P_measured_comp,
             p.P_predicted_naive, p.P_predicted_comp] for p in profiles]
    payload = {"lambda0": [lam.real, lam.imag] if not isinstance(lam, str) else lam,
               "c": c,
               "profiles": [dict(zip(
                   ["N", "M", "delta", "t", "epsilon0_re", "epsilon0_im",
                    "m_naive", "m_comp", "P_measured_naive", "P_measured_comp",
                    "P_predicted_naive", "P_predicted_comp"], row))
                   for row in rows]}
    _emit(args, ["N", "M", "delta", "t", "epsilon0_re", "epsilon0_im",
                 "m_naive", "m_comp", "P_measured_naive", "P_measured_comp",
                 "P_predicted_naive", "P_predicted_comp"], rows, payload)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    spec = graph.load_spec(args.spec)
    N, hi = _parse_n_range(args.n)
    if hi is not None:
        raise SpecError("oracle-check takes a single --n")
    if N > 64:
        raise SpecError("oracle-check is limited to N <= 64")
    M = args.m_copies
    lam, c, _ = spectral.best_target(spectral.right_classifications(spec))
    phi, branch = spectral.matched_phi(lam)
    hub = graph.hub_coefficients(N, M=M)
    Uc = graph.build_collapsed(spec, hub, phi)
    Uf = graph.build_full(spec, N, M=M, phi=phi)
    state_c = search_mod.initial_state(spec, N, M, branch, phi)
    state_f = graph.lift_collapsed_state(state_c, N, M)
    worst = 0.0
    for _ in range(args.steps):
        state_c = graph.apply(Uc, state_c)
        state_f = graph.apply(Uf, state_f)
        restricted, leak = graph.restrict_full_state(state_f, M=M)
        dev = float(np.linalg.norm(restricted.amplitudes - state_c.amplitudes))
        worst = max(worst, dev, leak)
    print(f"oracle-check: N={N} M={M} steps={args.steps} max deviation = {worst:.3e}")
    if worst > args.tol:
        print(f"oracle-check FAILED: deviation {worst:.3e} > {args.tol:.1e}",
              file=sys.stderr)
        return EXIT_ORACLE
    return EXIT_OK


def cmd_demo(args) -> int:
    spec = graph.load_spec("bolo")
    print("Demo: search on a 10^6-edge star with the bundled 'bolo' subgraph.")
    cls = spectral.right_classifications(spec)
    print("Right-block eigenvalues and coupling constants:")
    for cl in cls:
        tag = f"c = {cl.c:.6f}" if cl.c is not None else "bound only (no hub contact)"
        print(f"  lambda0 = {cl.lambda0:+.6f}   {tag}   ({cl.n_bound} bound)")
    lam, c, d = spectral.best_target(cls)
    print(f"Best target: lambda0 = {lam:+.3f} with c = {c:.6f} "
          f"(d = {d} active eigenvalues, sum c^2 = 2).")
    plan = search_mod.plan_search(spec, 10 ** 6, lambda0="auto")
    print(f"Plan: phi = {plan.phi:.3f}, branch = {plan.branch:+d}, "
          f"m = {plan.m} steps, predicted success = {plan.predicted_success:.3f}.")
    result = search_mod.run_search(plan, spec)
    print(f"After {plan.m} steps: p_marked = {result.p_marked:.4f}, "
          f"p_null = {result.p_null:.4f}, p_unmarked = {result.p_unmarked:.4f}.")
    counts = search_mod.sample_measurement(result, seed=args.seed, shots=10000)
    print(f"10000 simulated measurements: {counts}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starwalk",
        description="Quantum-walk search on star graphs with a marked subgraph")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True, n=False):
        if spec:
            p.add_argument("spec", help="subgraph JSON file or bundled name "
                                        "(grover, bolo)")
        if n:
            p.add_argument("--n", required=True,
                           help="hub degree N, or a range A..B for sweeps")
        p.add_argument("--m-copies", type=int, default=1, metavar="INT",
                       help="number of marked copies M (default 1)")
        p.add_argument("--out", default=None, help="output path stem")
        p.add_argument("--format", choices=("json", "csv"), default="csv")
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("analyze", help="spectral report for a subgraph")
    common(p)
    p.add_argument("--phi", type=float, default=None,
                   help="reflector phase (default: matched per eigenvalue)")
    p.set_defaults(func=cmd_analyze, format="json")

    p = sub.add_parser("search", help="plan and run one search")
    common(p, n=True)
    p.add_argument("--lambda", dest="lam", type=_parse_lambda, default="auto",
                   metavar='auto|"re,im"')
    p.add_argument("--shots", type=int, default=0,
                   help="measurement samples to draw (0 = none)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("sweep", help="scan N and log success rows")
    common(p, n=True)
    p.add_argument("--lambda", dest="lam", type=_parse_lambda, default="auto",
                   metavar='auto|"re,im"')
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--log", action="store_true", help="log-spaced N grid")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tolerance", help="detuning sweep")
    common(p, n=True)
    p.add_argument("--lambda", dest="lam", type=_parse_lambda, default="auto",
                   metavar='auto|"re,im"')
    p.add_argument("--delta-grid", default="auto",
                   help='comma list of detunings, or "auto" for '
                        "{0, 0.5, 1, 1.5} x c*sqrt(2/N)")
    p.set_defaults(func=cmd_tolerance)

    p = sub.add_parser("oracle-check", help="full vs collapsed regression check")
    common(p, n=True)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--tol", type=float, default=ORACLE_TOL)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("demo", help="narrated end-to-end run on 'bolo'")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_demo)

    return parser


def main(argv=None) -> int:
    level = os.environ.get("STARWALK_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except NumericsError as exc:
        print(f"numerical diagnostic: {exc}", file=sys.stderr)
        return EXIT_NUMERICS


if __name__ == "__main__":
    raise SystemExit(main())
