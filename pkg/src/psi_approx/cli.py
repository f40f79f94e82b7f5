"""Command-line interface ``psi-approx``.

Exit status is 0 when every verdict produced is ``Pass``, 1 when some verdict
is ``Fail`` or ``Inconclusive`` and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .approx_engine import best_orth_approx
from .bounds_report import (
    COROLLARIES,
    THEOREMS,
    SandwichConfig,
    order_table,
    parse_n_list,
    sandwich_check,
)
from .errors import PsiApproxError
from .extremal_functions import extremal_fm, extremal_fn_star, extremal_fp
from .psi_families import LogLogPower, LogPower, Power, alpha_inf, classify, parse_psi, weighted
from .trig_core import GridSpec, TrigPoly

DEFAULT_TABLE_PSI = {
    "C1a": lambda: LogPower(2, 1),
    "C1b": lambda: Power(0.75),
    "C2": lambda: LogPower(2, 1),
    "C3": lambda: LogLogPower(2, 0.5, 1),
    "C4": lambda: Power(2),
    "C5": lambda: LogPower(1, 2),
    "C6": lambda: LogLogPower(1, 1, 2),
    "T5": lambda: LogPower(1, 2),
}


def _metric(text: str) -> float:
    return math.inf if text.lower() in ("inf", "infinity") else float(text)


def _grid(args) -> GridSpec:
    return GridSpec(points=args.grid_n, refinement_depth=args.refine_depth)


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_psi_classify(args) -> int:
    psi = parse_psi(args.psi)
    g = weighted(psi, args.q) if args.q else psi
    res = classify(g).to_json()
    res.update(psi=psi.to_json(), q=args.q, alpha_inf=alpha_inf(g, args.n))
    _emit(res)
    return 0


def cmd_bounds(args) -> int:
    psi = parse_psi(args.psi)
    exponent = args.p if args.theorem == "T1" else (args.s if args.theorem == "T2" else 1.0)
    if exponent is None:
        raise SystemExit(f"--{'p' if args.theorem == 'T1' else 's'} is required for {args.theorem}")
    cfg = SandwichConfig(l=args.l, grid=_grid(args))
    report = sandwich_check(args.theorem, psi, args.beta, exponent, args.n, cfg)
    _emit(report.to_json(), args.out)
    return 0 if report.verdict == "Pass" else 1


def cmd_verify(args) -> int:
    from .verify import run_suite

    result = run_suite(args.suite)
    _emit(result, args.out)
    for c in result["criteria"]:
        print(f"[{c['verdict']:>12}] {c['criterion']}. {c['name']} ({c['seconds']:.2f} s)", file=sys.stderr)
    return 0 if result["verdict"] == "Pass" else 1


def cmd_table(args) -> int:
    psi = parse_psi(args.psi) if args.psi else DEFAULT_TABLE_PSI[args.corollary]()
    table = order_table(args.corollary, psi, parse_n_list(args.n), p=args.p, beta=args.beta,
                        ratio_band=args.ratio_band)
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        _emit(table.to_json())
    return 0 if table.verdict == "Pass" else 1


def cmd_extremal(args) -> int:
    psi = parse_psi(args.psi)
    if args.kind == "fp":
        f = extremal_fp(psi, args.p, args.n, n_trunc=args.n_trunc)
    elif args.kind == "fm":
        f = extremal_fm(psi, args.beta, args.m)
    else:
        f = extremal_fn_star(psi, args.n)
    _emit(f.to_json(), args.out)
    return 0


def cmd_approx(args) -> int:
    src = sys.stdin if args.f == "-" else open(args.f)
    with src:
        f = TrigPoly.from_json(json.load(src))
    res = best_orth_approx(f, args.m, args.metric_s, args.strategy, _grid(args))
    out = res.to_json()
    if math.isinf(args.metric_s):
        out["metric_s"] = "inf"
    _emit(out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="psi-approx", description=__doc__.splitlines()[0])
    ap.add_argument("--grid-n", type=int, default=None,
                    help="quadrature grid size (power of two); default picks one automatically")
    ap.add_argument("--refine-depth", type=int, default=40, help="golden-section steps for sup norms")
    sub = ap.add_subparsers(dest="command", required=True)

    psi = sub.add_parser("psi", help="inspect a psi function")
    psi_sub = psi.add_subparsers(dest="psi_command", required=True)
    cl = psi_sub.add_parser("classify", help="place psi (or psi t^(1/q)) in M_C / M_0")
    cl.add_argument("--psi", required=True, help="e.g. power:0.75 or logpower:p=2,gamma=1")
    cl.add_argument("--q", type=float, default=None, help="classify psi(t) t^(1/q) instead")
    cl.add_argument("--n", type=int, default=1, help="report the alpha infimum over t >= n")
    cl.set_defaults(func=cmd_psi_classify)

    b = sub.add_parser("bounds", help="theorem bounds with a sandwich check")
    b.add_argument("--theorem", required=True, choices=THEOREMS)
    b.add_argument("--psi", required=True)
    b.add_argument("--p", type=float, default=None)
    b.add_argument("--s", type=float, default=None)
    b.add_argument("--beta", type=float, default=0.0)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--l", type=int, default=8)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", default="default")
    v.add_argument("--out", default=None)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="order-relation table over a range of n")
    t.add_argument("--corollary", required=True, type=lambda c: {x.lower(): x for x in COROLLARIES}[c.lower()],
                   help=", ".join(COROLLARIES))
    t.add_argument("--psi", default=None)
    t.add_argument("--n", default="16..4096", help="'a..b' (powers of two) or a comma list")
    t.add_argument("--p", type=float, default=None)
    t.add_argument("--beta", type=float, default=0.0)
    t.add_argument("--ratio-band", type=float, default=4.0)
    t.add_argument("--format", choices=("csv", "json"), default="csv")
    t.set_defaults(func=cmd_table)

    e = sub.add_parser("extremal", help="emit an extremal function as JSON coefficients")
    e.add_argument("--kind", choices=("fp", "fm", "fn"), required=True)
    e.add_argument("--psi", required=True)
    e.add_argument("--p", type=float, default=2.0)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--beta", type=float, default=0.0)
    e.add_argument("--n-trunc", type=int, default=None)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_extremal)

    a = sub.add_parser("approx", help="best orthogonal m-term approximation of a polynomial")
    a.add_argument("--f", default="-", help="TrigPoly JSON file, '-' for stdin")
    a.add_argument("--m", type=int, required=True)
    a.add_argument("--metric-s", type=_metric, default=2.0)
    a.add_argument("--strategy", default="Greedy", choices=("Exhaustive", "Greedy", "SymmetricPairs"))
    a.set_defaults(func=cmd_approx)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PsiApproxError, ValueError, KeyError, OSError) as exc:
        print(f"psi-approx: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
