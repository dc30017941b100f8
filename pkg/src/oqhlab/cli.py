"""Command line front end: ``oqhlab <subcommand> [--config FILE] [--out DIR] [--seed N]``.

Exit status is 0 iff every threshold check of the run passed (1 on failed
checks, 2 on usage or parameter errors).
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .errors import OQHError
from .experiments import (ALPHA_SET, ENSEMBLE_KINDS, REGISTRY, Ensemble, ExperimentConfig, default_config,
                          run_experiment)
from .multiplier import (MultiplierModel, Ej_on_grid, Lj_on_grid, Mj_on_grid, eval_Uj, kernel_Ej)
from .numtheory import gauss_table, level_gauss_max, level_of
from .signal import Signal, Window, apply_halpha
from .sparse import SparseCollection, verify_sparse
from .torus import parse_torus
from .weights import Weight, a2_characteristic, rh_characteristic

CSV_DOCS = {
    "experiment": "CSV columns depend on the experiment; they are listed in <name>.json under 'columns'.",
    "transform": "CSV columns: n, re, im  (H^alpha f on the window).",
    "multiplier": "CSV columns: beta, re, im, abs  (kernel: m, re, im, abs).",
    "gauss": "CSV columns: s, Q, A, B, abs_S, arg_S  (level mode: s, max_abs_S, A, B, Q).",
    "sparse-check": "No CSV; prints the diagnostics and writes sparse_check.json.",
    "sparse-ratio": "CSV columns: alpha, N, trial, ratio; JSON summary has max_ratio, argmax_seed, alpha_spread.",
    "weights": "CSV columns: N, weight, spec, a2, a2_inv, rh, rh_inv, in_test_set, alpha, max_ratio.",
}


def _common(p: argparse.ArgumentParser, seed=True):
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--out", type=Path, default=Path("oqhlab_out"), help="output directory")
    if seed:
        p.add_argument("--seed", type=int, help="RNG seed (overrides the config)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="oqhlab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, epilog=CSV_DOCS[name])

    p = add("experiment", "run a registry experiment")
    _common(p)
    p.add_argument("--name", help=f"experiment name ({', '.join(sorted(REGISTRY))})")
    p.add_argument("--no-svg", action="store_true", help="skip the SVG plot")

    p = add("transform", "apply H^alpha to a signal")
    _common(p, seed=False)
    p.add_argument("--alpha", default="0")
    p.add_argument("--signal", type=Path, help='signal JSON {"offset", "re", "im"}')
    p.add_argument("--window", type=int, nargs=2, metavar=("A", "B"))
    p.add_argument("--method", choices=("fft", "direct"), default="fft")

    p = add("multiplier", "evaluate M_j, U_j, L_j, E_j or the kernel of E_j on a grid")
    _common(p, seed=False)
    p.add_argument("--alpha", default="0", help="decimal, A/Q, A/Q+x or a name (golden-1, sqrt2-1, pi-3)")
    p.add_argument("--j", type=int, default=8)
    p.add_argument("--eps", type=float, default=0.15)
    p.add_argument("--grid", type=int)
    p.add_argument("--what", choices=("Mj", "Uj", "Lj", "Ej", "kernel"), default="Mj")

    p = add("gauss", "complete Gauss sums S(A/Q, B/Q)")
    _common(p, seed=False)
    p.add_argument("--Q", type=int, default=5)
    p.add_argument("--A", type=int)
    p.add_argument("--level", type=int, nargs="+", help="level maxima for these s instead of a table")

    p = add("sparse-check", "verify a sparse collection given as JSON")
    _common(p, seed=False)
    p.add_argument("collection", type=Path, nargs="?", help='JSON {"rho", "entries": [{"interval", "witness"}]}')

    p = add("sparse-ratio", "ensemble sparse-ratio experiment for H^alpha")
    _common(p)
    p.add_argument("--alpha-set", nargs="+")
    p.add_argument("--N", type=int, nargs="+")
    p.add_argument("--r", type=float)
    p.add_argument("--s", type=float)
    p.add_argument("--ensemble", choices=ENSEMBLE_KINDS)
    p.add_argument("--count", type=int)

    p = add("weights", "A_2 / RH_r characteristics and weighted norm ratios")
    _common(p)
    p.add_argument("--exponent", type=float, nargs="+", help="power-weight exponents")
    p.add_argument("--N", type=int, nargs="+")
    p.add_argument("--alpha-set", nargs="+")
    p.add_argument("--count", type=int)
    p.add_argument("--only-characteristics", action="store_true")
    return ap


def _config(args, name: str) -> ExperimentConfig:
    if args.config:
        obj = json.loads(args.config.read_text())
        obj.setdefault("name", name)
        if args.seed is not None:
            obj["seed"] = args.seed
        obj.setdefault("seed", 0)
        cfg = ExperimentConfig.from_json(obj)
    else:
        cfg = default_config(name, args.seed if args.seed is not None else 0)
    return cfg


def _finish(rep, out: Path, svg: bool = True) -> int:
    if not svg:
        rep.plot = None
    paths = rep.write(out)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {rep.name}: {c.name} = {c.value:.6g} ({c.relation} {c.threshold:g})")
    print(f"wrote {', '.join(str(p) for p in paths.values())}")
    return 0 if rep.passed else 1


def _write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow(["%.17g" % v if isinstance(v, float) else v for v in r])


def cmd_experiment(args) -> int:
    if args.name is None and args.config is None:
        raise OQHError(f"give --name or --config; registry: {', '.join(sorted(REGISTRY))}")
    if args.config:
        obj = json.loads(args.config.read_text())
        if args.name:
            obj["name"] = args.name
        if args.seed is not None:
            obj["seed"] = args.seed
        cfg = ExperimentConfig.from_json(obj)
    else:
        cfg = default_config(args.name, args.seed if args.seed is not None else 0)
    return _finish(run_experiment(cfg), args.out, not args.no_svg)


def cmd_transform(args) -> int:
    cfg = json.loads(args.config.read_text()) if args.config else {}
    if args.signal:
        f = Signal.from_json(json.loads(args.signal.read_text()))
    elif "signal" in cfg:
        f = Signal.from_json(cfg["signal"])
    else:
        f = Signal.delta(0)
    alpha = cfg.get("alpha", args.alpha)
    win = args.window or cfg.get("window")
    window = Window.of(*win) if win else None
    h = apply_halpha(f, parse_torus(str(alpha)), window, method=args.method)
    n = np.arange(h.offset, h.offset + len(h.values))
    _write_csv(args.out / "transform.csv", ["n", "re", "im"],
               [(int(k), float(v.real), float(v.imag)) for k, v in zip(n, h.values)])
    (args.out / "transform.json").write_text(json.dumps(
        {"alpha": str(alpha), "method": args.method, "output": h.to_json(), "norm2": h.norm2()}, indent=2) + "\n")
    print(f"wrote {args.out / 'transform.csv'}")
    return 0


def cmd_multiplier(args) -> int:
    alpha = parse_torus(args.alpha)
    model = MultiplierModel(epsilon=args.eps)
    L = args.grid or 1 << (args.j + 3)
    if args.what == "kernel":
        ks = kernel_Ej(alpha, args.j, L, model)
        v = ks.kernel.values
        m = np.arange(ks.kernel.offset, ks.kernel.offset + len(v))
        header, xs = ["m", "re", "im", "abs"], [int(k) for k in m]
        meta = {"cutoff": ks.cutoff, "far_empty": ks.far_empty}
    else:
        beta = np.arange(L) / L
        if args.what == "Mj":
            v = Mj_on_grid(alpha, args.j, L)
        elif args.what == "Lj":
            v = Lj_on_grid(alpha, args.j, L, model)
        elif args.what == "Ej":
            v = Ej_on_grid(alpha, args.j, L, model)
        else:
            beta = (np.arange(L) - L // 2) / L
            v = eval_Uj(float(alpha), beta, args.j, model)
        header, xs, meta = ["beta", "re", "im", "abs"], [float(b) for b in beta], {}
    a = np.abs(v)
    k = int(np.argmax(a))
    _write_csv(args.out / f"multiplier_{args.what}.csv", header,
               [(x, float(z.real), float(z.imag), float(abs(z))) for x, z in zip(xs, v)])
    summary = {"what": args.what, "alpha": args.alpha, "j": args.j, "epsilon": args.eps, "grid": L,
               "sup": float(a[k]), "argmax": xs[k], **meta}
    (args.out / f"multiplier_{args.what}.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary))
    return 0


def cmd_gauss(args) -> int:
    if args.level:
        rows = []
        for s in args.level:
            mx, (A, B, Q) = level_gauss_max(s)
            rows.append((s, mx, A, B, Q))
        _write_csv(args.out / "gauss_levels.csv", ["s", "max_abs_S", "A", "B", "Q"], rows)
        for r in rows:
            print(f"s={r[0]}  max|S|={r[1]:.12g}  at A={r[2]} B={r[3]} Q={r[4]}")
        return 0
    A, tab = gauss_table(args.Q, args.A)
    s = level_of(args.Q)
    rows = [(s, args.Q, int(a), b, float(abs(z)), float(np.angle(z)))
            for a, row in zip(A, tab) for b, z in enumerate(row)]
    _write_csv(args.out / "gauss.csv", ["s", "Q", "A", "B", "abs_S", "arg_S"], rows)
    print(f"Q={args.Q}: max|S|={np.abs(tab).max():.12g}; wrote {args.out / 'gauss.csv'}")
    return 0


def cmd_sparse_check(args) -> int:
    path = args.collection or args.config
    if path is None:
        raise OQHError("give a collection JSON file")
    c = SparseCollection.from_json(json.loads(path.read_text()))
    res = verify_sparse(c)
    out = {"sparse": res.ok, "reason": res.reason, "entry": res.entry, "point": res.point,
           "max_overlap": res.max_overlap, "rho": c.rho, "entries": len(c)}
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "sparse_check.json").write_text(json.dumps(out, indent=2) + "\n")
    print(json.dumps(out))
    return 0 if res.ok else 1


def cmd_sparse_ratio(args) -> int:
    cfg = _config(args, "sparse-ratio")
    kw = {}
    if args.alpha_set:
        kw["alphas"] = tuple(args.alpha_set)
    if args.N:
        kw["N"] = tuple(args.N)
    if args.r is not None:
        kw["r"] = args.r
    if args.s is not None:
        kw["s"] = args.s
    if args.ensemble or args.count:
        kw["ensemble"] = Ensemble(args.ensemble or cfg.ensemble.kind, args.count or cfg.ensemble.count)
    cfg = replace(cfg, **kw)
    return _finish(run_experiment(cfg), args.out)


def cmd_weights(args) -> int:
    cfg = _config(args, "weighted")
    kw = {}
    if args.exponent:
        kw["weights"] = tuple({"kind": "power", "exponent": e} for e in args.exponent)
    if args.N:
        kw["N"] = tuple(args.N)
    if args.alpha_set:
        kw["alphas"] = tuple(args.alpha_set)
    if args.count:
        kw["ensemble"] = Ensemble(cfg.ensemble.kind, args.count)
    cfg = replace(cfg, **kw)
    if args.only_characteristics:
        r = cfg.options["rh_r"]
        rows = []
        for n in cfg.N:
            for spec in cfg.weights:
                w = Weight.from_spec(Window.of(0, n - 1), spec)
                rows.append((n, json.dumps(spec, sort_keys=True), a2_characteristic(w),
                             a2_characteristic(w.inverse()), rh_characteristic(w, r), rh_characteristic(w.inverse(), r)))
        _write_csv(args.out / "weights.csv", ["N", "spec", "a2", "a2_inv", "rh", "rh_inv"], rows)
        for row in rows:
            print(*row)
        return 0
    return _finish(run_experiment(cfg), args.out)


COMMANDS = {
    "experiment": cmd_experiment, "transform": cmd_transform, "multiplier": cmd_multiplier,
    "gauss": cmd_gauss, "sparse-check": cmd_sparse_check, "sparse-ratio": cmd_sparse_ratio,
    "weights": cmd_weights,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (OQHError, ValueError, json.JSONDecodeError) as exc:
        print(f"oqhlab {args.cmd}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
