"""Command-line entry point (``hypgraph`` / ``python -m hypgraph``).

Exit codes: 0 success, 1 input or config error, 2 capacity error,
3 internal assertion (including a diameter-bound violation).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import HypGraphError, InputError
from .experiments import check_bounds, empty_summary, records_csv, run_dense_experiment, run_regime_experiment
from .graph import GenSpec, connected_components, gen_gnp
from .hyperbolicity import format_delta, hyperbolicity
from .io import load_graph, load_vertex_set, save_graph
from .metric import apsp, diameter_from_matrix
from .probes import expansion_survey
from .regime import DEFAULT_TAU, predict


def _emit(obj, out):
    out.write(json.dumps(obj, ensure_ascii=False) + "\n")


def cmd_gen(args, out):
    g = gen_gnp(GenSpec(args.n, args.p, args.seed))
    save_graph(g, args.out)
    _emit({"n": g.n, "m": g.m, "seed": args.seed, "out": str(args.out)}, out)


def cmd_delta(args, out):
    g = load_graph(args.inp)
    res = hyperbolicity(g, args.algo, threads=args.threads)
    if args.json:
        _emit(res.as_json(witness=args.witness), out)
        return
    out.write(f"delta_H = {format_delta(res.delta_doubled)} (doubled {res.delta_doubled})\n")
    if args.witness:
        out.write(f"witness = {res.witness}\n")


def cmd_diam(args, out):
    g = load_graph(args.inp)
    rep = diameter_from_matrix(apsp(g), connected_components(g))
    if args.json:
        _emit(rep.as_json(), out)
    else:
        out.write(f"diameter = {'inf' if rep.infinite else rep.diameter}\n")


def cmd_predict(args, out):
    if (args.p is None) == (args.d is None):
        raise InputError("give exactly one of --p and --d")
    p = args.p if args.p is not None else args.d / (args.n - 1)
    pred = predict(args.n, p, tau=args.tau)
    if args.json:
        _emit(pred.as_json(), out)
    else:
        out.write(f"case {pred.case}: j={pred.j} i={pred.i} d={pred.d:.4g}\n")


def cmd_probe(args, out):
    g = load_graph(args.inp)
    forbidden = load_vertex_set(args.forbidden) if args.forbidden else None
    summary = expansion_survey(g, args.samples, args.radius, args.seed, d=args.d, forbidden=forbidden)
    for rep in summary.reports:
        _emit(rep.as_json(), out)
    _emit(summary.as_json(), out)


def _write_csv(records, path):
    Path(path).write_text(records_csv(records), encoding="utf-8", newline="\n")


def cmd_exp_dense(args, out):
    config = {"kind": "dense", "n": args.n, "c": args.c, "p": args.p, "trials": args.trials, "seed": args.seed}
    if args.trials < 1:
        _emit(empty_summary(config).as_json(), out)
        raise InputError("trials must be at least 1")
    summary, records = run_dense_experiment(
        args.n, c=args.c, trials=args.trials, seed=args.seed, threads=args.threads, p=args.p, check=False
    )
    _finish(summary, records, args.out, out)


def cmd_exp_regime(args, out):
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(config, dict):
        raise InputError("config must be a JSON object")
    if int(config.get("trials", 0)) < 1:
        _emit(empty_summary(config).as_json(), out)
        raise InputError("trials must be at least 1")
    summary, records = run_regime_experiment(config, check=False)
    _finish(summary, records, args.out, out)


def _finish(summary, records, csv_path, out):
    _write_csv(records, csv_path)
    _emit(summary.as_json(), out)
    check_bounds(records)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hypgraph", description="Exact hyperbolicity of graphs and G(n, p) experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample G(n, p) to an edge-list file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("delta", help="exact hyperbolicity of a graph file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--algo", choices=("naive", "pruned"), default="pruned")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("diam", help="exact diameter of a graph file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_diam)

    p = sub.add_parser("predict", help="regime prediction for G(n, p)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("probe", help="neighbourhood statistics of sampled vertices")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--forbidden")
    p.add_argument("--d", type=float, help="degree to normalise sphere sizes by (default: mean degree)")
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("exp", help="Monte Carlo experiments")
    esub = p.add_subparsers(dest="experiment", required=True)
    e = esub.add_parser("dense", help="p = 1 - 2c/n^2")
    e.add_argument("--n", type=int, required=True)
    grp = e.add_mutually_exclusive_group(required=True)
    grp.add_argument("--c", type=float)
    grp.add_argument("--p", type=float)
    e.add_argument("--trials", type=int, required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--threads", type=int, default=1)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_exp_dense)
    e = esub.add_parser("regime", help="experiment described by a JSON config")
    e.add_argument("--config", required=True)
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_exp_regime)
    return ap


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        args.func(args, out)
    except HypGraphError as exc:
        print(f"hypgraph: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"hypgraph: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
