"""Command-line interface: ``imbaclust {gen,cluster,coreset,quantize,repro}``.

Every command is deterministic given ``--seed``; only the wall-clock fields of
the JSON reports vary between runs. ``IMBACLUST_THREADS`` sets how many
independent repro runs execute at once (default 1).
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .approx import exhaustive_approx
from .bicriteria import BiCriteriaParams, bicriteria
from .core import nearest, read_csv, write_csv
from .coreset import CoresetParams, build_coreset
from .datagen import OUTLIER, OUTLIER2, PRESETS, make_preset
from .kmeanspp import dsquared_seed, kmeans
from .loss import fitting_loss, relaxed_loss, variance_loss
from .metrics import SilhouetteError, separates, silhouette
from .pipeline import DEFAULT_SAMPLE_SIZE, SPLITTERS, approx_on_coreset, choice_cluster, divisive_tree
from .quantize import Divisive, Flat, count_colors, quantize, read_image, write_image
from .rng import derive

CLUSTER_METHODS = ("approx", "approx-on-coreset", "kmeanspp", "kmeans", "bicriteria", "choice")
EXPERIMENTS = ("fig1", "fig2", "appendixG1", "appendixG2")


class CliError(Exception):
    pass


def _thread_count() -> int:
    raw = os.environ.get("IMBACLUST_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise CliError(f"IMBACLUST_THREADS must be an integer, got {raw!r}")


def _write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _params(args, skip=("func", "command")) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


# ------------------------------------------------------------------ gen

def cmd_gen(args) -> int:
    pts, labels = make_preset(args.preset, args.n, args.seed)
    write_csv(args.output, pts, labels=labels)
    return 0


# ------------------------------------------------------------------ cluster

def _coreset_params(args, k) -> CoresetParams:
    return CoresetParams(k=k, delta=args.delta, eps=args.eps, mode=args.mode,
                         lambda_override=args.lam, c_const=args.c_const)


def _bicriteria_params(args, k) -> BiCriteriaParams:
    return BiCriteriaParams(k=k, delta=args.delta, mode=args.mode,
                            lambda_override=args.lam, c_const=args.c_const)


def cmd_cluster(args) -> int:
    P, _, _ = read_csv(args.input)
    n = P.shape[0]
    if args.k < 1:
        raise CliError("--k must be >= 1")
    if args.k > n:
        raise CliError(f"--k {args.k} exceeds the number of points ({n})")
    rng = derive(args.seed, "cluster")
    extra = {}
    t0 = time.perf_counter()
    if args.method == "approx":
        centers = exhaustive_approx(P, args.k, size_source="count", objective=args.objective)
    elif args.method == "approx-on-coreset":
        centers = approx_on_coreset(P, args.k, _coreset_params(args, args.k), rng, objective=args.objective)
    elif args.method == "kmeanspp":
        centers = dsquared_seed(P, args.k, rng)
    elif args.method == "kmeans":
        centers = kmeans(P, args.k, rng)
    elif args.method == "bicriteria":
        centers = bicriteria(P, _bicriteria_params(args, args.k), rng)
    else:
        res = choice_cluster(P, args.k, ("approx-on-coreset", "kmeans"), args.sample_size, rng,
                             coreset_params=_coreset_params(args, args.k))
        centers = res.centers
        extra["chosen"] = res.method
        extra["candidate_scores"] = res.scores
    wall_ms = (time.perf_counter() - t0) * 1000.0
    labels, _ = nearest(P, centers)
    try:
        sil = silhouette(P, labels, args.sample_size, derive(args.seed, "report:silhouette"))
    except SilhouetteError:
        sil = None
    if args.output:
        write_csv(args.output, P, labels=labels)
    report = {
        "method": args.method,
        "k": args.k,
        "seed": args.seed,
        "n": n,
        "d": P.shape[1],
        "version": __version__,
        "params": _params(args),
        "centers": centers.tolist(),
        "losses": {"fitting": fitting_loss(P, centers), "relaxed": relaxed_loss(P, centers)},
        "silhouette": sil,
        "wall_time_ms": wall_ms,
        **extra,
    }
    if args.report:
        _write_json(args.report, report)
    else:
        json.dump(report, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    return 0


# ------------------------------------------------------------------ coreset

def cmd_coreset(args) -> int:
    P, _, _ = read_csv(args.input)
    cs = build_coreset(P, _coreset_params(args, args.k), derive(args.seed, "coreset"), seed=args.seed)
    cs.save(args.output, args.sidecar)
    return 0


# ------------------------------------------------------------------ quantize

def cmd_quantize(args) -> int:
    img = read_image(args.input)
    if args.method == "flat":
        if args.k is None:
            raise CliError("--method flat needs --k")
        method = Flat(args.k, args.flat_method)
    else:
        if args.depth is None:
            raise CliError("--method divisive needs --depth")
        method = Divisive(args.depth, args.splitter)
    out = quantize(img, method, args.border_strip, derive(args.seed, "quantize"))
    write_image(args.output, out)
    if args.report:
        _write_json(args.report, {
            "version": __version__,
            "params": _params(args),
            "input_shape": list(img.shape[:2]),
            "output_shape": list(out.shape[:2]),
            "colors_in": count_colors(img),
            "colors_out": count_colors(out),
        })
    return 0


# ------------------------------------------------------------------ repro

def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000.0


def _flat_run(experiment, config, seed):
    """One seeded run of a flat experiment: a list of per-method rows."""
    P, truth = make_preset(experiment, config, derive(seed, "data"))
    k = len(np.unique(truth))
    objective = "fitting" if experiment == "fig1" else "relaxed"
    methods = {
        "approx-on-coreset": lambda rng: approx_on_coreset(P, k, CoresetParams(k=k), rng, objective=objective),
        "kmeans": lambda rng: kmeans(P, k, rng),
    }
    if experiment == "appendixG1":
        # small enough for the full exhaustive search used as the normalizer
        methods = {"approx": lambda rng: exhaustive_approx(P, k, "count", objective, budget=None),
                   **methods,
                   "bicriteria": lambda rng: bicriteria(P, BiCriteriaParams(k=k), rng)}
    rows = []
    for name, fn in methods.items():
        centers, ms = _timed(lambda: fn(derive(seed, "method", name)))
        labels, _ = nearest(P, centers)
        rows.append({
            "method": name,
            "loss_fitting": fitting_loss(P, centers),
            "loss_relaxed": relaxed_loss(P, centers),
            "separated": int(separates(labels, truth, OUTLIER)),
            "time_ms": ms,
        })
    return rows


def _tree_run(experiment, config, seed):
    P, truth = make_preset(experiment, config, derive(seed, "data"))
    rows = []
    for splitter in ("approx-on-coreset", "kmeans", "bicriteria"):
        tree, ms = _timed(lambda: divisive_tree(P, 3, splitter, derive(seed, "method", splitter)))
        labels = tree.labels
        rows.append({
            "method": splitter,
            "loss_variance": variance_loss(P, labels),
            "separated": int(separates(labels, truth, OUTLIER) and separates(labels, truth, OUTLIER2)),
            "time_ms": ms,
        })
    return rows


def _configs(experiment, n):
    if n is not None:
        return [n]
    return {"fig1": [None], "fig2": [625, 1250], "appendixG1": [5], "appendixG2": [1]}[experiment]


def _quartiles(values):
    v = np.asarray([x for x in values if x is not None], dtype=np.float64)
    if v.size == 0:
        return None
    p25, med, p75 = np.percentile(v, [25, 50, 75])
    return {"median": float(med), "p25": float(p25), "p75": float(p75)}


def summarize(rows, loss_key) -> list[dict]:
    """Median and 25/75 percentiles per (config, method)."""
    out = []
    keys = []
    for r in rows:
        key = (r["config"], r["method"])
        if key not in keys:
            keys.append(key)
    for config, method in keys:
        sel = [r for r in rows if r["config"] == config and r["method"] == method]
        out.append({
            "config": config,
            "method": method,
            "runs": len(sel),
            "separation_rate": float(np.mean([r["separated"] for r in sel])),
            "loss": _quartiles([r[loss_key] for r in sel]),
            "loss_normalized": _quartiles([r.get("loss_normalized") for r in sel]),
            "time_ms": _quartiles([r["time_ms"] for r in sel]),
        })
    return out


def cmd_repro(args) -> int:
    if args.runs < 1:
        raise CliError("--runs must be >= 1")
    tree = args.experiment == "appendixG2"
    loss_key = "loss_variance" if tree else "loss_fitting"
    jobs = [(config, run) for config in _configs(args.experiment, args.n) for run in range(args.runs)]

    def one(job):
        config, run = job
        seed = args.seed + run
        rows = (_tree_run if tree else _flat_run)(args.experiment, config, seed)
        base = next((r[loss_key] for r in rows if r["method"] == "approx"), None)
        for r in rows:
            r.update(config=config, run=run, seed=seed)
            if base is not None and base > 0:
                r["loss_normalized"] = r[loss_key] / base
        return rows

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        rows = [r for chunk in pool.map(one, jobs) for r in chunk]

    os.makedirs(args.output, exist_ok=True)
    fields = ["config", "run", "seed", "method", loss_key]
    if not tree:
        fields.append("loss_relaxed")
    fields += ["loss_normalized", "separated", "time_ms"]
    with open(os.path.join(args.output, "runs.csv"), "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({f: r.get(f, "") for f in fields})
    _write_json(os.path.join(args.output, "summary.json"), {
        "experiment": args.experiment,
        "version": __version__,
        "params": _params(args),
        "loss": loss_key,
        "separation_target": "outliers" if not tree else "both outlier discs",
        "groups": summarize(rows, loss_key),
    })
    return 0


# ------------------------------------------------------------------ parser

def _add_algo_flags(p, k_required=True):
    p.add_argument("--k", type=int, required=k_required)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("practical", "theoretical"), default="practical")
    p.add_argument("--lambda", dest="lam", type=int, default=None,
                   help="sample size override (default: 128 for coresets, 64 for bi-criteria in practical mode)")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--c-const", dest="c_const", type=float, default=1.0,
                   help="constant of the theoretical sample-size formulas")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imbaclust", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a synthetic disc dataset as CSV (x0,x1,label)")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("--n", type=int, default=None, help="preset size parameter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cluster", help="cluster a CSV point set")
    p.add_argument("--method", choices=CLUSTER_METHODS, required=True)
    _add_algo_flags(p)
    p.add_argument("--objective", choices=("relaxed", "fitting"), default="relaxed",
                   help="loss minimized by approx / approx-on-coreset (fitting is not provable)")
    p.add_argument("--sample-size", dest="sample_size", type=int, default=DEFAULT_SAMPLE_SIZE,
                   help="silhouette sample size")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", default=None, help="labels CSV")
    p.add_argument("--report", default=None, help="JSON report (stdout when omitted)")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("coreset", help="build a weighted coreset (CSV + JSON sidecar)")
    _add_algo_flags(p)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--sidecar", default=None, help="sidecar path (default: <out>.json)")
    p.set_defaults(func=cmd_coreset)

    p = sub.add_parser("quantize", help="color-quantize a PNG/PPM image")
    p.add_argument("--method", choices=("flat", "divisive"), required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--splitter", choices=SPLITTERS, default="approx-on-coreset")
    p.add_argument("--flat-method", dest="flat_method", default="approx-on-coreset",
                   choices=("approx-on-coreset", "kmeans", "kmeanspp"))
    p.add_argument("--border-strip", dest="border_strip", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("repro", help="rerun a synthetic experiment; writes runs.csv and summary.json")
    p.add_argument("--experiment", choices=EXPERIMENTS, required=True)
    p.add_argument("--runs", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=None, help="preset size parameter (default: the published ones)")
    p.add_argument("--out", dest="output", required=True, help="output directory")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError, RuntimeError, OSError) as exc:
        print(f"imbaclust {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
