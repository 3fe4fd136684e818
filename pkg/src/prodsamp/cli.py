"""Command-line front end.

Subcommands cover the full pipeline: composing product graphs, inspecting
spectra, building sampling plans, sampling/reconstructing signal files,
synthesizing bandlimited test signals, and the benchmark/study harnesses.
All indices at this boundary are 1-based; every structured output embeds
the tool version and the seed in use.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

import numpy as np

from . import __version__, bench, kernels
from .errors import ConfigError, OutOfRangeError, ProdsampError
from .graphs import ProductKind, materialize, product_graph
from .io import (
    read_matrix_market,
    read_signal,
    write_csv_table,
    write_matrix_market,
    write_signal,
)
from .product_sampling import (
    build_product_plan,
    product_plan_from_sample_sets,
    product_reconstruct,
    project_support,
)
from .signals import synthesize
from .spectral import eigendecompose, order_frequencies, product_spectrum

KINDS = {"kron": ProductKind.KRONECKER, "cart": ProductKind.CARTESIAN,
         "strong": ProductKind.STRONG}


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def _resolve(path, base_dir):
    return path if os.path.isabs(path) else os.path.join(base_dir, path)


def _read_factors(paths, base_dir):
    return [read_matrix_market(_resolve(p, base_dir)) for p in paths]


def _support_from_config(cfg, ps):
    spec = cfg.get("support")
    if not isinstance(spec, dict) or not ("tuples" in spec) ^ ("top_k" in spec):
        raise ConfigError("config needs support.tuples or support.top_k")
    if "tuples" in spec:
        tuples = [tuple(int(i) - 1 for i in t) for t in spec["tuples"]]
        return tuples
    k = int(spec["top_k"])
    if k < 1 or k > ps.n_total:
        raise OutOfRangeError(
            f"top_k = {k} outside [1, {ps.n_total}] for this product graph"
        )
    return list(itertools.islice(order_frequencies(ps), k))


def _experiment_setup(cfg, base_dir):
    for key in ("factors", "kind"):
        if key not in cfg:
            raise ConfigError(f"config missing {key!r}")
    if cfg["kind"] not in KINDS:
        raise ConfigError(f"unknown kind {cfg['kind']!r}; use kron|cart|strong")
    factors = _read_factors(cfg["factors"], base_dir)
    pg = product_graph(factors, KINDS[cfg["kind"]])
    ps = product_spectrum(pg)
    return pg, ps


def cmd_product(args):
    factors = _read_factors(args.factors, os.getcwd())
    pg = product_graph(factors, KINDS[args.kind])
    g = materialize(pg, max_nodes=bench.dense_cap())
    write_matrix_market(args.output, g, comments=[f"prodsamp {__version__}"])
    print(f"wrote {g.n}x{g.n} {args.kind} product to {args.output}")
    return 0


def cmd_spectrum(args):
    g = read_matrix_market(args.graph)
    s = eigendecompose(g)
    top = args.top if args.top is not None else g.n
    if top < 1 or top > g.n:
        raise OutOfRangeError(f"--top {top} outside [1, {g.n}]")
    rows = [(i + 1, f"{s.eigenvalues[i]:.17g}") for i in range(top)]
    if args.output:
        write_csv_table(
            args.output, ["index", "eigenvalue"], rows,
            comments=[f"prodsamp {__version__}"],
        )
    else:
        print("index,eigenvalue")
        for idx, lam in rows:
            print(f"{idx},{lam}")
    return 0


def cmd_plan(args):
    cfg = _load_json(args.config)
    base_dir = os.path.dirname(os.path.abspath(args.config))
    pg, ps = _experiment_setup(cfg, base_dir)
    support = _support_from_config(cfg, ps)
    seed = cfg.get("seed")
    strategy = cfg.get("strategy", "pivoted-qr")
    plan = build_product_plan(ps, support, strategy=strategy, seed=seed)
    r_sets, s_count = project_support(support)
    doc = {
        "version": __version__,
        "seed": seed,
        "strategy": strategy,
        "kind": cfg["kind"],
        "factors": [_resolve(p, base_dir) for p in cfg["factors"]],
        "factor_sizes": list(pg.shape),
        "support": [[i + 1 for i in t] for t in plan.product_support],
        "factor_supports": [[i + 1 for i in r] for r in r_sets],
        "factor_sample_sets": [
            [i + 1 for i in p.sample_set] for p in plan.factor_plans
        ],
        "sample_count": plan.s,
        "bandwidth": plan.k,
        "sigma_min": [p.sigma_min for p in plan.factor_plans],
    }
    assert s_count == plan.s
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    print(
        f"plan: S = {plan.s} samples for bandwidth K = {plan.k} "
        f"(bounds {plan.k} <= S <= {plan.k ** pg.j_factors})"
    )
    return 0


def _load_plan(path):
    doc = _load_json(path)
    for key in ("factors", "factor_sizes", "support", "factor_sample_sets", "kind"):
        if key not in doc:
            raise ConfigError(f"plan file missing {key!r}")
    return doc


def cmd_sample(args):
    doc = _load_plan(args.plan)
    x = read_signal(args.signal, args.format)
    sizes = [int(n) for n in doc["factor_sizes"]]
    n_total = int(np.prod(sizes))
    if x.size != n_total:
        raise ConfigError(
            f"signal has {x.size} values, product graph has {n_total} nodes"
        )
    flat = np.zeros(1, dtype=np.int64)
    for j, (n_j, nodes) in enumerate(zip(sizes, doc["factor_sample_sets"])):
        idx = np.asarray([int(i) - 1 for i in nodes], dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n_j):
            raise ConfigError(
                f"factor {j + 1}: sample node outside 1..{n_j} in plan file"
            )
        flat = (flat[:, None] * n_j + idx[None, :]).reshape(-1)
    write_signal(
        args.output, x[flat], fmt=args.format,
        comments=[f"prodsamp {__version__}", f"seed={doc.get('seed')}"],
    )
    print(f"sampled {flat.size} of {n_total} nodes -> {args.output}")
    return 0


def cmd_reconstruct(args):
    doc = _load_plan(args.plan)
    x_m = read_signal(args.samples, args.format)
    factors = _read_factors(doc["factors"], os.path.dirname(os.path.abspath(args.plan)))
    pg = product_graph(factors, KINDS[doc["kind"]])
    ps = product_spectrum(pg)
    support = [tuple(int(i) - 1 for i in t) for t in doc["support"]]
    sample_sets = [
        tuple(int(i) - 1 for i in nodes) for nodes in doc["factor_sample_sets"]
    ]
    plan = product_plan_from_sample_sets(ps, support, sample_sets)
    if x_m.size != plan.s:
        raise ConfigError(f"plan takes {plan.s} samples, file has {x_m.size}")
    x_rec = product_reconstruct(x_m, plan)
    write_signal(
        args.output, x_rec, fmt=args.format,
        comments=[f"prodsamp {__version__}", f"seed={doc.get('seed')}"],
    )
    print(f"reconstructed {x_rec.size} node values -> {args.output}")
    return 0


def cmd_synth(args):
    cfg = _load_json(args.config)
    base_dir = os.path.dirname(os.path.abspath(args.config))
    _, ps = _experiment_setup(cfg, base_dir)
    support = _support_from_config(cfg, ps)
    seed = args.seed if args.seed is not None else cfg.get("seed")
    sig = synthesize(ps, support, seed=seed)
    write_signal(
        args.output, sig.x, fmt=args.format,
        comments=[f"prodsamp {__version__}", f"seed={seed}"],
    )
    print(f"synthesized bandwidth-{len(support)} signal on {sig.x.size} nodes")
    return 0


def cmd_bench(args):
    cfg = _load_json(args.config)
    records = bench.bench_pipeline(
        cfg, base_dir=os.path.dirname(os.path.abspath(args.config))
    )
    write_csv_table(
        args.output,
        bench.BENCH_COLUMNS,
        [bench.record_row(r) for r in records],
        comments=[f"prodsamp {__version__}", f"seed={cfg.get('seed', 0)}"],
    )
    print(f"wrote {len(records)} bench records to {args.output}")
    for r in records:
        print(
            f"  {r.scenario} [{r.pipeline}] N={r.n_total} K={r.k} S={r.s} "
            f"spectral={r.timings['spectral']:.4f}s err={r.recovery_error:.2e}"
        )
    return 0


def cmd_study_cartesian(args):
    rows = bench.cartesian_smooth_study(args.n1, args.n2, args.kmax)
    write_csv_table(
        args.output,
        ["K", "S", "K_plus_J", "bound_holds"],
        [(r.k, r.s, r.k_plus_j, str(r.bound_holds).lower()) for r in rows],
        comments=[
            f"prodsamp {__version__}",
            f"path factors P{args.n1} (+) P{args.n2}, "
            "ordering: descending adjacency-eigenvalue sums",
            "S <= K + J is reported, not asserted",
        ],
    )
    violations = sum(not r.bound_holds for r in rows)
    print(
        f"study: K = 1..{args.kmax}, {violations} bound violation(s); "
        f"table -> {args.output}"
    )
    return 0


def cmd_bench_kernels(args):
    records = bench.bench_kernels(reps=args.reps, seed=args.seed)
    write_csv_table(
        args.output,
        ["case", "backend", "best_seconds", "max_abs_diff_vs_python"],
        [
            (r.case, r.backend, f"{r.best_seconds:.9f}", f"{r.max_abs_diff:.3e}")
            for r in records
        ],
        comments=[
            f"prodsamp {__version__}",
            f"seed={args.seed}",
            f"active backend: {kernels.backend_name()}",
        ],
    )
    print(f"wrote {len(records)} kernel records to {args.output}")
    by_case = {}
    for r in records:
        by_case.setdefault(r.case, {})[r.backend] = r.best_seconds
    for case, times in by_case.items():
        if "compiled" in times and "python" in times:
            print(
                f"  {case}: compiled {times['compiled']:.2e}s, "
                f"python {times['python']:.2e}s, "
                f"speedup {times['python'] / times['compiled']:.2f}x"
            )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="prodsamp",
        description="Sampling and recovery of bandlimited signals on product graphs.",
    )
    parser.add_argument("--version", action="version", version=f"prodsamp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("product", help="materialize a product graph to Matrix Market")
    p.add_argument("--kind", choices=sorted(KINDS), required=True)
    p.add_argument("factors", nargs="+", help="factor graph files (Matrix Market)")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("spectrum", help="print the top-K eigenpairs of a graph")
    p.add_argument("graph")
    p.add_argument("--top", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("plan", help="build a factorized sampling plan")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("sample", help="gather a signal at the plan's sample nodes")
    p.add_argument("--plan", required=True)
    p.add_argument("--signal", required=True)
    p.add_argument("--format", choices=["csv", "f64le"], default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("reconstruct", help="recover a full signal from samples")
    p.add_argument("--plan", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--format", choices=["csv", "f64le"], default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("synth", help="synthesize a bandlimited signal")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=["csv", "f64le"], default="csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("bench", help="factorized vs dense pipeline benchmark")
    p.add_argument("--config", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("study-cartesian", help="Cartesian smooth-signal sample study")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_study_cartesian)

    p = sub.add_parser("bench-kernels", help="compare kernel backends")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_bench_kernels)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ProdsampError as exc:
        print(f"prodsamp {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"prodsamp {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
