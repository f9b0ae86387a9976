"""Command-line front end.

    hyperdrift gen      --family ... --seed S --out inst.xnf
    hyperdrift solve    inst.xnf --policy uniform --trials T --seed S --out runs.csv
    hyperdrift drift    inst.xnf --dual --out drift.csv
    hyperdrift tau      dual.hg
    hyperdrift classify inst.xnf --dual
    hyperdrift check    coupling --seed S --trials T
    hyperdrift bench    --family triadic-cycle --sizes 6:60:6 --seed S --out bench.csv

Exit codes: 0 ok, 1 a check failed, 2 usage, 3 I/O trouble.  Stochastic
commands require --seed; identical invocations write identical bytes.
Report commands render a PNG next to the CSV unless --no-plot is given.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from fractions import Fraction
from pathlib import Path

from . import checks, drift, experiments, report
from .hypergraph import (
    Hypergraph,
    HypergraphFormatError,
    complete_graph,
    format_hypergraph,
    parse_hypergraph,
)
from .rng import SplitMix64, spawn
from .walksat import DistanceStart, FixedStart, UniformStart, mean_hitting_time
from .xorsat import (
    InstanceFormatError,
    XorSatInstance,
    format_assignment,
    format_instance,
    gen_complete,
    gen_ctd,
    gen_glued_lattice,
    gen_hnru,
    gen_random_k_uniform,
    gen_triadic_cycle,
    hnru_variables,
    hnru_witness,
    labels_to_assignment,
    parse_assignment,
    parse_instance,
    formula_hypergraph,
    triadic_dual,
)


def _load_instance(path: str) -> XorSatInstance:
    return parse_instance(Path(path).read_text())


def _load_hypergraph_arg(path: str, dual: bool) -> Hypergraph:
    text = Path(path).read_text()
    if path.endswith(".hg"):
        return parse_hypergraph(text)
    inst = parse_instance(text)
    return triadic_dual(inst) if dual else formula_hypergraph(inst)


def _parse_sizes(spec: str) -> list[int]:
    if ":" in spec:
        lo, hi, step = (int(t) for t in spec.split(":"))
        return list(range(lo, hi + 1, step))
    return [int(t) for t in spec.split(",")]


def _ctd_graph(spec: str, seed: int) -> tuple[int, list[tuple[int, int]]]:
    if spec == "k3":
        spec = "complete:3"
    if spec == "k4":
        spec = "complete:4"
    kind, _, rest = spec.partition(":")
    if kind == "complete":
        n = int(rest)
        g = complete_graph(n)
        return n, [tuple(e) for e in g.edges]
    if kind == "gnp":
        n_s, _, p_s = rest.partition(":")
        n, p = int(n_s), float(p_s)
        rng = SplitMix64(seed)
        pairs = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p
        ]
        return n, pairs
    raise ValueError(f"unknown graph spec {spec!r}")


def cmd_gen(args) -> int:
    seed = args.seed
    rng = SplitMix64(spawn(seed, 0))
    if args.family == "complete":
        z = rng.bits(args.n)
        inst = gen_complete(args.k, args.n, z)
        witness = z
    elif args.family == "hnru":
        subsets = hnru_variables(args.n, args.r)
        u = {sub: rng.below(2) for sub in subsets}
        inst = gen_hnru(args.n, args.r, u)
        witness = hnru_witness(args.n, args.r, u)
    elif args.family == "triadic-cycle":
        u = [rng.below(2) for _ in range(2 * args.m)]
        inst = gen_triadic_cycle(args.m, u)
        witness = labels_to_assignment(u)
    elif args.family == "ctd":
        n, pairs = _ctd_graph(args.graph, spawn(seed, 1))
        labels = [rng.below(2) for _ in pairs]
        inst, x0 = gen_ctd(n, pairs, labels)
        witness = 0  # all-balanced targets; the zero assignment satisfies
        Path(args.out).with_suffix(".start").write_text(format_assignment(x0, inst.n))
    elif args.family == "random-k-uniform":
        inst, witness = gen_random_k_uniform(args.n, args.m, args.k, spawn(seed, 2), connected=True)
    elif args.family == "glued-lattice":
        probe = gen_glued_lattice(args.r)
        u = [rng.below(2) for _ in range(probe.n)]
        inst = gen_glued_lattice(args.r, u)
        witness = labels_to_assignment(u)
    else:
        raise ValueError(f"unknown family {args.family!r}")
    Path(args.out).write_text(format_instance(inst))
    Path(args.out).with_suffix(".assign").write_text(format_assignment(witness, inst.n))
    if args.dual_out:
        Path(args.dual_out).write_text(format_hypergraph(triadic_dual(inst)))
    print(f"wrote {args.out}: n={inst.n} m={inst.m}")
    return 0


def _policy(spec: str, n: int):
    if spec == "uniform":
        return UniformStart()
    kind, _, rest = spec.partition(":")
    if kind == "fixed":
        return FixedStart(parse_assignment(Path(rest).read_text(), n))
    if kind == "distance":
        return DistanceStart(int(rest))
    raise ValueError(f"unknown policy {spec!r}")


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    policy = _policy(args.policy, inst.n)
    stats = mean_hitting_time(
        inst, policy, args.trials, args.seed, args.max_steps, workers=args.workers
    )
    if args.trajectory_out:
        from .walksat import _start_for_trial, trajectory_csv, walksat

        trial_seed = spawn(args.seed, 0)
        x0 = _start_for_trial(inst, policy, trial_seed)
        run = walksat(inst, x0, spawn(trial_seed, 1), args.max_steps, record=True)
        Path(args.trajectory_out).write_text(trajectory_csv(inst, run))
    rows = [
        (i, "" if s is None else s, 1 if s is None else 0)
        for i, s in enumerate(stats.steps)
    ]
    if args.out:
        report.write_csv(args.out, ("trial", "steps", "censored"), rows)
        if not args.no_plot:
            report.hitting_time_figure(
                stats.steps, args.max_steps, report.figure_path(args.out),
                f"WalkSAT trials on {Path(args.instance).name}",
            )
    done = [s for s in stats.steps if s is not None]
    summary = {
        "trials": stats.trials,
        "censored": stats.censored,
        "mean": stats.mean,
        "median": statistics.median(done) if done else None,
        "mean_capped": float(stats.mean_capped()),
    }
    print(json.dumps(summary, sort_keys=True))
    return 0


def _drift_rows_exact(h: Hypergraph) -> list[tuple]:
    prof = drift.drift_profile_exact(h)
    return [
        (
            Fraction(size, h.n),
            size,
            p.d_min,
            p.d_mean,
            p.d_max,
            p.undefined,
        )
        for size, p in sorted(prof.items())
    ]


def _drift_rows_complete(n: int, k: int) -> list[tuple]:
    prof = drift.complete_profile(n, k)
    return [
        (Fraction(size, n), size, d, d, d, 0 if d is not None else 1)
        for size, d in sorted(prof.items())
    ]


def cmd_drift(args) -> int:
    if args.family == "complete":
        rows = _drift_rows_complete(args.n, args.k)
        title = f"complete {args.k}-uniform hypergraph, n={args.n}"
    else:
        h = _load_hypergraph_arg(args.input, args.dual)
        if args.samples:
            densities = [float(t) for t in args.by_density.split(",")]
            pts = drift.drift_profile_sampled(h, densities, args.samples, args.seed)
            rows = [(p.density, p.size, None, p.mean, None, p.undefined) for p in pts]
        else:
            rows = _drift_rows_exact(h)
        title = f"odd drift profile of {Path(args.input).name}"
    report.write_csv(args.out, ("delta", "size", "min", "mean", "max", "undefined_count"), rows)
    if not args.no_plot:
        report.drift_profile_figure(rows, report.figure_path(args.out), title)
    mins = [r[2] for r in rows if r[2] is not None]
    if mins:
        print(f"min drift {float(min(mins)):.6g}")
    return 0


def cmd_tau(args) -> int:
    h = _load_hypergraph_arg(args.input, args.dual)
    value = drift.tau_odd(h, include_full_set=args.include_full_set)
    if isinstance(value, drift.Unbounded):
        print("tau: Unbounded")
    else:
        print(f"tau: {value} = {float(value):.6g}")
    return 0


def cmd_classify(args) -> int:
    if args.family == "complete":
        res = drift.classify_complete(args.n, args.k)
    else:
        h = _load_hypergraph_arg(args.input, args.dual)
        if args.samples:
            res = drift.classify_sampled(h, args.samples, args.seed)
        else:
            res = drift.classify(h)
    out = {"case": res.case.value}
    if res.delta_min is not None:
        out["delta_min"] = float(res.delta_min)
    if res.tau is not None:
        out["tau"] = "Unbounded" if isinstance(res.tau, drift.Unbounded) else float(res.tau)
    if res.eta1 is not None:
        out["eta1"] = float(res.eta1)
        out["eta2"] = float(res.eta2)
        out["delta"] = float(res.delta)
    print(json.dumps(out, sort_keys=True))
    return 0


def cmd_check(args) -> int:
    try:
        runner = checks.CHECKS[args.name]
    except KeyError:
        raise ValueError(f"unknown check {args.name!r}; available: {', '.join(sorted(checks.CHECKS))}")
    outcome = runner(args.seed, args.trials)
    for line in outcome.lines():
        print(line)
    return 0 if outcome.ok else 1


def cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    if args.family == "triadic-cycle":
        points = experiments.bench_triadic(
            sizes, args.trials, args.starts, args.seed, args.max_steps, args.workers
        )
        title = "WalkSAT on triadic-cycle instances"
    elif args.family == "complete5":
        points = experiments.bench_complete5(
            sizes, args.trials, args.seed, args.max_steps, args.workers
        )
        title = "WalkSAT on complete 5-uniform systems"
    else:
        raise ValueError(f"unknown family {args.family!r}")
    rows = [(p.size, p.trials, p.censored, p.mean_capped) for p in points]
    if args.out:
        report.write_csv(args.out, ("size", "trials", "censored", "mean_steps"), rows)
    exponent = experiments.fit_exponent(points)
    if args.out and not args.no_plot:
        report.bench_figure(rows, exponent, report.figure_path(args.out), title)
    print(
        json.dumps(
            {
                "sizes": sizes,
                "means": [p.mean_capped for p in points],
                "fit_exponent": exponent,
                "growth_ratios": experiments.growth_ratios(points),
            },
            sort_keys=True,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperdrift", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file plus witness")
    g.add_argument("--family", required=True,
                   choices=["complete", "hnru", "triadic-cycle", "ctd",
                            "random-k-uniform", "glued-lattice"])
    g.add_argument("-n", type=int, default=7)
    g.add_argument("-k", type=int, default=5)
    g.add_argument("-m", type=int, default=6)
    g.add_argument("-r", type=int, default=2)
    g.add_argument("--graph", default="k4", help="ctd graph: k3|k4|complete:N|gnp:N:P")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True)
    g.add_argument("--dual-out", default=None, help="also write the triadic dual as .hg")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run WalkSAT trials on an instance")
    s.add_argument("instance")
    s.add_argument("--policy", default="uniform", help="uniform|fixed:FILE|distance:D")
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-steps", type=int, default=10**6)
    s.add_argument("--workers", type=int, default=None)
    s.add_argument("--out", default=None, help="per-trial CSV")
    s.add_argument("--trajectory-out", default=None,
                   help="t,unsat,u CSV of the first trial's run")
    s.add_argument("--no-plot", action="store_true")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("drift", help="drift profile CSV (+PNG)")
    d.add_argument("input", nargs="?", help=".hg hypergraph or .xnf instance")
    d.add_argument("--dual", action="store_true", help="use the triadic dual of the instance")
    d.add_argument("--family", choices=["complete"], default=None,
                   help="closed-form profile instead of a file")
    d.add_argument("-n", type=int, default=200)
    d.add_argument("-k", type=int, default=5)
    d.add_argument("--by-density", default="", help="densities for sampled mode")
    d.add_argument("--samples", type=int, default=0)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--out", required=True)
    d.add_argument("--no-plot", action="store_true")
    d.set_defaults(func=cmd_drift)

    t = sub.add_parser("tau", help="odd mixing time of a regular hypergraph")
    t.add_argument("input")
    t.add_argument("--dual", action="store_true")
    t.add_argument("--include-full-set", action="store_true", default=None)
    t.set_defaults(func=cmd_tau)

    c = sub.add_parser("classify", help="drift case of a hypergraph")
    c.add_argument("input", nargs="?")
    c.add_argument("--dual", action="store_true")
    c.add_argument("--family", choices=["complete"], default=None)
    c.add_argument("-n", type=int, default=40)
    c.add_argument("-k", type=int, default=5)
    c.add_argument("--samples", type=int, default=0, help="sampled mode beyond 2^24 states")
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_classify)

    k = sub.add_parser("check", help="run a named invariant suite")
    k.add_argument("name")
    k.add_argument("--seed", type=int, default=1)
    k.add_argument("--trials", type=int, default=100)
    k.set_defaults(func=cmd_check)

    b = sub.add_parser("bench", help="scaling experiment CSV (+PNG)")
    b.add_argument("--family", required=True, choices=["triadic-cycle", "complete5"])
    b.add_argument("--sizes", required=True, help="lo:hi:step or comma list")
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--starts", type=int, default=50)
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--max-steps", type=int, default=10**6)
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("--out", default=None)
    b.add_argument("--no-plot", action="store_true")
    b.set_defaults(func=cmd_bench)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("drift", "classify") and args.family is None and not args.input:
        parser.error("give an input file or --family complete")
    try:
        return args.func(args)
    except (HypergraphFormatError, InstanceFormatError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
