"""Command-line front end.

Every subcommand is a pure function of its input files and flags, and
numeric output uses round-trippable float formatting, so repeated runs
are byte-identical.  Exit codes: 0 success, 1 bad input, 2 numerical
guard tripped (a result failed its own consistency check).
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .concepts import extract_salient, render_report
from .decompose import (
    DecomposerConfig,
    decompose,
    decomposition_to_doc,
    load_decomposition,
    mixed_faithfulness_error,
    tau_bounds,
    trace_csv,
)
from .interactions import and_interactions, interactions_to_doc, or_interactions, verify_axioms
from .lattice import apply_t_and, apply_t_or, check_players, members_of
from .shapley import shapley_taylor, shapley_values
from .synthetic import dense_t_and, load_spec, generate_game, random_game
from .table import read_table, subprocess_oracle_fill, write_table


class GuardError(RuntimeError):
    """A computed result failed its internal numerical consistency check."""


def _write_bytes(path, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def _write_json(path, doc: dict) -> None:
    _write_bytes(path, (json.dumps(doc, indent=2) + "\n").encode("utf-8"))


def _subset_label(mask: int, players) -> str:
    names = [players[i] for i in members_of(mask, len(players))] if players else []
    return "{" + ", ".join(names) + "}"


# ---------------------------------------------------------------------------
# Subcommand handlers.
# ---------------------------------------------------------------------------


def cmd_and(args) -> int:
    vt = read_table(args.infile)
    _write_json(args.out, interactions_to_doc(and_interactions(vt), vt))
    return 0


def cmd_or(args) -> int:
    vt = read_table(args.infile)
    _write_json(args.out, interactions_to_doc(or_interactions(vt), vt))
    return 0


def cmd_shapley(args) -> int:
    vt = read_table(args.infile)
    av = shapley_values(vt)
    for label, value in zip(vt.players, av.phi):
        print(f"{label} {float(value)!r}")
    return 0


def cmd_taylor(args) -> int:
    vt = read_table(args.infile)
    table = shapley_taylor(vt, args.k)
    for mask in range(vt.values.size):
        if bin(mask).count("1") <= args.k:
            label = _subset_label(mask, vt.players)
            print(f"{mask} {label} {float(table.entries[mask])!r}")
    return 0


def cmd_decompose(args) -> int:
    vt = read_table(args.infile)
    config = DecomposerConfig(
        max_iters=args.max_iters,
        step_size=args.step,
        tau_ratio=args.tau_ratio,
        seed=args.seed,
        method=args.method,
    )
    result = decompose(vt, config)
    tau_max = float(tau_bounds(vt, config).max(initial=0.0))
    err = mixed_faithfulness_error(vt, result)
    scale = max(1.0, float(np.abs(vt.values).max(initial=0.0)))
    if err > tau_max + 1e-9 * scale:
        raise GuardError(
            f"mixed reconstruction error {err} exceeds the error budget {tau_max}"
        )
    _write_json(args.out, decomposition_to_doc(result, vt, config))
    if args.trace:
        _write_bytes(args.trace, trace_csv(result).encode("utf-8"))
    return 0


def cmd_report(args) -> int:
    with open(args.infile, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    result = load_decomposition(doc)
    report = extract_salient(
        result, theta=args.theta, top_k=args.top_k, players=doc.get("players")
    )
    sys.stdout.buffer.write(render_report(report, args.format))
    sys.stdout.buffer.flush()
    return 0


def cmd_verify(args) -> int:
    vt = read_table(args.infile)
    report = verify_axioms(vt, rng_seed=args.seed)
    for line in report.lines():
        print(line)
    if not report.passed:
        raise GuardError(
            f"axiom deviation {max(report.deviations.values())} exceeds "
            f"{report.tolerance}"
        )
    return 0


def cmd_synth(args) -> int:
    spec = load_spec(args.spec)
    vt, (gt_and, gt_or) = generate_game(spec)
    write_table(vt, args.out)
    if args.truth:
        _write_json(
            args.truth,
            {
                "format": "synth-truth",
                "version": 1,
                "n": spec.n,
                "and": interactions_to_doc(gt_and, vt)["records"],
                "or": interactions_to_doc(gt_or, vt)["records"],
            },
        )
    return 0


def cmd_oracle_fill(args) -> int:
    vt = subprocess_oracle_fill(args.n, args.cmd, timeout=args.timeout)
    write_table(vt, args.out)
    return 0


def _best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(args) -> int:
    n = args.n
    check_players(n)
    v = random_game(n, 1.0, seed=0).values
    print(f"fast and n={n}: {_best_time(lambda: apply_t_and(v), 5):.6f} s")
    print(f"fast or n={n}: {_best_time(lambda: apply_t_or(v), 5):.6f} s")
    m = min(n, 12)
    w = random_game(m, 1.0, seed=0).values
    dense = dense_t_and(m)
    dense_t = _best_time(lambda: dense @ w, 3)
    fast_t = _best_time(lambda: apply_t_and(w), 5)
    print(f"dense matvec n={m}: {dense_t:.6f} s")
    print(f"speedup at n={m}: {dense_t / fast_t:.1f}x")
    return 0


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ikit",
        description="AND-OR interaction extraction and sparse decomposition "
        "for set functions on all 2^n variable subsets.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        p.set_defaults(func=func)
        return p

    p = add("and", cmd_and, "extract AND interaction effects to JSON")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("or", cmd_or, "extract OR interaction effects to JSON")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)

    p = add("shapley", cmd_shapley, "print per-player Shapley values")
    p.add_argument("--in", dest="infile", required=True)

    p = add("taylor", cmd_taylor, "print Shapley-Taylor indices up to order k")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("-k", type=int, required=True)

    p = add("decompose", cmd_decompose, "solve the sparse AND-OR split")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tau-ratio", type=float, default=0.05)
    p.add_argument("--max-iters", type=int, default=20000)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--method", choices=("auto", "subgradient", "exact"), default="auto")
    p.add_argument("--trace", default=None, help="also write the objective trace CSV")

    p = add("report", cmd_report, "list salient concepts of a decomposition")
    p.add_argument("--in", dest="infile", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--theta", type=float, default=None)
    group.add_argument("--top-k", dest="top_k", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = add("verify", cmd_verify, "check the interaction axioms on a table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = add("synth", cmd_synth, "generate a game from a planted-effect spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--truth", default=None, help="also write ground-truth effects")

    p = add("oracle-fill", cmd_oracle_fill, "fill a table by querying an oracle process")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--cmd", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--timeout", type=float, default=30.0)

    p = add("bench", cmd_bench, "time the fast transforms against dense matvec")
    p.add_argument("-n", type=int, required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        return args.func(args)
    except GuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
