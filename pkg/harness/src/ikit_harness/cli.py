"""Command-line front end: sweep a model to a table, or serve it live."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .evaluate import evaluate_to_table
from .models import build_model
from .plan import MaskingPlan, load_plan, save_plan
from .serve import serve_oracle


def cmd_eval(args) -> int:
    plan = load_plan(args.plan)
    model = build_model(args.model, plan.x.size)
    evaluate_to_table(
        plan,
        model,
        batch_size=args.batch_size,
        out_path=args.out,
        format=args.format,
        resume=not args.fresh,
    )
    return 0


def cmd_serve(args) -> int:
    plan = load_plan(args.plan)
    return serve_oracle(plan, build_model(args.model, plan.x.size))


def cmd_example_plan(args) -> int:
    rng = np.random.default_rng(args.seed)
    plan = MaskingPlan(
        x=rng.uniform(-1.0, 1.0, args.n),
        baseline=np.zeros(args.n),
        variable_map=tuple((i,) for i in range(args.n)),
        scalarizer="identity",
    )
    save_plan(plan, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ikit-harness",
        description="Enumerate masked model inputs and emit value tables "
        "in the core interchange formats.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("eval", help="sweep all masks and write a table file")
    p.set_defaults(func=cmd_eval)
    p.add_argument("--plan", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--format", choices=("auto", "json", "binary"), default="auto")
    p.add_argument("--fresh", action="store_true", help="ignore any progress sidecar")

    p = sub.add_parser("serve", help="answer EVAL/QUIT requests on stdin")
    p.set_defaults(func=cmd_serve)
    p.add_argument("--plan", required=True)
    p.add_argument("--model", required=True)

    p = sub.add_parser("example-plan", help="write a one-position-per-player demo plan")
    p.set_defaults(func=cmd_example_plan)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if not exc.code else 1
    try:
        return args.func(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
