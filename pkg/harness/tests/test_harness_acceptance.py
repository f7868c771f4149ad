"""End-to-end guarantees against the core toolkit.

The core is exercised strictly as an external tool: file formats in, CLI
subprocesses out. Nothing here imports it.
"""

import shlex
import subprocess
import sys

import numpy as np

from ikit_harness import (
    MaskingPlan,
    additive_model,
    evaluate_to_table,
    ripple_model,
    save_plan,
)

CORE = [sys.executable, "-m", "ikit.cli"]


def _run_core(args):
    proc = subprocess.run(CORE + args, capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


def test_batch_sweep_bit_identical_to_core_oracle_fill(tmp_path):
    n = 8
    rng = np.random.default_rng(42)
    plan = MaskingPlan(
        x=rng.uniform(-1.0, 1.0, n),
        baseline=np.zeros(n),
        variable_map=tuple((i,) for i in range(n)),
        scalarizer="identity",
    )
    plan_path = tmp_path / "plan.json"
    save_plan(plan, plan_path)

    ours = tmp_path / "sweep.vtbl"
    evaluate_to_table(plan, ripple_model(n), batch_size=64, out_path=ours)

    theirs = tmp_path / "filled.vtbl"
    serve_cmd = (
        f"{shlex.quote(sys.executable)} -m ikit_harness serve "
        f"--plan {shlex.quote(str(plan_path))} --model ripple"
    )
    _run_core(["oracle-fill", "-n", str(n), "--cmd", serve_cmd, "--out", str(theirs)])

    assert ours.read_bytes() == theirs.read_bytes()


def test_core_shapley_on_additive_model_recovers_coefficients(tmp_path):
    n = 6
    rng = np.random.default_rng(7)
    x = rng.uniform(-2.0, 2.0, n)
    a = rng.uniform(-3.0, 3.0, n)
    plan = MaskingPlan(
        x=x,
        baseline=np.zeros(n),
        variable_map=tuple((i,) for i in range(n)),
        scalarizer="identity",
    )
    table = tmp_path / "game.json"
    evaluate_to_table(plan, additive_model(a), batch_size=16, out_path=table)

    out = _run_core(["shapley", "--in", str(table)])
    phi = np.array([float(line.split()[1]) for line in out.strip().splitlines()])
    np.testing.assert_allclose(phi, a * x, rtol=0.0, atol=1e-9)
