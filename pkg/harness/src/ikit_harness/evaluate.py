"""Sweep a model over all 2**n masked inputs and write a value table.

Evaluation walks masks in ascending order in fixed-size batches.  After
every batch a progress sidecar (``<out>.progress``) records the last
completed contiguous mask together with the values so far, so an
interrupted sweep resumes where it stopped and produces a byte-identical
table.  The sidecar is removed once the table is written.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .plan import MaskingPlan, PlanError, build_masked_batch
from .tableio import write_table_file

PROGRESS_FORMAT = "harness-progress"


class ModelEvalError(RuntimeError):
    """The model (or its scalarized output) failed for a specific mask."""


# ---------------------------------------------------------------------------
# Scalarizers: named reductions of raw model output to one float per row.
# ---------------------------------------------------------------------------


def _rows(out, count):
    arr = np.asarray(out, dtype=np.float64)
    if arr.ndim == 0 and count == 1:
        arr = arr.reshape(1)
    if arr.shape[:1] != (count,):
        raise ModelEvalError(
            f"model returned {arr.shape[0] if arr.ndim else 0} outputs "
            f"for a batch of {count}"
        )
    return arr.reshape(count, -1)


def get_scalarizer(name: str):
    """Resolve a scalarizer name; raises PlanError for unknown names."""
    if name == "identity":

        def identity(out, count):
            arr = _rows(out, count)
            if arr.shape[1] != 1:
                raise ModelEvalError(
                    f"identity scalarizer needs scalar outputs, got {arr.shape[1]} per row"
                )
            return arr[:, 0]

        return identity
    if name == "sum":
        return lambda out, count: _rows(out, count).sum(axis=1)
    if name.startswith("index:"):
        k = int(name.split(":", 1)[1])

        def pick(out, count):
            arr = _rows(out, count)
            if not 0 <= k < arr.shape[1]:
                raise ModelEvalError(
                    f"scalarizer {name!r}: output has {arr.shape[1]} components"
                )
            return arr[:, k]

        return pick
    raise PlanError(f"unknown scalarizer {name!r}")


# ---------------------------------------------------------------------------
# Progress sidecar.
# ---------------------------------------------------------------------------


def progress_path(out_path) -> str:
    return str(out_path) + ".progress"


def _save_progress(path, plan, completed_through, values):
    doc = {
        "format": PROGRESS_FORMAT,
        "version": 1,
        "n": plan.n,
        "plan_sha256": plan.digest(),
        "completed_through": int(completed_through),
        "values": [float(v) for v in values],
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)
    os.replace(tmp, path)


def _load_progress(path, plan):
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != PROGRESS_FORMAT:
        raise ModelEvalError(f"{path} is not a progress sidecar")
    if doc.get("n") != plan.n or doc.get("plan_sha256") != plan.digest():
        raise ModelEvalError(
            f"progress sidecar {path} belongs to a different plan; "
            "pass resume=False to discard it"
        )
    done = int(doc["completed_through"])
    values = np.asarray(doc["values"], dtype=np.float64)
    if values.size != done + 1:
        raise ModelEvalError(f"progress sidecar {path} is truncated")
    return done, values


def _locate_failure(plan, model, masks, batch_exc):
    """Re-run a failed batch row by row to name the guilty mask."""
    for m in masks:
        try:
            model(build_masked_batch(plan, [m]))
        except Exception as exc:
            raise ModelEvalError(f"model failed at mask {m}: {exc}") from exc
    raise ModelEvalError(
        f"model failed for batch [{masks[0]}, {masks[-1]}]: {batch_exc}"
    ) from batch_exc


# ---------------------------------------------------------------------------
# The sweep.
# ---------------------------------------------------------------------------


def evaluate_to_table(
    plan: MaskingPlan,
    model,
    batch_size: int,
    out_path,
    format: str = "auto",
    resume: bool = True,
) -> str:
    """Fill all 2**n values in mask order and write the table file.

    ``model`` maps a ``(batch, positions)`` float array to per-row outputs;
    the plan's scalarizer reduces each row's output to one float.  Returns
    the output path.
    """
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    scalarize = get_scalarizer(plan.scalarizer)
    size = 1 << plan.n
    values = np.empty(size, dtype=np.float64)
    sidecar = progress_path(out_path)
    start = 0
    if os.path.exists(sidecar):
        if resume:
            done, prior = _load_progress(sidecar, plan)
            values[: done + 1] = prior
            start = done + 1
        else:
            os.remove(sidecar)

    while start < size:
        stop = min(start + batch_size, size)
        masks = list(range(start, stop))
        batch = build_masked_batch(plan, masks)
        try:
            out = model(batch)
        except Exception as exc:  # noqa: BLE001 - re-raised with the mask
            if start:
                _save_progress(sidecar, plan, start - 1, values[:start])
            _locate_failure(plan, model, masks, exc)
        scalars = scalarize(out, len(masks))
        bad = np.flatnonzero(~np.isfinite(scalars))
        if bad.size:
            raise ModelEvalError(f"non-finite model output at mask {masks[bad[0]]}")
        values[start:stop] = scalars
        _save_progress(sidecar, plan, stop - 1, values[:stop])
        start = stop

    write_table_file(
        out_path,
        plan.n,
        values,
        baseline_note=f"scalarizer={plan.scalarizer}",
        format=format,
    )
    if os.path.exists(sidecar):
        os.remove(sidecar)
    return str(out_path)
