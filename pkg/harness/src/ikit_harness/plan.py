"""Masking plans: how n players map onto raw model-input positions.

A plan fixes the sample ``x``, the per-position baseline ``baseline``, and
``variable_map`` — for each player, the tuple of input positions that player
controls.  Masking player i means overwriting its positions with the
baseline values.  Positions not claimed by any player are static context
and are never touched.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

PLAN_FORMAT = "masking-plan"
PLAN_VERSION = 1


class PlanError(ValueError):
    """Inconsistent masking plan or mask out of range."""


@dataclass(frozen=True, eq=False)
class MaskingPlan:
    x: np.ndarray
    baseline: np.ndarray
    variable_map: tuple[tuple[int, ...], ...]
    scalarizer: str

    def __post_init__(self):
        x = np.ascontiguousarray(np.asarray(self.x, dtype=np.float64))
        r = np.ascontiguousarray(np.asarray(self.baseline, dtype=np.float64))
        if x.ndim != 1:
            raise PlanError(f"sample must be a flat vector, got shape {x.shape}")
        if r.shape != x.shape:
            raise PlanError(
                f"baseline length {r.size} does not match sample length {x.size}"
            )
        groups = []
        seen: set[int] = set()
        for i, group in enumerate(self.variable_map):
            positions = tuple(int(p) for p in group)
            if not positions:
                raise PlanError(f"player {i} controls no input positions")
            for p in positions:
                if not 0 <= p < x.size:
                    raise PlanError(
                        f"player {i} position {p} outside input of length {x.size}"
                    )
                if p in seen:
                    raise PlanError(f"position {p} claimed by more than one player")
                seen.add(p)
            groups.append(positions)
        if not isinstance(self.scalarizer, str) or not self.scalarizer:
            raise PlanError("scalarizer must be a non-empty name")
        x.flags.writeable = False
        r.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "baseline", r)
        object.__setattr__(self, "variable_map", tuple(groups))

    @property
    def n(self) -> int:
        return len(self.variable_map)

    def digest(self) -> str:
        """sha256 of the canonical JSON form; keys sidecar files honest."""
        blob = json.dumps(plan_to_doc(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def build_masked_batch(plan: MaskingPlan, masks) -> np.ndarray:
    """One model input per mask: kept players from ``x``, the rest baselined."""
    masks = [int(m) for m in masks]
    size = 1 << plan.n
    for m in masks:
        if not 0 <= m < size:
            raise PlanError(f"mask {m} out of range for {plan.n} players")
    batch = np.tile(plan.x, (len(masks), 1))
    groups = [np.array(g, dtype=np.intp) for g in plan.variable_map]
    for row, m in enumerate(masks):
        for i, idx in enumerate(groups):
            if not (m >> i) & 1:
                batch[row, idx] = plan.baseline[idx]
    return batch


def plan_to_doc(plan: MaskingPlan) -> dict:
    return {
        "format": PLAN_FORMAT,
        "version": PLAN_VERSION,
        "x": [float(v) for v in plan.x],
        "baseline": [float(v) for v in plan.baseline],
        "variable_map": [list(g) for g in plan.variable_map],
        "scalarizer": plan.scalarizer,
    }


def plan_from_doc(doc: dict) -> MaskingPlan:
    if doc.get("format") != PLAN_FORMAT:
        raise PlanError(f"not a masking plan: format={doc.get('format')!r}")
    return MaskingPlan(
        x=np.asarray(doc["x"], dtype=np.float64),
        baseline=np.asarray(doc["baseline"], dtype=np.float64),
        variable_map=tuple(tuple(g) for g in doc["variable_map"]),
        scalarizer=doc["scalarizer"],
    )


def save_plan(plan: MaskingPlan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan_to_doc(plan), fh, indent=2)
        fh.write("\n")


def load_plan(path) -> MaskingPlan:
    with open(path, "r", encoding="utf-8") as fh:
        return plan_from_doc(json.load(fh))
