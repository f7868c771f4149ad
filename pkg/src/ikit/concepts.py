"""Salient-versus-noise split of a decomposition, plus report rendering.

A decomposition leaves 2^(n+1) candidate effects (one AND and one OR per
subset).  Most carry negligible weight; the report keeps the ones that
clear a threshold policy and states how much of the total effect mass
they cover.  Empty-subset entries are kept but flagged as bias: they
encode the game's offset, not collaboration between variables.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .decompose import DecompositionResult
from .interactions import AND, OR
from .lattice import members_of
from .table import default_players

DEFAULT_THETA = 0.05

_KIND_RANK = {AND: 0, OR: 1}


@dataclass(frozen=True)
class Concept:
    mask: int
    kind: str
    members: tuple
    effect: float
    share: float
    bias: bool


@dataclass(frozen=True)
class ConceptReport:
    n: int
    players: tuple
    concepts: tuple
    noise_floor: float
    threshold_policy: dict
    coverage: float


def _entries(result: DecompositionResult):
    """All (kind, mask, effect) candidates in deterministic salience order."""
    rows = []
    for kind, vec in ((AND, result.i_and_hat), (OR, result.i_or_hat)):
        for mask, effect in enumerate(vec.effects):
            rows.append((kind, mask, float(effect)))
    rows.sort(key=lambda r: (-abs(r[2]), r[1], _KIND_RANK[r[0]]))
    return rows


def extract_salient(
    result: DecompositionResult,
    theta: float | None = None,
    top_k: int | None = None,
    players=None,
) -> ConceptReport:
    """Keep effects by relative magnitude (theta) or by count (top_k).

    The ratio policy keeps every effect within theta of the largest
    magnitude, ties included; top_k keeps exactly k, breaking magnitude
    ties by mask and then AND before OR.
    """
    if theta is not None and top_k is not None:
        raise ValueError("choose either theta or top_k, not both")
    n = result.i_and_hat.n
    players = tuple(players) if players is not None else default_players(n)
    rows = _entries(result)
    total = sum(abs(e) for _, _, e in rows)

    if top_k is not None:
        if not 0 <= top_k <= len(rows):
            raise ValueError(f"top_k must be in [0, {len(rows)}], got {top_k}")
        kept = rows[:top_k]
        policy = {
            "policy": "top_k",
            "k": top_k,
            "cutoff": abs(kept[-1][2]) if kept else 0.0,
        }
    else:
        theta = DEFAULT_THETA if theta is None else theta
        if not 0.0 <= theta <= 1.0:
            raise ValueError(f"theta must be in [0, 1], got {theta}")
        peak = abs(rows[0][2]) if rows else 0.0
        cutoff = theta * peak
        kept = [r for r in rows if abs(r[2]) >= cutoff]
        policy = {"policy": "ratio", "theta": theta, "cutoff": cutoff}

    dropped = rows[len(kept) :] if top_k is not None else [
        r for r in rows if abs(r[2]) < policy["cutoff"]
    ]
    noise_floor = max((abs(e) for _, _, e in dropped), default=0.0)
    covered = sum(abs(e) for _, _, e in kept)
    concepts = tuple(
        Concept(
            mask=mask,
            kind=kind,
            members=tuple(players[i] for i in members_of(mask, n)),
            effect=effect,
            share=abs(effect) / total if total else 0.0,
            bias=mask == 0,
        )
        for kind, mask, effect in kept
    )
    return ConceptReport(
        n=n,
        players=players,
        concepts=concepts,
        noise_floor=noise_floor,
        threshold_policy=policy,
        coverage=covered / total if total else 1.0,
    )


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------


def _policy_line(policy: dict) -> str:
    if policy["policy"] == "ratio":
        return f"policy: ratio theta={policy['theta']!r} cutoff={policy['cutoff']!r}"
    return f"policy: top_k k={policy['k']} cutoff={policy['cutoff']!r}"


def render_report(report: ConceptReport, format: str = "text") -> bytes:
    if format == "json":
        doc = report_to_doc(report)
        return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
    if format != "text":
        raise ValueError(f"unknown report format: {format!r}")
    total = 2 ** (report.n + 1)
    lines = [
        f"salient concepts: {len(report.concepts)} of {total} effects,"
        f" coverage {report.coverage!r}",
        f"{_policy_line(report.threshold_policy)} noise_floor={report.noise_floor!r}",
    ]
    if not report.concepts:
        lines.append("no salient concepts")
    for c in report.concepts:
        subset = "{" + ", ".join(c.members) + "}"
        tail = " bias" if c.bias else ""
        lines.append(f"{c.kind} {subset} {c.effect!r} {c.share!r}{tail}")
    return ("\n".join(lines) + "\n").encode("utf-8")


def report_to_doc(report: ConceptReport) -> dict:
    return {
        "format": "concept-report",
        "version": 1,
        "n": report.n,
        "players": list(report.players),
        "threshold_policy": report.threshold_policy,
        "noise_floor": report.noise_floor,
        "coverage": report.coverage,
        "concepts": [asdict(c) | {"members": list(c.members)} for c in report.concepts],
    }


def load_report(source) -> ConceptReport:
    """Inverse of the JSON rendering; round-trips to an equal report."""
    if isinstance(source, (bytes, str)):
        doc = json.loads(source)
    else:
        doc = source
    if doc.get("format") != "concept-report":
        raise ValueError('missing "format": "concept-report" header')
    concepts = tuple(
        Concept(
            mask=int(c["mask"]),
            kind=c["kind"],
            members=tuple(c["members"]),
            effect=float(c["effect"]),
            share=float(c["share"]),
            bias=bool(c["bias"]),
        )
        for c in doc["concepts"]
    )
    return ConceptReport(
        n=int(doc["n"]),
        players=tuple(doc["players"]),
        concepts=concepts,
        noise_floor=float(doc["noise_floor"]),
        threshold_policy=doc["threshold_policy"],
        coverage=float(doc["coverage"]),
    )


def plot_csv(result: DecompositionResult) -> str:
    """Magnitude spectrum (rank, |effect|) across both effect vectors."""
    lines = ["rank,abs_effect"]
    for rank, (_, _, effect) in enumerate(_entries(result), start=1):
        lines.append(f"{rank},{abs(effect)!r}")
    return "\n".join(lines) + "\n"
