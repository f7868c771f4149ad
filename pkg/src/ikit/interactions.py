"""AND/OR interaction extraction, faithfulness checks, and the axiom suite.

An AND interaction vector holds the Harsanyi dividends of a game: summing
the effects of all subsets of T reproduces v(T).  An OR interaction vector
holds the dual effects: v(T) equals the empty-set effect plus the effects
of every subset that intersects T.  Both claims hold exactly (up to float
rounding) and are enforced here as testable laws rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import (
    apply_t_or,
    as_lattice,
    members_of,
    mobius_transform,
    zeta_transform,
)
from .table import ValueTable

AND = "AND"
OR = "OR"


@dataclass(frozen=True, eq=False)
class InteractionVector:
    """2^n interaction effects of one kind, in ascending mask order."""

    n: int
    kind: str
    effects: np.ndarray

    def __post_init__(self):
        if self.kind not in (AND, OR):
            raise ValueError(f"kind must be AND or OR, got {self.kind!r}")
        eff = as_lattice(self.effects, self.n).copy()
        eff.flags.writeable = False
        object.__setattr__(self, "effects", eff)


def and_interactions(vt: ValueTable) -> InteractionVector:
    """Harsanyi dividends of the game: the Moebius transform of v."""
    return InteractionVector(vt.n, AND, mobius_transform(vt.values))


def or_interactions(vt: ValueTable) -> InteractionVector:
    """OR effects: v(empty) at the empty set, else the negated Moebius
    transform of the complement-reindexed game."""
    return InteractionVector(vt.n, OR, apply_t_or(vt.values))


def _submasks(mask: int):
    """All submasks of ``mask``, descending, ending with 0."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def and_reconstruct(iv: InteractionVector, t: int) -> float:
    """Triggered-AND sum: effects of every S contained in T."""
    if iv.kind != AND:
        raise ValueError(f"and_reconstruct needs an AND vector, got {iv.kind}")
    eff = iv.effects
    return float(sum(eff[s] for s in _submasks(t)))


def or_reconstruct(iv: InteractionVector, t: int) -> float:
    """Triggered-OR sum: effects of the empty set plus every S hitting T.

    Computed as (total over nonempty S) minus the nonempty submasks of the
    complement, which costs O(2^(n-|T|)).
    """
    if iv.kind != OR:
        raise ValueError(f"or_reconstruct needs an OR vector, got {iv.kind}")
    eff = iv.effects
    total = float(np.sum(eff[1:]))
    comp = ((1 << iv.n) - 1) ^ t
    missed = sum(eff[s] for s in _submasks(comp) if s != 0)
    return float(eff[0] + total - missed)


def reconstruct_all(iv: InteractionVector) -> np.ndarray:
    """Reconstructed game values at every subset, via one zeta transform."""
    if iv.kind == AND:
        return zeta_transform(iv.effects)
    body = iv.effects.copy()
    head = body[0]
    body[0] = 0.0
    total = body.sum()
    # sum over S intersecting T = total - sum over nonempty S inside N\T
    return head + total - zeta_transform(body)[::-1]


def mixed_reconstruct(i_and: np.ndarray, i_or: np.ndarray) -> np.ndarray:
    """Game values implied by a joint AND/OR effect pair (both triggered)."""
    i_and = as_lattice(i_and)
    i_or = as_lattice(i_or)
    body = i_or.copy()
    head = body[0]
    body[0] = 0.0
    return zeta_transform(i_and) + head + body.sum() - zeta_transform(body)[::-1]


def faithfulness_error(vt: ValueTable, iv: InteractionVector) -> float:
    """Worst-case reconstruction error over all 2^n subsets."""
    return float(np.max(np.abs(vt.values - reconstruct_all(iv))))


# ---------------------------------------------------------------------------
# Axiom suite.  Dummy and symmetric games are constructed to satisfy the
# axiom hypotheses (random games almost never do); the other axioms are
# algebraic identities checked on the given game directly.
# ---------------------------------------------------------------------------

AXIOM_NAMES = (
    "efficiency",
    "linearity",
    "dummy",
    "symmetry",
    "anonymity",
    "recursive",
    "interaction_distribution",
)

DEFAULT_AXIOM_TOL = 1e-9


@dataclass(frozen=True)
class AxiomReport:
    n: int
    deviations: dict  # axiom name -> max deviation relative to its scale
    tolerance: float = DEFAULT_AXIOM_TOL

    @property
    def passed(self) -> bool:
        return all(d <= self.tolerance for d in self.deviations.values())

    def lines(self) -> list[str]:
        status = lambda d: "ok" if d <= self.tolerance else "EXCEEDED"
        return [
            f"{name:<26} max deviation {self.deviations[name]:.3e}  {status(self.deviations[name])}"
            for name in AXIOM_NAMES
        ]


def _permute_masks(n: int, perm) -> np.ndarray:
    """Index map sending mask S to mask pi(S) = {pi(i) : i in S}."""
    masks = np.arange(1 << n, dtype=np.int64)
    out = np.zeros_like(masks)
    for i in range(n):
        out |= ((masks >> i) & 1) << int(perm[i])
    return out


def _swap_masks(n: int, i: int, j: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    bi = (masks >> i) & 1
    bj = (masks >> j) & 1
    return masks - (bi << i) - (bj << j) + (bj << i) + (bi << j)


def verify_axioms(
    vt: ValueTable,
    aux_game: ValueTable | None = None,
    permutation=None,
    rng_seed: int = 0,
) -> AxiomReport:
    """Check the seven AND-interaction axioms on (games built from) ``vt``.

    ``aux_game`` supplies the second game for the linearity check (a seeded
    random one is drawn when omitted); ``permutation`` drives the anonymity
    check.  Constructed dummy/symmetric/interaction-function games reuse
    ``vt`` as raw material so the checks track the caller's data.
    """
    n = vt.n
    size = 1 << n
    v = vt.values
    rng = np.random.default_rng(rng_seed)
    h = mobius_transform(v)
    vscale = max(1.0, float(np.max(np.abs(v))) if size else 1.0)
    dev = {}

    # (1) efficiency: v(N) equals the sum of all effects
    dev["efficiency"] = abs(float(v[-1]) - float(h.sum())) / vscale

    # (2) linearity on u = v + w
    if aux_game is not None:
        if aux_game.n != n:
            raise ValueError(f"aux game has n={aux_game.n}, expected {n}")
        w = aux_game.values
    else:
        w = rng.uniform(-vscale, vscale, size)
    scale2 = max(vscale, float(np.max(np.abs(w))))
    dev["linearity"] = float(
        np.max(np.abs(mobius_transform(v + w) - (h + mobius_transform(w))))
    ) / scale2

    # (3) dummy: adding player i always contributes exactly c
    if n >= 1:
        i = int(rng.integers(n))
        c = float(rng.uniform(1.0, 3.0))
        bit = 1 << i
        masks = np.arange(size)
        vd = v[masks & ~bit] + c * ((masks >> i) & 1)
        hd = mobius_transform(vd)
        sel = ((masks & bit) != 0) & (masks != bit)
        dev["dummy"] = (float(np.max(np.abs(hd[sel]))) if sel.any() else 0.0) / max(
            1.0, vscale + c
        )
    else:
        dev["dummy"] = 0.0

    # (4) symmetry: i and j interchangeable => matched effects
    if n >= 2:
        i, j = [int(k) for k in rng.choice(n, size=2, replace=False)]
        swap = _swap_masks(n, i, j)
        vs = 0.5 * (v + v[swap])
        hs = mobius_transform(vs)
        masks = np.arange(size)
        base = masks[((masks >> i) & 1 == 0) & ((masks >> j) & 1 == 0)]
        dev["symmetry"] = float(
            np.max(np.abs(hs[base | (1 << i)] - hs[base | (1 << j)]))
        ) / vscale
    else:
        dev["symmetry"] = 0.0

    # (5) anonymity: relabeling players relabels effects
    perm = np.asarray(permutation if permutation is not None else rng.permutation(n))
    if sorted(perm.tolist()) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {perm.tolist()}")
    pmask = _permute_masks(n, perm)
    pv = np.empty_like(v)
    pv[pmask] = v
    hp = mobius_transform(pv)
    dev["anonymity"] = float(np.max(np.abs(hp[pmask] - h))) / vscale

    # (6) recursive: effect of S+{i} = conditional effect given i - effect of S
    if n >= 1:
        i = int(rng.integers(n))
        bit = 1 << i
        masks = np.arange(size)
        cond = mobius_transform(v[masks | bit])  # rows without i hold I(S | i present)
        without = masks[(masks & bit) == 0]
        dev["recursive"] = float(
            np.max(np.abs(h[without | bit] - (cond[without] - h[without])))
        ) / vscale
    else:
        dev["recursive"] = 0.0

    # (7) interaction distribution on the unanimity-style game v_T
    t = int(rng.integers(size))
    c = float(rng.uniform(1.0, 3.0))
    masks = np.arange(size)
    vt_game = c * ((masks & t) == t)
    ht = mobius_transform(vt_game)
    expected = np.zeros(size)
    expected[t] = c
    dev["interaction_distribution"] = float(np.max(np.abs(ht - expected))) / max(1.0, c)

    return AxiomReport(n=n, deviations=dev)


# ---------------------------------------------------------------------------
# Interaction record schema shared by every CLI-facing JSON payload.
# ---------------------------------------------------------------------------


def interaction_records(
    effects: np.ndarray, kind: str, n: int, players
) -> list[dict]:
    """Subset records sorted by |effect| descending (mask breaks ties)."""
    eff = as_lattice(effects, n)
    order = sorted(range(eff.size), key=lambda m: (-abs(eff[m]), m))
    return [
        {
            "mask": m,
            "members": [players[i] for i in members_of(m, n)],
            "kind": kind,
            "effect": float(eff[m]),
        }
        for m in order
    ]


def interactions_to_doc(iv: InteractionVector, vt: ValueTable) -> dict:
    """Full interaction payload: header echoing the source, then records."""
    return {
        "format": "interactions",
        "version": 1,
        "n": iv.n,
        "ordering": "bitmask-lsb",
        "kind": iv.kind,
        "players": list(vt.players),
        "source_digest": vt.digest(),
        "records": interaction_records(iv.effects, iv.kind, iv.n, vt.players),
    }
