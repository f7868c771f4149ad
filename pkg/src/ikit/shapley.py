"""Shapley-family indices derived from AND interaction effects.

Each index has two routes: a fast weighted sum over the extracted effects,
and an independent direct-definition oracle (permutation averages for the
Shapley value, discrete derivatives for the interaction index).  The
oracles are deliberately slow and definition-shaped; tests pit the two
routes against each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, factorial, fsum

import numpy as np

from .lattice import mobius_transform
from .table import ValueTable


@dataclass(frozen=True, eq=False)
class AttributionVector:
    """Per-player attribution phi(i); sums to v(N) - v(empty)."""

    n: int
    phi: np.ndarray

    def __post_init__(self):
        phi = np.ascontiguousarray(self.phi, dtype=np.float64)
        if phi.shape != (self.n,):
            raise ValueError(f"expected {self.n} attributions, got shape {phi.shape}")
        phi.flags.writeable = False
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class IndexTable:
    """Sparse map from subset mask to an interaction index value."""

    kind: str
    n: int
    entries: dict
    order: int | None = None  # Shapley-Taylor truncation order


def shapley_values(vt: ValueTable) -> AttributionVector:
    """phi(i) as the size-weighted sum of effects of patterns containing i."""
    h = mobius_transform(vt.values)
    sizes = _popcounts(vt.n)
    phi = np.zeros(vt.n)
    for i in range(vt.n):
        sel = _masks_with_bit(vt.n, i)
        phi[i] = fsum(h[sel] / sizes[sel])
    return AttributionVector(n=vt.n, phi=phi)


def shapley_values_permutation_oracle(vt: ValueTable) -> AttributionVector:
    """Classical definition: average marginal contribution over all n! orders."""
    n = vt.n
    v = vt.values
    contribs = [[] for _ in range(n)]
    for perm in itertools.permutations(range(n)):
        mask = 0
        for i in perm:
            grown = mask | (1 << i)
            contribs[i].append(float(v[grown]) - float(v[mask]))
            mask = grown
    fact = factorial(n)
    phi = np.array([fsum(c) / fact for c in contribs]) if n else np.zeros(0)
    return AttributionVector(n=n, phi=phi)


def shapley_interaction_index(vt: ValueTable, t: int) -> float:
    """Dividend route: sum of h(S u T) / (|S| + 1) over S disjoint from T."""
    if t == 0:
        raise ValueError("the interaction index is defined for nonempty coalitions")
    _check_mask(vt.n, t)
    h = mobius_transform(vt.values)
    comp = ((1 << vt.n) - 1) ^ t
    terms = [h[s | t] / (bin(s).count("1") + 1) for s in _submasks_list(comp)]
    return fsum(terms)


def shapley_interaction_direct(vt: ValueTable, t: int) -> float:
    """Direct definition via discrete derivatives and factorial weights."""
    if t == 0:
        raise ValueError("the interaction index is defined for nonempty coalitions")
    _check_mask(vt.n, t)
    n = vt.n
    v = vt.values
    size_t = bin(t).count("1")
    comp = ((1 << n) - 1) ^ t
    t_subs = _submasks_list(t)
    terms = []
    for s in _submasks_list(comp):
        size_s = bin(s).count("1")
        weight = (
            factorial(size_s)
            * factorial(n - size_s - size_t)
            / factorial(n - size_t + 1)
        )
        delta = fsum(
            (-1) ** (size_t - bin(l).count("1")) * float(v[s | l]) for l in t_subs
        )
        terms.append(weight * delta)
    return fsum(terms)


def shapley_taylor(vt: ValueTable, k: int) -> IndexTable:
    """Order-k Shapley-Taylor table for every subset of size <= k.

    Effects of patterns smaller than k pass through unchanged; size-k
    entries absorb all larger patterns containing them with binomial
    weights; larger subsets are implied zero and omitted.
    """
    n = vt.n
    if not 1 <= k <= max(n, 1):
        raise ValueError(f"order k must be in 1..{n}, got {k}")
    h = mobius_transform(vt.values)
    sizes = _popcounts(n)
    entries = {}
    for t in range(1 << n):
        size_t = int(sizes[t])
        if size_t > k:
            continue
        if size_t < k:
            entries[t] = float(h[t])
        else:
            comp = ((1 << n) - 1) ^ t
            terms = [
                h[s | t] / comb(bin(s).count("1") + k, k)
                for s in _submasks_list(comp)
            ]
            entries[t] = fsum(terms)
    return IndexTable(kind="shapley-taylor", n=n, entries=entries, order=k)


def _popcounts(n: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts += (masks >> i) & 1
    return counts


def _masks_with_bit(n: int, i: int) -> np.ndarray:
    masks = np.arange(1 << n, dtype=np.int64)
    return masks[(masks >> i) & 1 == 1]


def _submasks_list(mask: int) -> list[int]:
    out = []
    sub = mask
    while True:
        out.append(sub)
        if sub == 0:
            return out
        sub = (sub - 1) & mask


def _check_mask(n: int, mask: int) -> None:
    if not 0 <= mask < (1 << n):
        raise ValueError(f"mask {mask} out of range for n={n}")
