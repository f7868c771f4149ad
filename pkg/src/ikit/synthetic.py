"""Ground-truth game construction and definition-shaped oracles.

Generated games are sums of AND triggers (effect fires when the whole
subset is present) and OR triggers (effect fires when any member is
present) plus a bias and optional uniform noise on the outputs.  The
planted effects come back as ground-truth interaction vectors so tests
and the decomposer bench can compare against a known-sparse solution.

The brute-force extractors and dense operator matrices are the oracles
backing every fast-path test: no transform tricks, quadratic cost.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .interactions import AND, OR, InteractionVector
from .table import ValueTable

ORACLE_N_MAX = 12


@dataclass(frozen=True)
class SyntheticGameSpec:
    """Planted interactions: (mask, effect) pairs plus bias and noise."""

    n: int
    and_terms: tuple = ()
    or_terms: tuple = ()
    bias: float = 0.0
    noise_amp: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "and_terms", tuple((int(m), float(e)) for m, e in self.and_terms)
        )
        object.__setattr__(
            self, "or_terms", tuple((int(m), float(e)) for m, e in self.or_terms)
        )
        size = 1 << self.n
        for m, _ in self.and_terms:
            if not 0 <= m < size:
                raise ValueError(f"AND term mask {m} out of range for n={self.n}")
        for m, _ in self.or_terms:
            if not 0 < m < size:
                raise ValueError(
                    f"OR term mask {m} out of range for n={self.n} "
                    "(the empty set belongs to the bias)"
                )


def generate_game(spec: SyntheticGameSpec):
    """Build the value table and its noise-free ground-truth effect pair.

    The bias lands in the AND vector's empty-set slot (the OR slot stays
    zero); noise perturbs the outputs only and is absent from the truth.
    """
    size = 1 << spec.n
    masks = np.arange(size)
    values = np.full(size, spec.bias, dtype=np.float64)
    gt_and = np.zeros(size)
    gt_or = np.zeros(size)
    gt_and[0] = spec.bias
    for m, e in spec.and_terms:
        values[(masks & m) == m] += e
        gt_and[m] += e
    for m, e in spec.or_terms:
        values[(masks & m) != 0] += e
        gt_or[m] += e
    if spec.noise_amp:
        rng = np.random.default_rng(spec.seed)
        values += spec.noise_amp * rng.uniform(-1.0, 1.0, size)
    vt = ValueTable(n=spec.n, values=values)
    truth = (
        InteractionVector(spec.n, AND, gt_and),
        InteractionVector(spec.n, OR, gt_or),
    )
    return vt, truth


def random_game(n: int, amplitude: float, seed: int) -> ValueTable:
    """Uniform values in [-amplitude, amplitude], reproducible from the seed."""
    rng = np.random.default_rng(seed)
    values = rng.uniform(-amplitude, amplitude, 1 << n) if amplitude else np.zeros(1 << n)
    return ValueTable(n=n, values=values)


def spec_to_doc(spec: SyntheticGameSpec) -> dict:
    return {
        "format": "synth-spec",
        "version": 1,
        "n": spec.n,
        "and_terms": [[m, e] for m, e in spec.and_terms],
        "or_terms": [[m, e] for m, e in spec.or_terms],
        "bias": spec.bias,
        "noise_amp": spec.noise_amp,
        "seed": spec.seed,
    }


def spec_from_doc(doc: dict) -> SyntheticGameSpec:
    if doc.get("format") != "synth-spec":
        raise ValueError('missing "format": "synth-spec" header')
    return SyntheticGameSpec(
        n=int(doc["n"]),
        and_terms=tuple((m, e) for m, e in doc.get("and_terms", [])),
        or_terms=tuple((m, e) for m, e in doc.get("or_terms", [])),
        bias=float(doc.get("bias", 0.0)),
        noise_amp=float(doc.get("noise_amp", 0.0)),
        seed=int(doc.get("seed", 0)),
    )


def load_spec(path) -> SyntheticGameSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return spec_from_doc(json.load(fh))


# ---------------------------------------------------------------------------
# O(4^n) definition oracles.
# ---------------------------------------------------------------------------


def _guard(n: int) -> None:
    if n > ORACLE_N_MAX:
        raise ValueError(f"brute-force oracle capped at n={ORACLE_N_MAX}, got {n}")


def _popcount(x: int) -> int:
    return bin(x).count("1")


def brute_force_and(vt: ValueTable) -> InteractionVector:
    """Alternating subset sums evaluated literally, term by term."""
    _guard(vt.n)
    v = vt.values
    size = 1 << vt.n
    eff = np.zeros(size)
    for s in range(size):
        acc = 0.0
        sub = s
        while True:
            acc += (-1) ** (_popcount(s) - _popcount(sub)) * float(v[sub])
            if sub == 0:
                break
            sub = (sub - 1) & s
        eff[s] = acc
    return InteractionVector(vt.n, AND, eff)


def brute_force_or(vt: ValueTable) -> InteractionVector:
    """Literal OR metric: negated alternating sums of complement values."""
    _guard(vt.n)
    v = vt.values
    size = 1 << vt.n
    full = size - 1
    eff = np.zeros(size)
    eff[0] = float(v[0])
    for s in range(1, size):
        acc = 0.0
        sub = s
        while True:
            acc += (-1) ** (_popcount(s) - _popcount(sub)) * float(v[full ^ sub])
            if sub == 0:
                break
            sub = (sub - 1) & s
        eff[s] = -acc
    return InteractionVector(vt.n, OR, eff)


def dense_t_and(n: int) -> np.ndarray:
    """The 2^n x 2^n AND operator with entries from the defining sum."""
    _guard(n)
    size = 1 << n
    m = np.zeros((size, size))
    for s in range(size):
        sub = s
        while True:
            m[s, sub] = (-1) ** (_popcount(s) - _popcount(sub))
            if sub == 0:
                break
            sub = (sub - 1) & s
    return m


def dense_t_or(n: int) -> np.ndarray:
    """The 2^n x 2^n OR operator built row by row from the definition."""
    _guard(n)
    size = 1 << n
    full = size - 1
    m = np.zeros((size, size))
    m[0, 0] = 1.0
    for s in range(1, size):
        sub = s
        while True:
            m[s, full ^ sub] -= (-1) ** (_popcount(s) - _popcount(sub))
            if sub == 0:
                break
            sub = (sub - 1) & s
    return m
