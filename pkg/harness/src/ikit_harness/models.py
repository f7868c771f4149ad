"""Deterministic toy models for tests, demos, and protocol checks.

Every model here evaluates rows independently with elementwise numpy ops
and per-row reductions, so a row's output does not depend on what else is
in the batch — a prerequisite for batch sweeps and the one-mask-at-a-time
oracle server to agree bit for bit.
"""

from __future__ import annotations

import numpy as np


def constant_model(value: float = 3.0):
    def model(batch):
        return np.full(np.asarray(batch).shape[0], float(value))

    return model


def additive_model(coeffs):
    """f(z) = sum_i coeffs[i] * z[i], evaluated row-wise."""
    c = np.asarray(coeffs, dtype=np.float64)

    def model(batch):
        batch = np.asarray(batch, dtype=np.float64)
        if batch.shape[1] != c.size:
            raise ValueError(f"expected {c.size} positions, got {batch.shape[1]}")
        return (batch * c).sum(axis=1)

    return model


def ripple_model(dim: int, seed: int = 0):
    """A fixed nonlinear scalar field: linear + neighbor products + tanh gate."""
    rng = np.random.default_rng(seed)
    w1, w2, w3 = rng.uniform(-1.0, 1.0, (3, dim))

    def model(batch):
        z = np.asarray(batch, dtype=np.float64)
        linear = (z * w1).sum(axis=1)
        pairs = (z * np.roll(z, 1, axis=1) * w2).sum(axis=1)
        gate = np.tanh((z * w3).sum(axis=1))
        return linear + pairs + gate

    return model


def build_model(name: str, dim: int):
    """Resolve a CLI model name into a callable for ``dim`` input positions."""
    if name == "constant":
        return constant_model()
    if name == "additive":
        return additive_model(1.0 + np.arange(dim) / max(dim, 1))
    if name == "ripple":
        return ripple_model(dim)
    raise ValueError(f"unknown model {name!r} (choose constant, additive, ripple)")
