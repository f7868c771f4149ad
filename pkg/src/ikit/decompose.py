"""Sparsity-seeking AND-OR decomposition of a value table.

The game is split as v + eps = u + w where u feeds the AND extractor and
w feeds the OR extractor; the knobs are a partition vector p (u and w
are (v+eps)/2 +/- p) and a per-subset error eps bounded by tau.  We
minimize the L1 mass of the two extracted effect vectors, so that most
subsets end up with negligible effects and the game is explained by a
short list of strong ones.

Two solvers share the same result shape.  The subgradient path runs
projected descent with a decaying step and keeps the best iterate seen.
The exact path rewrites the problem as a linear program (the objective
is a sum of absolute values of linear images) and hands it to HiGHS via
scipy; on small lattices this is both faster and tighter, so it is the
default whenever it fits in memory.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .interactions import AND, OR, InteractionVector, interaction_records, mixed_reconstruct
from .lattice import (
    apply_t_and,
    apply_t_or,
    apply_t_or_inplace,
    as_lattice,
    mobius_inplace,
    superset_mobius_inplace,
)
from .table import ORDERING, ValueTable

DEFAULT_MAX_ITERS = 20000
DEFAULT_TAU_RATIO = 0.05
DEFAULT_STOP_TOL = 1e-7
STOP_WINDOW = 100
EXACT_AUTO_N_MAX = 10
EXACT_HARD_N_MAX = 12

# The error budget is a strict bound, so iterates live in a box shrunk by
# this relative margin; reconstruction error then stays strictly under the
# budget even after transform round-off.
_BOX_MARGIN = 1e-9

_DECAYS = ("1/sqrt(t)", "constant")
_METHODS = ("auto", "subgradient", "exact")


@dataclass(frozen=True, eq=False)
class DecomposerConfig:
    """Solver knobs; ``step_size=None`` means 1e-2 * ||v||_inf / 2^(n/2).

    ``seed`` namespaces future randomized variants and is echoed into
    result payloads; both current solvers are deterministic and do not
    consume it.
    """

    max_iters: int = DEFAULT_MAX_ITERS
    step_size: float | None = None
    step_decay: str = "1/sqrt(t)"
    tau_ratio: float = DEFAULT_TAU_RATIO
    tau_override: object = None
    stop_tol: float = DEFAULT_STOP_TOL
    seed: int = 0
    method: str = "auto"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if self.step_decay not in _DECAYS:
            raise ValueError(f"step_decay must be one of {_DECAYS}")
        if not 0 <= self.tau_ratio < math.inf:
            raise ValueError("tau_ratio must be finite and non-negative")
        if self.stop_tol < 0:
            raise ValueError("stop_tol must be non-negative")
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}")


@dataclass(frozen=True, eq=False)
class DecompositionResult:
    i_and_hat: InteractionVector
    i_or_hat: InteractionVector
    p: np.ndarray
    epsilon: np.ndarray
    objective_trace: tuple
    final_objective: float
    method: str = "subgradient"


def tau_bounds(vt: ValueTable, config: DecomposerConfig | None = None) -> np.ndarray:
    """Per-subset error budget: uniform ratio * |v(N) - v(empty)| unless overridden.

    A game with v(N) = v(empty) gets a zero budget rather than a free
    perturbation: the scale the ratio is meant to be relative to has
    collapsed.
    """
    config = config or DecomposerConfig()
    size = vt.values.size
    if config.tau_override is not None:
        tau = np.asarray(config.tau_override, dtype=np.float64)
        if tau.ndim == 0:
            tau = np.full(size, float(tau))
        tau = as_lattice(tau, vt.n).copy()
        if not np.all(np.isfinite(tau)) or np.any(tau < 0):
            raise ValueError("tau_override entries must be finite and non-negative")
        return tau
    scale = abs(vt.v_full - vt.v_empty)
    return np.full(size, config.tau_ratio * scale)


def _check_epsilon(epsilon: np.ndarray, tau: np.ndarray) -> None:
    slack = 1e-12 * max(1.0, float(tau.max(initial=0.0)))
    bad = np.abs(epsilon) > tau + slack
    if np.any(bad):
        i = int(np.argmax(bad))
        raise ValueError(
            f"epsilon[{i}] = {epsilon[i]} exceeds the error bound tau[{i}] = {tau[i]}"
        )


def _split(vt: ValueTable, p, epsilon):
    base = 0.5 * (vt.values + epsilon)
    return base + p, base - p


def objective(vt: ValueTable, p, epsilon, tau: np.ndarray | None = None) -> float:
    """L1 mass of both effect vectors at the given split point."""
    p = as_lattice(p, vt.n)
    epsilon = as_lattice(epsilon, vt.n)
    if tau is None:
        tau = tau_bounds(vt)
    _check_epsilon(epsilon, tau)
    u, w = _split(vt, p, epsilon)
    return float(np.abs(apply_t_and(u)).sum() + np.abs(apply_t_or(w)).sum())


def subgradient(vt: ValueTable, p, epsilon, tau: np.ndarray | None = None):
    """A minimal-norm subgradient pair (g_p, g_eps); sign(0) contributes 0."""
    p = as_lattice(p, vt.n)
    epsilon = as_lattice(epsilon, vt.n)
    if tau is None:
        tau = tau_bounds(vt)
    _check_epsilon(epsilon, tau)
    u, w = _split(vt, p, epsilon)
    ga = superset_mobius_inplace(np.sign(apply_t_and(u)))
    sb = np.sign(apply_t_or(w))
    g0 = sb[0]
    sb[0] = 0.0
    superset_mobius_inplace(sb)
    go = -sb[::-1]
    go[0] += g0
    return ga - go, 0.5 * (ga + go)


def _resolve_method(n: int, config: DecomposerConfig) -> str:
    if config.method == "exact":
        if n > EXACT_HARD_N_MAX:
            raise ValueError(
                f"exact decomposition is capped at n={EXACT_HARD_N_MAX} (got n={n})"
            )
        return "exact"
    if config.method == "auto":
        if n <= EXACT_AUTO_N_MAX and _have_scipy():
            return "exact"
        return "subgradient"
    return "subgradient"


def _have_scipy() -> bool:
    try:
        import scipy.optimize  # noqa: F401
        import scipy.sparse  # noqa: F401
    except ImportError:  # pragma: no cover - scipy is a declared dependency
        return False
    return True


def _resolve_step(vt: ValueTable, config: DecomposerConfig) -> float:
    if config.step_size is not None:
        return float(config.step_size)
    vmax = float(np.abs(vt.values).max(initial=0.0))
    step = 1e-2 * vmax / 2 ** (vt.n / 2)
    return step if step > 0 else 1e-2


def decompose(
    vt: ValueTable,
    config: DecomposerConfig | None = None,
    iterate_callback=None,
) -> DecompositionResult:
    """Minimize the joint effect mass from a zero start; returns the best iterate.

    ``iterate_callback(t, p, epsilon)``, when given, sees every recorded
    iterate (the arrays are live buffers; copy to keep them).
    """
    config = config or DecomposerConfig()
    tau = tau_bounds(vt, config) * (1.0 - _BOX_MARGIN)
    method = _resolve_method(vt.n, config)
    if method == "exact":
        out = _decompose_exact(vt, tau, iterate_callback)
        if out is not None:
            return out
        method = "subgradient"
        warnings.warn("exact solver failed; falling back to subgradient descent")
    return _decompose_subgradient(vt, config, tau, iterate_callback)


def _finish(vt, p, epsilon, trace, best_obj, method) -> DecompositionResult:
    u, w = _split(vt, p, epsilon)
    return DecompositionResult(
        i_and_hat=InteractionVector(vt.n, AND, apply_t_and(u)),
        i_or_hat=InteractionVector(vt.n, OR, apply_t_or(w)),
        p=p,
        epsilon=epsilon,
        objective_trace=tuple(trace),
        final_objective=float(best_obj),
        method=method,
    )


def _decompose_subgradient(vt, config, tau, iterate_callback) -> DecompositionResult:
    v = vt.values
    size = v.size
    step0 = _resolve_step(vt, config)
    p = np.zeros(size)
    eps = np.zeros(size)
    ia = np.empty(size)
    io = np.empty(size)
    base = np.empty(size)
    scratch = np.empty(size)
    g = np.empty(size)

    best_obj = math.inf
    best_p = p.copy()
    best_eps = eps.copy()
    window_best = math.inf
    trace = []

    for t in range(config.max_iters + 1):
        np.add(v, eps, out=base)
        base *= 0.5
        np.add(base, p, out=ia)
        mobius_inplace(ia)
        np.subtract(base, p, out=io)
        apply_t_or_inplace(io, scratch)
        obj = float(np.abs(ia).sum() + np.abs(io).sum())
        trace.append((t, obj))
        if obj < best_obj:
            best_obj = obj
            best_p[:] = p
            best_eps[:] = eps
        if iterate_callback is not None:
            iterate_callback(t, p, eps)
        if t == config.max_iters:
            break
        if t and t % STOP_WINDOW == 0:
            if window_best - best_obj <= config.stop_tol * max(1.0, abs(best_obj)):
                break
            window_best = best_obj
        # Adjoints of the sign vectors, reusing the transform buffers.
        np.sign(ia, out=ia)
        superset_mobius_inplace(ia)
        np.sign(io, out=io)
        g0 = io[0]
        io[0] = 0.0
        superset_mobius_inplace(io)
        scratch[:] = io[::-1]
        np.negative(scratch, out=io)
        io[0] += g0
        alpha = step0 / math.sqrt(t + 1) if config.step_decay == "1/sqrt(t)" else step0
        np.subtract(ia, io, out=g)
        g *= alpha
        p -= g
        np.add(ia, io, out=g)
        g *= 0.5 * alpha
        eps -= g
        np.clip(eps, -tau, tau, out=eps)

    return _finish(vt, best_p, best_eps, trace, best_obj, "subgradient")


def _operator_matrix(n: int, apply_fn) -> np.ndarray:
    size = 1 << n
    m = np.empty((size, size))
    basis = np.zeros(size)
    for j in range(size):
        basis[j] = 1.0
        m[:, j] = apply_fn(basis)
        basis[j] = 0.0
    return m


def _decompose_exact(vt, tau, iterate_callback) -> DecompositionResult | None:
    """Linear-programming route: exact minimizer of the shared objective.

    Variables are the two game parts u, w plus epigraph bounds on the
    absolute values of their effect images; the tau box constrains
    u + w - v.  Returns None if the LP solver does not converge.
    """
    from scipy import sparse
    from scipy.optimize import linprog

    v = vt.values
    n = vt.n
    size = v.size
    a_mat = sparse.csr_matrix(_operator_matrix(n, apply_t_and))
    b_mat = sparse.csr_matrix(_operator_matrix(n, apply_t_or))
    eye = sparse.identity(size, format="csr")
    a_ub = sparse.bmat(
        [
            [a_mat, None, -eye, None],
            [-a_mat, None, -eye, None],
            [None, b_mat, None, -eye],
            [None, -b_mat, None, -eye],
            [eye, eye, None, None],
            [-eye, -eye, None, None],
        ],
        format="csr",
    )
    b_ub = np.concatenate([np.zeros(4 * size), v + tau, tau - v])
    cost = np.concatenate([np.zeros(2 * size), np.ones(2 * size)])
    bounds = [(None, None)] * (2 * size) + [(0, None)] * (2 * size)
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        return None

    zeros = np.zeros(size)
    f0 = objective(vt, zeros, zeros, tau)
    u = res.x[:size]
    w = res.x[size : 2 * size]
    eps = np.clip(u + w - v, -tau, tau)
    p = u - 0.5 * (v + eps)
    f1 = objective(vt, p, eps, tau)
    trace = [(0, f0), (1, f1)]
    if iterate_callback is not None:
        iterate_callback(0, zeros, zeros)
        iterate_callback(1, p, eps)
    if f0 < f1:  # solver noise on a game whose zero split is already optimal
        p, eps = zeros, np.zeros(size)
    return _finish(vt, p, eps, trace, min(f0, f1), "exact")


def mixed_faithfulness_error(vt: ValueTable, result: DecompositionResult) -> float:
    """Worst-case gap between the game and its joint AND+OR reconstruction."""
    recon = mixed_reconstruct(result.i_and_hat.effects, result.i_or_hat.effects)
    return float(np.max(np.abs(vt.values - recon)))


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------


def config_echo(vt: ValueTable, config: DecomposerConfig) -> dict:
    tau = tau_bounds(vt, config)
    return {
        "max_iters": config.max_iters,
        "step_size": _resolve_step(vt, config),
        "step_decay": config.step_decay,
        "tau_ratio": config.tau_ratio,
        "tau_max": float(tau.max(initial=0.0)),
        "stop_tol": config.stop_tol,
        "seed": config.seed,
        "method": _resolve_method(vt.n, config),
    }


def decomposition_to_doc(
    result: DecompositionResult, vt: ValueTable, config: DecomposerConfig | None = None
) -> dict:
    config = config or DecomposerConfig()
    eps = result.epsilon
    return {
        "format": "decomposition",
        "version": 1,
        "n": vt.n,
        "ordering": ORDERING,
        "players": list(vt.players),
        "source_digest": vt.digest(),
        "config": config_echo(vt, config),
        "final_objective": result.final_objective,
        "epsilon_max": float(np.abs(eps).max(initial=0.0)),
        "epsilon_l1": float(np.abs(eps).sum()),
        "p": [float(x) for x in result.p],
        "epsilon": [float(x) for x in eps],
        "and": interaction_records(result.i_and_hat.effects, AND, vt.n, vt.players),
        "or": interaction_records(result.i_or_hat.effects, OR, vt.n, vt.players),
    }


def trace_csv(result: DecompositionResult) -> str:
    lines = ["iteration,objective"]
    lines.extend(f"{t},{obj!r}" for t, obj in result.objective_trace)
    return "\n".join(lines) + "\n"


def load_decomposition(doc: dict) -> DecompositionResult:
    """Rebuild a result from its JSON payload (trace stays behind in its CSV)."""
    if doc.get("format") != "decomposition":
        raise ValueError('missing "format": "decomposition" header')
    n = int(doc["n"])
    size = 1 << n

    def effects_of(records):
        eff = np.zeros(size)
        for rec in records:
            eff[int(rec["mask"])] = float(rec["effect"])
        return eff

    final = float(doc["final_objective"])
    return DecompositionResult(
        i_and_hat=InteractionVector(n, AND, effects_of(doc["and"])),
        i_or_hat=InteractionVector(n, OR, effects_of(doc["or"])),
        p=as_lattice(doc["p"], n).copy(),
        epsilon=as_lattice(doc["epsilon"], n).copy(),
        objective_trace=((0, final),),
        final_objective=final,
        method=str(doc.get("config", {}).get("method", "subgradient")),
    )
