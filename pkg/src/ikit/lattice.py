"""Fast linear operators on the subset lattice of n players.

Indexing convention (used by every vector and file format in this package):
a subset S of the n players is addressed by the bitmask ``sum(1 << i for i
in S)``, so index 0 is the empty set and index ``2**n - 1`` is the full set.
A "lattice vector" is a flat float64 array of length ``2**n`` holding one
value per subset in ascending mask order.

All transforms run in O(n * 2^n) with per-bit vectorized passes.  The
copying entry points never touch their argument; the ``*_inplace`` variants
mutate their buffer and require exclusive access to it.
"""

from __future__ import annotations

import os

import numpy as np

N_CAP_ENV = "IKIT_N_CAP"
DEFAULT_N_CAP = 24


class LatticeSizeError(ValueError):
    """Player count exceeds the configured lattice cap."""


def lattice_cap() -> int:
    """Current player-count cap (``IKIT_N_CAP`` env override, default 24)."""
    raw = os.environ.get(N_CAP_ENV)
    if raw is None:
        return DEFAULT_N_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise LatticeSizeError(f"{N_CAP_ENV} must be an integer, got {raw!r}") from exc
    if cap < 0:
        raise LatticeSizeError(f"{N_CAP_ENV} must be >= 0, got {cap}")
    return cap


def check_players(n: int) -> int:
    """Validate a player count against the cap; returns ``n``."""
    if n < 0:
        raise ValueError(f"player count must be >= 0, got {n}")
    cap = lattice_cap()
    if n > cap:
        raise LatticeSizeError(
            f"n={n} exceeds the lattice cap of {cap} "
            f"(2^{n} subsets; raise {N_CAP_ENV} to override)"
        )
    return n


def players_of(size: int) -> int:
    """Recover n from a vector length, rejecting non-powers of two."""
    n = size.bit_length() - 1
    if size <= 0 or (1 << n) != size:
        raise ValueError(f"lattice vector length must be a power of two, got {size}")
    return n


def as_lattice(data, n: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a contiguous float64 lattice vector.

    Checks the length against ``2**n`` (inferring n when omitted) and the
    cap.  Does not copy when the input is already a suitable array.
    """
    arr = np.ascontiguousarray(data, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"lattice vector must be 1-D, got shape {arr.shape}")
    inferred = players_of(arr.size)
    if n is not None and n != inferred:
        raise ValueError(f"length mismatch: expected {1 << n}, got {arr.size}")
    check_players(inferred)
    return arr


def mask_of(members, n: int) -> int:
    """Bitmask of a collection of player indices."""
    mask = 0
    for i in members:
        if not 0 <= i < n:
            raise ValueError(f"player index {i} out of range for n={n}")
        mask |= 1 << i
    return mask


def members_of(mask: int, n: int) -> list[int]:
    """Sorted player indices present in ``mask``."""
    if not 0 <= mask < (1 << n):
        raise ValueError(f"mask {mask} out of range for n={n}")
    return [i for i in range(n) if mask >> i & 1]


# ---------------------------------------------------------------------------
# In-place passes.  Each bit's butterfly is independent of the others, so
# the passes commute and transposes are obtained by flipping which half of
# the pair is updated.  Low-bit passes touch tiny strided slices where the
# loop overhead dominates, so the lowest _BLOCK_BITS bits are applied as a
# single cached dense block (the same butterflies, regrouped) via matmul.
# ---------------------------------------------------------------------------

_BLOCK_BITS = 6

_MOBIUS = "mobius"
_ZETA = "zeta"
_SUP_MOBIUS = "superset-mobius"
_SUP_ZETA = "superset-zeta"

_block_cache: dict = {}


def _bit_passes(a: np.ndarray, n: int, lo: int, kind: str) -> np.ndarray:
    for b in range(lo, n):
        half = 1 << b
        v = a.reshape(-1, half << 1)
        if kind == _MOBIUS:
            v[:, half:] -= v[:, :half]
        elif kind == _ZETA:
            v[:, half:] += v[:, :half]
        elif kind == _SUP_MOBIUS:
            v[:, :half] -= v[:, half:]
        else:
            v[:, :half] += v[:, half:]
    return a


def _block_t(kind: str, k: int) -> np.ndarray:
    """Transposed k-bit transform matrix, built from the per-bit passes."""
    key = (kind, k)
    mt = _block_cache.get(key)
    if mt is None:
        size = 1 << k
        m = np.empty((size, size))
        basis = np.zeros(size)
        for j in range(size):
            basis[j] = 1.0
            m[:, j] = _bit_passes(basis.copy(), k, 0, kind)
            basis[j] = 0.0
        mt = np.ascontiguousarray(m.T)
        _block_cache[key] = mt
    return mt


def _transform_inplace(a: np.ndarray, kind: str) -> np.ndarray:
    n = players_of(a.size)
    k = min(n, _BLOCK_BITS)
    if k:
        x = a.reshape(-1, 1 << k)
        np.copyto(x, x @ _block_t(kind, k))
    return _bit_passes(a, n, k, kind)


def mobius_inplace(a: np.ndarray) -> np.ndarray:
    """Subset Moebius transform: a[S] <- sum_{L<=S} (-1)^{|S|-|L|} a_in[L]."""
    return _transform_inplace(a, _MOBIUS)


def zeta_inplace(a: np.ndarray) -> np.ndarray:
    """Subset zeta transform: a[T] <- sum_{S<=T} a_in[S].  Inverse of Moebius."""
    return _transform_inplace(a, _ZETA)


def superset_mobius_inplace(a: np.ndarray) -> np.ndarray:
    """Transposed Moebius: a[L] <- sum_{S>=L} (-1)^{|S|-|L|} a_in[S]."""
    return _transform_inplace(a, _SUP_MOBIUS)


def superset_zeta_inplace(a: np.ndarray) -> np.ndarray:
    """Transposed zeta: a[L] <- sum_{S>=L} a_in[S]."""
    return _transform_inplace(a, _SUP_ZETA)


# ---------------------------------------------------------------------------
# Copying operators.
# ---------------------------------------------------------------------------


def mobius_transform(w) -> np.ndarray:
    """AND-effect extraction: h with h(S) = sum_{L<=S} (-1)^{|S|-|L|} w(L)."""
    return mobius_inplace(as_lattice(w).copy())


def zeta_transform(h) -> np.ndarray:
    """Subset sums: w with w(T) = sum_{S<=T} h(S)."""
    return zeta_inplace(as_lattice(h).copy())


def reflect(w) -> np.ndarray:
    """Complement reindexing: out[S] = w[N \\ S].

    With the bitmask convention the complement of mask m is
    ``(2^n - 1) - m``, so this is an array reversal.  Involutive.
    """
    return as_lattice(w)[::-1].copy()


def apply_t_and(w) -> np.ndarray:
    """Row-S outputs of the AND interaction matrix: the Moebius transform."""
    return mobius_transform(w)


def apply_t_or(w) -> np.ndarray:
    """Row-S outputs of the OR interaction matrix.

    Row for the empty set returns w(empty); every other row S returns
    -sum_{L<=S} (-1)^{|S|-|L|} w(N\\L), i.e. the negated Moebius transform
    of the complement-reindexed vector.
    """
    w = as_lattice(w)
    out = mobius_inplace(w[::-1].copy())
    np.negative(out, out=out)
    out[0] = w[0]
    return out


def apply_t_and_transpose(g) -> np.ndarray:
    """Adjoint of :func:`apply_t_and`: signed sums over supersets."""
    return superset_mobius_inplace(as_lattice(g).copy())


def apply_t_or_transpose(g) -> np.ndarray:
    """Adjoint of :func:`apply_t_or`.

    With F the complement permutation, A the Moebius matrix and D the
    drop-empty-set projector, T_OR = e0 e0^T - D A F, so the transpose is
    e0 e0^T - F A^T D.
    """
    g = as_lattice(g)
    buf = g.copy()
    g0 = buf[0]
    buf[0] = 0.0
    superset_mobius_inplace(buf)
    out = buf[::-1].copy()
    np.negative(out, out=out)
    out[0] += g0
    return out


def apply_t_or_inplace(a: np.ndarray, scratch: np.ndarray) -> np.ndarray:
    """In-place :func:`apply_t_or` for hot loops.

    ``scratch`` must be a distinct buffer of the same length; on return
    ``a`` holds the OR interactions of its previous contents.
    """
    w0 = a[0]
    scratch[:] = a[::-1]
    mobius_inplace(scratch)
    np.negative(scratch, out=a)
    a[0] = w0
    return a
