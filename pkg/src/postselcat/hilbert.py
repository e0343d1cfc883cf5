"""Truncated Fock-space numerics.

States are complex 1-D arrays of length ``dim`` (amplitudes on |0>..|dim-1>)
and operators are dense ``dim x dim`` complex arrays.  Nothing here mutates
its inputs.

Displacement operators are built from exact Laguerre matrix elements of the
infinite-dimensional operator restricted to the retained block.  Products of
such blocks are only trustworthy on a leading sub-block whose size shrinks
as ``|mu|`` grows; see :func:`guarded_size`.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln
from scipy.stats import poisson

from .config import DEFAULT_TOLERANCES, Tolerances, guard_band
from .errors import (
    InvalidDimensionError,
    InvalidParameterError,
    NullStateError,
    TruncationError,
)

# Margin, in units of sqrt(photon number), between the displaced block edge
# and the truncation edge.
_GUARD_MARGIN = 1.5


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def _check_state(state: np.ndarray) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1:
        raise InvalidParameterError(f"state must be one-dimensional, got shape {state.shape}")
    _check_dim(state.shape[0])
    return state


def vacuum(dim: int) -> np.ndarray:
    v = np.zeros(_check_dim(dim), dtype=complex)
    v[0] = 1.0
    return v


def fock(dim: int, n: int) -> np.ndarray:
    """Number state |n> in a space of dimension ``dim``."""
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise InvalidParameterError(f"Fock level {n} outside 0..{dim - 1}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


def ladder_operators(dim: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Annihilation, creation and number operators.

    ``[a, a_dag]`` equals the identity except for its last diagonal entry,
    which is ``1 - dim`` because the space is cut off.
    """
    dim = _check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)
    a_dag = a.conj().T
    n = np.diag(np.arange(dim, dtype=float)).astype(complex)
    return a, a_dag, n


def position_operator(dim: int, sigma: float) -> np.ndarray:
    """``X = sigma (a_dag + a)``."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma!r}")
    a, a_dag, _ = ladder_operators(dim)
    return sigma * (a_dag + a)


def momentum_operator(dim: int, sigma: float) -> np.ndarray:
    """``P = i (a_dag - a) / (2 sigma)``, conjugate to :func:`position_operator`."""
    if not sigma > 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma!r}")
    a, a_dag, _ = ladder_operators(dim)
    return 1j / (2.0 * sigma) * (a_dag - a)


def guarded_size(dim: int, mu: complex = 0.0) -> int:
    """Size of the leading block on which ``D(mu)`` is reliable.

    Levels near the cut-off are corrupted by truncation, and a displacement
    by ``mu`` smears level ``n`` over roughly ``(sqrt(n) +/- |mu|)**2``.  The
    block keeps ``n`` with ``sqrt(n) + |mu| + 1.5 <= sqrt(dim)`` and never
    exceeds ``dim - ceil(dim / 8)``.
    """
    dim = _check_dim(dim)
    reach = math.sqrt(dim) - abs(mu) - _GUARD_MARGIN
    if reach <= 0:
        return 0
    return max(0, min(dim - guard_band(dim), int(math.floor(reach * reach))))


def iter_laguerre_rows(x: np.ndarray | float, dim: int) -> Iterator[np.ndarray]:
    """Yield normalized Laguerre rows ``T_n`` for ``n = 0 .. dim-1``.

    ``T_n[..., k] = sqrt(n!/(n+k)!) x**(k/2) exp(-x/2) L_n^(k)(x)``, which is
    ``|<n+k|D(mu)|n>|`` up to sign when ``x = |mu|**2``.  The values are
    bounded by one, so the three-term recurrence never overflows even where
    the bare Laguerre polynomials would.
    """
    x = np.asarray(x, dtype=float)[..., None]
    k = np.arange(dim, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.where(x > 0, np.log(np.where(x > 0, x, 1.0)), -np.inf)
        log_t0 = np.where(k == 0, 0.0, 0.5 * k * logx) - 0.5 * x - 0.5 * gammaln(k + 1.0)
    prev = np.exp(log_t0)
    yield prev
    if dim == 1:
        return
    cur = (1.0 + k - x) * prev / np.sqrt(k + 1.0)
    yield cur
    for n in range(1, dim - 1):
        nxt = ((2 * n + 1 + k - x) * cur - np.sqrt(n * (n + k)) * prev) / np.sqrt((n + 1) * (n + k + 1))
        prev, cur = cur, nxt
        yield cur


def laguerre_table(x: np.ndarray | float, dim: int) -> np.ndarray:
    """Stack of :func:`iter_laguerre_rows`, shape ``x.shape + (dim, dim)``."""
    return np.stack(list(iter_laguerre_rows(x, dim)), axis=-2)


def _assemble(table: np.ndarray, mu: complex) -> np.ndarray:
    dim = table.shape[-1]
    m = np.arange(dim)[:, None]
    n = np.arange(dim)[None, :]
    k = np.abs(m - n)
    mag = table[np.minimum(m, n), k]
    theta = np.angle(mu)
    phase = np.where(m >= n, np.exp(1j * theta * k), (-1.0) ** k * np.exp(-1j * theta * k))
    return mag * phase


@lru_cache(maxsize=64)
def _displacement_cached(dim: int, mu: complex) -> np.ndarray:
    out = _assemble(laguerre_table(abs(mu) ** 2, dim), mu)
    out.setflags(write=False)
    return out


def displacement(dim: int, mu: complex, *, check: bool = True) -> np.ndarray:
    """Matrix of ``D(mu) = exp(mu a_dag - conj(mu) a)`` on the retained block.

    Entries are the exact (Laguerre) matrix elements, so the block is not
    exactly unitary; it is unitary to working precision on the leading
    :func:`guarded_size` levels.  The returned array is read-only and shared
    between calls.

    Raises
    ------
    TruncationError
        If no level of the block survives the guard for this ``mu``.  The
        error carries the mass a coherent state ``|mu>`` loses above the
        cut-off.
    """
    dim = _check_dim(dim)
    mu = complex(mu)
    if check and guarded_size(dim, mu) < 1:
        tail = float(poisson.sf(dim - 1, abs(mu) ** 2))
        raise TruncationError(
            f"|mu|={abs(mu):.4g} is too large for dim={dim}; coherent tail mass above the "
            f"cut-off is {tail:.3g}. Increase the dimension.",
            tail_mass=tail,
        )
    if mu == 0:
        return np.eye(dim, dtype=complex)
    return _displacement_cached(dim, mu)


def displacement_expm(dim: int, mu: complex) -> np.ndarray:
    """``D(mu)`` as the matrix exponential of the truncated generator.

    Cross-check for :func:`displacement`; exact-unitary but wrong near the
    cut-off for a different reason (the generator itself is truncated).
    """
    a, a_dag, _ = ladder_operators(dim)
    mu = complex(mu)
    return expm(mu * a_dag - np.conj(mu) * a)


def expectation(state: np.ndarray, op: np.ndarray) -> complex:
    """``<v|op|v>`` for a normalized state vector."""
    state = _check_state(state)
    op = np.asarray(op)
    if op.shape != (state.size, state.size):
        raise InvalidParameterError(
            f"operator shape {op.shape} does not match state dimension {state.size}"
        )
    return complex(np.vdot(state, op @ state))


def norm(state: np.ndarray) -> float:
    return float(np.linalg.norm(_check_state(state)))


def normalize(state: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> tuple[np.ndarray, float]:
    """Return ``(state / |state|, |state|)``.

    Raises :class:`NullStateError` when ``|state|**2`` is below ``tol.null``,
    e.g. for an odd cat with vanishing amplitude.
    """
    state = _check_state(state)
    nrm = float(np.linalg.norm(state))
    if nrm * nrm < tol.null:
        raise NullStateError(f"state norm {nrm:.3g} is numerically zero")
    return state / nrm, nrm


def is_normalized(state: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    return abs(np.vdot(state, state).real - 1.0) <= tol.norm


def tail_mass(state: np.ndarray, levels: int | None = None) -> float:
    """Probability in the top ``levels`` Fock levels (default: the guard band)."""
    state = _check_state(state)
    if levels is None:
        levels = guard_band(state.size)
    total = float(np.vdot(state, state).real)
    return float(np.sum(np.abs(state[state.size - levels:]) ** 2)) / total


def embed(state: np.ndarray, dim: int) -> np.ndarray:
    """Zero-pad (or, if the dropped part is empty, cut) a state to ``dim``."""
    state = _check_state(state)
    dim = _check_dim(dim)
    if dim >= state.size:
        out = np.zeros(dim, dtype=complex)
        out[: state.size] = state
        return out
    if np.any(state[dim:] != 0):
        raise TruncationError("cannot shrink a state with support above the new cut-off")
    return state[:dim].copy()
