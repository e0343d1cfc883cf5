"""Coherent and Schrodinger-cat pointer states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import InvalidParameterError, NullStateError, TruncationError
from .hilbert import _check_dim

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class CatParams:
    """Cat state ``K (|alpha> + e^{i omega} |-alpha>)`` with ``alpha = alpha_abs e^{i delta}``.

    ``omega = 0`` is the even cat, ``pi`` the odd cat and ``pi/2`` the
    Yurke-Stoler state.
    """

    alpha_abs: float
    delta: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        if not self.alpha_abs >= 0 or not math.isfinite(self.alpha_abs):
            raise InvalidParameterError(f"alpha_abs must be finite and >= 0, got {self.alpha_abs!r}")
        if not 0.0 <= self.omega <= TWO_PI:
            raise InvalidParameterError(f"omega must lie in [0, 2pi], got {self.omega!r}")
        if not math.isfinite(self.delta):
            raise InvalidParameterError(f"delta must be finite, got {self.delta!r}")

    @property
    def alpha(self) -> complex:
        return self.alpha_abs * complex(math.cos(self.delta), math.sin(self.delta))


def _coherent_amplitudes(dim: int, alpha: complex) -> np.ndarray:
    n = np.arange(dim)
    r = abs(alpha)
    if r == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1.0)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent_tail(dim: int, alpha: complex) -> float:
    """Probability a coherent state ``|alpha>`` puts above level ``dim - 1``."""
    return float(poisson.sf(dim - 1, abs(alpha) ** 2))


def coherent_vector(dim: int, alpha: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Truncated ``|alpha>`` with exact amplitudes ``e^{-|a|^2/2} a^n / sqrt(n!)``.

    The vector is not renormalized; its norm falls short of one by the
    Poisson tail, which must stay below ``tol.tail``.
    """
    dim = _check_dim(dim)
    tail = coherent_tail(dim, alpha)
    if tail > tol.tail:
        raise TruncationError(
            f"coherent state |alpha|={abs(alpha):.4g} leaks {tail:.3g} above dim={dim}", tail_mass=tail
        )
    return _coherent_amplitudes(dim, complex(alpha))


def _cat_norm_bracket(params: CatParams) -> float:
    # 2 + 2 e^{-2|a|^2} cos w, written to stay accurate near the odd-cat null
    c = math.cos(params.omega)
    return 2.0 * (1.0 + c) + 2.0 * c * math.expm1(-2.0 * params.alpha_abs ** 2)


def cat_norm_constant(params: CatParams, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``K = [2 + 2 exp(-2|alpha|^2) cos(omega)]^(-1/2)``."""
    bracket = _cat_norm_bracket(params)
    if bracket < tol.null:
        raise NullStateError(
            f"cat superposition vanishes (alpha_abs={params.alpha_abs}, omega={params.omega})"
        )
    return bracket ** -0.5


def cat_vector(dim: int, params: CatParams, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Normalized cat state on ``dim`` Fock levels.

    Built level by level as ``K c_n (1 + e^{i omega} (-1)^n)`` so that even
    and odd cats populate only their parity sector.
    """
    dim = _check_dim(dim)
    K = cat_norm_constant(params, tol)
    alpha = params.alpha
    tail = coherent_tail(dim, alpha)
    if tail > tol.tail:
        raise TruncationError(
            f"cat state |alpha|={params.alpha_abs:.4g} leaks {tail:.3g} above dim={dim}", tail_mass=tail
        )
    half = 0.5 * params.omega
    even = 2.0 * math.cos(half) * np.exp(1j * half)
    odd = -2.0j * math.sin(half) * np.exp(1j * half)
    weights = np.where(np.arange(dim) % 2 == 0, even, odd)
    return K * weights * _coherent_amplitudes(dim, alpha)
