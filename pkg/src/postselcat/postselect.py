"""Postselected von Neumann measurement of a bosonic pointer.

The system is a polarization qubit prepared in
``cos(theta/2)|H> + e^{i phi} sin(theta/2)|V>`` and postselected on ``|H>``;
it couples to the pointer through ``exp(-i g sigma_x P)``.  Because
``sigma_x**2 = 1`` the unitary splits into the two displacement branches
``D(+Gamma/2)`` and ``D(-Gamma/2)``, and the unnormalized pointer left after
postselection is::

    1/2 [(1 + A_w) D(Gamma/2) + (1 - A_w) D(-Gamma/2)] |pointer>

with weak value ``A_w = e^{i phi} tan(theta/2)``.  The overlap prefactor
``<psi_f|psi_i>`` is dropped; it is reported separately as the success
probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import (
    DomainError,
    InvalidParameterError,
    NullStateError,
    OrthogonalSelectionError,
    TruncationError,
)
from .hilbert import _check_state, displacement
from .states import TWO_PI, CatParams, cat_norm_constant, cat_vector


@dataclass(frozen=True)
class MeasurementParams:
    """Pre-selection angles and coupling strength ``Gamma = g / sigma``."""

    theta: float = math.pi / 2
    phi: float = 7 * math.pi / 9
    gamma: float = 2.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise InvalidParameterError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not 0.0 <= self.phi < TWO_PI:
            raise InvalidParameterError(f"phi must lie in [0, 2pi), got {self.phi!r}")
        if not math.isfinite(self.gamma):
            raise InvalidParameterError(f"gamma must be finite, got {self.gamma!r}")

    @property
    def regime(self) -> str:
        return "weak" if abs(self.gamma) < 1 else "strong"


def weak_value(params: MeasurementParams) -> complex:
    """``<H|sigma_x|psi_i> / <H|psi_i> = e^{i phi} tan(theta/2)``."""
    c = math.cos(params.theta / 2)
    if params.theta == math.pi or abs(c) < 1e-15:
        raise OrthogonalSelectionError("theta = pi: pre- and post-selected states are orthogonal")
    return complex(math.cos(params.phi), math.sin(params.phi)) * (math.sin(params.theta / 2) / c)


def postselection_probability(params: MeasurementParams) -> float:
    return math.cos(params.theta / 2) ** 2


def evolution_operator(dim: int, gamma: float) -> tuple[np.ndarray, np.ndarray]:
    """The two displacement branches ``(D(Gamma/2), D(-Gamma/2))``."""
    return displacement(dim, gamma / 2), displacement(dim, -gamma / 2)


def final_pointer_state(
    pointer_in: np.ndarray,
    params: MeasurementParams,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> tuple[np.ndarray, float]:
    """Normalized pointer after the measurement, and its norm before normalizing.

    The returned norm is the numerical counterpart of ``1/kappa``.

    Raises
    ------
    TruncationError
        If either displaced branch pushes more than ``tol.tail`` of the
        probability above the cut-off.
    NullStateError
        If the two branches cancel.
    """
    psi = _check_state(pointer_in)
    aw = weak_value(params)
    if params.gamma == 0:
        return psi.copy(), float(np.linalg.norm(psi))
    plus, minus = evolution_operator(psi.size, params.gamma)
    branch_p = plus @ psi
    branch_m = minus @ psi
    # D's retained block has exact matrix elements, so the norm it misses is
    # exactly the weight pushed above the cut-off.
    base = float(np.vdot(psi, psi).real)
    lost = max(base - float(np.vdot(branch_p, branch_p).real),
               base - float(np.vdot(branch_m, branch_m).real))
    if lost > tol.tail:
        raise TruncationError(
            f"displacement by Gamma/2={params.gamma / 2:.4g} pushes {lost:.3g} of the pointer above "
            f"dim={psi.size}; increase the dimension",
            tail_mass=lost,
        )
    out = 0.5 * ((1 + aw) * branch_p + (1 - aw) * branch_m)
    nrm = float(np.linalg.norm(out))
    if nrm * nrm < tol.null:
        raise NullStateError("the two measurement branches cancel")
    return out / nrm, nrm


def kappa_analytic(cat: CatParams, params: MeasurementParams) -> float:
    """Closed-form normalization ``kappa`` of the post-measurement cat pointer."""
    aw = weak_value(params)
    K2 = cat_norm_constant(cat) ** 2
    alpha = cat.alpha
    g = params.gamma
    aw2 = abs(aw) ** 2
    bracket = (
        0.5 * (1 + aw2)
        + K2 * (1 - aw2) * math.cos(2 * g * alpha.imag) * math.exp(-g * g / 2)
        + 0.5 * K2 * ((1 - aw2 - 2j * aw.imag)
                      * (np.exp(1j * cat.omega) * math.exp(-0.5 * abs(2 * alpha + g) ** 2)
                         + np.exp(-1j * cat.omega) * math.exp(-0.5 * abs(2 * alpha - g) ** 2))).real
    )
    if not bracket > 0:
        raise DomainError(f"kappa bracket is {bracket:.3g} (must be positive)")
    return bracket ** -0.5


def pointer_after_measurement(
    dim: int, cat: CatParams, params: MeasurementParams, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[np.ndarray, float]:
    """:func:`final_pointer_state` applied to ``cat_vector(dim, cat)``."""
    return final_pointer_state(cat_vector(dim, cat, tol), params, tol)

