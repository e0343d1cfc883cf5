"""Amplitude-squared squeezing.

``Y1 = (a_dag**2 + a**2)/2`` and ``Y2 = i (a_dag**2 - a**2)/2`` obey
``dY1 dY2 >= <N + 1/2>``; a state is amplitude-squared squeezed in ``Y1``
when ``(dY1)**2 < <N + 1/2>``.  Using ``[a**2, a_dag**2] = 4N + 2`` that
condition becomes ``R < 0`` with::

    R = Re<a^4>/2 + <a_dag^2 a^2>/2 - (Re<a^2>)^2

The slowly varying frame is taken at ``t = 0`` throughout, so ``A = a``.

Two routes compute the moments: :func:`moments_oracle` from a Fock vector,
and :func:`moments_analytic` from the closed forms.  The oracle is
authoritative; the closed forms are checked against it and disagreements
are filed with :class:`~postselcat.errata.ErrataRegistry`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .config import DEFAULT_DIM, DEFAULT_TOLERANCES, Tolerances
from .errata import ErrataRegistry
from .errors import InvalidParameterError, PostselcatError, TruncationError
from .hilbert import _check_state, ladder_operators
from .postselect import (
    MeasurementParams,
    kappa_analytic,
    pointer_after_measurement,
    postselection_probability,
    weak_value,
)
from .states import CatParams, cat_norm_constant

SCAN_AXES = ("alpha_abs", "gamma", "phi", "omega", "theta", "delta")


@dataclass(frozen=True)
class MomentSet:
    a2: complex
    a4: complex
    adag2a2: float
    n: float

    def as_dict(self) -> dict[str, complex | float]:
        return {"a2": self.a2, "a4": self.a4, "adag2a2": self.adag2a2, "n": self.n}

    def max_difference(self, other: "MomentSet") -> float:
        """Largest scaled difference ``|x - y| / max(1, |y|)`` over the four moments."""
        mine, theirs = self.as_dict(), other.as_dict()
        return max(abs(mine[k] - theirs[k]) / max(1.0, abs(theirs[k])) for k in mine)


def _lower(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    out[:-1] = np.sqrt(np.arange(1, v.size)) * v[1:]
    return out


def moments_oracle(state: np.ndarray, tol: Tolerances = DEFAULT_TOLERANCES) -> MomentSet:
    """``<a^2>, <a^4>, <a_dag^2 a^2>, <N>`` of a normalized Fock vector."""
    psi = _check_state(state)
    a1 = _lower(psi)
    b = _lower(a1)
    n = np.vdot(a1, a1).real
    adag2a2 = np.vdot(b, b).real
    a2 = complex(np.vdot(psi, b))
    a4 = complex(np.vdot(psi, _lower(_lower(b))))
    return MomentSet(a2=a2, a4=a4, adag2a2=float(adag2a2), n=float(n))


def ass_witness_R(m: MomentSet) -> float:
    """Negative values signal amplitude-squared squeezing of ``Y1``."""
    return 0.5 * m.a4.real + 0.5 * m.adag2a2 - m.a2.real ** 2


def y_operators(dim: int) -> tuple[np.ndarray, np.ndarray]:
    a, a_dag, _ = ladder_operators(dim)
    a2 = a @ a
    ad2 = a_dag @ a_dag
    return 0.5 * (ad2 + a2), 0.5j * (ad2 - a2)


def y_variance(state: np.ndarray, component: int = 1) -> float:
    """``(dY_i)**2`` by explicit operator matrices (independent of the moments)."""
    if component not in (1, 2):
        raise InvalidParameterError(f"component must be 1 or 2, got {component!r}")
    psi = _check_state(state)
    y = y_operators(psi.size)[component - 1]
    yv = y @ psi
    mean = np.vdot(psi, yv).real
    return float(np.vdot(yv, yv).real - mean ** 2)


def uncertainty_product(state: np.ndarray) -> tuple[float, float]:
    """``(dY1 * dY2, <N + 1/2>)``; the first never falls below the second."""
    psi = _check_state(state)
    lhs = math.sqrt(max(y_variance(psi, 1), 0.0) * max(y_variance(psi, 2), 0.0))
    a1 = _lower(psi)
    return lhs, float(np.vdot(a1, a1).real) + 0.5


# -- closed forms ----------------------------------------------------------
#
# Transcribed term by term from the closed-form expressions, including the
# pairing of helpers in <a^4> (G1(Gamma) on the (1-A)(1+A)* term, G2(-Gamma)
# on its partner) and the single e^{i omega} phase in K2.  They are validated,
# never corrected, here.

def _helpers(cat: CatParams):
    alpha = cat.alpha
    w = cat.omega
    e = math.exp(-2 * cat.alpha_abs ** 2)
    im = alpha.imag
    eiw = complex(math.cos(w), math.sin(w))

    def H1(g):
        return 2 * (e * math.cos(w) + 1) * (alpha ** 2 + g * g / 4) - 2j * e * g * alpha * math.sin(w)

    def H2(g):
        return (np.exp(2j * g * im) * math.exp(-g * g / 2) * (alpha - g / 2) ** 2
                + eiw * (alpha + g / 2) ** 2 * math.exp(-2 * abs(alpha + g / 2) ** 2)
                + eiw.conjugate() * (alpha - g / 2) ** 2 * math.exp(-2 * abs(alpha - g / 2) ** 2)
                + np.exp(-2j * g * im) * (alpha + g / 2) ** 2 * math.exp(-g * g / 2))

    def K1(g):
        return (abs(alpha + g / 2) ** 4 + abs(alpha - g / 2) ** 4
                + 2 * (eiw * (alpha.conjugate() + g / 2) ** 2 * (-alpha + g / 2) ** 2 * e).real)

    def K2(g):
        return (eiw * abs(alpha + g / 2) ** 4 * math.exp(-2 * abs(alpha + g / 2) ** 2)
                + np.exp(2j * g * im) * math.exp(-g * g / 2)
                * (alpha.conjugate() + g / 2) ** 2 * (alpha - g / 2) ** 2)

    def G1(g):
        return (2 * alpha ** 4 + 3 * g * g * alpha ** 2 + g ** 4 / 8
                + 2 * math.cos(w) * e * (alpha ** 4 - 2 * g * alpha ** 3 + 1.5 * g * g * alpha ** 2
                                         - 2 * g ** 3 / 4 * alpha + g ** 4 / 16))

    def G2(g):
        return (np.exp(2j * g * im) * (alpha - g / 2) ** 2 * math.exp(-g * g / 2)
                + eiw * (alpha + g / 2) ** 2 * math.exp(-2 * abs(alpha + g / 2) ** 2)
                + eiw.conjugate() * (alpha - g / 2) ** 2 * math.exp(-2 * abs(alpha - g / 2) ** 2)
                + np.exp(-2j * g * im) * (alpha + g / 2) ** 2 * math.exp(-g * g / 2))

    return H1, H2, K1, K2, G1, G2


def moments_analytic(cat: CatParams, meas: MeasurementParams) -> MomentSet:
    """Moments of the measured cat pointer from the closed forms.

    ``n`` has no closed form and is returned as NaN.
    """
    aw = weak_value(meas)
    kappa = kappa_analytic(cat, meas)
    K2n = cat_norm_constant(cat) ** 2
    g = meas.gamma
    H1, H2, K1, K2, G1, G2 = _helpers(cat)
    p = abs(1 + aw) ** 2
    q = abs(1 - aw) ** 2
    x = (1 - aw) * (1 + aw).conjugate()
    y = (1 + aw) * (1 - aw).conjugate()
    pre = kappa ** 2 * K2n / 4
    a2 = pre * (p * H1(g) + q * H1(-g) + x * H2(g) + y * H2(-g))
    adag2a2 = pre * (p * K1(g) + q * K1(-g) + 2 * (x * (K2(g) + K2(-g))).real)
    a4 = pre * (p * G1(g) + q * G1(-g) + x * G1(g) + y * G2(-g))
    return MomentSet(a2=complex(a2), a4=complex(a4), adag2a2=float(np.real(adag2a2)), n=math.nan)


# -- oracle route with convergence certificate ------------------------------

def pointer_moments(
    cat: CatParams,
    meas: MeasurementParams,
    dim: int = DEFAULT_DIM,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    check_convergence: bool = True,
) -> MomentSet:
    """Oracle moments of the measured pointer, certified against ``2 * dim``."""
    state, _ = pointer_after_measurement(dim, cat, meas, tol)
    m = moments_oracle(state, tol)
    if check_convergence:
        ref_state, _ = pointer_after_measurement(2 * dim, cat, meas, tol)
        diff = m.max_difference(moments_oracle(ref_state, tol))
        if diff > tol.converge:
            raise TruncationError(
                f"moments at dim={dim} and dim={2 * dim} differ by {diff:.3g}; increase the dimension"
            )
    return m


def pointer_R(cat: CatParams, meas: MeasurementParams, dim: int = DEFAULT_DIM,
              tol: Tolerances = DEFAULT_TOLERANCES, *, check_convergence: bool = True) -> float:
    return ass_witness_R(pointer_moments(cat, meas, dim, tol, check_convergence=check_convergence))


def adjudicate_moments(
    cat: CatParams,
    meas: MeasurementParams,
    registry: ErrataRegistry,
    dim: int = DEFAULT_DIM,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> dict[str, bool]:
    """Compare kappa, the three moments and R between routes; file mismatches.

    Returns ``{quantity: matched}``.
    """
    _, norm = pointer_after_measurement(dim, cat, meas, tol)
    oracle = pointer_moments(cat, meas, dim, tol)
    closed = moments_analytic(cat, meas)
    out = {"kappa": registry.check(cat, meas, "kappa", kappa_analytic(cat, meas), 1.0 / norm, tol.analytic)}
    for name in ("a2", "a4", "adag2a2"):
        out[name] = registry.check(cat, meas, name, getattr(closed, name), getattr(oracle, name), tol.analytic)
    out["R"] = registry.check(cat, meas, "R", ass_witness_R(closed), ass_witness_R(oracle), tol.analytic)
    return out


# -- scans ------------------------------------------------------------------

@dataclass(frozen=True)
class ScanPoint:
    value: float
    cat: CatParams | None
    meas: MeasurementParams | None
    R: float | None
    P_s: float | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def with_axis(cat: CatParams, meas: MeasurementParams, axis: str, value: float
              ) -> tuple[CatParams, MeasurementParams]:
    if axis not in SCAN_AXES:
        raise InvalidParameterError(f"unknown scan axis {axis!r}; expected one of {SCAN_AXES}")
    if axis in ("alpha_abs", "delta", "omega"):
        return replace(cat, **{axis: value}), meas
    return cat, replace(meas, **{axis: value})


def R_scan(
    cat_base: CatParams,
    meas: MeasurementParams,
    axis: str,
    values: Sequence[float],
    dim: int = DEFAULT_DIM,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    check_convergence: bool = True,
    workers: int | None = None,
) -> list[ScanPoint]:
    """Oracle R and postselection probability along one parameter axis.

    A failing point (truncation, invalid parameter, null state) is reported in
    its :attr:`ScanPoint.error` and the scan carries on.  Output order always
    matches ``values``.
    """
    if axis not in SCAN_AXES:
        raise InvalidParameterError(f"unknown scan axis {axis!r}; expected one of {SCAN_AXES}")

    def one(value: float) -> ScanPoint:
        value = float(value)
        try:
            c, m = with_axis(cat_base, meas, axis, value)
            r = pointer_R(c, m, dim, tol, check_convergence=check_convergence)
            return ScanPoint(value, c, m, r, postselection_probability(m))
        except PostselcatError as exc:
            return ScanPoint(value, None, None, None, None, f"{type(exc).__name__}: {exc}")

    workers = workers or os.cpu_count() or 1
    if workers == 1:
        return [one(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, values))
