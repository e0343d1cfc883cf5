"""Invariant suite run by ``postselcat validate``.

Each check yields a :class:`Check`; the suite never stops at the first
failure.  Closed-form comparisons feed an :class:`ErrataRegistry` and do not
count as failures.  Only the convergence precheck raises, because nothing
downstream means anything on an unconverged pointer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid

from .config import DEFAULT_DIM, DEFAULT_TOLERANCES, Tolerances
from .errata import ErrataRegistry
from .hilbert import (
    displacement,
    displacement_expm,
    guarded_size,
    is_normalized,
    ladder_operators,
    vacuum,
)
from .observables import (
    adjudicate_moments,
    ass_witness_R,
    moments_oracle,
    pointer_moments,
    pointer_R,
    uncertainty_product,
    y_variance,
)
from .postselect import MeasurementParams, pointer_after_measurement
from .states import CatParams, cat_vector, coherent_vector
from .wigner import (
    W_BOUND,
    adjudicate_wigner,
    integral_check,
    position_density,
    wigner_charfun,
    wigner_grid,
    wigner_parity,
)

SEED = 20240607
# Identities that hold exactly in real arithmetic; allow a few ulps.
_EXACT = 1e-14


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    errata: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, value: float, limit: float, *, below: bool = True) -> None:
        ok = bool(value <= limit) if below else bool(value >= limit)
        rel = "<=" if below else ">="
        self.checks.append(Check(name, ok, f"{value:.3g} (need {rel} {limit:.3g})"))


def _random_state(rng: np.random.Generator, dim: int, support: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    return v / np.linalg.norm(v)


def run_suite(
    cat: CatParams,
    meas: MeasurementParams,
    dim: int = DEFAULT_DIM,
    tol: Tolerances = DEFAULT_TOLERANCES,
    registry: ErrataRegistry | None = None,
) -> Report:
    """Run every check at the given parameters.

    Raises
    ------
    TruncationError
        From the convergence precheck, when ``dim`` is too small for the
        pointer.
    InvalidParameterError
        For parameters that admit no measurement (for instance ``theta = pi``).
    """
    registry = registry if registry is not None else ErrataRegistry()
    rng = np.random.default_rng(SEED)
    rep = Report()

    # Precheck first: raises rather than reporting.
    pointer_moments(cat, meas, dim, tol)
    state, _ = pointer_after_measurement(dim, cat, meas, tol)

    a, a_dag, n = ladder_operators(dim)
    comm = a @ a_dag - a_dag @ a - np.eye(dim)
    comm[-1, -1] += dim
    rep.add("ladder commutator off the cut-off", float(np.abs(comm).max()), _EXACT * dim)

    worst_u = worst_x = 0.0
    for mu in (0.5, 1.0 + 1.0j, meas.gamma / 2, -meas.gamma / 2):
        if guarded_size(dim, mu) < 1:
            continue
        k = guarded_size(dim, mu)
        d = displacement(dim, mu)
        worst_u = max(worst_u, float(np.abs((d.conj().T @ d)[:k, :k] - np.eye(k)).max()))
        worst_x = max(worst_x, float(np.abs(d[:k, :k] - displacement_expm(dim, mu)[:k, :k]).max()))
    rep.add("displacement unitary on guarded block", worst_u, tol.unitary)
    rep.add("Laguerre displacement matches expm", worst_x, tol.unitary)

    coh = coherent_vector(dim, cat.alpha, tol)
    rep.add("coherent state equals displaced vacuum",
            float(np.abs(displacement(dim, cat.alpha) @ vacuum(dim) - coh).max()), tol.unitary)

    even = cat_vector(dim, CatParams(cat.alpha_abs or 1.0, cat.delta, 0.0), tol)
    odd = cat_vector(dim, CatParams(cat.alpha_abs or 1.0, cat.delta, math.pi), tol)
    rep.add("even and odd cats stay in their parity sector",
            float(max(np.abs(even[1::2]).max(), np.abs(odd[0::2]).max())), _EXACT)

    rep.checks.append(Check("measured pointer normalized", is_normalized(state, tol),
                            f"|<psi|psi> - 1| = {abs(np.vdot(state, state).real - 1):.3g}"))

    worst = 0.0
    for _ in range(25):
        v = _random_state(rng, dim, int(rng.integers(4, dim // 2)))
        lhs = y_variance(v, 1) - (np.vdot(v, n @ v).real + 0.5)
        worst = max(worst, abs(lhs - ass_witness_R(moments_oracle(v, tol))))
    rep.add("R equals var(Y1) - <N + 1/2> (25 random states)", worst, 1e-9)

    r0 = abs(pointer_R(cat, MeasurementParams(meas.theta, meas.phi, 0.0), dim, tol))
    rep.add("R vanishes without coupling", r0, 1e-9)

    prod, bound = uncertainty_product(state)
    rep.add("dY1 dY2 - <N + 1/2>", prod - bound, -1e-9, below=False)

    axis = np.linspace(-3.0, 3.0, 21)
    pts = (axis[:, None] + 1j * axis[None, :]).ravel()
    w_par = wigner_parity(state, pts, tol)
    w_cf = wigner_charfun(state, pts, tol)
    rep.add("parity and characteristic-function routes agree (21x21)",
            float(np.abs(w_par - w_cf).max()), tol.route)
    rep.add("max |W| (bound 2/pi)", float(max(np.abs(w_par).max(), np.abs(w_cf).max())), W_BOUND + 1e-6)

    grid = wigner_grid(state, tol=tol)
    rep.add("integral of W over the default grid", abs(integral_check(grid, tol) - 1.0), 1e-3)
    xs = np.linspace(-2.0, 2.0, 5)
    idx = [int(np.argmin(np.abs(grid.x - x))) for x in xs]
    marg = trapezoid(grid.values[idx], grid.p, axis=1)
    rep.add("p-marginal equals Hermite position density",
            float(np.abs(marg - position_density(state, grid.x[idx])).max()), 1e-4)

    before = len(registry)
    matched = adjudicate_moments(cat, meas, registry, dim, tol)
    rep.errata["moments"] = sum(not ok for ok in matched.values())
    rep.errata["wigner"] = adjudicate_wigner(cat, meas, registry, pts, dim, tol)
    rep.errata["total"] = len(registry) - before
    return rep
