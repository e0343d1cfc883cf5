"""Wigner function of a single-mode pure state.

Phase-space points are complex amplitudes ``z = x + i p`` with the
convention that ``|alpha>`` peaks at ``z = alpha``.  Then
``-2/pi <= W <= 2/pi`` and ``integral W dx dp = 1``.

Routes
------
parity
    ``W(z) = (2/pi) <psi| D(2z) Pi |psi>``, with ``Pi = (-1)^N``.  Only
    matrix elements inside the retained block enter, and those are exact,
    so the value is exact for the truncated vector.  Production route.
charfun
    Quadrature of the normal-ordered characteristic function
    ``C_N(l) = <psi| e^{l a_dag} e^{-conj(l) a} |psi>`` times
    ``exp(-|l|^2/2)``.  ``e^{b a}`` is a finite series on a truncated space,
    so this route shares no code with the parity route.  Validation only.
analytic
    A closed form for the measured cat pointer, transcribed term by term
    and checked against the parity route, never corrected.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .config import DEFAULT_DIM, DEFAULT_TOLERANCES, Tolerances
from .errata import ErrataRegistry
from .errors import CoverageError, InvalidParameterError, QuadratureError, TruncationError
from .hilbert import _check_state, iter_laguerre_rows, tail_mass
from .observables import _lower
from .postselect import MeasurementParams, kappa_analytic, pointer_after_measurement, weak_value
from .states import CatParams, cat_norm_constant

W_BOUND = 2.0 / math.pi
DEFAULT_BOUNDS = (-4.0, 4.0, -4.0, 4.0)
DEFAULT_RESOLUTION = (201, 201)

_CHUNK = 2048
# Amplitudes below this (in cumulative tail probability) do not change W in
# double precision and are dropped before the O(dim^2) kernels.
_TRIM = 1e-34


def _trim(psi: np.ndarray) -> np.ndarray:
    tail = np.cumsum((np.abs(psi) ** 2)[::-1])[::-1]
    keep = max(2, int(np.count_nonzero(tail > _TRIM)))
    return psi[:keep]


def _check_support(psi: np.ndarray, tol: Tolerances) -> None:
    mass = tail_mass(psi)
    if mass > tol.tail:
        raise TruncationError(
            f"state has {mass:.3g} of its weight in the top Fock levels; "
            f"its Wigner function is not converged", tail_mass=mass)


# -- parity route -----------------------------------------------------------

def _parity_kernel(psi: np.ndarray, z: np.ndarray) -> np.ndarray:
    dim = psi.size
    n = np.arange(dim)
    coeff = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        coeff[: dim - k, k] = (-1.0) ** n[: dim - k] * np.conj(psi[k:]) * psi[: dim - k]
    mu = 2.0 * z
    sums = np.zeros((z.size, dim), dtype=complex)
    for row, T in zip(range(dim), iter_laguerre_rows(np.abs(mu) ** 2, dim)):
        sums += T * coeff[row]
    phase = np.exp(1j * np.angle(mu)[:, None] * n[None, 1:])
    return W_BOUND * (sums[:, 0].real + 2.0 * (phase * sums[:, 1:]).real.sum(axis=1))


def wigner_parity(
    state: np.ndarray,
    z: np.ndarray | complex,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    workers: int | None = None,
) -> np.ndarray:
    """Parity-route Wigner values at an array of points (same shape as ``z``)."""
    psi = _check_state(state)
    _check_support(psi, tol)
    psi = _trim(psi)
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    chunks = [flat[i:i + _CHUNK] for i in range(0, flat.size, _CHUNK)]
    workers = workers or os.cpu_count() or 1
    if workers == 1 or len(chunks) == 1:
        parts = [_parity_kernel(psi, c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _parity_kernel(psi, c), chunks))
    out = np.concatenate(parts) if parts else np.empty(0)
    return out.reshape(z.shape)


def wigner_point_parity(state: np.ndarray, z: complex, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    return float(wigner_parity(state, np.array([z]), tol, workers=1)[0])


# -- characteristic-function route ------------------------------------------

def _exp_lowering_basis(psi: np.ndarray, scale: float) -> np.ndarray:
    """Rows ``scale**j a^j psi / j!`` so that ``e^{b a} psi = sum_j (b/scale)^j row_j``."""
    dim = psi.size
    rows = np.zeros((dim, dim), dtype=complex)
    v = psi.astype(complex)
    for j in range(dim):
        rows[j] = v
        v = _lower(v) * (scale / (j + 1))
    return rows


def symmetric_charfun(state: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """``C_N(l) exp(-|l|^2/2)`` from exponentials of the lowering operator."""
    psi = _trim(_check_state(state))
    lam = np.asarray(lam, dtype=complex)
    flat = lam.ravel()
    scale = max(1.0, float(np.abs(flat).max(initial=0.0)))
    rows = _exp_lowering_basis(psi, scale)
    powers = np.arange(psi.size)
    beta = np.conj(flat) / scale
    vander = beta[:, None] ** powers[None, :]
    up = vander @ rows                         # e^{conj(l) a} psi
    down = (vander * (-1.0) ** powers) @ rows  # e^{-conj(l) a} psi
    cn = np.sum(np.conj(up) * down, axis=1)
    return (cn * np.exp(-0.5 * np.abs(flat) ** 2)).reshape(lam.shape)


def _charfun_sum(cs: np.ndarray, lam: np.ndarray, z: np.ndarray, h: float) -> np.ndarray:
    out = np.empty(z.size)
    for i in range(0, z.size, 64):
        zz = z[i:i + 64]
        kern = np.exp(np.conj(lam)[None, :] * zz[:, None] - lam[None, :] * np.conj(zz)[:, None])
        out[i:i + 64] = (kern @ cs).real * h * h / math.pi ** 2
    return out


def wigner_charfun(
    state: np.ndarray,
    z: np.ndarray | complex,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    radius: float = 6.0,
    step: float = 0.1,
    max_radius: float | None = None,
) -> np.ndarray:
    """Characteristic-function-route Wigner values (validation route).

    The lambda integral runs over a disk sampled on a square lattice of
    spacing ``step``.  The radius grows in steps of ``radius`` until the
    integrand on the rim is negligible; the sum is then compared with the
    same sum on the lattice of spacing ``2 * step`` and refined once if they
    differ by more than ``tol.quadrature``.

    Raises
    ------
    QuadratureError
        If the rim never becomes negligible below ``max_radius`` or the
        refined lattice still disagrees with its coarsening.
    """
    psi = _check_state(state)
    _check_support(psi, tol)
    psi = _trim(psi)
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    if max_radius is None:
        max_radius = 4.0 * math.sqrt(psi.size) + 4 * radius
    rim_tol = 1e-3 * tol.quadrature

    R = radius
    while True:
        half = int(round(R / step))
        half += half % 2
        axis = np.arange(-half, half + 1) * step
        lr, li = np.meshgrid(axis, axis, indexing="ij")
        lam = (lr + 1j * li).ravel()
        inside = np.abs(lam) <= half * step + 1e-12
        cs = np.where(inside, symmetric_charfun(psi, lam), 0.0)
        rim = inside & (np.abs(lam) > half * step - 1.5 * step)
        if np.abs(cs[rim]).max() <= rim_tol:
            break
        R += radius
        if R > max_radius:
            raise QuadratureError(
                f"characteristic function still {np.abs(cs[rim]).max():.3g} at |lambda|={R - radius:.3g}")

    for _ in range(2):
        fine = _charfun_sum(cs, lam, flat, step)
        even = ((np.arange(-half, half + 1) % 2) == 0)
        coarse_mask = (even[:, None] & even[None, :]).ravel()
        coarse = _charfun_sum(cs[coarse_mask], lam[coarse_mask], flat, 2 * step)
        change = float(np.abs(fine - coarse).max(initial=0.0))
        if change <= tol.quadrature:
            return fine.reshape(z.shape)
        step /= 2
        half *= 2
        axis = np.arange(-half, half + 1) * step
        lr, li = np.meshgrid(axis, axis, indexing="ij")
        lam = (lr + 1j * li).ravel()
        inside = np.abs(lam) <= half * step + 1e-12
        cs = np.where(inside, symmetric_charfun(psi, lam), 0.0)
    raise QuadratureError(f"quadrature changes by {change:.3g} when the lattice is doubled")


def wigner_point_charfun(state: np.ndarray, z: complex, tol: Tolerances = DEFAULT_TOLERANCES,
                         **kwargs) -> float:
    return float(wigner_charfun(state, np.array([z]), tol, **kwargs)[0])


# -- closed form ------------------------------------------------------------

def wigner_analytic(cat: CatParams, meas: MeasurementParams, z: np.ndarray | complex) -> np.ndarray:
    """Closed-form W of the measured cat pointer, evaluated verbatim."""
    z = np.asarray(z, dtype=complex)
    aw = weak_value(meas)
    k2 = kappa_analytic(cat, meas) ** 2
    K2 = cat_norm_constant(cat) ** 2
    alpha = cat.alpha
    w = cat.omega
    g = meas.gamma
    zr, zi = z.real, z.imag

    def f(gg):
        return np.cos(4 * zi * alpha.real + 4 * zr * alpha.imag - 2 * gg * zi - w)

    def F1(gg):
        return (math.exp(-gg * gg / 2)
                * (np.exp(-2 * np.abs(z + alpha) ** 2) * np.exp(2 * gg * (z + alpha).real)
                   + np.exp(-2 * np.abs(z - alpha) ** 2) * np.exp(2 * gg * (z - alpha).real))
                + 2 * np.exp(-2 * np.abs(z) ** 2) * np.exp(-2 * (gg * gg / 4 - gg * zr)) * f(gg))

    def F2(gg):
        return (np.exp(-2 * np.abs(z - alpha) ** 2) * np.exp(2j * gg * zi)
                + np.exp(-2 * np.abs(z + alpha) ** 2) * np.exp(-2j * gg * (zi + 1j * alpha.real + alpha.imag))
                + 2 * np.exp(-2 * np.abs(z) ** 2) * np.exp(-2 * gg * (alpha.imag - alpha.real)) * f(gg))

    bracket = (abs(1 + aw) ** 2 * F1(g) + abs(1 - aw) ** 2 * F1(-g)
               + 2 * ((1 - aw) * (1 + aw).conjugate() * F2(g)).real)
    return np.real(k2 * K2 / (2 * math.pi) * bracket)


def adjudicate_wigner(
    cat: CatParams,
    meas: MeasurementParams,
    registry: ErrataRegistry,
    points: np.ndarray,
    dim: int = DEFAULT_DIM,
    tol: Tolerances = DEFAULT_TOLERANCES,
) -> int:
    """File every point where the closed form misses the parity oracle.

    Returns the number of mismatching points.
    """
    points = np.asarray(points, dtype=complex).ravel()
    state, _ = pointer_after_measurement(dim, cat, meas, tol)
    oracle = wigner_parity(state, points, tol)
    closed = wigner_analytic(cat, meas, points)
    bad = 0
    for zz, pv, ov in zip(points, closed, oracle):
        if not registry.check(cat, meas, f"W({zz.real:.6g}{zz.imag:+.6g}i)", pv, ov, tol.route):
            bad += 1
    return bad


# -- grids ------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Wigner values on a rectangle; ``values[i, j]`` sits at ``x[i] + 1j * p[j]``."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.x.size < 2 or self.p.size < 2:
            raise InvalidParameterError("a grid needs at least two points per axis")
        if self.values.shape != (self.x.size, self.p.size):
            raise InvalidParameterError(
                f"values shape {self.values.shape} does not match ({self.x.size}, {self.p.size})")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return float(self.x[0]), float(self.x[-1]), float(self.p[0]), float(self.p[-1])

    @property
    def resolution(self) -> tuple[int, int]:
        return self.x.size, self.p.size

    def boundary_max(self) -> float:
        v = np.abs(self.values)
        return float(max(v[0].max(), v[-1].max(), v[:, 0].max(), v[:, -1].max()))


def make_axes(bounds=DEFAULT_BOUNDS, resolution=DEFAULT_RESOLUTION) -> tuple[np.ndarray, np.ndarray]:
    x0, x1, p0, p1 = (float(b) for b in bounds)
    nx, np_ = (int(r) for r in resolution)
    if not (x0 < x1 and p0 < p1):
        raise InvalidParameterError(f"grid bounds must be ordered, got {bounds}")
    if nx < 2 or np_ < 2:
        raise InvalidParameterError(f"grid needs >= 2 points per axis, got {resolution}")
    return np.linspace(x0, x1, nx), np.linspace(p0, p1, np_)


def wigner_grid(
    state: np.ndarray,
    bounds=DEFAULT_BOUNDS,
    resolution=DEFAULT_RESOLUTION,
    tol: Tolerances = DEFAULT_TOLERANCES,
    *,
    workers: int | None = None,
) -> PhaseSpaceGrid:
    """Parity-route values on a regular grid (independent of thread count)."""
    x, p = make_axes(bounds, resolution)
    z = x[:, None] + 1j * p[None, :]
    return PhaseSpaceGrid(x, p, wigner_parity(state, z, tol, workers=workers))


def _require_coverage(grid: PhaseSpaceGrid, tol: Tolerances) -> None:
    edge = grid.boundary_max()
    if edge > tol.coverage:
        raise CoverageError(
            f"|W| reaches {edge:.3g} on the grid boundary (limit {tol.coverage:.3g}); widen the grid")


def integral_check(grid: PhaseSpaceGrid, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Trapezoidal ``integral W dx dp``; one for any state whose support the grid covers."""
    _require_coverage(grid, tol)
    return float(trapezoid(trapezoid(grid.values, grid.p, axis=1), grid.x))


def negativity_volume(grid: PhaseSpaceGrid, tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """``integral |W| - integral W``: twice the negative mass of W."""
    _require_coverage(grid, tol)
    total = trapezoid(trapezoid(grid.values, grid.p, axis=1), grid.x)
    absolute = trapezoid(trapezoid(np.abs(grid.values), grid.p, axis=1), grid.x)
    return float(max(absolute - total, 0.0))


def grid_summary(grid: PhaseSpaceGrid, tol: Tolerances = DEFAULT_TOLERANCES) -> dict[str, float]:
    return {
        "min": float(grid.values.min()),
        "max": float(grid.values.max()),
        "integral": integral_check(grid, tol),
        "negativity": negativity_volume(grid, tol),
    }


def position_density(state: np.ndarray, x: np.ndarray | float) -> np.ndarray:
    """Probability density of the quadrature ``(a + a_dag)/2`` at ``x``.

    This is the ``p``-marginal of W in the ``z = x + i p`` convention,
    computed from normalized Hermite functions.
    """
    psi = _check_state(state)
    x = np.asarray(x, dtype=float)
    q = math.sqrt(2.0) * x
    prev = np.pi ** -0.25 * np.exp(-0.5 * q * q)
    amp = psi[0] * prev
    cur = math.sqrt(2.0) * q * prev
    if psi.size > 1:
        amp = amp + psi[1] * cur
    for n in range(1, psi.size - 1):
        prev, cur = cur, math.sqrt(2.0 / (n + 1)) * q * cur - math.sqrt(n / (n + 1)) * prev
        amp = amp + psi[n + 1] * cur
    return math.sqrt(2.0) * np.abs(amp) ** 2


# -- export -----------------------------------------------------------------

GRID_MAGIC = "# postselcat wigner grid v1"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def format_grid(grid: PhaseSpaceGrid, params: dict[str, float | int], summary: dict[str, float]) -> str:
    """Serialize a grid: four header lines, then one row per x value.

    ::

        # postselcat wigner grid v1
        # bounds x0=<x0> x1=<x1> p0=<p0> p1=<p1> nx=<nx> np=<np>
        # params <key>=<value> ...
        # summary min=<min> max=<max> integral=<integral> negativity=<volume>
        <W(x0,p0)> <W(x0,p1)> ... <W(x0,p_last)>
        ...

    Floats use 17 significant digits; lines end in ``\\n``.
    """
    x0, x1, p0, p1 = grid.bounds
    nx, np_ = grid.resolution
    lines = [
        GRID_MAGIC,
        f"# bounds x0={_fmt(x0)} x1={_fmt(x1)} p0={_fmt(p0)} p1={_fmt(p1)} nx={nx} np={np_}",
        "# params " + " ".join(f"{k}={_fmt(v) if isinstance(v, float) else v}" for k, v in params.items()),
        "# summary " + " ".join(f"{k}={_fmt(summary[k])}" for k in ("min", "max", "integral", "negativity")),
    ]
    lines += [" ".join(_fmt(v) for v in row) for row in grid.values]
    return "\n".join(lines) + "\n"


def write_grid(path, grid: PhaseSpaceGrid, params: dict, summary: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_grid(grid, params, summary))


def _pairs(line: str) -> dict[str, str]:
    return dict(tok.split("=", 1) for tok in line.split()[2:])


def read_grid(path) -> tuple[PhaseSpaceGrid, dict[str, str], dict[str, float]]:
    with open(path, encoding="utf-8") as fh:
        header = [fh.readline().rstrip("\n") for _ in range(4)]
        if header[0] != GRID_MAGIC:
            raise InvalidParameterError(f"{path} is not a postselcat grid file")
        b = _pairs(header[1])
        values = np.loadtxt(fh, ndmin=2)
    x, p = make_axes((float(b["x0"]), float(b["x1"]), float(b["p0"]), float(b["p1"])),
                     (int(b["nx"]), int(b["np"])))
    summary = {k: float(v) for k, v in _pairs(header[3]).items()}
    return PhaseSpaceGrid(x, p, values), _pairs(header[2]), summary
