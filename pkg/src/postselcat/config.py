"""Numerical tolerances shared by the library, the CLI and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

DEFAULT_DIM = 64


@dataclass(frozen=True)
class Tolerances:
    """Every threshold used to accept or reject a numerical result.

    Attributes
    ----------
    norm : float
        Allowed deviation of ``<v|v>`` from one for a normalized vector.
    tail : float
        Largest probability mass allowed to leak out of the truncated Fock
        space before a state is rejected as unconverged.
    converge : float
        Agreement required between a result at ``dim`` and at ``2 * dim``.
    unitary : float
        Entrywise residual allowed for displacement identities on the guarded
        block.
    hermitian : float
        Imaginary part tolerated in the expectation of a Hermitian operator.
    analytic : float
        Scaled mismatch above which a closed-form value is filed as an
        erratum (``|closed - oracle| / max(1, |oracle|)``).
    route : float
        Agreement required between the two numerical Wigner routes.
    quadrature : float
        Change tolerated when the characteristic-function quadrature is
        refined.
    coverage : float
        Largest ``|W|`` allowed on the boundary of a phase-space grid before
        integrals over it are refused.
    null : float
        Squared norm below which a superposition is treated as vanishing.
    """

    norm: float = 1e-10
    tail: float = 1e-12
    converge: float = 1e-8
    unitary: float = 1e-8
    hermitian: float = 1e-10
    analytic: float = 1e-8
    route: float = 1e-6
    quadrature: float = 1e-6
    coverage: float = 1e-3
    null: float = 1e-14

    def override(self, **changes: float | None) -> "Tolerances":
        """Return a copy with the non-``None`` entries of ``changes`` applied."""
        known = {f.name for f in fields(self)}
        unknown = set(changes) - known
        if unknown:
            raise KeyError(f"unknown tolerance(s): {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in changes.items() if v is not None})


DEFAULT_TOLERANCES = Tolerances()


def guard_band(dim: int) -> int:
    """Minimum number of top Fock levels excluded from fidelity checks."""
    return math.ceil(dim / 8)
