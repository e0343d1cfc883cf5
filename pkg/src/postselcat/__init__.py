"""Amplified squeezing of cat-state pointers under postselected measurement."""

from .config import DEFAULT_DIM, DEFAULT_TOLERANCES, Tolerances
from .errata import ErrataRegistry, read_errata
from .errors import (
    CoverageError,
    DomainError,
    InvalidDimensionError,
    InvalidParameterError,
    NullStateError,
    NumericalError,
    OrthogonalSelectionError,
    PostselcatError,
    QuadratureError,
    TruncationError,
)
from .observables import (
    MomentSet,
    R_scan,
    ass_witness_R,
    moments_analytic,
    moments_oracle,
    pointer_R,
    pointer_moments,
)
from .postselect import (
    MeasurementParams,
    final_pointer_state,
    kappa_analytic,
    pointer_after_measurement,
    postselection_probability,
    weak_value,
)
from .states import CatParams, cat_vector, coherent_vector
from .wigner import (
    PhaseSpaceGrid,
    integral_check,
    negativity_volume,
    wigner_analytic,
    wigner_charfun,
    wigner_grid,
    wigner_parity,
)

__version__ = "0.1.0"
