import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postselcat.errors import InvalidParameterError, OrthogonalSelectionError, TruncationError
from postselcat.hilbert import vacuum
from postselcat.postselect import (
    MeasurementParams,
    final_pointer_state,
    kappa_analytic,
    pointer_after_measurement,
    postselection_probability,
    weak_value,
)
from postselcat.states import CatParams, cat_vector


def test_weak_value_and_probability():
    m = MeasurementParams(math.pi / 2, 7 * math.pi / 9, 2.0)
    assert weak_value(m) == pytest.approx(complex(math.cos(7 * math.pi / 9), math.sin(7 * math.pi / 9)))
    assert postselection_probability(m) == pytest.approx(0.5)
    assert m.regime == "strong" and MeasurementParams(gamma=0.5).regime == "weak"


def test_orthogonal_selection():
    with pytest.raises(OrthogonalSelectionError):
        weak_value(MeasurementParams(math.pi, 0.0, 1.0))


@pytest.mark.parametrize("kwargs", [dict(theta=-0.1), dict(theta=4.0), dict(phi=2 * math.pi),
                                    dict(gamma=float("nan"))])
def test_invalid_measurement(kwargs):
    with pytest.raises(InvalidParameterError):
        MeasurementParams(**kwargs)


def test_zero_coupling_leaves_pointer():
    v = cat_vector(32, CatParams(1.0))
    out, nrm = final_pointer_state(v, MeasurementParams(gamma=0.0))
    assert np.array_equal(out, v) and nrm == pytest.approx(1.0)


def test_theta_zero_is_plain_displacement_mixture():
    # A_w = 0: the pointer becomes (D(G/2) + D(-G/2)) |0> / 2, an even cat of amplitude G/2.
    out, _ = final_pointer_state(vacuum(64), MeasurementParams(0.0, 0.0, 2.0))
    ref = cat_vector(64, CatParams(1.0))
    assert abs(abs(np.vdot(ref, out)) - 1) < 1e-12


def test_truncation_detected():
    with pytest.raises(TruncationError):
        final_pointer_state(cat_vector(24, CatParams(1.5)), MeasurementParams(gamma=6.0))


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 2.0), st.sampled_from([0.0, math.pi / 2, math.pi]),
       st.floats(0, 3.0), st.floats(0, 6.28), st.floats(0, 3.0))
def test_kappa_real_alpha_matches_oracle(r, omega, theta, phi, gamma):
    cat = CatParams(r, 0.0, omega)
    meas = MeasurementParams(theta, phi, gamma)
    _, nrm = pointer_after_measurement(96, cat, meas)
    assert kappa_analytic(cat, meas) == pytest.approx(1 / nrm, rel=1e-8)
