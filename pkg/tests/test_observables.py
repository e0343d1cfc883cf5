import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state
from postselcat.errata import ErrataRegistry
from postselcat.errors import InvalidParameterError, TruncationError
from postselcat.hilbert import ladder_operators
from postselcat.observables import (
    R_scan,
    adjudicate_moments,
    ass_witness_R,
    moments_analytic,
    moments_oracle,
    pointer_moments,
    pointer_R,
    uncertainty_product,
    with_axis,
    y_variance,
)
from postselcat.postselect import MeasurementParams, pointer_after_measurement
from postselcat.states import CatParams, coherent_vector


def test_coherent_moments_and_zero_R():
    alpha = 0.8 + 0.6j
    m = moments_oracle(coherent_vector(64, alpha))
    assert m.a2 == pytest.approx(alpha ** 2, abs=1e-12)
    assert m.a4 == pytest.approx(alpha ** 4, abs=1e-12)
    assert m.adag2a2 == pytest.approx(abs(alpha) ** 4, abs=1e-12)
    assert m.n == pytest.approx(1.0, abs=1e-12)
    assert abs(ass_witness_R(m)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(3, 20))
def test_R_identity(seed, support):
    v = random_state(np.random.default_rng(seed), 32, support)
    _, _, n = ladder_operators(32)
    lhs = y_variance(v, 1) - (np.vdot(v, n @ v).real + 0.5)
    assert lhs == pytest.approx(ass_witness_R(moments_oracle(v)), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_uncertainty_relation(seed):
    v = random_state(np.random.default_rng(seed), 40, 12)
    prod, bound = uncertainty_product(v)
    assert prod >= bound - 1e-9


def test_y_variance_component_check():
    with pytest.raises(InvalidParameterError):
        y_variance(coherent_vector(8, 0.1), 3)


@pytest.mark.parametrize("omega", [0.0, math.pi / 2, math.pi])
@pytest.mark.parametrize("alpha", [0.5, 1.5, 3.0])
def test_no_squeezing_without_coupling(omega, alpha):
    assert abs(pointer_R(CatParams(alpha, 0.0, omega), MeasurementParams(gamma=0.0))) < 1e-9


def test_kappa_and_a2_closed_forms_match_oracle(strong_meas):
    cat = CatParams(1.0, 0.0, 0.0)
    closed = moments_analytic(cat, strong_meas)
    oracle = pointer_moments(cat, strong_meas)
    assert closed.a2 == pytest.approx(oracle.a2, abs=1e-8)
    assert math.isnan(closed.n)


def test_adjudication_files_mismatches(tmp_path, strong_meas):
    reg = ErrataRegistry(tmp_path / "e.tsv")
    res = adjudicate_moments(CatParams(1.0), strong_meas, reg)
    assert res["kappa"] and res["a2"]
    mismatched = [k for k, ok in res.items() if not ok]
    assert len(reg) == len(mismatched)
    assert {e.quantity for e in reg.entries} == set(mismatched)


def test_convergence_failure_names_dimension():
    cat = CatParams(2.4)
    meas = MeasurementParams(gamma=2.0)
    with pytest.raises(TruncationError, match="dim"):
        pointer_moments(cat, meas, dim=40)


def test_moments_converge_with_dimension(strong_meas):
    cat = CatParams(2.0, 0.3, math.pi / 2)
    a = pointer_moments(cat, strong_meas, 64, check_convergence=False)
    b = pointer_moments(cat, strong_meas, 128, check_convergence=False)
    assert a.max_difference(b) < 1e-8


def test_scan_preserves_order_and_reports_failures(strong_meas):
    values = [0.0, 0.5, 1.0, 1.5]
    pts = R_scan(CatParams(0.0, 0.0, math.pi), strong_meas, "alpha_abs", values, 64, workers=4)
    assert [p.value for p in pts] == values
    assert not pts[0].ok and "NullStateError" in pts[0].error and pts[0].R is None
    assert all(p.ok for p in pts[1:])
    serial = R_scan(CatParams(0.0, 0.0, math.pi), strong_meas, "alpha_abs", values, 64, workers=1)
    assert [p.R for p in serial] == [p.R for p in pts]


def test_scan_gamma_axis_rejects_theta_pi():
    pts = R_scan(CatParams(1.0), MeasurementParams(), "theta", [math.pi / 2, math.pi], 64)
    assert pts[0].ok and not pts[1].ok


def test_with_axis():
    cat, meas = with_axis(CatParams(1.0), MeasurementParams(), "gamma", 0.5)
    assert meas.gamma == 0.5 and cat.alpha_abs == 1.0
    with pytest.raises(InvalidParameterError):
        with_axis(CatParams(1.0), MeasurementParams(), "sigma", 1.0)


def test_final_state_moments_finite(strong_meas):
    state, _ = pointer_after_measurement(64, CatParams(1.0), strong_meas)
    m = moments_oracle(state)
    assert all(np.isfinite(abs(v)) for v in m.as_dict().values())
