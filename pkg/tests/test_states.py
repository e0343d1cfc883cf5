import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from postselcat.errors import InvalidParameterError, NullStateError, TruncationError
from postselcat.hilbert import displacement, ladder_operators, vacuum
from postselcat.states import CatParams, cat_norm_constant, cat_vector, coherent_vector


def test_coherent_zero_is_vacuum():
    assert np.array_equal(coherent_vector(8, 0), vacuum(8))


def test_coherent_mean_photon_number():
    v = coherent_vector(64, 1.0)
    _, _, n = ladder_operators(64)
    assert abs(np.vdot(v, n @ v).real - 1.0) < 1e-10
    assert abs(np.vdot(v, v).real - 1.0) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 2.5), st.floats(0, 2 * math.pi))
def test_coherent_equals_displaced_vacuum(r, phase):
    alpha = r * complex(math.cos(phase), math.sin(phase))
    assert np.abs(displacement(64, alpha) @ vacuum(64) - coherent_vector(64, alpha)).max() < 1e-8


def test_coherent_truncation_error():
    with pytest.raises(TruncationError):
        coherent_vector(8, 2.0)


def test_norm_constant_even_cat_large_alpha():
    assert cat_norm_constant(CatParams(5.0)) == pytest.approx(1 / math.sqrt(2), abs=1e-10)


def test_odd_cat_at_zero_is_null():
    with pytest.raises(NullStateError):
        cat_norm_constant(CatParams(0.0, 0.0, math.pi))


def test_small_odd_cat_norm_is_accurate():
    # 2 - 2 exp(-2 a^2) ~ 4 a^2 for small a; expm1 keeps it accurate.
    a = 1e-4
    assert cat_norm_constant(CatParams(a, 0.0, math.pi)) ** -2 == pytest.approx(4 * a * a, rel=1e-7)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 2.5), st.floats(-math.pi, math.pi), st.floats(0, 2 * math.pi))
def test_cat_normalized_and_matches_superposition(r, delta, omega):
    p = CatParams(r, delta, omega)
    v = cat_vector(64, p)
    assert abs(np.vdot(v, v).real - 1) < 1e-10
    ref = coherent_vector(64, p.alpha) + np.exp(1j * omega) * coherent_vector(64, -p.alpha)
    assert np.abs(cat_norm_constant(p) * ref - v).max() < 1e-12


def test_parity_sectors():
    even = cat_vector(32, CatParams(1.3, 0.4, 0.0))
    odd = cat_vector(32, CatParams(1.3, 0.4, math.pi))
    assert np.abs(even[1::2]).max() < 1e-15
    assert np.abs(odd[0::2]).max() < 1e-15


@pytest.mark.parametrize("kwargs", [dict(alpha_abs=-1), dict(alpha_abs=1, omega=7.0),
                                    dict(alpha_abs=1, delta=float("nan")), dict(alpha_abs=float("inf"))])
def test_invalid_params(kwargs):
    with pytest.raises(InvalidParameterError):
        CatParams(**kwargs)
