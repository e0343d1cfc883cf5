import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_genlaguerre, gammaln

from postselcat.errors import InvalidDimensionError, InvalidParameterError, NullStateError, TruncationError
from postselcat.hilbert import (
    displacement,
    displacement_expm,
    embed,
    expectation,
    fock,
    guarded_size,
    is_normalized,
    ladder_operators,
    laguerre_table,
    momentum_operator,
    normalize,
    position_operator,
    tail_mass,
    vacuum,
)

complex_mu = st.builds(complex, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))


def test_ladder_matrix_elements_exact():
    a, a_dag, n = ladder_operators(6)
    for m in range(6):
        for k in range(6):
            assert a[m, k] == (math.sqrt(k) if m == k - 1 else 0.0)
    assert np.array_equal(a_dag, a.conj().T)
    assert np.allclose(np.diag(n).real, np.arange(6))


def test_commutator_is_identity_except_last_entry():
    a, a_dag, _ = ladder_operators(10)
    c = a @ a_dag - a_dag @ a
    expected = np.eye(10)
    expected[-1, -1] = 1 - 10
    assert np.allclose(c, expected, atol=1e-12)


@pytest.mark.parametrize("bad", [0, 1, 2.5, -3])
def test_rejects_bad_dimension(bad):
    with pytest.raises(InvalidDimensionError):
        ladder_operators(bad)


def test_x_and_p_are_conjugate_on_low_levels():
    sigma = 0.7
    x = position_operator(12, sigma)
    p = momentum_operator(12, sigma)
    c = x @ p - p @ x
    assert np.allclose(c[:10, :10], 1j * np.eye(10), atol=1e-12)
    with pytest.raises(InvalidParameterError):
        momentum_operator(4, 0.0)


def test_laguerre_table_matches_closed_form():
    x = 2.3
    t = laguerre_table(x, 12)
    for n in range(12):
        for k in range(12):
            ref = math.exp(0.5 * (gammaln(n + 1) - gammaln(n + k + 1)) + 0.5 * k * math.log(x) - 0.5 * x) \
                * eval_genlaguerre(n, k, x)
            assert t[n, k] == pytest.approx(ref, abs=1e-13)


def test_laguerre_rows_finite_for_large_argument():
    t = laguerre_table(900.0, 200)
    assert np.all(np.isfinite(t)) and np.abs(t).max() <= 1 + 1e-9


def test_displacement_zero_is_identity():
    assert np.array_equal(displacement(8, 0), np.eye(8))


def test_displacement_matches_expm_on_guarded_block():
    for mu in (0.3, 1 + 0.5j, -1.2j, 2.0):
        k = guarded_size(64, mu)
        assert k > 0
        diff = displacement(64, mu)[:k, :k] - displacement_expm(64, mu)[:k, :k]
        assert np.abs(diff).max() < 1e-8


def test_guard_band_default_bounds_block():
    assert guarded_size(64) == min(64 - 8, math.floor((8 - 1.5) ** 2))
    assert guarded_size(1024) == 1024 - 128
    assert guarded_size(64, 3.0) < guarded_size(64, 1.0)
    assert guarded_size(4, 5.0) == 0


def test_displacement_too_large_raises_with_tail():
    with pytest.raises(TruncationError) as info:
        displacement(8, 4.0)
    assert info.value.tail_mass > 0.1


def test_displacement_is_read_only_and_cached():
    d = displacement(16, 0.4)
    assert d is displacement(16, 0.4)
    with pytest.raises(ValueError):
        d[0, 0] = 0


@settings(max_examples=30, deadline=None)
@given(complex_mu)
def test_displacement_unitary_on_guarded_block(mu):
    k = guarded_size(64, mu)
    d = displacement(64, mu)
    assert np.abs((d.conj().T @ d)[:k, :k] - np.eye(k)).max() <= 1e-8


@settings(max_examples=30, deadline=None)
@given(complex_mu, complex_mu)
def test_displacement_composition_phase(mu, nu):
    # D(mu) D(nu) = exp(i Im(mu conj(nu))) D(mu + nu) on vectors well below the cut-off.
    dim = 96
    v = np.zeros(dim, dtype=complex)
    v[:6] = 1 / math.sqrt(6)
    lhs = displacement(dim, mu) @ (displacement(dim, nu) @ v)
    rhs = np.exp(1j * (mu * np.conj(nu)).imag) * (displacement(dim, mu + nu) @ v)
    assert np.abs(lhs - rhs).max() < 1e-10


def test_expectation_and_shape_check():
    _, _, n = ladder_operators(5)
    assert expectation(fock(5, 3), n) == pytest.approx(3)
    with pytest.raises(InvalidParameterError):
        expectation(fock(5, 1), np.eye(4))


def test_normalize_and_null():
    v, nrm = normalize(np.array([3.0, 4.0]))
    assert nrm == pytest.approx(5) and is_normalized(v)
    with pytest.raises(NullStateError):
        normalize(np.zeros(3))


def test_fock_and_vacuum_bounds():
    assert vacuum(3)[0] == 1
    with pytest.raises(InvalidParameterError):
        fock(3, 3)


def test_tail_mass_and_embed():
    v = np.zeros(16, dtype=complex)
    v[0] = v[15] = 1 / math.sqrt(2)
    assert tail_mass(v) == pytest.approx(0.5)
    assert tail_mass(v, levels=1) == pytest.approx(0.5)
    w = embed(vacuum(4), 9)
    assert w.size == 9 and w[0] == 1
    assert embed(w, 4).size == 4
    with pytest.raises(TruncationError):
        embed(fock(9, 8), 4)
