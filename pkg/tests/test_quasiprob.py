import math

import numpy as np
import pytest
from hypothesis import given, settings

from qphase.charfn import chi_a, chi_b, chi_thermal, transform_params
from qphase.core import PhaseSpaceGrid, StateParams
from qphase.quasiprob import (
    GridSupportError,
    SingularDistributionError,
    classify_distribution,
    default_eta_grid,
    default_xi_grid,
    dense_fourier_w,
    fourier_w,
    gaussian_coefficients,
    w_a_closed,
    w_b_closed,
    w_closed_grid,
)

from conftest import state_params


def _fft_at(params, p, chi, basis="a"):
    xi_grid = default_xi_grid(params, p, basis)
    eff = params if basis == "a" else transform_params(params)
    return fourier_w(chi, xi_grid, p, eta_center=-eff.alpha)


def test_coefficients_unsqueezed():
    params = StateParams.make(alpha=0.7 - 0.2j, n_bar=0.3, phi=1.1)
    for p in (1.0, 0.0, -1.0, 0.5):
        c = gaussian_coefficients(params, p)
        assert c.a2 == pytest.approx(0.3 + 0.5 * (1 - p), abs=1e-15)
        assert c.b2 == pytest.approx(0.3 + 0.5 * (1 - p), abs=1e-15)
        assert c.c == 0.0


@pytest.mark.parametrize("r", [0.1, 0.5, 1.3])
def test_coefficients_squeezed_vacuum(r):
    c = gaussian_coefficients(StateParams.make(r=r), 0.0)
    assert c.a2 == pytest.approx(math.exp(-2 * r) / 2, rel=1e-13)
    assert c.b2 == pytest.approx(math.exp(2 * r) / 2, rel=1e-13)
    assert c.c == pytest.approx(0.0, abs=1e-15)
    assert c.det == pytest.approx(1.0, rel=1e-12)


def test_p_function_singular_example():
    c = gaussian_coefficients(StateParams.make(r=0.5), 1.0)
    assert c.a2 == pytest.approx(math.sinh(0.5) * (math.sinh(0.5) - math.cosh(0.5)), rel=1e-13)
    assert not c.valid
    with pytest.raises(SingularDistributionError, match="not a normalizable Gaussian"):
        w_a_closed(0j, StateParams.make(r=0.5), 1.0)


@given(state_params(max_r=1.5, max_nbar=2.0))
def test_coefficients_match_textbook_form(params):
    """A^2, B^2, C written with n_bar cosh 2r + sinh^2 r terms."""
    r, phi, n = params.r, params.phi, params.n_bar
    for p in (1.0, 0.0, -1.0):
        a2 = (n * math.cosh(2 * r) + math.sinh(r) ** 2 + 0.5 * (1 - p)
              - (n + 0.5) * math.sinh(2 * r) * math.cos(phi))
        b2 = (n * math.cosh(2 * r) + math.sinh(r) ** 2 + 0.5 * (1 - p)
              + (n + 0.5) * math.sinh(2 * r) * math.cos(phi))
        c = 2 * (n + 0.5) * math.sinh(2 * r) * math.sin(phi)
        got = gaussian_coefficients(params, p)
        scale = math.cosh(2 * r) * (n + 1)
        assert got.a2 == pytest.approx(a2, abs=1e-13 * scale)
        assert got.b2 == pytest.approx(b2, abs=1e-13 * scale)
        assert got.c == pytest.approx(c, abs=1e-13 * scale)


@given(state_params(max_r=1.5, max_nbar=2.0))
def test_wigner_and_q_always_valid(params):
    for p in (0.0, -1.0):
        assert gaussian_coefficients(params, p).valid
    # at p = 0 the determinant is (2 n_bar + 1)^2 independent of squeezing
    assert gaussian_coefficients(params, 0.0).det == pytest.approx(
        (2 * params.n_bar + 1) ** 2, rel=1e-10)


@given(state_params(max_r=1.5))
def test_p_function_pure_squeezed_always_singular(params):
    if params.r < 1e-3:
        return
    pure = StateParams(params.alpha, params.squeeze, StateParams.make().thermal)
    assert not gaussian_coefficients(pure, 1.0).valid


def test_vacuum_wigner_peak():
    assert w_a_closed(0j, StateParams.make(), 0.0) == pytest.approx(2 / math.pi, abs=1e-15)
    for r, phi in [(0.3, 0.0), (1.0, 2.0), (0.7, 4.5)]:
        assert w_a_closed(0j, StateParams.make(r=r, phi=phi), 0.0) == pytest.approx(
            2 / math.pi, rel=1e-12)


def test_thermal_wigner():
    eta = np.linspace(-3, 3, 13) + 0.4j
    got = w_a_closed(eta, StateParams.make(n_bar=1.0), 0.0)
    np.testing.assert_allclose(got, 2 / (3 * math.pi) * np.exp(-2 * np.abs(eta) ** 2 / 3),
                               atol=1e-15)


def test_w_b_examples():
    eta = np.array([0.3 - 0.1j, -1.0 + 2.0j])
    params = StateParams.make(n_bar=0.4, phi=1.0)
    np.testing.assert_allclose(w_b_closed(eta, params, 0.0), w_a_closed(eta, params, 0.0), rtol=1e-15)
    shifted = StateParams.make(alpha=1.0)
    assert w_b_closed(1.0 + 0j, shifted, 0.0) == pytest.approx(2 / math.pi, abs=1e-15)
    assert w_a_closed(-1.0 + 0j, shifted, 0.0) == pytest.approx(2 / math.pi, abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(state_params())
def test_peak_at_minus_alpha(params):
    for p in (0.0, -1.0):
        peak = w_a_closed(-params.alpha, params, p)
        for d in (0.05, 0.05j, -0.05, -0.05j):
            assert w_a_closed(-params.alpha + d, params, p) < peak


@given(state_params())
def test_reflection_symmetry(params):
    """The Gaussian is even about its centre."""
    for d in (0.3 + 0.1j, -0.2 + 0.9j):
        a = w_a_closed(-params.alpha + d, params, 0.0)
        b = w_a_closed(-params.alpha - d, params, 0.0)
        assert a == pytest.approx(b, rel=1e-13)


def test_classify():
    assert classify_distribution(1) == "P"
    assert classify_distribution(0) == "Wigner"
    assert classify_distribution(-1) == "Q"
    assert classify_distribution(0.5) == "generalized(0.5)"


def test_fft_vacuum_centre_mapping():
    """A half-cell shift puts a sample exactly at the origin."""
    params = StateParams.make()
    xi_grid = PhaseSpaceGrid.square(8.0, 256)
    probe = fourier_w(lambda xi: chi_thermal(xi, 0.0, 0.0), xi_grid, 0.0)
    h = probe.grid.spacing_re
    w = fourier_w(lambda xi: chi_thermal(xi, 0.0, 0.0), xi_grid, 0.0,
                  eta_center=complex(h / 2, h / 2))
    k = w.grid.n_re // 2 - 1
    assert w.grid.re_axis[k] == pytest.approx(0.0, abs=1e-14)
    assert w.grid.im_axis[k] == pytest.approx(0.0, abs=1e-14)
    assert w.values[k, k] == pytest.approx(2 / math.pi, abs=1e-6)
    assert w_a_closed(0j, params, 0.0) == pytest.approx(2 / math.pi)


def test_fft_axis_orientation():
    """An off-axis displacement separates e1 from e2 in the output layout."""
    params = StateParams.make(alpha=0.8 - 0.3j, r=0.6, phi=0.9, n_bar=0.2)
    w = _fft_at(params, 0.0, lambda xi: chi_a(xi, params, 0.0))
    closed = w_a_closed(w.grid.mesh(), params, 0.0)
    assert np.abs(w.values - closed).max() < 1e-10
    idx = np.unravel_index(np.argmax(w.values), w.values.shape)
    assert abs(w.grid.re_axis[idx[1]] + 0.8) <= w.grid.spacing_re
    assert abs(w.grid.im_axis[idx[0]] - 0.3) <= w.grid.spacing_im


@settings(max_examples=10, deadline=None)
@given(state_params())
def test_fft_matches_closed(params):
    for p in (0.0, -1.0):
        for basis, chi in (("a", chi_a), ("B", chi_b)):
            w = _fft_at(params, p, lambda xi: chi(xi, params, p), basis)
            eta = w.grid.mesh()
            closed = (w_a_closed if basis == "a" else w_b_closed)(eta, params, p)
            assert np.abs(w.values - closed).max() <= 1e-5


def test_dense_transform_agrees():
    params = StateParams.make(alpha=0.2 + 0.4j, r=0.4, phi=2.0, n_bar=0.3)
    xi_grid = PhaseSpaceGrid.square(9.0, 128)
    chi = lambda xi: chi_a(xi, params, 0.0)  # noqa: E731
    w = fourier_w(chi, xi_grid, 0.0, eta_center=-params.alpha)
    dense = dense_fourier_w(chi, xi_grid, w.grid)
    assert np.abs(w.values - dense.real).max() < 1e-12


def test_q_function_positive():
    params = StateParams.make(alpha=0.5, r=1.0, phi=0.3)
    w = _fft_at(params, -1.0, lambda xi: chi_a(xi, params, -1.0))
    assert w.values.min() >= -1e-10


def test_fft_singular_regime():
    params = StateParams.make(r=0.5)
    with pytest.raises(SingularDistributionError):
        fourier_w(lambda xi: chi_a(xi, params, 1.0), PhaseSpaceGrid.square(6.0, 64), 1.0)


def test_fft_grid_too_small():
    with pytest.raises(GridSupportError, match="too small"):
        fourier_w(lambda xi: chi_thermal(xi, 0.0, 0.0), PhaseSpaceGrid.square(2.0, 64), 0.0)


def test_fft_rejects_offset_xi_grid():
    with pytest.raises(ValueError):
        fourier_w(lambda xi: chi_thermal(xi, 0.0, 0.0), PhaseSpaceGrid.square(8.0, 64, center=1.0), 0.0)


@settings(max_examples=20, deadline=None)
@given(state_params())
def test_closed_grid_normalized(params):
    for basis in ("a", "B"):
        for p in (0.0, -1.0):
            assert w_closed_grid(params, p, basis).normalization_residual() <= 1e-6


def test_eta_grid_refines_for_elongated_states():
    g = default_eta_grid(StateParams.make(r=1.5), 0.0)
    assert g.n_re > 256
    assert w_closed_grid(StateParams.make(r=1.5), 0.0).normalization_residual() <= 1e-6


def test_bad_basis():
    with pytest.raises(ValueError):
        w_closed_grid(StateParams.make(), 0.0, basis="x")
