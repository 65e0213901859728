"""Grid, transform, and observable checks against independent oracles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptrotor.errors import DegenerateStateError, InvalidParameterError
from ptrotor.oracle import dense_momentum_operator, transform_matrix
from ptrotor.state import (
    WaveFunction,
    apply_p,
    apply_theta,
    from_momentum,
    make_basis,
    make_gaussian,
    make_grid,
    norm,
    observables,
    overlap,
    position_moment,
    to_momentum,
)

TWO_PI = 2.0 * np.pi

# Frozen oracle values (sigma=10, hbar_eff=0.1).
# Discrete momentum moment of the analytic Fourier coefficients
# c_n = (1/(pi*sigma))^(1/4) exp(-n^2/(2*sigma)), summed over |n| <= 400:
ORACLE_GAUSSIAN_P2 = 0.05000000000000001
# High-resolution quadrature of hbar^2 * integral |d(theta*psi)/dtheta|^2:
ORACLE_THETA_GAUSSIAN_P2 = 0.0075


def gaussian_state(n_points=2**14, sigma=10.0, hbar_eff=0.1):
    grid = make_grid(n_points)
    basis = make_basis(n_points, hbar_eff)
    return make_gaussian(sigma, grid, basis)


def random_state(n_points=256, seed=0, hbar_eff=0.1):
    rng = np.random.default_rng(seed)
    grid = make_grid(n_points)
    basis = make_basis(n_points, hbar_eff)
    amps = rng.standard_normal(n_points) + 1j * rng.standard_normal(n_points)
    return WaveFunction(amps, grid, basis)


def test_grid_layout():
    grid = make_grid(1024)
    assert grid.theta_values[0] == -np.pi
    assert grid.theta_values[-1] < np.pi
    assert grid.spacing * grid.n_points == pytest.approx(TWO_PI, abs=0)
    spacings = np.diff(grid.theta_values)
    assert np.allclose(spacings, grid.spacing, rtol=0, atol=1e-15)


def test_grid_rejects_non_power_of_two():
    with pytest.raises(InvalidParameterError):
        make_grid(1000)
    with pytest.raises(InvalidParameterError):
        make_grid(0)


def test_basis_indices_and_eigenvalues():
    basis = make_basis(16, 0.5)
    assert sorted(basis.indices) == list(range(-8, 8))
    assert np.all(basis.p_values == basis.indices * 0.5)


def test_gaussian_norm_and_angle_moments():
    wf = gaussian_state()
    row = observables(wf)
    assert row.norm == pytest.approx(1.0, abs=1e-12)
    assert row.mean_theta == pytest.approx(0.0, abs=1e-12)
    # <theta^2> = 1/(2*sigma) for a packet far from the seam
    assert row.mean_theta_sq == pytest.approx(0.05, abs=1e-6)


def test_gaussian_momentum_moment_matches_oracle():
    row = observables(gaussian_state())
    assert row.mean_p == pytest.approx(0.0, abs=1e-10)
    assert row.mean_p_sq == pytest.approx(ORACLE_GAUSSIAN_P2, abs=1e-4)


def test_gaussian_rejects_bad_sigma():
    grid = make_grid(64)
    basis = make_basis(64, 0.1)
    with pytest.raises(InvalidParameterError):
        make_gaussian(-1.0, grid, basis)
    with pytest.raises(InvalidParameterError):
        make_gaussian(0.0, grid, basis)


def test_gaussian_warns_on_fat_tails():
    grid = make_grid(256)
    basis = make_basis(256, 0.1)
    with pytest.warns(UserWarning):
        make_gaussian(1.0, grid, basis)


def test_gaussian_momentum_coefficients_match_analytic():
    wf = gaussian_state()
    coeffs = to_momentum(wf)
    n = wf.basis.indices
    analytic = (1.0 / (np.pi * 10.0)) ** 0.25 * np.exp(-(n.astype(float) ** 2) / 20.0)
    assert np.max(np.abs(np.abs(coeffs) - analytic)) < 1e-6
    # the chosen phase convention keeps a real even packet real in momentum
    assert np.max(np.abs(coeffs.imag)) < 1e-12


def test_to_momentum_plane_wave():
    grid = make_grid(64)
    basis = make_basis(64, 0.1)
    n0 = 5
    amps = np.exp(1j * n0 * grid.theta_values) / np.sqrt(TWO_PI)
    coeffs = to_momentum(WaveFunction(amps, grid, basis))
    main = coeffs[basis.indices == n0]
    assert abs(main[0]) == pytest.approx(1.0, abs=1e-12)
    others = coeffs[basis.indices != n0]
    assert np.max(np.abs(others)) < 1e-12


def test_transform_round_trip():
    wf = random_state(seed=3)
    back = from_momentum(to_momentum(wf), wf.grid, wf.basis)
    assert np.max(np.abs(back.amplitudes - wf.amplitudes)) < 1e-12


def test_apply_p_on_momentum_eigenstate():
    grid = make_grid(64)
    basis = make_basis(64, 0.1)
    n0 = -7
    amps = np.exp(1j * n0 * grid.theta_values)
    wf = WaveFunction(amps, grid, basis)
    out = apply_p(wf)
    assert np.max(np.abs(out.amplitudes - n0 * 0.1 * amps)) < 1e-12


def test_apply_p_norm_is_p_squared():
    wf = gaussian_state()
    assert norm(apply_p(wf)) == pytest.approx(observables(wf).mean_p_sq, rel=1e-12)


def test_apply_p_matches_dense_operator():
    wf = random_state(n_points=64, seed=11)
    dense = dense_momentum_operator(wf.grid, wf.basis)
    expected = dense @ wf.amplitudes
    got = apply_p(wf).amplitudes
    assert np.max(np.abs(got - expected)) < 1e-12 * np.max(np.abs(expected))


def test_apply_theta_gaussian_norm():
    wf = gaussian_state()
    assert norm(apply_theta(wf)) == pytest.approx(0.05, abs=1e-6)


def test_apply_theta_at_origin_point():
    grid = make_grid(64)
    basis = make_basis(64, 0.1)
    amps = np.zeros(64, dtype=complex)
    amps[32] = 1.0  # grid point exactly at theta = 0
    assert grid.theta_values[32] == 0.0
    out = apply_theta(WaveFunction(amps, grid, basis))
    assert np.all(out.amplitudes == 0.0)


def test_apply_theta_norm_identity():
    wf = random_state(seed=4)
    assert norm(apply_theta(wf)) == pytest.approx(position_moment(wf, 2), rel=1e-12)


def test_observables_momentum_eigenstate():
    grid = make_grid(256)
    basis = make_basis(256, 0.1)
    amps = np.exp(1j * 3 * grid.theta_values)
    row = observables(WaveFunction(amps, grid, basis))
    assert row.mean_p == pytest.approx(0.3, abs=1e-12)
    assert row.mean_p_sq == pytest.approx(0.09, abs=1e-12)


def test_observables_match_dense_expectations():
    wf = random_state(n_points=64, seed=9)
    row = observables(wf)
    w = wf.grid.spacing
    a = wf.amplitudes
    nrm = w * np.vdot(a, a).real
    theta_op = np.diag(wf.grid.theta_values)
    p_op = dense_momentum_operator(wf.grid, wf.basis)
    assert row.norm == pytest.approx(nrm, rel=1e-12)
    assert row.mean_theta == pytest.approx(w * np.vdot(a, theta_op @ a).real / nrm, rel=1e-12)
    assert row.mean_theta_sq == pytest.approx(
        w * np.vdot(a, theta_op @ theta_op @ a).real / nrm, rel=1e-12
    )
    assert row.mean_p == pytest.approx(w * np.vdot(a, p_op @ a).real / nrm, abs=1e-12)
    assert row.mean_p_sq == pytest.approx(
        w * np.vdot(a, p_op @ p_op @ a).real / nrm, rel=1e-12
    )


def test_observables_zero_state_raises():
    grid = make_grid(64)
    basis = make_basis(64, 0.1)
    with pytest.raises(DegenerateStateError):
        observables(WaveFunction(np.zeros(64, dtype=complex), grid, basis))


def test_overlap_conjugate_symmetry():
    a = random_state(seed=1)
    b = random_state(seed=2)
    assert overlap(a, b) == pytest.approx(np.conj(overlap(b, a)), rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_parseval_and_round_trip_property(seed):
    wf = random_state(n_points=128, seed=seed)
    coeffs = to_momentum(wf)
    assert float(np.sum(np.abs(coeffs) ** 2)) == pytest.approx(norm(wf), rel=1e-12)
    back = from_momentum(coeffs, wf.grid, wf.basis)
    assert np.max(np.abs(back.amplitudes - wf.amplitudes)) < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_variance_non_negative_property(seed):
    row = observables(random_state(n_points=128, seed=seed))
    assert row.mean_theta_sq >= row.mean_theta**2 - 1e-12
    assert row.mean_p_sq >= row.mean_p**2 - 1e-12
