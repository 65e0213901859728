"""Dense-matrix references used to verify the spectral split-step pipeline.

Everything here is rebuilt from the operator definitions with explicit DFT
matrices rather than reusing the FFT code paths, so a disagreement points
at a real defect instead of a shared bug.  Sizes are capped: these are
verification tools, not production propagators.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameterError
from .otoc import OtocBreakdown
from .propagator import SimParams, adjoint_step, forward_step
from .state import WaveFunction, make_basis, make_gaussian, make_grid

DENSE_SIZE_CAP = 256


def transform_matrix(grid, basis) -> np.ndarray:
    """Unitary angle-to-momentum map acting on amplitude vectors."""
    n = grid.n_points
    return np.exp(-1j * np.outer(basis.indices, grid.theta_values)) / np.sqrt(n)


def dense_momentum_operator(grid, basis) -> np.ndarray:
    m = transform_matrix(grid, basis)
    return m.conj().T @ (basis.p_values[:, None] * m)


def dense_floquet_reference(params: SimParams, grid, basis) -> np.ndarray:
    """One-period operator assembled from explicit matrices.

    The kick and free factors are recomputed from the Hamiltonian here on
    purpose; reusing the production factor builders would collapse the two
    verification routes into one.
    """
    scale = params.K / params.hbar_eff
    theta = grid.theta_values
    kick = np.exp(-1j * scale * np.cos(theta) + scale * params.lam * np.sin(theta))
    free = np.exp(-0.5j * basis.p_values**2 / params.hbar_eff)
    m = transform_matrix(grid, basis)
    return m.conj().T @ (free[:, None] * m) @ np.diag(kick)


def build_dense_floquet(params: SimParams) -> np.ndarray:
    """Dense one-period matrix; column j is forward_step on the j-th grid delta."""
    n = params.n_points
    if n > DENSE_SIZE_CAP:
        raise InvalidParameterError(
            f"dense Floquet matrix is capped at {DENSE_SIZE_CAP} points, got {n}"
        )
    # Delta columns are flat in momentum, so the aliasing guard must not run.
    params = replace(params, guard_aliasing=False)
    grid = make_grid(n)
    basis = make_basis(n, params.hbar_eff)
    matrix = np.empty((n, n), dtype=complex)
    for j in range(n):
        amps = np.zeros(n, dtype=complex)
        amps[j] = 1.0
        matrix[:, j] = forward_step(WaveFunction(amps, grid, basis), params).amplitudes
    return matrix


def build_dense_adjoint(params: SimParams) -> np.ndarray:
    """Column-by-column dense matrix of adjoint_step (same cap as forward)."""
    n = params.n_points
    if n > DENSE_SIZE_CAP:
        raise InvalidParameterError(
            f"dense adjoint matrix is capped at {DENSE_SIZE_CAP} points, got {n}"
        )
    params = replace(params, guard_aliasing=False)
    grid = make_grid(n)
    basis = make_basis(n, params.hbar_eff)
    matrix = np.empty((n, n), dtype=complex)
    for j in range(n):
        amps = np.zeros(n, dtype=complex)
        amps[j] = 1.0
        matrix[:, j] = adjoint_step(WaveFunction(amps, grid, basis), params).amplitudes
    return matrix


def dense_otoc_breakdown(params: SimParams, t_n: int) -> OtocBreakdown:
    """Brute-force correlator pipeline on explicit matrices.

    Replicates the renormalization schedule of the split pipeline: forward
    legs hold the start norm, backward legs hold the pivot norm.
    """
    if t_n < 0:
        raise InvalidParameterError(f"t_n must be >= 0, got {t_n}")
    n = params.n_points
    if n > DENSE_SIZE_CAP:
        raise InvalidParameterError(
            f"dense pipeline is capped at {DENSE_SIZE_CAP} points, got {n}"
        )
    grid = make_grid(n)
    basis = make_basis(n, params.hbar_eff)
    w = grid.spacing
    theta = grid.theta_values
    u = dense_floquet_reference(params, grid, basis)
    u_dag = u.conj().T
    p_op = dense_momentum_operator(grid, basis)

    def vec_norm(vec):
        return float(w * np.vdot(vec, vec).real)

    def evolve_pinned(vec, matrix, steps):
        target = vec_norm(vec)
        for _ in range(steps):
            vec = matrix @ vec
            vec = vec * np.sqrt(target / vec_norm(vec))
        return vec

    psi0 = make_gaussian(params.sigma, grid, basis).amplitudes
    psi_n = evolve_pinned(psi0, u, t_n)
    psi_r = evolve_pinned(p_op @ psi_n, u_dag, t_n)
    c1 = float(w * np.sum(theta**2 * np.abs(psi_r) ** 2))

    phi_n = evolve_pinned(theta * psi0, u, t_n)
    phi_r = evolve_pinned(p_op @ phi_n, u_dag, t_n)
    c2 = vec_norm(phi_r)
    c3 = complex(w * np.vdot(psi_r, theta * phi_r))
    return OtocBreakdown.from_parts(t_n, c1, c2, c3)


@dataclass(frozen=True)
class OracleCheck:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation < self.tolerance


def _rel_max(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def oracle_report(params: SimParams) -> list[OracleCheck]:
    """Run the full verification battery on a dense-tractable grid."""
    from .state import from_momentum, norm, to_momentum

    params = replace(params, guard_aliasing=False)
    n = params.n_points
    grid = make_grid(n)
    basis = make_basis(n, params.hbar_eff)
    rng = np.random.default_rng(12345)
    checks: list[OracleCheck] = []

    # Transform identities on random states plus the Gaussian.
    states = [
        WaveFunction(rng.standard_normal(n) + 1j * rng.standard_normal(n), grid, basis)
        for _ in range(3)
    ]
    states.append(make_gaussian(params.sigma, grid, basis))
    round_dev = 0.0
    parseval_dev = 0.0
    for wf in states:
        back = from_momentum(to_momentum(wf), grid, basis)
        round_dev = max(round_dev, _rel_max(back.amplitudes, wf.amplitudes))
        coeffs = to_momentum(wf)
        parseval_dev = max(
            parseval_dev, abs(float(np.sum(np.abs(coeffs) ** 2)) - norm(wf)) / norm(wf)
        )
    checks.append(OracleCheck("transform_roundtrip", round_dev, 1e-12))
    checks.append(OracleCheck("parseval", parseval_dev, 1e-12))

    # Hermitian limit: the dense reference must be unitary and the split
    # propagator must conserve the norm kick by kick.
    hermitian = replace(params, lam=0.0)
    u0 = dense_floquet_reference(hermitian, grid, basis)
    unitarity = float(np.max(np.abs(u0.conj().T @ u0 - np.eye(n))))
    checks.append(OracleCheck("hermitian_unitarity", unitarity, 1e-12))

    wf = make_gaussian(params.sigma, grid, basis)
    drift = 0.0
    for _ in range(params.n_kicks):
        before = norm(wf)
        wf = forward_step(wf, hermitian)
        drift = max(drift, abs(norm(wf) / before - 1.0))
    checks.append(OracleCheck("hermitian_norm_drift", drift, 1e-12))

    # Column-built matrices against the explicit reference.
    u_ref = dense_floquet_reference(params, grid, basis)
    checks.append(
        OracleCheck("forward_columns", _rel_max(build_dense_floquet(params), u_ref), 1e-9)
    )
    checks.append(
        OracleCheck(
            "adjoint_columns", _rel_max(build_dense_adjoint(params), u_ref.conj().T), 1e-9
        )
    )

    # Renormalized split trajectory against dense matrix application.
    wf = make_gaussian(params.sigma, grid, basis)
    vec = wf.amplitudes.copy()
    w = grid.spacing
    target = norm(wf)
    traj_dev = 0.0
    for _ in range(params.n_kicks):
        wf = forward_step(wf, params)
        wf = replace(wf, amplitudes=wf.amplitudes * np.sqrt(target / norm(wf)))
        vec = u_ref @ vec
        vec = vec * np.sqrt(target / (w * np.vdot(vec, vec).real))
        traj_dev = max(traj_dev, _rel_max(wf.amplitudes, vec))
    checks.append(OracleCheck("split_vs_dense_evolution", traj_dev, 1e-9))

    # Full correlator pipeline against the dense brute force.
    from .otoc import run_otoc_study

    t_n = min(params.n_kicks, 5)
    study = run_otoc_study(params, t_n)
    split = study.breakdowns[-1]
    dense = dense_otoc_breakdown(params, t_n)
    otoc_dev = max(
        abs(split.c1 - dense.c1) / abs(dense.c1),
        abs(split.c2 - dense.c2) / abs(dense.c2),
        abs(split.c3 - dense.c3) / abs(dense.c3),
        abs(split.c_total - dense.c_total) / abs(dense.c_total),
    )
    checks.append(OracleCheck("otoc_pipeline_vs_dense", otoc_dev, 1e-9))
    return checks
