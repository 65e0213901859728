"""Quantum states on the angle circle and the observables taken on them.

The angle grid is uniform on [-pi, pi).  Its paired momentum basis holds
the plane waves exp(i*n*theta)/sqrt(2*pi) with eigenvalues p_n = n*hbar_eff.
Every inner product uses the uniform periodic quadrature weight
2*pi/n_points, so the angle-space norm and the momentum-space norm agree
to machine precision (Parseval).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .errors import DegenerateStateError, InvalidParameterError, ParameterOverflowError

TWO_PI = 2.0 * np.pi

# Relative amplitude allowed in a fresh Gaussian's tails at theta = +/-pi
# before the periodic wrap-around visibly distorts its moments.
_EDGE_TAIL_LIMIT = 1e-12

# Fraction of the momentum index range watched by the aliasing guard.
_TAIL_ZONE = 0.05


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class AngleGrid:
    """Uniform periodic samples of the angle coordinate on [-pi, pi)."""

    n_points: int
    theta_values: np.ndarray

    @property
    def spacing(self) -> float:
        """Grid step; doubles as the quadrature weight of all inner products."""
        return TWO_PI / self.n_points


@dataclass(frozen=True, eq=False)
class MomentumBasis:
    """Angular-momentum eigenvalues p_n = n*hbar_eff in FFT index order."""

    hbar_eff: float
    indices: np.ndarray
    p_values: np.ndarray


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes on an angle grid; the angle form is authoritative."""

    amplitudes: np.ndarray
    grid: AngleGrid
    basis: MomentumBasis

    def __post_init__(self) -> None:
        if len(self.amplitudes) != self.grid.n_points:
            raise InvalidParameterError(
                f"amplitude vector has {len(self.amplitudes)} entries, "
                f"grid has {self.grid.n_points} points"
            )
        if len(self.basis.indices) != self.grid.n_points:
            raise InvalidParameterError("momentum basis size does not match the grid")


class ObservableRow(NamedTuple):
    mean_theta: float
    mean_theta_sq: float
    mean_p: float
    mean_p_sq: float
    norm: float


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    """Normalized moments and the norm, one entry per recorded kick."""

    times: np.ndarray
    mean_theta: np.ndarray
    mean_theta_sq: np.ndarray
    mean_p: np.ndarray
    mean_p_sq: np.ndarray
    norm: np.ndarray

    @classmethod
    def from_rows(cls, times: np.ndarray, rows: list[ObservableRow]) -> "ObservableSeries":
        cols = np.array(rows, dtype=float).reshape(len(rows), 5)
        return cls(
            times=np.asarray(times),
            mean_theta=cols[:, 0],
            mean_theta_sq=cols[:, 1],
            mean_p=cols[:, 2],
            mean_p_sq=cols[:, 3],
            norm=cols[:, 4],
        )


def make_grid(n_points: int) -> AngleGrid:
    if not _is_power_of_two(n_points):
        raise InvalidParameterError(
            f"n_points must be a positive power of two, got {n_points}"
        )
    spacing = TWO_PI / n_points
    theta = -np.pi + spacing * np.arange(n_points)
    return AngleGrid(n_points=n_points, theta_values=theta)


def make_basis(n_points: int, hbar_eff: float) -> MomentumBasis:
    if hbar_eff <= 0:
        raise InvalidParameterError(f"hbar_eff must be positive, got {hbar_eff}")
    if not _is_power_of_two(n_points):
        raise InvalidParameterError(
            f"n_points must be a positive power of two, got {n_points}"
        )
    indices = np.fft.fftfreq(n_points, 1.0 / n_points).astype(np.int64)
    return MomentumBasis(hbar_eff=hbar_eff, indices=indices, p_values=indices * hbar_eff)


def make_gaussian(sigma: float, grid: AngleGrid, basis: MomentumBasis) -> WaveFunction:
    """Gaussian wavepacket (sigma/pi)^(1/4) * exp(-sigma*theta^2/2), unit norm.

    The analytic packet is sampled on the grid and renormalized under the
    grid quadrature.  A warning is issued when sigma is so small that the
    tails at theta = +/-pi exceed 1e-12 of the peak, because the wrapped
    tails then contaminate the angle moments.
    """
    if sigma <= 0:
        raise InvalidParameterError(f"sigma must be positive, got {sigma}")
    edge_ratio = np.exp(-0.5 * sigma * np.pi**2)
    if edge_ratio > _EDGE_TAIL_LIMIT:
        warnings.warn(
            f"Gaussian with sigma={sigma} has edge tails at {edge_ratio:.2e} of the "
            "peak; moments will feel the periodic wrap-around",
            stacklevel=2,
        )
    amps = (sigma / np.pi) ** 0.25 * np.exp(-0.5 * sigma * grid.theta_values**2)
    amps = amps.astype(complex)
    wf = WaveFunction(amplitudes=amps, grid=grid, basis=basis)
    return replace(wf, amplitudes=amps / np.sqrt(norm(wf)))


def norm(wf: WaveFunction) -> float:
    """Quadrature norm <psi|psi> = weight * sum |psi_j|^2."""
    return float(wf.grid.spacing * np.sum(np.abs(wf.amplitudes) ** 2))


def overlap(bra: WaveFunction, ket: WaveFunction) -> complex:
    """Quadrature inner product <bra|ket>."""
    return complex(bra.grid.spacing * np.vdot(bra.amplitudes, ket.amplitudes))


def position_moment(wf: WaveFunction, order: int) -> float:
    """Unnormalized moment <psi|theta^order|psi> under the grid quadrature."""
    dens = np.abs(wf.amplitudes) ** 2
    return float(wf.grid.spacing * np.sum(wf.grid.theta_values**order * dens))


def to_momentum(wf: WaveFunction) -> np.ndarray:
    """Coefficients of psi in the plane-wave basis, FFT index order.

    Parseval holds exactly up to rounding: sum |c_n|^2 equals the
    angle-space norm.  The alternating sign absorbs the grid origin at
    theta = -pi so that the coefficients match the continuum convention
    c_n = (1/sqrt(2*pi)) * integral psi(theta) exp(-i*n*theta) dtheta.
    """
    n = wf.grid.n_points
    phase = 1.0 - 2.0 * (wf.basis.indices % 2)
    return np.fft.fft(wf.amplitudes) * (np.sqrt(TWO_PI) / n) * phase


def from_momentum(
    coefficients: np.ndarray, grid: AngleGrid, basis: MomentumBasis
) -> WaveFunction:
    """Inverse of :func:`to_momentum`."""
    n = grid.n_points
    phase = 1.0 - 2.0 * (basis.indices % 2)
    amps = np.fft.ifft(coefficients * phase) * (n / np.sqrt(TWO_PI))
    return WaveFunction(amplitudes=amps, grid=grid, basis=basis)


def apply_p(wf: WaveFunction) -> WaveFunction:
    """Apply the momentum operator; the result is deliberately unnormalized.

    For a unit-norm input the output norm equals <p^2> of the input, which
    is exactly the bookkeeping the time-reversal pipeline relies on.
    """
    spec = np.fft.fft(wf.amplitudes)
    spec *= wf.basis.p_values
    return replace(wf, amplitudes=np.fft.ifft(spec))


def apply_theta(wf: WaveFunction) -> WaveFunction:
    """Pointwise multiply by theta; unnormalized, single-valued on [-pi, pi).

    The branch jump at +/-pi is accepted: every state this pipeline cares
    about concentrates near theta = pi/2, far from the seam.
    """
    return replace(wf, amplitudes=wf.amplitudes * wf.grid.theta_values)


def momentum_probabilities(wf: WaveFunction) -> np.ndarray:
    """Probability carried by each momentum index; sums to the norm."""
    spec = np.fft.fft(wf.amplitudes)
    return np.abs(spec) ** 2 * (TWO_PI / wf.grid.n_points**2)


def observables(wf: WaveFunction) -> ObservableRow:
    """Normalized <theta>, <theta^2>, <p>, <p^2> plus the raw norm."""
    w = wf.grid.spacing
    dens = np.abs(wf.amplitudes) ** 2 * w
    total = float(dens.sum())
    if not np.isfinite(total):
        raise ParameterOverflowError(
            "state norm overflowed; renormalize more often or reduce the gain"
        )
    if total <= 0.0:
        raise DegenerateStateError("state has zero norm; observables are undefined")
    theta = wf.grid.theta_values
    mean_theta = float((theta * dens).sum() / total)
    mean_theta_sq = float((theta**2 * dens).sum() / total)
    pw = momentum_probabilities(wf)
    p = wf.basis.p_values
    mean_p = float((p * pw).sum() / total)
    mean_p_sq = float((p**2 * pw).sum() / total)
    return ObservableRow(mean_theta, mean_theta_sq, mean_p, mean_p_sq, total)


def _tail_fraction(power: np.ndarray, indices: np.ndarray) -> float:
    """Fraction of momentum weight in the outermost 5% of the index range."""
    n_half = len(indices) // 2
    mask = np.abs(indices) >= (1.0 - _TAIL_ZONE) * n_half
    total = float(power.sum())
    if total <= 0.0 or not np.isfinite(total):
        return 0.0
    return float(power[mask].sum()) / total


def momentum_tail_fraction(wf: WaveFunction) -> float:
    """Aliasing diagnostic: probability fraction near the momentum cutoff."""
    return _tail_fraction(momentum_probabilities(wf), wf.basis.indices)
