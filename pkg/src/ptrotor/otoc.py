"""Forward/backward OTOC pipeline, growth-law fits, and staircase scans.

The correlator C(t_n) = -<[p(t_n), theta(t_0)]^2> splits into
C = C1 + C2 - 2 Re C3 with

  C1 = <psi_R| theta^2 |psi_R>,   psi_R = Udag^n p U^n |psi0>,
  C2 = <phi_R|phi_R>,             phi_R = Udag^n p U^n theta|psi0>,
  C3 = <psi_R| theta |phi_R>,

where every leg keeps its norm pinned by per-kick renormalization: the
forward leg at the start norm, the backward leg at the pivot norm produced
by the p application.  The pinned pivot norm equals <p^2>(t_n), which ties
the correlator directly to the ballistic energy growth.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .classical import predicted_D
from .errors import FitDomainError, InvalidParameterError
from .propagator import NormLedger, SimParams, evolve
from .state import (
    ObservableSeries,
    WaveFunction,
    apply_p,
    apply_theta,
    make_basis,
    make_gaussian,
    make_grid,
    norm,
    overlap,
    position_moment,
)


@dataclass(frozen=True)
class OtocBreakdown:
    """The correlator and its two- and four-point parts at one kick count."""

    t_n: int
    c1: float
    c2: float
    c3: complex
    c_total: float

    @classmethod
    def from_parts(cls, t_n: int, c1: float, c2: float, c3: complex) -> "OtocBreakdown":
        return cls(t_n=t_n, c1=c1, c2=c2, c3=c3, c_total=c1 + c2 - 2.0 * c3.real)


@dataclass(frozen=True)
class RateFit:
    """Fitted growth rates and prefactors for one kick strength."""

    G: float
    D: float
    alpha: float
    beta: float
    eta: float
    nu: float
    fit_window: tuple[float, float]
    residual: float
    free_exponent: float


@dataclass(frozen=True)
class StaircaseScan:
    k_values: tuple[float, ...]
    fits: tuple[RateFit, ...]
    predicted_plateaus: tuple[float, ...]


@dataclass(frozen=True, eq=False)
class OtocStudy:
    """Everything one full forward/backward campaign produces at fixed K."""

    params: SimParams
    t_max: int
    breakdowns: tuple[OtocBreakdown, ...]
    forward_series: ObservableSeries
    phi_forward_series: ObservableSeries
    psi_r_final: WaveFunction
    phi_r_final: WaveFunction


def initial_gaussian(params: SimParams) -> WaveFunction:
    grid = make_grid(params.n_points)
    basis = make_basis(params.n_points, params.hbar_eff)
    return make_gaussian(params.sigma, grid, basis)


def time_reversed(
    state_at_tn: WaveFunction, params: SimParams, t_n: int
) -> tuple[WaveFunction, NormLedger]:
    """Apply p, then run t_n adjoint kicks holding the pivot norm per kick."""
    pivot = apply_p(state_at_tn)
    result = evolve(pivot, params, t_n, direction="backward", renormalize="per-kick")
    return result.state, result.ledger


def compute_c1(params: SimParams, t_n: int) -> tuple[float, WaveFunction]:
    """C1(t_n) plus the time-reversed state it was measured on.

    The returned value is the *unnormalized* <psi_R|theta^2|psi_R>, so the
    pivot norm <p^2>(t_n) is included, as the decomposition requires.
    """
    if t_n < 0:
        raise InvalidParameterError(f"t_n must be >= 0, got {t_n}")
    psi0 = initial_gaussian(params)
    forward = evolve(psi0, params, t_n)
    psi_r, _ = time_reversed(forward.state, params, t_n)
    return position_moment(psi_r, 2), psi_r


def compute_c2(params: SimParams, t_n: int) -> tuple[float, WaveFunction]:
    """C2(t_n) = final norm of the pipeline seeded with theta|psi0>."""
    if t_n < 0:
        raise InvalidParameterError(f"t_n must be >= 0, got {t_n}")
    phi0 = apply_theta(initial_gaussian(params))
    forward = evolve(phi0, params, t_n)
    phi_r, _ = time_reversed(forward.state, params, t_n)
    return norm(phi_r), phi_r


def compute_c3(psi_r: WaveFunction, phi_r: WaveFunction) -> complex:
    """Four-point cross term <psi_R| theta |phi_R> by grid quadrature."""
    return overlap(psi_r, apply_theta(phi_r))


def run_otoc_study(params: SimParams, t_max: int) -> OtocStudy:
    """Full campaign: one forward pass per branch, one backward pass per t_n.

    Forward states are checkpointed after every kick, so each t_n only pays
    for its own fresh backward leg; backward segments are never shared
    between different t_n.
    """
    if t_max < 1:
        raise InvalidParameterError(f"t_max must be >= 1, got {t_max}")
    psi0 = initial_gaussian(params)
    fwd_psi = evolve(psi0, params, t_max, keep_states=True)
    phi0 = apply_theta(psi0)
    fwd_phi = evolve(phi0, params, t_max, keep_states=True)

    breakdowns = []
    psi_r = phi_r = None
    for t_n in range(1, t_max + 1):
        psi_r, _ = time_reversed(fwd_psi.checkpoints[t_n], params, t_n)
        phi_r, _ = time_reversed(fwd_phi.checkpoints[t_n], params, t_n)
        c1 = position_moment(psi_r, 2)
        c2 = norm(phi_r)
        c3 = compute_c3(psi_r, phi_r)
        breakdowns.append(OtocBreakdown.from_parts(t_n, c1, c2, c3))
    return OtocStudy(
        params=params,
        t_max=t_max,
        breakdowns=tuple(breakdowns),
        forward_series=fwd_psi.series,
        phi_forward_series=fwd_phi.series,
        psi_r_final=psi_r,
        phi_r_final=phi_r,
    )


def otoc_series(params: SimParams, t_max: int) -> list[OtocBreakdown]:
    """C1, C2, C3 and the assembled C for every t_n in [1, t_max]."""
    if t_max < 2:
        raise InvalidParameterError(f"t_max must be >= 2, got {t_max}")
    return list(run_otoc_study(params, t_max).breakdowns)


def fit_power_law(
    times: np.ndarray,
    values: np.ndarray,
    window: tuple[float, float],
    exponent: float,
) -> tuple[float, float]:
    """Least-squares amplitude of y = a * t^exponent with the exponent held fixed.

    Returns (a, relative RMS residual).  The exponent is pinned because the
    quantity of interest is the prefactor; a free exponent only inflates
    the variance on short series.
    """
    t, y, _ = _window_points(times, values, window)
    basis_vals = t**exponent
    rate = float(np.dot(y, basis_vals) / np.dot(basis_vals, basis_vals))
    residual = float(np.sqrt(np.sum((y - rate * basis_vals) ** 2) / np.sum(y**2)))
    return rate, residual


def fit_free_exponent(
    times: np.ndarray, values: np.ndarray, window: tuple[float, float]
) -> tuple[float, float, float]:
    """Diagnostic log-log fit y = a * t^q with q free; returns (q, a, residual)."""
    t, y, _ = _window_points(times, values, window)
    design = np.column_stack([np.ones_like(t), np.log(t)])
    coeffs, *_ = np.linalg.lstsq(design, np.log(y), rcond=None)
    rate = float(math.exp(coeffs[0]))
    exponent = float(coeffs[1])
    fitted = rate * t**exponent
    residual = float(np.sqrt(np.sum((y - fitted) ** 2) / np.sum(y**2)))
    return exponent, rate, residual


def _window_points(times, values, window):
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if int(mask.sum()) < 4:
        raise FitDomainError(
            f"fit window [{lo}, {hi}] contains {int(mask.sum())} points; need at least 4"
        )
    t, y = t[mask], y[mask]
    if np.any(y <= 0):
        raise FitDomainError("power-law fit requires strictly positive values in the window")
    if np.any(t <= 0):
        raise FitDomainError("power-law fit requires strictly positive times in the window")
    return t, y, mask


def fit_study(study: OtocStudy, window: tuple[float, float]) -> RateFit:
    """Extract G, D and the prefactors alpha, beta, eta, nu from one campaign."""
    t = np.array([b.t_n for b in study.breakdowns], dtype=float)
    c_total = np.array([b.c_total for b in study.breakdowns])
    c1 = np.array([b.c1 for b in study.breakdowns])
    c2 = np.array([b.c2 for b in study.breakdowns])
    re_c3 = np.array([b.c3.real for b in study.breakdowns])

    growth, residual = fit_power_law(t, c_total, window, 2)
    free_exponent, _, _ = fit_free_exponent(t, c_total, window)
    fwd = study.forward_series
    drift, _ = fit_power_law(fwd.times, fwd.mean_p, window, 1)
    d_sq = drift**2
    return RateFit(
        G=growth,
        D=drift,
        alpha=fit_power_law(t, c1, window, 2)[0] / d_sq,
        beta=fit_power_law(t, c2, window, 2)[0] / d_sq,
        eta=fit_power_law(t, re_c3, window, 2)[0] / d_sq,
        nu=growth / d_sq,
        fit_window=(float(window[0]), float(window[1])),
        residual=residual,
        free_exponent=free_exponent,
    )


def _staircase_point(args: tuple[SimParams, float, int, tuple[float, float]]) -> RateFit:
    params, k, t_max, window = args
    study = run_otoc_study(replace(params, K=k), t_max)
    return fit_study(study, window)


def scan_staircase(
    k_values,
    params: SimParams,
    t_max: int = 12,
    fit_window: tuple[float, float] | None = None,
    jobs: int = 1,
) -> StaircaseScan:
    """Fit G, D and the prefactors for every K; K jobs are independent.

    The predicted plateaus are nu_mean * (2*m*pi)^2 with nu_mean the scan
    average of the fitted nu and m the plateau index of each K.
    """
    k_values = tuple(float(k) for k in k_values)
    if not k_values:
        raise InvalidParameterError("scan requires at least one K value")
    window = fit_window if fit_window is not None else (5.0, float(t_max))
    work = [(params, k, t_max, window) for k in k_values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fits = list(pool.map(_staircase_point, work))
    else:
        fits = [_staircase_point(item) for item in work]
    nu_mean = float(np.mean([fit.nu for fit in fits]))
    plateaus = tuple(nu_mean * predicted_D(k) ** 2 for k in k_values)
    return StaircaseScan(k_values=k_values, fits=tuple(fits), predicted_plateaus=plateaus)
