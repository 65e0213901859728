"""Shared fixtures: the expensive forward/backward campaigns run once."""

from __future__ import annotations

import warnings

import numpy as np
import pytest

from ptrotor.otoc import initial_gaussian, run_otoc_study, scan_staircase
from ptrotor.propagator import SimParams, evolve
from ptrotor.state import apply_p

TWO_PI = 2.0 * np.pi

# K values pinned by the momentum-rate acceptance runs: three per plateau.
PINNED_K = (4.0, TWO_PI, 8.0, 10.0, 2 * TWO_PI, 14.0)

# Interior K choice for the staircase acceptance scan (>= 6 values spanning
# the m=1 and m=2 plateaus, all well away from the interval edges).
INTERIOR_K = (5.5, TWO_PI, 7.0, 11.5, 2 * TWO_PI, 13.5)


def base_params(**overrides) -> SimParams:
    kwargs = dict(K=TWO_PI, lam=0.9, hbar_eff=0.1, sigma=10.0, n_points=2**14)
    kwargs.update(overrides)
    return SimParams(**kwargs)


def small_params(**overrides) -> SimParams:
    kwargs = dict(
        K=TWO_PI,
        lam=0.9,
        hbar_eff=0.1,
        sigma=10.0,
        n_points=64,
        n_kicks=5,
        guard_aliasing=False,
    )
    kwargs.update(overrides)
    return SimParams(**kwargs)


@pytest.fixture(scope="session")
def campaign_2pi():
    """Detailed correlator campaign at K=2*pi, lambda=0.9, t_max=25."""
    return run_otoc_study(base_params(), 25)


@pytest.fixture(scope="session")
def lambda_campaigns(campaign_2pi):
    """Correlator campaigns at K=2*pi for lambda in {0.1, 0.9, 5}."""
    out = {0.9: campaign_2pi}
    for lam in (0.1, 5.0):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out[lam] = run_otoc_study(base_params(lam=lam), 25)
    return out


@pytest.fixture(scope="session")
def momentum_runs():
    """Forward evolutions (12 kicks) at the six pinned acceptance K values."""
    runs = {}
    for k in PINNED_K:
        params = base_params(K=k)
        runs[k] = evolve(initial_gaussian(params), params, 12).series
    return runs


@pytest.fixture(scope="session")
def staircase_scan():
    """Acceptance staircase over the interior K set, detailed windows."""
    return scan_staircase(INTERIOR_K, base_params(), t_max=25)


@pytest.fixture(scope="session")
def interior_momentum_runs():
    """Forward evolutions (12 kicks) at the interior staircase K values."""
    runs = {}
    for k in INTERIOR_K:
        params = base_params(K=k)
        runs[k] = evolve(initial_gaussian(params), params, 12).series
    return runs


@pytest.fixture(scope="session")
def reversal_run():
    """Forward 10 kicks, p pivot, backward 10 kicks at the detailed parameters."""
    params = base_params(n_kicks=10)
    forward = evolve(initial_gaussian(params), params, 10)
    pivot = apply_p(forward.state)
    backward = evolve(pivot, params, 10, direction="backward")
    return forward, backward


def regression_slope(series, window=(5, 12)) -> float:
    """Plain least-squares slope of mean_p versus t inside the window."""
    t = series.times.astype(float)
    mask = (t >= window[0]) & (t <= window[1])
    return float(np.polyfit(t[mask], series.mean_p[mask], 1)[0])
