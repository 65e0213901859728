"""Dissipative point map for the gain-pinned soliton.

The real part of the kick pushes a soliton sitting at a gain maximum
theta_c(m) = pi/2 + 2*m*pi with force K; the free drift then moves it by
its momentum; finally the gain snaps it onto the nearest gain maximum.
Reading the post-snap momentum as p' = theta' - theta makes the drift rate
lock to 2*m*pi for every K strictly inside (2*m*pi - pi, 2*m*pi + pi),
which is the mechanism behind the quantized momentum staircase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BoundaryError, InvalidParameterError, OutOfDomainError

TWO_PI = 2.0 * math.pi

# Angle of maximal gain within one period.
THETA_CENTER = 0.5 * math.pi

_PLATEAU_TOL = 1e-9
_TIE_TOL = 1e-12


@dataclass(frozen=True)
class SolitonState:
    """Unwrapped soliton coordinates; theta is a lift, never reduced mod 2*pi."""

    theta: float
    p: float


def soliton_step(state: SolitonState, K: float) -> SolitonState:
    """One kick-drift-snap cycle of the soliton map.

    Requires theta = pi/2 (mod 2*pi) on entry; the gain guarantees this
    after every step, and sin(theta) = 1 there so the kick force is exactly K.
    Raises ``BoundaryError`` when the drift lands exactly halfway between
    two gain maxima, where no snap target is defined.
    """
    j = (state.theta - THETA_CENTER) / TWO_PI
    j_prev = round(j)
    if abs(j - j_prev) > _PLATEAU_TOL:
        raise InvalidParameterError(
            f"soliton_step requires theta = pi/2 (mod 2*pi); got theta={state.theta!r}"
        )
    kicked = state.p + K
    drift = state.theta + kicked
    r = (drift - THETA_CENTER) / TWO_PI
    frac = r - math.floor(r)
    if abs(frac - 0.5) <= _TIE_TOL:
        raise BoundaryError(
            "drift lands exactly between two gain maxima (deviation pi); "
            "the snap target is undefined"
        )
    j_new = round(r)
    # p' = theta' - theta, evaluated on plateau indices so the quantized
    # rate stays exact in floating point.
    p_new = TWO_PI * (j_new - j_prev)
    return SolitonState(theta=THETA_CENTER + TWO_PI * j_new, p=p_new)


def soliton_trajectory(
    K: float, n_steps: int, start: SolitonState | None = None
) -> list[SolitonState]:
    """Iterate the map ``n_steps`` times from ``start`` (default: (pi/2, 0))."""
    if n_steps < 0:
        raise InvalidParameterError(f"n_steps must be >= 0, got {n_steps}")
    state = start if start is not None else SolitonState(theta=THETA_CENTER, p=0.0)
    trajectory = [state]
    for _ in range(n_steps):
        state = soliton_step(state, K)
        trajectory.append(state)
    return trajectory


def predicted_D(K: float) -> float:
    """Quantized drift rate: 2*m*pi for K inside (2*m*pi - pi, 2*m*pi + pi).

    Raises ``OutOfDomainError`` for K <= pi (no plateau) and for K on an
    interval boundary (odd multiple of pi), where the rate is undefined.
    """
    if K <= math.pi:
        raise OutOfDomainError(f"no quantized plateau for K = {K!r} <= pi")
    half_steps = K / math.pi
    nearest = round(half_steps)
    if nearest % 2 == 1 and abs(half_steps - nearest) <= 1e-12 * max(1.0, half_steps):
        raise OutOfDomainError(
            f"K = {K!r} sits on an interval boundary (odd multiple of pi)"
        )
    m = round(K / TWO_PI)
    return TWO_PI * m
