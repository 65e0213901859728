"""One-period Floquet maps of the PT-symmetric kicked rotor.

The one-period operator is U = exp(-i p^2 / (2 hbar)) * exp(-i K [cos(theta)
+ i lambda sin(theta)] / hbar): the kick multiplier acts first (diagonal in
angle), then the free rotation (diagonal in momentum).  For lambda > 0 the
kick carries a real gain exp(K lambda sin(theta)/hbar) peaked at
theta = pi/2, so the norm grows and per-kick renormalization with a
log-scale ledger is needed to keep the arithmetic in range.

Backward evolution uses the Hermitian adjoint U-dagger, not the inverse;
the two differ whenever lambda != 0 and the adjoint retains the gain.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import AliasingError, InvalidParameterError, ParameterOverflowError
from .state import (
    AngleGrid,
    MomentumBasis,
    ObservableSeries,
    WaveFunction,
    _is_power_of_two,
    _tail_fraction,
    observables,
)

# exp() overflows IEEE doubles just above 709; stop well before that.
GAIN_EXPONENT_LIMIT = 700.0

# Below this value of K*lambda/hbar_eff the PT symmetry may be unbroken and
# the gain-pinned soliton picture does not apply.
BROKEN_PT_MIN_RATIO = 10.0


@dataclass(frozen=True)
class SimParams:
    """Physical parameters plus the numerical controls of one simulation."""

    K: float
    lam: float
    hbar_eff: float
    sigma: float
    n_points: int = 2**14
    n_kicks: int = 12
    guard_aliasing: bool = True
    alias_tail_limit: float = 1e-8

    def __post_init__(self) -> None:
        if self.K < 0:
            raise InvalidParameterError(f"K must be >= 0, got {self.K}")
        if self.lam < 0:
            raise InvalidParameterError(f"lambda must be >= 0, got {self.lam}")
        if self.hbar_eff <= 0:
            raise InvalidParameterError(f"hbar_eff must be positive, got {self.hbar_eff}")
        if self.sigma <= 0:
            raise InvalidParameterError(f"sigma must be positive, got {self.sigma}")
        if not _is_power_of_two(self.n_points):
            raise InvalidParameterError(
                f"n_points must be a positive power of two, got {self.n_points}"
            )
        if self.n_kicks < 1:
            raise InvalidParameterError(f"n_kicks must be >= 1, got {self.n_kicks}")
        if self.lam > 0 and self.broken_pt_ratio < BROKEN_PT_MIN_RATIO:
            warnings.warn(
                f"K*lambda/hbar_eff = {self.broken_pt_ratio:.3g} < {BROKEN_PT_MIN_RATIO};"
                " the run is not deep in the broken-PT regime",
                stacklevel=2,
            )

    @property
    def broken_pt_ratio(self) -> float:
        return self.K * self.lam / self.hbar_eff


@dataclass
class NormLedger:
    """Per-kick norm bookkeeping across a renormalized run.

    ``forward_norms``/``backward_norms`` hold the norms recorded after each
    kick (constant at the run's start value under the per-kick policy).
    ``log_scale`` is the running sum of ln(raw/held) over the renormalized
    kicks, so ``start_norm * exp(log_scale)`` recovers the norms an
    un-renormalized run would have shown.
    """

    forward_norms: np.ndarray
    pivot_norm: float | None
    backward_norms: np.ndarray
    log_scale: np.ndarray

    def raw_norms(self, start_norm: float) -> np.ndarray:
        return start_norm * np.exp(self.log_scale)

    @staticmethod
    def combine(forward: "NormLedger", backward: "NormLedger") -> "NormLedger":
        """Join a forward run and its backward continuation into one ledger."""
        offset = forward.log_scale[-1] if len(forward.log_scale) else 0.0
        return NormLedger(
            forward_norms=forward.forward_norms,
            pivot_norm=backward.pivot_norm,
            backward_norms=backward.backward_norms,
            log_scale=np.concatenate([forward.log_scale, offset + backward.log_scale]),
        )


@dataclass(frozen=True, eq=False)
class EvolutionResult:
    state: WaveFunction
    series: ObservableSeries
    ledger: NormLedger
    checkpoints: list[WaveFunction] | None = None


def kick_factor(params: SimParams, grid: AngleGrid) -> np.ndarray:
    """Angle-diagonal multiplier exp(-i K cos(theta)/hbar) * exp(K lambda sin(theta)/hbar)."""
    exponent = params.broken_pt_ratio
    if exponent > GAIN_EXPONENT_LIMIT:
        raise ParameterOverflowError(
            f"gain exponent K*lambda/hbar_eff = {exponent:.3g} exceeds "
            f"{GAIN_EXPONENT_LIMIT}; reduce lambda or renormalize more often"
        )
    theta = grid.theta_values
    scale = params.K / params.hbar_eff
    return np.exp(-1j * scale * np.cos(theta)) * np.exp(scale * params.lam * np.sin(theta))


def free_factor(params: SimParams, basis: MomentumBasis) -> np.ndarray:
    """Momentum-diagonal multiplier exp(-i p_n^2 / (2 hbar))."""
    return np.exp(-0.5j * basis.p_values**2 / params.hbar_eff)


def _guard_tail(spec: np.ndarray, wf: WaveFunction, params: SimParams) -> None:
    if not params.guard_aliasing:
        return
    fraction = _tail_fraction(np.abs(spec) ** 2, wf.basis.indices)
    if fraction > params.alias_tail_limit:
        raise AliasingError(
            f"{fraction:.3e} of the momentum probability sits in the outermost 5% "
            f"of indices (limit {params.alias_tail_limit:.1e}); enlarge n_points"
        )


def forward_step(wf: WaveFunction, params: SimParams) -> WaveFunction:
    """Apply one period U: kick multiplier, then free rotation.  Unnormalized."""
    amps = wf.amplitudes * kick_factor(params, wf.grid)
    spec = np.fft.fft(amps)
    _guard_tail(spec, wf, params)
    spec *= free_factor(params, wf.basis)
    return replace(wf, amplitudes=np.fft.ifft(spec))


def adjoint_step(wf: WaveFunction, params: SimParams) -> WaveFunction:
    """Apply U-dagger: conjugate free rotation first, then conjugate kick.

    The conjugate kick exp(+i K cos(theta)/hbar) * exp(K lambda sin(theta)/hbar)
    keeps the same gain profile as the forward kick, so the backward leg is
    amplified at theta = pi/2 exactly like the forward one.
    """
    spec = np.fft.fft(wf.amplitudes)
    _guard_tail(spec, wf, params)
    spec *= np.conj(free_factor(params, wf.basis))
    amps = np.fft.ifft(spec)
    amps *= np.conj(kick_factor(params, wf.grid))
    return replace(wf, amplitudes=amps)


def evolve(
    psi0: WaveFunction,
    params: SimParams,
    n: int | None = None,
    direction: str = "forward",
    renormalize: str = "per-kick",
    keep_states: bool = False,
) -> EvolutionResult:
    """Apply ``n`` kicks and record observables after each one.

    Under the ``per-kick`` policy the state is rescaled after every kick so
    its norm stays at the value it entered the run with (1 for the unit
    Gaussian going forward, the pivot norm going backward); each discarded
    factor is accumulated in the ledger's ``log_scale``.  ``renormalize="none"``
    leaves the raw growth in place, which is only safe at small gain.
    """
    if n is None:
        n = params.n_kicks
    if n < 0:
        raise InvalidParameterError(f"kick count must be >= 0, got {n}")
    if direction not in ("forward", "backward"):
        raise InvalidParameterError(f"direction must be forward or backward, got {direction!r}")
    if renormalize not in ("per-kick", "none"):
        raise InvalidParameterError(
            f"renormalize must be 'per-kick' or 'none', got {renormalize!r}"
        )
    step = forward_step if direction == "forward" else adjoint_step

    row = observables(psi0)
    target = row.norm
    rows = [row]
    logs: list[float] = []
    checkpoints: list[WaveFunction] | None = [psi0] if keep_states else None

    state = psi0
    for _ in range(n):
        state = step(state, params)
        row = observables(state)
        if renormalize == "per-kick":
            logs.append(math.log(row.norm / target))
            state = replace(
                state, amplitudes=state.amplitudes * math.sqrt(target / row.norm)
            )
            row = row._replace(norm=target)
        rows.append(row)
        if checkpoints is not None:
            checkpoints.append(state)

    series = ObservableSeries.from_rows(np.arange(n + 1), rows)
    log_scale = np.cumsum(logs) if logs else np.zeros(0)
    kick_norms = series.norm[1:].copy()
    if direction == "forward":
        ledger = NormLedger(kick_norms, None, np.zeros(0), log_scale)
    else:
        ledger = NormLedger(np.zeros(0), target, kick_norms, log_scale)
    return EvolutionResult(state=state, series=series, ledger=ledger, checkpoints=checkpoints)
