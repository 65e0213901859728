"""PT-symmetric kicked rotor: split-operator dynamics, OTOCs, and the
quantized staircase of their growth rates."""

from .classical import SolitonState, predicted_D, soliton_step, soliton_trajectory
from .otoc import (
    OtocBreakdown,
    RateFit,
    StaircaseScan,
    compute_c1,
    compute_c2,
    compute_c3,
    fit_free_exponent,
    fit_power_law,
    otoc_series,
    run_otoc_study,
    scan_staircase,
)
from .propagator import (
    EvolutionResult,
    NormLedger,
    SimParams,
    adjoint_step,
    evolve,
    forward_step,
    kick_factor,
)
from .state import (
    AngleGrid,
    MomentumBasis,
    ObservableRow,
    ObservableSeries,
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
    to_momentum,
)

__version__ = "0.1.0"

__all__ = [
    "AngleGrid",
    "EvolutionResult",
    "MomentumBasis",
    "NormLedger",
    "ObservableRow",
    "ObservableSeries",
    "OtocBreakdown",
    "RateFit",
    "SimParams",
    "SolitonState",
    "StaircaseScan",
    "WaveFunction",
    "adjoint_step",
    "apply_p",
    "apply_theta",
    "compute_c1",
    "compute_c2",
    "compute_c3",
    "evolve",
    "fit_free_exponent",
    "fit_power_law",
    "forward_step",
    "from_momentum",
    "kick_factor",
    "make_basis",
    "make_gaussian",
    "make_grid",
    "norm",
    "observables",
    "otoc_series",
    "overlap",
    "predicted_D",
    "run_otoc_study",
    "scan_staircase",
    "soliton_step",
    "soliton_trajectory",
    "to_momentum",
]
