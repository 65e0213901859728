"""Experiment orchestration: configs in, comma-separated tables out.

Each experiment kind maps to one run function producing one or two tables.
Outputs are deterministic: identical configs yield byte-identical data
rows (the ``created`` metadata line is the only run-dependent content).
"""

from __future__ import annotations

import configparser
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .classical import predicted_D, soliton_trajectory
from .errors import ConfigError, UnwritablePathError
from .otoc import fit_study, run_otoc_study, scan_staircase
from .oracle import oracle_report
from .propagator import SimParams, evolve
from .state import apply_p, norm, observables
from .tables import ResultTable, write_table

KINDS = ("evolve", "reverse-check", "otoc", "scan-k", "classical", "oracle-check")

_SIM_KEYS = ("k", "lambda", "hbar_eff", "sigma", "n_points", "n_kicks", "renormalize")
_EXPERIMENT_KEYS = ("t_max", "fit_start", "fit_stop", "k_values", "n_steps")

_DEFAULT_K_VALUES = (4.0, 2 * math.pi, 8.0, 10.0, 4 * math.pi, 14.0)


@dataclass
class ExperimentConfig:
    kind: str
    params: SimParams
    out_dir: Path
    renormalize: str = "per-kick"
    t_max: int = 12
    fit_window: tuple[float, float] | None = None
    k_values: tuple[float, ...] = _DEFAULT_K_VALUES
    n_steps: int = 10
    jobs: int = 1

    def window(self) -> tuple[float, float]:
        return self.fit_window if self.fit_window is not None else (5.0, float(self.t_max))


def load_config(
    kind: str,
    config_path: str | Path | None = None,
    overrides: dict[str, str] | None = None,
    out_dir: str | Path = "results",
    jobs: int = 1,
) -> ExperimentConfig:
    """Merge defaults, an optional config file, and --set overrides."""
    if kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {kind!r}; expected one of {KINDS}")

    values: dict[str, str] = {}
    if config_path is not None:
        parser = configparser.ConfigParser()
        read = parser.read(str(config_path))
        if not read:
            raise ConfigError(f"config file not found: {config_path}")
        for section in ("simulation", kind):
            if parser.has_section(section):
                for key, value in parser.items(section):
                    _check_key(key)
                    values[key] = value
    for key, value in (overrides or {}).items():
        _check_key(key)
        values[key] = value

    def fget(key, default):
        return _parse_float(key, values.get(key, None), default)

    def iget(key, default):
        return _parse_int(key, values.get(key, None), default)

    try:
        params = SimParams(
            K=fget("k", 2 * math.pi),
            lam=fget("lambda", 0.9),
            hbar_eff=fget("hbar_eff", 0.1),
            sigma=fget("sigma", 10.0),
            n_points=iget("n_points", 2**14),
            n_kicks=iget("n_kicks", 12),
        )
    except Exception as exc:
        raise ConfigError(f"invalid simulation parameters: {exc}") from exc

    renormalize = values.get("renormalize", "per-kick")
    if renormalize not in ("per-kick", "none"):
        raise ConfigError(f"field 'renormalize' must be per-kick or none, got {renormalize!r}")

    t_max = iget("t_max", 12)
    fit_window = None
    if "fit_start" in values or "fit_stop" in values:
        fit_window = (fget("fit_start", 5.0), fget("fit_stop", float(t_max)))
    k_values = _DEFAULT_K_VALUES
    if "k_values" in values:
        try:
            k_values = tuple(float(part) for part in values["k_values"].split(",") if part.strip())
        except ValueError as exc:
            raise ConfigError(f"field 'k_values' is not a comma-separated float list") from exc
        if not k_values:
            raise ConfigError("field 'k_values' must not be empty")
    return ExperimentConfig(
        kind=kind,
        params=params,
        out_dir=Path(out_dir),
        renormalize=renormalize,
        t_max=t_max,
        fit_window=fit_window,
        k_values=k_values,
        n_steps=iget("n_steps", 10),
        jobs=max(1, jobs),
    )


def _check_key(key: str) -> None:
    if key not in _SIM_KEYS and key not in _EXPERIMENT_KEYS:
        raise ConfigError(f"unknown config field {key!r}")


def _parse_float(key, raw, default):
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"field {key!r} is not a number: {raw!r}") from exc


def _parse_int(key, raw, default):
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"field {key!r} is not an integer: {raw!r}") from exc


def _base_metadata(config: ExperimentConfig) -> dict[str, str]:
    p = config.params
    return {
        "generator": "ptrotor",
        "version": __version__,
        "kind": config.kind,
        "created": datetime.now(timezone.utc).isoformat(),
        "K": format(p.K, ".17g"),
        "lambda": format(p.lam, ".17g"),
        "hbar_eff": format(p.hbar_eff, ".17g"),
        "sigma": format(p.sigma, ".17g"),
        "n_points": str(p.n_points),
        "n_kicks": str(p.n_kicks),
        "renormalize": config.renormalize,
    }


def run(config: ExperimentConfig) -> list[Path]:
    """Execute one experiment; returns the written table paths."""
    try:
        config.out_dir.mkdir(parents=True, exist_ok=True)
        probe = config.out_dir / ".write-probe"
        probe.write_text("", encoding="utf-8")
        probe.unlink()
    except OSError as exc:
        raise UnwritablePathError(f"output directory is not writable: {config.out_dir} ({exc})") from exc
    runner = {
        "evolve": _run_evolve,
        "reverse-check": _run_reverse_check,
        "otoc": _run_otoc,
        "scan-k": _run_scan,
        "classical": _run_classical,
        "oracle-check": _run_oracle_check,
    }[config.kind]
    return runner(config)


def _series_rows(series, log_scale) -> list[tuple]:
    logs = np.concatenate([[0.0], log_scale]) if len(log_scale) else np.zeros(len(series.times))
    return [
        (
            int(t),
            series.mean_theta[i],
            series.mean_theta_sq[i],
            series.mean_p[i],
            series.mean_p_sq[i],
            series.norm[i],
            logs[i] if i < len(logs) else logs[-1],
        )
        for i, t in enumerate(series.times)
    ]


_EVOLVE_SCHEMA = (
    ("t", "int"),
    ("mean_theta", "float"),
    ("mean_theta_sq", "float"),
    ("mean_p", "float"),
    ("mean_p_sq", "float"),
    ("norm", "float"),
    ("log_scale", "float"),
)


def _run_evolve(config: ExperimentConfig) -> list[Path]:
    from .otoc import initial_gaussian

    params = config.params
    result = evolve(initial_gaussian(params), params, renormalize=config.renormalize)
    table = ResultTable(
        schema=_EVOLVE_SCHEMA,
        rows=_series_rows(result.series, result.ledger.log_scale),
        metadata=_base_metadata(config),
    )
    return [write_table(table, config.out_dir / "evolve.csv")]


def _run_reverse_check(config: ExperimentConfig) -> list[Path]:
    from .otoc import initial_gaussian

    params = config.params
    n = params.n_kicks
    forward = evolve(initial_gaussian(params), params, n, renormalize=config.renormalize)
    pivot = apply_p(forward.state)
    backward = evolve(pivot, params, n, direction="backward", renormalize=config.renormalize)

    rows = []
    f = forward.series
    for j in range(n + 1):
        rows.append(("forward", int(j), int(j), f.mean_theta[j], f.mean_p[j], f.mean_p_sq[j], f.norm[j]))
    b = backward.series
    for j in range(n + 1):
        rows.append(("backward", int(n + j), int(n - j), b.mean_theta[j], b.mean_p[j], b.mean_p_sq[j], b.norm[j]))
    metadata = _base_metadata(config)
    metadata["pivot_norm"] = format(backward.ledger.pivot_norm, ".17g")
    table = ResultTable(
        schema=(
            ("segment", "str"),
            ("t", "int"),
            ("model_time", "int"),
            ("mean_theta", "float"),
            ("mean_p", "float"),
            ("mean_p_sq", "float"),
            ("norm", "float"),
        ),
        rows=rows,
        metadata=metadata,
    )
    return [write_table(table, config.out_dir / "reverse_check.csv")]


def _run_otoc(config: ExperimentConfig) -> list[Path]:
    params = config.params
    study = run_otoc_study(params, config.t_max)
    fit = fit_study(study, config.window())
    metadata = _base_metadata(config)
    metadata.update(
        {
            "t_max": str(config.t_max),
            "fit_start": format(config.window()[0], ".17g"),
            "fit_stop": format(config.window()[1], ".17g"),
            "fit_G": format(fit.G, ".17g"),
            "fit_D": format(fit.D, ".17g"),
            "fit_alpha": format(fit.alpha, ".17g"),
            "fit_beta": format(fit.beta, ".17g"),
            "fit_eta": format(fit.eta, ".17g"),
            "fit_nu": format(fit.nu, ".17g"),
            "fit_residual": format(fit.residual, ".17g"),
            "fit_free_exponent": format(fit.free_exponent, ".17g"),
        }
    )
    series_table = ResultTable(
        schema=(
            ("t", "int"),
            ("c1", "float"),
            ("c2", "float"),
            ("re_c3", "float"),
            ("im_c3", "float"),
            ("c_total", "float"),
        ),
        rows=[
            (b.t_n, b.c1, b.c2, b.c3.real, b.c3.imag, b.c_total)
            for b in study.breakdowns
        ],
        metadata=metadata,
    )
    paths = [write_table(series_table, config.out_dir / "otoc_series.csv")]

    psi_r, phi_r = study.psi_r_final, study.phi_r_final
    w = psi_r.grid.spacing
    dens_psi = np.abs(psi_r.amplitudes) ** 2 / norm(psi_r)
    dens_phi = np.abs(phi_r.amplitudes) ** 2 / norm(phi_r)
    states_meta = _base_metadata(config)
    states_meta["t_n"] = str(config.t_max)
    states_meta["normalization"] = "unit-norm densities, quadrature weight included in values"
    states_table = ResultTable(
        schema=(("theta", "float"), ("density_psi_r", "float"), ("density_phi_r", "float")),
        rows=[
            (theta, w * dens_psi[i], w * dens_phi[i])
            for i, theta in enumerate(psi_r.grid.theta_values)
        ],
        metadata=states_meta,
    )
    paths.append(write_table(states_table, config.out_dir / "otoc_states.csv"))
    return paths


def _run_scan(config: ExperimentConfig) -> list[Path]:
    scan = scan_staircase(
        config.k_values,
        config.params,
        t_max=config.t_max,
        fit_window=config.fit_window,
        jobs=config.jobs,
    )
    metadata = _base_metadata(config)
    metadata["t_max"] = str(config.t_max)
    metadata["fit_start"] = format(config.window()[0], ".17g")
    metadata["fit_stop"] = format(config.window()[1], ".17g")
    metadata["nu_mean"] = format(
        float(np.mean([fit.nu for fit in scan.fits])), ".17g"
    )
    rows = []
    for k, fit, plateau in zip(scan.k_values, scan.fits, scan.predicted_plateaus):
        rows.append(
            (
                k,
                int(round(k / (2 * math.pi))),
                fit.D,
                fit.G,
                fit.alpha,
                fit.beta,
                fit.eta,
                fit.nu,
                fit.residual,
                fit.free_exponent,
                plateau,
            )
        )
    table = ResultTable(
        schema=(
            ("k", "float"),
            ("m", "int"),
            ("d", "float"),
            ("g", "float"),
            ("alpha", "float"),
            ("beta", "float"),
            ("eta", "float"),
            ("nu", "float"),
            ("residual", "float"),
            ("free_exponent", "float"),
            ("predicted_plateau", "float"),
        ),
        rows=rows,
        metadata=metadata,
    )
    return [write_table(table, config.out_dir / "staircase.csv")]


def _run_classical(config: ExperimentConfig) -> list[Path]:
    k = config.params.K
    rate = predicted_D(k)  # rejects K outside the quantized domain up front
    trajectory = soliton_trajectory(k, config.n_steps)
    metadata = _base_metadata(config)
    metadata["n_steps"] = str(config.n_steps)
    metadata["predicted_d"] = format(rate, ".17g")
    table = ResultTable(
        schema=(("step", "int"), ("theta", "float"), ("p", "float")),
        rows=[(i, s.theta, s.p) for i, s in enumerate(trajectory)],
        metadata=metadata,
    )
    return [write_table(table, config.out_dir / "classical_map.csv")]


def _run_oracle_check(config: ExperimentConfig) -> list[Path]:
    checks = oracle_report(config.params)
    table = ResultTable(
        schema=(
            ("check", "str"),
            ("deviation", "float"),
            ("tolerance", "float"),
            ("passed", "int"),
        ),
        rows=[(c.name, c.deviation, c.tolerance, int(c.passed)) for c in checks],
        metadata=_base_metadata(config),
    )
    return [write_table(table, config.out_dir / "oracle_check.csv")]
