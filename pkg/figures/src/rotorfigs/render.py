"""Figure builders: read result tables, overlay analytic guides, save PNGs.

Every overlay value is computed from table metadata (K, sigma, hbar_eff)
or from table columns; nothing numerical is hard-coded.  Inputs are never
modified and rendering is idempotent byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .tables import (
    FigureInputError,
    MissingTableError,
    Table,
    read_table,
    require_columns,
    require_rows,
)

TWO_PI = 2.0 * math.pi

_SERIES_COLUMNS = {
    "t": "int",
    "c1": "float",
    "c2": "float",
    "re_c3": "float",
    "im_c3": "float",
    "c_total": "float",
}
_STAIRCASE_COLUMNS = {"k": "float", "g": "float", "alpha": "float", "beta": "float", "eta": "float"}
_REVERSE_COLUMNS = {
    "segment": "str",
    "t": "int",
    "model_time": "int",
    "mean_theta": "float",
    "mean_p": "float",
    "mean_p_sq": "float",
    "norm": "float",
}
_STATES_COLUMNS = {"theta": "float", "density_psi_r": "float", "density_phi_r": "float"}
_CLASSICAL_COLUMNS = {"step": "int", "theta": "float", "p": "float"}


@dataclass(frozen=True)
class FigureSpec:
    """What to read, what to draw, where to write."""

    kind: str
    tables: dict[str, tuple[Path, ...]]
    out_path: Path


def quantized_rate(k: float) -> float:
    """Plateau drift rate 2*m*pi for the interval containing k."""
    return TWO_PI * round(k / TWO_PI)


def beta_estimate(sigma: float) -> float:
    return 1.0 / (2.0 * sigma)


def alpha_estimate() -> float:
    return math.pi**2 / 4.0


def eta_estimate(sigma: float) -> float:
    # twin-soliton estimate: center pi/2 times the seed-norm square root
    return 0.5 * math.pi * math.sqrt(beta_estimate(sigma))


def nu_estimate(sigma: float) -> float:
    return alpha_estimate() + beta_estimate(sigma) - 2.0 * eta_estimate(sigma)


def build_spec(kind: str, in_dir: Path, out_path: Path) -> FigureSpec:
    in_dir = Path(in_dir)
    if kind == "otoc-growth":
        series = tuple(sorted(in_dir.glob("otoc_series*.csv")))
        if not series:
            raise MissingTableError(f"no otoc_series*.csv tables under {in_dir}")
        tables = {"series": series, "staircase": (in_dir / "staircase.csv",)}
    elif kind == "time-reversal":
        tables = {"reverse": (in_dir / "reverse_check.csv",)}
    elif kind == "decomposition":
        tables = {
            "series": (in_dir / "otoc_series.csv",),
            "staircase": (in_dir / "staircase.csv",),
        }
    elif kind == "soliton-overlap":
        tables = {"states": (in_dir / "otoc_states.csv",)}
    elif kind == "soliton-map":
        tables = {"classical": (in_dir / "classical_map.csv",)}
    else:
        raise FigureInputError(f"unknown figure kind {kind!r}")
    return FigureSpec(kind=kind, tables=tables, out_path=Path(out_path))


def render(spec: FigureSpec) -> Path:
    """Validate the inputs, draw the figure, write the image file."""
    renderer = {
        "otoc-growth": _render_otoc_growth,
        "time-reversal": _render_time_reversal,
        "decomposition": _render_decomposition,
        "soliton-overlap": _render_soliton_overlap,
        "soliton-map": _render_soliton_map,
    }[spec.kind]
    fig = renderer(spec)
    try:
        spec.out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(spec.out_path, dpi=150)
    finally:
        plt.close(fig)
    return spec.out_path


def _load(spec: FigureSpec, role: str, required: dict[str, str]) -> list[Table]:
    tables = []
    for path in spec.tables[role]:
        table = read_table(path)
        require_columns(table, required)
        require_rows(table)
        tables.append(table)
    return tables


def _render_otoc_growth(spec: FigureSpec):
    series_tables = _load(spec, "series", _SERIES_COLUMNS)
    (stair,) = _load(spec, "staircase", _STAIRCASE_COLUMNS)

    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    markers = ("s", "o", "^", "v", "D")
    for table, marker in zip(series_tables, markers):
        lam = table.meta_float("lambda")
        ax_a.loglog(
            table.array("t"),
            table.array("c_total"),
            marker,
            ms=4,
            mfc="none",
            label=f"$\\lambda={lam:g}$",
        )
    ref = series_tables[0]
    k = ref.meta_float("K")
    sigma = ref.meta_float("sigma")
    t_line = np.linspace(1, ref.array("t").max(), 200)
    growth = nu_estimate(sigma) * quantized_rate(k) ** 2
    ax_a.loglog(t_line, growth * t_line**2, "r-", lw=1.2, label="$\\nu (2m\\pi)^2 t^2$")
    ax_a.set_xlabel("$t$")
    ax_a.set_ylabel("$C(t)$")
    ax_a.legend(fontsize=8)

    ks = stair.array("k")
    ax_b.plot(ks, stair.array("g"), "ks", ms=5, mfc="none", label="fitted $G$")
    sigma_b = stair.meta_float("sigma")
    m_values = sorted({round(k / TWO_PI) for k in ks})
    for m in m_values:
        lo, hi = TWO_PI * m - math.pi, TWO_PI * m + math.pi
        level = nu_estimate(sigma_b) * (TWO_PI * m) ** 2
        ax_b.hlines(level, lo, hi, color="r", lw=1.2)
    ax_b.set_xlabel("$K$")
    ax_b.set_ylabel("$G$")
    ax_b.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _render_time_reversal(spec: FigureSpec):
    (table,) = _load(spec, "reverse", _REVERSE_COLUMNS)
    t = table.array("t")
    model = table.array("model_time")
    k = table.meta_float("K")
    rate = quantized_rate(k)

    fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.0))
    (ax_theta, ax_norm), (ax_p, ax_p2) = axes
    ax_theta.plot(t, table.array("mean_theta"), "ko-", ms=3)
    ax_theta.axhline(math.pi / 2, color="r", lw=1.2)
    ax_theta.set_xlabel("$t$")
    ax_theta.set_ylabel(r"$\langle\theta\rangle$")

    ax_norm.semilogy(t, table.array("norm"), "ko-", ms=3)
    ax_norm.set_xlabel("$t$")
    ax_norm.set_ylabel(r"$\mathcal{N}$")

    ax_p.plot(t, table.array("mean_p"), "ko-", ms=3)
    ax_p.plot(t, rate * model, "r-", lw=1.2)
    ax_p.set_xlabel("$t$")
    ax_p.set_ylabel(r"$\langle p\rangle$")

    ax_p2.plot(t, table.array("mean_p_sq"), "ko-", ms=3)
    ax_p2.plot(t, rate**2 * model.astype(float) ** 2, "r-", lw=1.2)
    ax_p2.set_xlabel("$t$")
    ax_p2.set_ylabel(r"$\langle p^2\rangle$")
    fig.tight_layout()
    return fig


def _render_decomposition(spec: FigureSpec):
    (series,) = _load(spec, "series", _SERIES_COLUMNS)
    (stair,) = _load(spec, "staircase", _STAIRCASE_COLUMNS)
    t = series.array("t").astype(float)
    k = series.meta_float("K")
    sigma = series.meta_float("sigma")
    d_sq = quantized_rate(k) ** 2

    fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    for column, marker, label, level in (
        ("c1", "s", "$C_1$", alpha_estimate()),
        ("c2", "o", "$C_2$", beta_estimate(sigma)),
        ("re_c3", "^", "$\\mathrm{Re}\\,C_3$", eta_estimate(sigma)),
    ):
        ax_a.loglog(t, series.array(column), marker, ms=4, mfc="none", label=label)
        ax_a.loglog(t, level * d_sq * t**2, "r-", lw=1.0)
    ax_a.set_xlabel("$t$")
    ax_a.set_ylabel("correlator parts")
    ax_a.legend(fontsize=8)

    ks = stair.array("k")
    for column, marker, label, level in (
        ("alpha", "s", "$\\alpha$", alpha_estimate()),
        ("eta", "^", "$\\eta$", eta_estimate(stair.meta_float("sigma"))),
        ("beta", "o", "$\\beta$", beta_estimate(stair.meta_float("sigma"))),
    ):
        ax_b.semilogy(ks, stair.array(column), marker, ms=5, mfc="none", label=label)
        ax_b.axhline(level, color="r", lw=1.0)
    ax_b.set_xlabel("$K$")
    ax_b.set_ylabel("prefactors")
    ax_b.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _render_soliton_overlap(spec: FigureSpec):
    (table,) = _load(spec, "states", _STATES_COLUMNS)
    theta = table.array("theta")
    fig, ax = plt.subplots(figsize=(6.0, 3.8))
    ax.plot(theta, table.array("density_psi_r"), "k-", lw=1.2, label=r"$|\psi_R|^2$")
    ax.plot(theta, table.array("density_phi_r"), "r--", lw=1.2, label=r"$|\varphi_R|^2$")
    ax.axvline(math.pi / 2, color="0.6", lw=0.8)
    ax.set_xlabel(r"$\theta$")
    ax.set_ylabel("density (unit norm)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def _render_soliton_map(spec: FigureSpec):
    (table,) = _load(spec, "classical", _CLASSICAL_COLUMNS)
    steps = table.array("step")
    theta = table.array("theta")
    k = table.meta_float("K")
    rate = quantized_rate(k)

    fig, (ax_theta, ax_p) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    ax_theta.plot(steps, theta, "ko-", ms=4)
    m_max = int((theta.max() - math.pi / 2) / TWO_PI) + 1
    for m in range(0, m_max + 1):
        ax_theta.axhline(math.pi / 2 + TWO_PI * m, color="r", lw=0.8)
    ax_theta.set_xlabel("step $n$")
    ax_theta.set_ylabel(r"$\theta_n$ (gain maxima in red)")

    ax_p.plot(steps, table.array("p"), "ks", ms=4, mfc="none", label="map momentum")
    ax_p.plot(steps, rate * steps, "r-", lw=1.2, label="$2m\\pi\\, n$")
    ax_p.set_xlabel("step $n$")
    ax_p.set_ylabel("$p_n$")
    ax_p.legend(fontsize=8)
    fig.tight_layout()
    return fig
