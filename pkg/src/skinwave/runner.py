"""Experiment pipeline: evolve, measure, compare to the closed forms, emit files.

Output files are byte-deterministic: numbers are written with Python's
shortest round-trip repr and no timestamps or environment data enter the
files.  The report (returned and printed by the CLI) carries classification,
velocity fits, oracle deviations, and a sha256 manifest of everything written.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import ExperimentConfig, load_config
from .errors import WidthUnavailable
from .evolve import EvolutionResult, evolve_series
from .model import (
    ContinuousHN,
    ModelSpec,
    build_hamiltonian,
    dispersion_handle,
    group_velocity,
)
from .oracle import (
    GeneralOracleParams,
    HNOracleParams,
    general_peak,
    general_velocities,
    hn_peak,
    hn_v_in,
    hn_v_ref,
)
from .presets import get_preset
from .similarity import skin_factor_per_unit_length
from .wavepacket import (
    LinearFit,
    ReflectionOutcome,
    TrajectorySeries,
    aggregate_density,
    classify_reflection,
    extract_trajectory,
    gaussian_state,
    top_two_peaks,
)


@dataclass(frozen=True)
class OracleSeries:
    """Closed-form trajectory and velocities on the frame grid (nan = not valid)."""

    times: np.ndarray
    x_peak: np.ndarray
    v_in: np.ndarray
    v_ref: np.ndarray


@dataclass(frozen=True)
class ExperimentReport:
    name: str
    classification: str
    method: str
    v_in_fit: LinearFit | None
    v_ref_fit: LinearFit | None
    v_p_slope: float | None
    max_oracle_deviation: float | None
    contact_time: float | None
    manifest: dict[str, str] = field(default_factory=dict)
    notes: tuple[str, ...] = ()
    window_truncated: bool = False


def _fmt(value) -> str:
    """Shortest round-trip decimal; empty for missing values."""
    if value is None:
        return ""
    v = float(value)
    if math.isnan(v):
        return ""
    return repr(v)


def band_velocity_at_launch(spec: ModelSpec, k0: float) -> float:
    """Counterpart group velocity of the launched packet (lower band for two-band chains)."""
    return group_velocity(spec, k0, band=-1)


def oracle_series(
    spec: ModelSpec, packet, trajectory: TrajectorySeries, guard_band: int = 0
) -> tuple[OracleSeries, float | None]:
    """Closed-form trajectory for the run plus its max pre-contact deviation.

    Continuum chains use the fully analytic forms; lattice families use the
    uniform-skin forms driven by the measured width series.  The oracle
    trajectory is blanked after wall contact (free-evolution validity only),
    incident velocities before contact, reflected velocities after.  The
    deviation skips the guard band before contact, where the peak is already
    transitioning onto the wall.
    """
    times = trajectory.times
    ci = trajectory.contact_index
    pre = np.ones(len(times), dtype=bool)
    if ci is not None:
        pre[ci:] = False

    x_o = np.full(len(times), np.nan)
    v_in = np.full(len(times), np.nan)
    v_ref = np.full(len(times), np.nan)

    if isinstance(spec, ContinuousHN):
        p = HNOracleParams(
            m=spec.m,
            b=spec.b,
            sigma=packet.sigma,
            k0=packet.k0,
            x0=packet.x0,
            e0=spec.e0,
            wall_left=0.0,
            wall_right=spec.length,
        )
        for i, t in enumerate(times):
            x_o[i] = p.x0 + (p.k0 / p.m) * t + hn_peak(p, t)
            v_in[i] = hn_v_in(p, t)
            v_ref[i] = hn_v_ref(p, t)
    else:
        r = skin_factor_per_unit_length(spec)
        g = GeneralOracleParams(
            r=r,
            sigma_times=times,
            sigma_values=trajectory.sigma_measured,
            dispersion=dispersion_handle(spec, band=-1),
            k0=packet.k0,
        )
        v0 = band_velocity_at_launch(spec, packet.k0)
        try:
            x_o = packet.x0 + v0 * times + general_peak(g, times)
            for i, t in enumerate(times):
                v_in[i], v_ref[i] = general_velocities(g, t)
        except WidthUnavailable:
            pass

    deviation = None
    mask = pre & np.isfinite(x_o)
    if ci is not None:
        mask[max(0, ci - guard_band):] = False
    if np.any(mask):
        deviation = float(np.max(np.abs(trajectory.x_peak[mask] - x_o[mask])))

    x_o[~pre] = np.nan
    v_in[~pre] = np.nan
    if ci is None:
        v_ref[:] = np.nan
    else:
        v_ref[pre] = np.nan
    return OracleSeries(times=times, x_peak=x_o, v_in=v_in, v_ref=v_ref), deviation


def fit_peak_velocity_slope(trajectory: TrajectorySeries, options) -> float | None:
    """Least-squares slope of v(t) over clean pre-contact samples."""
    times, v = trajectory.times, trajectory.v_peak
    end = len(times) if trajectory.contact_index is None else max(
        0, trajectory.contact_index - options.guard_band
    )
    length = trajectory.domain[1] - trajectory.domain[0]
    sig = trajectory.sigma_measured
    keep = ~(np.isfinite(sig) & (sig > options.width_cutoff_fraction * length))
    keep[end:] = False
    keep &= np.isfinite(v)
    if keep.sum() < 3:
        return None
    a = np.vstack([times[keep], np.ones(int(keep.sum()))]).T
    slope = np.linalg.lstsq(a, v[keep], rcond=None)[0][0]
    return float(slope)


def _write_density_csv(path: Path, result: EvolutionResult) -> None:
    geometry = result.geometry
    xs = geometry.density_positions
    rows = ["t,x,density,log_norm"]
    for k, t in enumerate(result.times):
        dens = aggregate_density(result.site_densities[k], geometry)
        ln = result.log_norms[k]
        t_s, ln_s = _fmt(t), _fmt(ln)
        for x, d in zip(xs, dens):
            rows.append(f"{t_s},{_fmt(x)},{_fmt(d)},{ln_s}")
    path.write_text("\n".join(rows) + "\n")


def _write_trajectory_csv(path: Path, trajectory: TrajectorySeries) -> None:
    rows = ["t,x_peak,v_peak,sigma_measured,log_norm"]
    for t, x, v, s, ln in zip(
        trajectory.times,
        trajectory.x_peak,
        trajectory.v_peak,
        trajectory.sigma_measured,
        trajectory.log_norm,
    ):
        rows.append(f"{_fmt(t)},{_fmt(x)},{_fmt(v)},{_fmt(s)},{_fmt(ln)}")
    path.write_text("\n".join(rows) + "\n")


def _write_oracle_csv(path: Path, series: OracleSeries) -> None:
    rows = ["t,x_peak_oracle,v_in_oracle,v_ref_oracle"]
    for t, x, vi, vr in zip(series.times, series.x_peak, series.v_in, series.v_ref):
        rows.append(f"{_fmt(t)},{_fmt(x)},{_fmt(vi)},{_fmt(vr)}")
    path.write_text("\n".join(rows) + "\n")


def _write_heatmap_pgm(path: Path, result: EvolutionResult) -> None:
    """Binary graymap, one row per frame, each row scaled to its own maximum."""
    geometry = result.geometry
    frames = len(result.times)
    width = len(geometry.density_positions)
    pixels = bytearray()
    for k in range(frames):
        dens = aggregate_density(result.site_densities[k], geometry)
        peak = dens.max()
        if peak <= 0:
            row = np.zeros(width, dtype=np.uint8)
        else:
            row = np.round(255.0 * dens / peak).astype(np.uint8)
        pixels.extend(row.tobytes())
    header = f"P5\n{width} {frames}\n255\n".encode("ascii")
    path.write_bytes(header + bytes(pixels))


def emit_outputs(
    result: EvolutionResult,
    trajectory: TrajectorySeries,
    oracle: OracleSeries,
    config: ExperimentConfig,
) -> dict[str, str]:
    """Write the requested artifacts and return a name -> sha256 manifest."""
    out_dir = Path(config.output.directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if config.output.density_csv:
        p = out_dir / "density.csv"
        _write_density_csv(p, result)
        written.append(p)
    if config.output.trajectory_csv:
        p = out_dir / "trajectory.csv"
        _write_trajectory_csv(p, trajectory)
        written.append(p)
    if config.output.oracle_csv:
        p = out_dir / "oracle.csv"
        _write_oracle_csv(p, oracle)
        written.append(p)
    if config.output.heatmap:
        p = out_dir / "heatmap.pgm"
        _write_heatmap_pgm(p, result)
        written.append(p)
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest() for p in written}


def _snapshot_notes(result: EvolutionResult, config: ExperimentConfig) -> tuple[str, ...]:
    notes = []
    for t_snap in config.snapshot_times:
        k = int(np.argmin(np.abs(result.times - t_snap)))
        dens = aggregate_density(result.site_densities[k], result.geometry)
        peaks = top_two_peaks(dens, result.geometry)
        desc = "; ".join(f"x={x:.2f} height={h:.3e}" for x, h in peaks)
        notes.append(f"snapshot t={result.times[k]:g}: {desc}")
    return tuple(notes)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Full pipeline for one configuration."""
    spec = config.model
    h = build_hamiltonian(spec)
    psi0 = gaussian_state(h.geometry, config.packet)
    times = np.linspace(0.0, config.times.t_max, config.times.frame_count)
    result = evolve_series(h, psi0, times, method=config.method, spec=spec)
    trajectory = extract_trajectory(result, config.analysis)
    outcome: ReflectionOutcome = classify_reflection(trajectory, options=config.analysis)
    oracle, deviation = oracle_series(
        spec, config.packet, trajectory, guard_band=config.analysis.guard_band
    )
    manifest = emit_outputs(result, trajectory, oracle, config)
    return ExperimentReport(
        name=config.name,
        classification=outcome.kind,
        method=result.method,
        v_in_fit=outcome.v_in_fit,
        v_ref_fit=outcome.v_ref_fit,
        v_p_slope=fit_peak_velocity_slope(trajectory, config.analysis),
        max_oracle_deviation=deviation,
        contact_time=trajectory.boundary_contact_time,
        manifest=manifest,
        notes=_snapshot_notes(result, config),
        window_truncated=outcome.window_truncated,
    )


def run_preset(name: str, out_dir=None, method=None, heatmap=None) -> ExperimentReport:
    config = get_preset(name).with_overrides(out_dir=out_dir, method=method, heatmap=heatmap)
    return run_experiment(config)


def run_config(path, out_dir=None, method=None, heatmap=None) -> ExperimentReport:
    config = load_config(path).with_overrides(out_dir=out_dir, method=method, heatmap=heatmap)
    return run_experiment(config)


def format_report(report: ExperimentReport) -> str:
    lines = [
        f"experiment: {report.name}",
        f"method: {report.method}",
        f"classification: {report.classification}",
    ]
    if report.contact_time is not None:
        lines.append(f"contact_time: {report.contact_time:g}")
    if report.v_in_fit is not None:
        f = report.v_in_fit
        lines.append(f"v_in_fit: slope={f.slope:.6g} intercept={f.intercept:.6g} t_mid={f.t_mid:.6g}")
    if report.v_ref_fit is not None:
        f = report.v_ref_fit
        lines.append(f"v_ref_fit: slope={f.slope:.6g} intercept={f.intercept:.6g} t_mid={f.t_mid:.6g}")
    if report.v_p_slope is not None:
        lines.append(f"v_p_slope: {report.v_p_slope:.6g}")
    if report.max_oracle_deviation is not None:
        lines.append(f"max_oracle_deviation: {report.max_oracle_deviation:.6g}")
    if report.window_truncated:
        lines.append("warning: classification window truncated at series end")
    for note in report.notes:
        lines.append(note)
    lines.append("outputs:")
    for name in sorted(report.manifest):
        lines.append(f"  {name} sha256={report.manifest[name]}")
    return "\n".join(lines)
