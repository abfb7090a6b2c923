"""Experiment configuration: dataclasses plus the JSON file format.

The file mirrors the dataclass fields one-to-one:

{
  "model":    {"family": "continuous_hn", "m": 1.0, "b": 1.0, "length": 10.0,
               "dx": 0.01, "e0": null},
  "packet":   {"sigma": 0.25, "x0": 5.0, "k0": 0.0},
  "times":    {"t_max": 1.2, "frame_count": 200},
  "method":   "auto",
  "analysis": {"smoothing_window": 5, "contact_threshold": 35.0,
               "guard_band": 5, "width_cutoff_fraction": 0.25,
               "classify_window": null, "contact_wall": "either"},
  "output":   {"directory": "out", "density_csv": true, "trajectory_csv": true,
               "heatmap": true, "oracle_csv": true},
  "snapshot_times": []
}
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

from .errors import ConfigError, SkinwaveError
from .model import BoundarySSH, ContinuousHN, DiscreteHN, ModelSpec, NonHermitianSSH
from .wavepacket import AnalysisOptions, GaussianParams

_FAMILIES = {
    "continuous_hn": ContinuousHN,
    "discrete_hn": DiscreteHN,
    "non_hermitian_ssh": NonHermitianSSH,
    "boundary_ssh": BoundarySSH,
}
_FAMILY_NAMES = {cls: name for name, cls in _FAMILIES.items()}

METHODS = ("spectral", "expm", "auto")


@dataclass(frozen=True)
class TimeGrid:
    t_max: float
    frame_count: int


@dataclass(frozen=True)
class OutputOptions:
    directory: str = "out"
    density_csv: bool = True
    trajectory_csv: bool = True
    heatmap: bool = True
    oracle_csv: bool = True


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelSpec
    packet: GaussianParams
    times: TimeGrid
    method: str = "auto"
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)
    output: OutputOptions = field(default_factory=OutputOptions)
    snapshot_times: tuple = ()
    name: str = "custom"

    def with_overrides(self, out_dir=None, method=None, heatmap=None) -> "ExperimentConfig":
        cfg = self
        if out_dir is not None:
            cfg = replace(cfg, output=replace(cfg.output, directory=str(out_dir)))
        if method is not None:
            cfg = replace(cfg, method=method)
        if heatmap is not None:
            cfg = replace(cfg, output=replace(cfg.output, heatmap=heatmap))
        return cfg


def _need(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise ConfigError(f"{where}.{key} is required")
    return mapping[key]


def _number(mapping: dict, key: str, where: str, default=None):
    if key not in mapping or mapping[key] is None:
        if default is None and key not in mapping:
            raise ConfigError(f"{where}.{key} is required")
        return default
    v = mapping[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {v!r}")
    return v


def _model_from_dict(d: dict) -> ModelSpec:
    if not isinstance(d, dict):
        raise ConfigError("model must be a mapping")
    family = _need(d, "family", "model")
    cls = _FAMILIES.get(family)
    if cls is None:
        raise ConfigError(f"model.family must be one of {sorted(_FAMILIES)}, got {family!r}")
    kwargs = {k: v for k, v in d.items() if k != "family"}
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"model: {exc}") from exc
    except SkinwaveError as exc:
        raise ConfigError(f"model: {exc}") from exc


def _model_to_dict(spec: ModelSpec) -> dict:
    d = {"family": _FAMILY_NAMES[type(spec)]}
    d.update(asdict(spec))
    return d


def config_from_dict(raw: dict) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")
    model = _model_from_dict(_need(raw, "model", "config"))

    pk = _need(raw, "packet", "config")
    sigma = _number(pk, "sigma", "packet")
    if sigma <= 0:
        raise ConfigError("packet.sigma must be positive")
    try:
        packet = GaussianParams(
            sigma=sigma, x0=_number(pk, "x0", "packet"), k0=_number(pk, "k0", "packet", 0.0)
        )
    except SkinwaveError as exc:
        raise ConfigError(f"packet: {exc}") from exc

    tm = _need(raw, "times", "config")
    t_max = _number(tm, "t_max", "times")
    frame_count = _number(tm, "frame_count", "times")
    if t_max <= 0:
        raise ConfigError("times.t_max must be positive")
    if not float(frame_count).is_integer() or frame_count < 2:
        raise ConfigError("times.frame_count must be an integer >= 2")

    method = raw.get("method", "auto")
    if method not in METHODS:
        raise ConfigError(f"method must be one of {METHODS}, got {method!r}")

    an = raw.get("analysis", {}) or {}
    window = an.get("classify_window")
    if window is not None:
        window = _number(an, "classify_window", "analysis")
        if window <= 0:
            raise ConfigError("analysis.classify_window must be positive when set")
    sm = _number(an, "smoothing_window", "analysis", 1)
    if not float(sm).is_integer() or sm < 1:
        raise ConfigError("analysis.smoothing_window must be an integer >= 1")
    guard = _number(an, "guard_band", "analysis", 5)
    if not float(guard).is_integer() or guard < 0:
        raise ConfigError("analysis.guard_band must be a nonnegative integer")
    threshold = _number(an, "contact_threshold", "analysis", 3.0)
    if threshold <= 0:
        raise ConfigError("analysis.contact_threshold must be positive")
    cutoff = _number(an, "width_cutoff_fraction", "analysis", 0.25)
    if cutoff <= 0:
        raise ConfigError("analysis.width_cutoff_fraction must be positive")
    wall = an.get("contact_wall", "either")
    if wall not in ("either", "left", "right"):
        raise ConfigError("analysis.contact_wall must be 'either', 'left', or 'right'")
    analysis = AnalysisOptions(
        smoothing_window=int(sm),
        contact_threshold=float(threshold),
        guard_band=int(guard),
        width_cutoff_fraction=float(cutoff),
        classify_window=window,
        contact_wall=wall,
    )

    out = raw.get("output", {}) or {}
    output = OutputOptions(
        directory=str(out.get("directory", "out")),
        density_csv=bool(out.get("density_csv", True)),
        trajectory_csv=bool(out.get("trajectory_csv", True)),
        heatmap=bool(out.get("heatmap", True)),
        oracle_csv=bool(out.get("oracle_csv", True)),
    )

    snaps = raw.get("snapshot_times", []) or []
    if not isinstance(snaps, (list, tuple)):
        raise ConfigError("snapshot_times must be a list of times")

    return ExperimentConfig(
        model=model,
        packet=packet,
        times=TimeGrid(t_max=float(t_max), frame_count=int(frame_count)),
        method=method,
        analysis=analysis,
        output=output,
        snapshot_times=tuple(float(s) for s in snaps),
        name=str(raw.get("name", "custom")),
    )


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "name": cfg.name,
        "model": _model_to_dict(cfg.model),
        "packet": asdict(cfg.packet),
        "times": asdict(cfg.times),
        "method": cfg.method,
        "analysis": asdict(cfg.analysis),
        "output": asdict(cfg.output),
        "snapshot_times": list(cfg.snapshot_times),
    }


def load_config(path) -> ExperimentConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def save_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(json.dumps(config_to_dict(cfg), indent=2) + "\n")
