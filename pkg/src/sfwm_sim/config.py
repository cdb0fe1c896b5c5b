"""Run-configuration parsing for the CLI.

Configs are single YAML documents.  Every physical quantity carries its unit
in the key name (``wavelength_nm``, ``power_mw``, ``beta2_ps2_per_km``...)
and is converted to strict SI here, at the boundary; unknown keys are
rejected with the full field path so typos cannot silently change a run.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from math import pi
from pathlib import Path

import yaml

from .circuit import (
    CircuitGraph,
    CouplerNode,
    Edge,
    PhaseShifterNode,
    PortNode,
    SegmentNode,
    SplitterNode,
)
from .dispersion import (
    DispersionModel,
    PumpConfig,
    angular_frequency_from_wavelength,
    wavelength_from_angular_frequency,
)
from .engine import SpectralGrid, WaveguideSpec
from .errors import ConfigError
from .presets import PRESET_KINDS, coupler_defaults, preset_n_eff, preset_parameters
from .templates import TEMPLATE_NAMES

CONFIG_PATH_ENV = "SFWM_SIM_CONFIG_PATH"

_MISSING = object()


def locate_config(name: str | Path) -> Path:
    """Resolve a config path, falling back to the search-path env var."""
    path = Path(name)
    if path.exists():
        return path
    for directory in os.environ.get(CONFIG_PATH_ENV, "").split(os.pathsep):
        if directory:
            candidate = Path(directory) / path
            if candidate.exists():
                return candidate
    raise ConfigError(f"config file {name!s} not found (searched ${CONFIG_PATH_ENV} too)")


def load_config(path: str | Path) -> dict:
    path = locate_config(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a mapping at top level")
    return doc


def config_hash(doc: dict) -> str:
    """Stable sha256 over the parsed document; embedded in output headers."""
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()


class _Section:
    """A config mapping that tracks consumed keys and reports leftovers."""

    def __init__(self, data: dict, where: str):
        if not isinstance(data, dict):
            raise ConfigError(f"{where}: expected a mapping")
        self._data = dict(data)
        self._where = where

    def take(self, key: str, default=_MISSING):
        if key in self._data:
            return self._data.pop(key)
        if default is _MISSING:
            raise ConfigError(f"{self._where}: missing required key {key!r}")
        return default

    def take_section(self, key: str, required: bool = False) -> "_Section | None":
        if key not in self._data and not required:
            return None
        return _Section(self.take(key), f"{self._where}.{key}")

    def has(self, *keys: str) -> bool:
        return any(k in self._data for k in keys)

    def finish(self) -> None:
        if self._data:
            raise ConfigError(
                f"{self._where}: unknown key(s) {sorted(self._data)}; "
                "check spelling and unit suffixes"
            )

    @property
    def where(self) -> str:
        return self._where


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a number, got {value!r}")
    return float(value)


def take_wavelength_rad_s(sec: _Section, stem: str) -> float:
    """Read one frequency-like quantity given as *_nm, *_thz or *_rad_s."""
    keys = (f"{stem}_nm", f"{stem}_thz", f"{stem}_rad_s")
    present = [k for k in keys if sec.has(k)]
    if len(present) != 1:
        raise ConfigError(f"{sec.where}: give exactly one of {keys}")
    value = _number(sec.take(present[0]), f"{sec.where}.{present[0]}")
    if present[0].endswith("_nm"):
        return angular_frequency_from_wavelength(value * 1e-9)
    if present[0].endswith("_thz"):
        return 2.0 * pi * value * 1e12
    return value


def take_power_w(sec: _Section, stem: str, default: float | None = None) -> float:
    keys = (f"{stem}_w", f"{stem}_mw", f"{stem}_dbm")
    present = [k for k in keys if sec.has(k)]
    if not present and default is not None:
        return default
    if len(present) != 1:
        raise ConfigError(f"{sec.where}: give exactly one of {keys}")
    value = _number(sec.take(present[0]), f"{sec.where}.{present[0]}")
    if present[0].endswith("_mw"):
        return value * 1e-3
    if present[0].endswith("_dbm"):
        return 1e-3 * 10.0 ** (value / 10.0)
    return value


def take_length_m(sec: _Section, stem: str, default: float | None = None) -> float:
    keys = (f"{stem}_m", f"{stem}_mm", f"{stem}_um")
    present = [k for k in keys if sec.has(k)]
    if not present and default is not None:
        return default
    if len(present) != 1:
        raise ConfigError(f"{sec.where}: give exactly one of {keys}")
    value = _number(sec.take(present[0]), f"{sec.where}.{present[0]}")
    if present[0].endswith("_mm"):
        return value * 1e-3
    if present[0].endswith("_um"):
        return value * 1e-6
    return value


def take_time_s(sec: _Section, stem: str, default: float | None = None) -> float:
    keys = (f"{stem}_s", f"{stem}_us", f"{stem}_ns", f"{stem}_ps")
    present = [k for k in keys if sec.has(k)]
    if not present and default is not None:
        return default
    if len(present) != 1:
        raise ConfigError(f"{sec.where}: give exactly one of {keys}")
    value = _number(sec.take(present[0]), f"{sec.where}.{present[0]}")
    scale = {"_s": 1.0, "_us": 1e-6, "_ns": 1e-9, "_ps": 1e-12}
    for suffix, factor in scale.items():
        if present[0].endswith(suffix):
            return value * factor
    raise AssertionError


def parse_pump(sec: _Section) -> PumpConfig:
    mode = sec.take("mode", "degenerate")
    if mode == "degenerate":
        omega = take_wavelength_rad_s(sec, "wavelength")
        power = take_power_w(sec, "power")
        pump = PumpConfig.degenerate(omega, power)
    elif mode in ("non-degenerate", "non_degenerate"):
        omega1 = take_wavelength_rad_s(sec, "wavelength1")
        omega2 = take_wavelength_rad_s(sec, "wavelength2")
        power1 = take_power_w(sec, "power1")
        power2 = take_power_w(sec, "power2")
        pump = PumpConfig.non_degenerate(omega1, omega2, power1, power2)
    else:
        raise ConfigError(f"{sec.where}.mode: unknown pump mode {mode!r}")
    sec.finish()
    return pump


def parse_dispersion(sec: _Section, omega_c: float) -> DispersionModel:
    """Dispersion block: optional reference frequency plus beta2, beta4, ...

    Without an explicit ``lambda_c``/``omega_c`` the model is referenced at
    the pump average; an explicit value must agree with it to 0.1% (checked
    when the mismatch is evaluated).
    """
    ref_keys = ("lambda_c_nm", "frequency_c_thz", "omega_c_rad_s")
    present = [k for k in ref_keys if sec.has(k)]
    if len(present) > 1:
        raise ConfigError(f"{sec.where}: give at most one of {ref_keys}")
    if present:
        value = _number(sec.take(present[0]), f"{sec.where}.{present[0]}")
        if present[0] == "lambda_c_nm":
            omega_c = angular_frequency_from_wavelength(value * 1e-9)
        elif present[0] == "frequency_c_thz":
            omega_c = 2.0 * pi * value * 1e12
        else:
            omega_c = value
    beta = []
    for order in (2, 4, 6, 8):
        si_key = f"beta{order}_s{order}_per_m"
        km_key = f"beta{order}_ps{order}_per_km"
        if sec.has(si_key) and sec.has(km_key):
            raise ConfigError(f"{sec.where}: give only one of {si_key}/{km_key}")
        if sec.has(si_key):
            beta.append(_number(sec.take(si_key), f"{sec.where}.{si_key}"))
        elif sec.has(km_key):
            # 1 ps^n/km = (1e-12)^n s^n / 1e3 m
            value = _number(sec.take(km_key), f"{sec.where}.{km_key}")
            beta.append(value * (1e-12**order) / 1e3)
        else:
            break
    if not beta:
        raise ConfigError(f"{sec.where}: needs at least beta2")
    sec.finish()
    return DispersionModel(omega_c=omega_c, beta_even=tuple(beta))


def parse_waveguide(sec: _Section, omega_c: float) -> tuple[WaveguideSpec, float, str]:
    """Returns (spec, n_eff, label).  ``kind`` presets fill unset fields."""
    kind = str(sec.take("kind", "custom")).replace("-", "_")
    label = sec.take("label", kind)
    length = take_length_m(sec, "length")
    preset = preset_parameters(kind) if kind in PRESET_KINDS else None
    if preset is None and kind != "custom":
        raise ConfigError(f"{sec.where}.kind: unknown kind {kind!r}")

    gamma = sec.take("gamma_per_w_m", None)
    if gamma is None:
        if preset is None:
            raise ConfigError(f"{sec.where}: custom waveguide needs gamma_per_w_m")
        gamma = preset["gamma_per_w_m"]
    else:
        gamma = _number(gamma, f"{sec.where}.gamma_per_w_m")
    attenuation = sec.take("attenuation_db_per_cm", None)
    if attenuation is None:
        attenuation = preset["attenuation_db_per_cm"] if preset else 0.0
    else:
        attenuation = _number(attenuation, f"{sec.where}.attenuation_db_per_cm")
    n_eff = sec.take("n_eff", None)
    if n_eff is None:
        n_eff = preset["n_eff"] if preset else 2.5
    else:
        n_eff = _number(n_eff, f"{sec.where}.n_eff")

    disp_sec = sec.take_section("dispersion")
    if disp_sec is not None:
        dispersion = parse_dispersion(disp_sec, omega_c)
    elif preset is not None:
        d = preset["dispersion"]
        dispersion = DispersionModel(
            omega_c, (d["beta2_s2_per_m"], d["beta4_s4_per_m"])
        )
    else:
        raise ConfigError(f"{sec.where}: custom waveguide needs a dispersion block")
    sec.finish()
    spec = WaveguideSpec(
        kind=kind if kind in PRESET_KINDS else "custom",
        length_m=length,
        gamma_per_w_m=float(gamma),
        dispersion=dispersion,
        attenuation_db_per_cm=float(attenuation),
    )
    return spec, float(n_eff), str(label)


def parse_grid(sec: _Section | None, omega_c: float, n_points_override: int | None = None) -> SpectralGrid:
    span_hz = 20.0e12
    n_points = 4096
    if sec is not None:
        span_hz = _number(sec.take("span_thz", span_hz / 1e12), f"{sec.where}.span_thz") * 1e12
        n_points = sec.take("points", n_points)
        if not isinstance(n_points, int) or isinstance(n_points, bool):
            raise ConfigError(f"{sec.where}.points: expected an integer")
        sec.finish()
    if n_points_override is not None:
        n_points = n_points_override
    return SpectralGrid.symmetric(omega_c, 2.0 * pi * span_hz / 2.0, n_points)


@dataclass(frozen=True)
class SpectrumRun:
    pump: PumpConfig
    grid: SpectralGrid
    waveguides: tuple[tuple[WaveguideSpec, str], ...]  # (spec, label)
    doc_hash: str


def parse_spectrum_config(doc: dict, n_points_override: int | None = None) -> SpectrumRun:
    top = _Section(doc, "config")
    pump = parse_pump(top.take_section("pump", required=True))
    grid = parse_grid(top.take_section("grid"), pump.omega_c, n_points_override)
    wg_list = top.take("waveguides")
    if not isinstance(wg_list, list) or not wg_list:
        raise ConfigError("config.waveguides: expected a non-empty list")
    waveguides = []
    labels = set()
    for i, item in enumerate(wg_list):
        spec, _, label = parse_waveguide(
            _Section(item, f"config.waveguides[{i}]"), pump.omega_c
        )
        if label in labels:
            raise ConfigError(f"config.waveguides[{i}]: duplicate label {label!r}")
        labels.add(label)
        waveguides.append((spec, label))
    top.finish()
    return SpectrumRun(pump, grid, tuple(waveguides), config_hash(doc))


@dataclass(frozen=True)
class CircuitRun:
    template: str | None  # template name, or None for an explicit graph
    all_strip: bool
    graph: CircuitGraph | None
    pump: PumpConfig | None
    grid: SpectralGrid | None
    input_ports: str | tuple[str, str] | None
    detection_node: str | None
    designated_segments: tuple[str, ...]
    band_detuning_hz: tuple[float, float] | None
    doc_hash: str


def _parse_node(sec: _Section, omega_c: float):
    kind = sec.take("kind")
    node_id = str(sec.take("id"))
    if kind == "port":
        node = PortNode(node_id, sec.take("direction", "input"))
    elif kind == "splitter":
        node = SplitterNode(node_id, _number(sec.take("ratio", 0.5), f"{sec.where}.ratio"))
    elif kind == "phase_shifter":
        node = PhaseShifterNode(
            node_id, _number(sec.take("phase_rad", 0.0), f"{sec.where}.phase_rad")
        )
    elif kind == "grating_coupler":
        defaults = coupler_defaults()
        center = take_wavelength_rad_s(sec, "center")
        node = CouplerNode(
            node_id,
            center_wavelength_m=wavelength_from_angular_frequency(center),
            min_loss_db=_number(
                sec.take("min_loss_db", defaults["min_loss_db"]), f"{sec.where}.min_loss_db"
            ),
            bandwidth_3db_m=_number(
                sec.take("bandwidth_3db_nm", defaults["bandwidth_3db_nm"]),
                f"{sec.where}.bandwidth_3db_nm",
            )
            * 1e-9,
        )
    elif kind == "segment":
        wg_sec = sec.take_section("waveguide", required=True)
        spec, n_eff_preset, _ = parse_waveguide(wg_sec, omega_c)
        n_eff = sec.take("n_eff", n_eff_preset)
        node = SegmentNode(
            node_id,
            waveguide=spec,
            n_eff=float(n_eff),
            pair_loss_exponent=int(sec.take("pair_loss_exponent", 1)),
        )
    else:
        raise ConfigError(f"{sec.where}.kind: unknown node kind {kind!r}")
    sec.finish()
    return node


def parse_circuit_config(doc: dict) -> CircuitRun:
    top = _Section(doc, "config")
    template = top.take("template", None)
    all_strip = bool(top.take("all_strip", False))
    if template is not None:
        if template not in TEMPLATE_NAMES:
            raise ConfigError(
                f"config.template: unknown template {template!r}; expected {TEMPLATE_NAMES}"
            )
        top.finish()
        return CircuitRun(
            template, all_strip, None, None, None, None, None, (), None, config_hash(doc)
        )

    pump = parse_pump(top.take_section("pump", required=True))
    grid = parse_grid(top.take_section("grid"), pump.omega_c)
    band = top.take("band_thz")
    if not (isinstance(band, list) and len(band) == 2):
        raise ConfigError("config.band_thz: expected [lo_thz, hi_thz]")
    band_hz = (float(band[0]) * 1e12, float(band[1]) * 1e12)

    nodes = []
    for i, item in enumerate(top.take("nodes")):
        nodes.append(_parse_node(_Section(item, f"config.nodes[{i}]"), pump.omega_c))
    edges = []
    for i, item in enumerate(top.take("edges")):
        sec = _Section(item, f"config.edges[{i}]")
        edges.append(
            Edge(
                src=str(sec.take("from")),
                dst=str(sec.take("to")),
                src_port=int(sec.take("from_port", 0)),
                dst_port=int(sec.take("to_port", 0)),
            )
        )
        sec.finish()
    graph = CircuitGraph(tuple(nodes), tuple(edges))

    inputs = top.take("input_ports")
    if isinstance(inputs, str):
        input_ports: str | tuple[str, str] = inputs
    elif isinstance(inputs, list) and len(inputs) in (1, 2):
        input_ports = inputs[0] if len(inputs) == 1 else (str(inputs[0]), str(inputs[1]))
    else:
        raise ConfigError("config.input_ports: expected a port id or a list of 1-2 ids")
    detection = top.take("detection_node", None)
    designated = top.take("designated_segments")
    if not isinstance(designated, list) or not designated:
        raise ConfigError("config.designated_segments: expected a non-empty list")
    top.finish()
    return CircuitRun(
        None,
        all_strip,
        graph,
        pump,
        grid,
        input_ports,
        None if detection is None else str(detection),
        tuple(str(s) for s in designated),
        band_hz,
        config_hash(doc),
    )


@dataclass(frozen=True)
class GammaRun:
    mode_field_csv: Path
    omega: float
    n0: float
    n2_m2_per_w: float
    doc_hash: str


def parse_gamma_config(doc: dict) -> GammaRun:
    top = _Section(doc, "config")
    csv_path = Path(str(top.take("mode_field_csv")))
    if not csv_path.exists():
        raise ConfigError(f"config.mode_field_csv: file {csv_path} does not exist")
    omega = take_wavelength_rad_s(top, "wavelength")
    n0 = _number(top.take("n0", 3.48), "config.n0")
    n2 = _number(top.take("n2_m2_per_w", 4.5e-18), "config.n2_m2_per_w")
    top.finish()
    return GammaRun(csv_path, omega, n0, n2, config_hash(doc))


@dataclass(frozen=True)
class CarRun:
    bin_width_s: float
    window_s: float
    guard_bins: int
    timestamps_csv: Path | None
    synthesize: dict | None  # RateModel kwargs + duration_s
    doc_hash: str


def parse_car_config(doc: dict) -> CarRun:
    top = _Section(doc, "config")
    bin_width = take_time_s(top, "bin_width")
    window = take_time_s(top, "window")
    guard = int(top.take("guard_bins", 0))
    ts_path = top.take("timestamps_csv", None)
    synth_sec = top.take_section("synthesize")
    if (ts_path is None) == (synth_sec is None):
        raise ConfigError("config: give exactly one of timestamps_csv / synthesize")
    synthesize = None
    if synth_sec is not None:
        synthesize = {
            "duration_s": _number(synth_sec.take("duration_s"), f"{synth_sec.where}.duration_s"),
            "pair_rate_hz": _number(
                synth_sec.take("pair_rate_hz"), f"{synth_sec.where}.pair_rate_hz"
            ),
            "efficiency_signal": _number(
                synth_sec.take("efficiency_signal", 1.0), f"{synth_sec.where}.efficiency_signal"
            ),
            "efficiency_idler": _number(
                synth_sec.take("efficiency_idler", 1.0), f"{synth_sec.where}.efficiency_idler"
            ),
            "noise_rate_signal_hz": _number(
                synth_sec.take("noise_rate_signal_hz", 0.0),
                f"{synth_sec.where}.noise_rate_signal_hz",
            ),
            "noise_rate_idler_hz": _number(
                synth_sec.take("noise_rate_idler_hz", 0.0),
                f"{synth_sec.where}.noise_rate_idler_hz",
            ),
            "dark_rate_signal_hz": _number(
                synth_sec.take("dark_rate_signal_hz", 0.0),
                f"{synth_sec.where}.dark_rate_signal_hz",
            ),
            "dark_rate_idler_hz": _number(
                synth_sec.take("dark_rate_idler_hz", 0.0),
                f"{synth_sec.where}.dark_rate_idler_hz",
            ),
        }
        synth_sec.finish()
    path = None
    if ts_path is not None:
        path = Path(str(ts_path))
        if not path.exists():
            raise ConfigError(f"config.timestamps_csv: file {path} does not exist")
    top.finish()
    return CarRun(bin_width, window, guard, path, synthesize, config_hash(doc))
