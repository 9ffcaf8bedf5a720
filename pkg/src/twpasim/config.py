"""Run-file parsing: strict JSON key-value blocks, laboratory units in,
SI out.

The run file is a single JSON document with a mandatory `device` block
(microamps, femtofarads, cell count, polarity) and one block per subcommand.
Unknown keys anywhere are rejected; unit conversion happens exactly once, at
load time.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any

from .errors import ConfigError
from .snail import SnailParameters, alternating_polarity

GHZ = 2.0 * math.pi * 1e9

_DEVICE_KEYS = {"i0_ua", "r", "cg_ff", "cj_ff", "n_cells", "polarity"}

_SECTION_KEYS: dict[str, set[str]] = {
    "cell_sweep": {"n_points"},
    "dispersion": {"flux_quanta", "f_min_ghz", "f_max_ghz", "n_points", "theta0_rad"},
    "gain": {
        "flux_quanta",
        "pump_freq_ghz",
        "pump_amplitude_rad",
        "pump_power_dbm",
        "f_min_ghz",
        "f_max_ghz",
        "n_points",
        "loss_profile",
    },
    "phase_match": {
        "flux_quanta",
        "pump_freq_ghz",
        "pump_amplitude_rad",
        "pump_power_dbm",
    },
    "noise_sim": {
        "flux_quanta",
        "pump_freq_ghz",
        "pump_amplitude_rad",
        "pump_power_dbm",
        "f_min_ghz",
        "f_max_ghz",
        "n_points",
        "loss_profile_low_power",
        "loss_profile_high_power",
    },
    "noise_fit": {
        "radiometer_csv",
        "calibration_csv",
        "pump_freq_ghz",
        "bandwidth_hz",
        "model",
        "t_max_mk",
    },
    "impedance": {
        "l_cell_ph",
        "c_cell_ff",
        "n_cells",
        "modulation_amplitude",
        "modulation_period",
        "z0_ohm",
        "f_min_ghz",
        "f_max_ghz",
        "n_points",
    },
    "ripple": {"gain_db", "z0_ohm", "z_min_ohm", "z_max_ohm", "n_points"},
    "transient": {
        "flux_quanta",
        "probe_freq_ghz",
        "probe_power_dbm",
        "polarity",
        "dt_ps",
        "duration_ns",
        "ring_up_ns",
        "record_decimation",
    },
    "fit_phase": {"data_csv", "n_cells", "cg_ff", "cj_ff"},
    "fit_flux": {"data_csv", "cg_ff", "cj_ff"},
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run file: device parameters plus raw per-command sections."""

    device: SnailParameters
    sections: dict[str, dict[str, Any]]
    seed: int
    raw_text: str

    def section(self, name: str) -> dict[str, Any]:
        if name not in self.sections:
            raise ConfigError(f"run file has no '{name}' block")
        return self.sections[name]


def _check_keys(block: dict, allowed: set[str], where: str):
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in '{where}' block")


def _device_from_block(block: dict) -> SnailParameters:
    _check_keys(block, _DEVICE_KEYS, "device")
    missing = {"i0_ua", "r", "cg_ff", "cj_ff", "n_cells"} - set(block)
    if missing:
        raise ConfigError(f"device block missing key(s) {sorted(missing)}")
    n_cells = block["n_cells"]
    if not isinstance(n_cells, int) or n_cells < 1:
        raise ConfigError("device n_cells must be a positive integer")
    pol = block.get("polarity", "alternating")
    if pol == "alternating":
        polarity = alternating_polarity(n_cells)
    elif pol == "uniform":
        polarity = tuple([1] * n_cells)
    elif isinstance(pol, list):
        polarity = tuple(pol)
    else:
        raise ConfigError(
            "device polarity must be 'alternating', 'uniform', or a list of +-1"
        )
    try:
        return SnailParameters(
            i0=float(block["i0_ua"]) * 1e-6,
            r=float(block["r"]),
            cg=float(block["cg_ff"]) * 1e-15,
            cj=float(block["cj_ff"]) * 1e-15,
            n_cells=n_cells,
            polarity=polarity,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid device block: {exc}") from exc


def _apply_overrides(doc: dict, overrides) -> None:
    """Apply `section.key=value` (or `key=value`) overrides onto the parsed doc.

    Values are parsed as JSON, falling back to a bare string; keys pass
    through the same strict validation as the file afterwards.
    """
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        key, _, raw_value = item.partition("=")
        try:
            value = json.loads(raw_value)
        except json.JSONDecodeError:
            value = raw_value
        parts = key.split(".")
        if len(parts) == 1:
            doc[parts[0]] = value
        elif len(parts) == 2:
            block = doc.setdefault(parts[0], {})
            if not isinstance(block, dict):
                raise ConfigError(f"cannot override inside non-object '{parts[0]}'")
            block[parts[1]] = value
        else:
            raise ConfigError(f"override key {key!r} nests deeper than one block")


def load_run_config(path, overrides=()) -> RunConfig:
    """Parse and validate a run file; no file or model evaluation happens."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read run file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"run file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("run file must be a JSON object")
    if overrides:
        _apply_overrides(doc, overrides)
        # the effective configuration, overrides included, is what gets hashed
        text = text + "".join(f"\n#override {item}" for item in overrides)

    allowed_top = {"device", "seed"} | set(_SECTION_KEYS)
    _check_keys(doc, allowed_top, "top-level")
    if "device" not in doc:
        raise ConfigError("run file missing 'device' block")
    device = _device_from_block(doc["device"])
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer")

    sections = {}
    for name, keys in _SECTION_KEYS.items():
        if name in doc:
            block = doc[name]
            if not isinstance(block, dict):
                raise ConfigError(f"'{name}' block must be an object")
            _check_keys(block, keys, name)
            sections[name] = block
    return RunConfig(device=device, sections=sections, seed=seed, raw_text=text)
