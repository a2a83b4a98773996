"""Flat ``key = value`` configuration files for scenarios and sweeps.

Display units live only here: gains in dBi, SNRs in dB, jitter in mm.
Everything handed to the library is linear / SI.
"""

import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .channel import RfLinkParams, ThzLinkParams, db_to_linear
from .errors import ConfigError
from .perf import Scenario, modulation_constants, modulation_for_order

# required scenario keys, in the order they are reported when missing
SCENARIO_KEYS = (
    "f1_hz", "d1_m", "gt1_dbi", "gr1_dbi", "temperature_k", "humidity_percent",
    "pressure_pa", "alpha", "mu", "h_hat_f", "sigma_s_mm", "r1_m", "w_d1_m",
    "fr_hz", "gt2_dbi", "gr2_dbi", "d2_m", "eta2",
    "es_over_no1_db", "er_over_no2_db", "gamma_th_db",
)

SWEEP_AXES = ("es_over_no1_db", "er_over_no2_db", "sigma_s_mm", "M")

_LINE = re.compile(r"^\s*([A-Za-z_][\w.]*)\s*=\s*(.*?)\s*$")


def read_key_values(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    text = Path(path).read_text(encoding="utf-8")
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = match.groups()
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def _number(key, text):
    try:
        value = float(text)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {text!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{key}: must be finite")
    return value


def check_scenario_values(raw, source="scenario"):
    """Validate the key set of a scenario mapping and convert values to floats."""
    unknown = sorted(set(raw) - set(SCENARIO_KEYS))
    if unknown:
        raise ConfigError(f"{source}: unknown keys: {', '.join(unknown)}")
    for key in SCENARIO_KEYS:
        if key not in raw:
            raise ConfigError(f"{source}: missing required key {key!r}")
    return {key: _number(key, str(raw[key])) for key in SCENARIO_KEYS}


def build_scenario(values):
    """Scenario from display-unit values (dB, dBi, mm)."""
    mu = values["mu"]
    thz = ThzLinkParams(
        f1=values["f1_hz"],
        d1=values["d1_m"],
        Gt1=db_to_linear(values["gt1_dbi"]),
        Gr1=db_to_linear(values["gr1_dbi"]),
        T=values["temperature_k"],
        psi=values["humidity_percent"],
        p=values["pressure_pa"],
        alpha=values["alpha"],
        mu=int(mu) if float(mu).is_integer() else mu,
        h_hat_f=values["h_hat_f"],
        sigma_s=values["sigma_s_mm"] * 1e-3,
        r1=values["r1_m"],
        w_d1=values["w_d1_m"],
    )
    rf = RfLinkParams(
        fr=values["fr_hz"],
        Gt2=db_to_linear(values["gt2_dbi"]),
        Gr2=db_to_linear(values["gr2_dbi"]),
        d2=values["d2_m"],
        eta2=values["eta2"],
    )
    return Scenario(
        thz=thz,
        rf=rf,
        es_over_no1=db_to_linear(values["es_over_no1_db"]),
        er_over_no2=db_to_linear(values["er_over_no2_db"]),
        gamma_th=db_to_linear(values["gamma_th_db"]),
    )


def read_scenario_values(path):
    return check_scenario_values(read_key_values(path), source=str(path))


def parse_scenario(path):
    """Read and validate a scenario file.

    Raises:
        ConfigError: unknown or missing keys, unparsable numbers.
        ParameterError: values out of range (UnsupportedParameterError for
            non-integer mu).
    """
    return build_scenario(read_scenario_values(path))


def parse_modulation(text):
    """``bpsk``, ``qpsk`` or ``mqam:M``."""
    text = text.strip().lower()
    if text.startswith("mqam:") or text.startswith("qam:"):
        order = text.split(":", 1)[1]
        if not order.isdigit():
            raise ConfigError(f"bad modulation order in {text!r}")
        return modulation_constants("mqam", int(order))
    if text in ("bpsk", "qpsk"):
        return modulation_constants(text)
    raise ConfigError(f"unknown modulation {text!r} (use bpsk, qpsk or mqam:M)")


@dataclass
class Overlay:
    label: str
    overrides: dict = field(default_factory=dict)
    mod: object = None


@dataclass
class SweepSpec:
    axis: str
    values: list
    overlays: list
    mod: object = None


def _parse_overlay(label, text):
    overrides = {}
    mod = None
    for item in filter(None, (part.strip() for part in text.split(","))):
        if "=" not in item:
            raise ConfigError(f"overlay {label!r}: expected key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        if key == "mod":
            mod = parse_modulation(value)
        elif key == "M":
            mod = modulation_for_order(int(_number(key, value)))
        elif key in SCENARIO_KEYS:
            overrides[key] = _number(key, value)
        else:
            raise ConfigError(f"overlay {label!r}: unknown key {key!r}")
    return Overlay(label=label, overrides=overrides, mod=mod)


def axis_grid(start, stop, step):
    """start, start + step, ... up to stop; a step wider than the range gives [start]."""
    if not step > 0:
        raise ConfigError("sweep step must be positive")
    if not start < stop:
        raise ConfigError("sweep start must be below stop")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def parse_sweep(path):
    """Read a sweep file: axis, start/stop/step (or values), overlays and mod.

    Overlays are ``overlay.<label> = key=value, key=value`` lines, in file
    order. Overlay keys are scenario keys plus ``mod`` and ``M``.
    """
    raw = read_key_values(path)
    if "axis" not in raw:
        raise ConfigError(f"{path}: missing required key 'axis'")
    axis = raw.pop("axis")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"{path}: axis must be one of {SWEEP_AXES}, got {axis!r}")
    if "values" in raw:
        values = [_number("values", v) for v in raw.pop("values").split(",") if v.strip()]
        if not values:
            raise ConfigError(f"{path}: empty values list")
    else:
        for key in ("start", "stop", "step"):
            if key not in raw:
                raise ConfigError(f"{path}: missing required key {key!r}")
        values = axis_grid(*(_number(k, raw.pop(k)) for k in ("start", "stop", "step")))
    if axis == "M":
        values = [int(v) for v in values]
        for v in values:
            modulation_for_order(v)
    mod = parse_modulation(raw.pop("mod")) if "mod" in raw else None
    overlays = []
    for key in list(raw):
        if key.startswith("overlay."):
            overlays.append(_parse_overlay(key[len("overlay."):], raw.pop(key)))
    if raw:
        raise ConfigError(f"{path}: unknown keys: {', '.join(sorted(raw))}")
    if not overlays:
        overlays = [Overlay(label="base")]
    return SweepSpec(axis=axis, values=values, overlays=overlays, mod=mod)
