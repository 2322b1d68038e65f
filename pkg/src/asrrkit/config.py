"""Flat key-value run configs with unit-suffixed values.

One assignment per line, '#' comments, values like `f0 = 200 GHz` or
`lsrr = 54.1 pH`; everything normalizes to SI.  Bare numbers are taken
as already-SI.
"""

from __future__ import annotations

import re


class ConfigError(ValueError):
    """Malformed config file or missing/invalid key."""


_PREFIXES = {
    "a": 1e-18, "f": 1e-15, "p": 1e-12, "n": 1e-9, "u": 1e-6, "µ": 1e-6,
    "m": 1e-3, "k": 1e3, "M": 1e6, "G": 1e9, "T": 1e12,
}

# bare unit names (multiplier 1); compound tails like A/V^2 validate on the
# leading unit only
_UNITS = {"Hz", "H", "F", "Ohm", "ohm", "Ω", "V", "W", "S", "A", "m", "rad", "s", "K"}

_NUMBER = re.compile(r"^[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?$")


def _unit_multiplier(token: str) -> float:
    base = token.split("/")[0].split("^")[0]
    if base in _UNITS:
        return 1.0
    if len(base) >= 2 and base[0] in _PREFIXES and base[1:] in _UNITS:
        return _PREFIXES[base[0]]
    raise ConfigError(f"unknown unit {token!r}")


def parse_quantity(text: str) -> float:
    """`"200 GHz"` -> 2e11; `"54.1pH"` -> 5.41e-11; bare numbers pass through."""
    text = text.strip()
    if _NUMBER.match(text):
        return float(text)
    m = re.match(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(.+)$", text)
    if not m:
        raise ConfigError(f"cannot parse quantity {text!r}")
    value, unit = m.groups()
    return float(value) * _unit_multiplier(unit.strip())


def parse_config_text(text: str) -> dict:
    """Parse config text into {key: float | str}."""
    cfg: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        try:
            cfg[key] = parse_quantity(value)
        except ConfigError:
            cfg[key] = value  # non-numeric values stay as strings
    return cfg


def parse_config_file(path: str) -> dict:
    try:
        with open(path) as fh:
            return parse_config_text(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def require(cfg: dict, key: str) -> float:
    if key not in cfg:
        raise ConfigError(f"missing required config key {key!r}")
    value = cfg[key]
    if not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key!r} must be numeric, got {value!r}")
    return float(value)


def optional(cfg: dict, key: str, default):
    value = cfg.get(key, default)
    if value is None:
        return None
    if not isinstance(value, (int, float)):
        raise ConfigError(f"config key {key!r} must be numeric, got {value!r}")
    return float(value)
