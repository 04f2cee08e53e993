"""Configuration file parsing for the command-line tools.

The file format is INI (configparser) with case-sensitive keys.  Every
physical value carries an explicit unit suffix -- "1.5 GHz", "0.5 MHz",
"200 ns", "600 aF" -- parsed strictly; dimensionless values are written as
plain numbers.  Grids are either comma lists of quantities or
"linspace(start, stop, count)" with units on start/stop.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields

import numpy as np

from .molecule import MoleculeParams, PumpParams
from .nscheme import NSchemeParams, Truncation


class ConfigError(ValueError):
    pass


_FREQ_UNITS = {"GHz": 1.0, "MHz": 1e-3, "kHz": 1e-6}
_TIME_UNITS = {"ns": 1.0, "us": 1e3}
_CAP_UNITS = {"F": 1.0, "fF": 1e-15, "aF": 1e-18}


def _parse_number(token: str, key: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ConfigError(f"{key}: {token!r} is not a number")


def parse_quantity(text: str, dimension: str, key: str) -> float:
    """Parse "value unit" with strict unit checking.

    dimension is one of "frequency" (stored in GHz), "time" (ns),
    "capacitance" (F), or "dimensionless" (no suffix allowed).
    """
    parts = text.strip().split()
    if dimension == "dimensionless":
        if len(parts) != 1:
            raise ConfigError(f"{key}: expected a plain number, got {text!r}")
        return _parse_number(parts[0], key)
    units = {"frequency": _FREQ_UNITS, "time": _TIME_UNITS, "capacitance": _CAP_UNITS}[
        dimension
    ]
    if len(parts) != 2:
        raise ConfigError(
            f"{key}: expected 'value unit' with unit in {sorted(units)}, got {text!r}"
        )
    value, unit = parts
    if unit not in units:
        raise ConfigError(f"{key}: unknown {dimension} unit {unit!r}; use one of {sorted(units)}")
    return _parse_number(value, key) * units[unit]


def parse_grid(text: str, dimension: str, key: str) -> np.ndarray:
    text = text.strip()
    if text.startswith("linspace(") and text.endswith(")"):
        inner = text[len("linspace(") : -1]
        parts = [p.strip() for p in inner.split(",")]
        if len(parts) != 3:
            raise ConfigError(f"{key}: linspace needs (start, stop, count)")
        start = parse_quantity(parts[0], dimension, key)
        stop = parse_quantity(parts[1], dimension, key)
        try:
            count = int(parts[2])
        except ValueError:
            raise ConfigError(f"{key}: linspace count must be an integer")
        if count < 1:
            raise ConfigError(f"{key}: linspace count must be >= 1")
        return np.linspace(start, stop, count)
    items = [p for p in (s.strip() for s in text.split(",")) if p]
    if not items:
        raise ConfigError(f"{key}: empty grid")
    return np.array([parse_quantity(p, dimension, key) for p in items])


# (section, key) -> (dataclass field, dimension)
_MOLECULE_KEYS = {
    "E_J": ("e_j", "frequency"),
    "E_m": ("e_m", "frequency"),
    "b0": ("b0", "dimensionless"),
    "n_g1": ("n_g1", "dimensionless"),
    "n_g2": ("n_g2", "dimensionless"),
    "C_sigma": ("c_sigma", "capacitance"),
    "C_m": ("c_m", "capacitance"),
    "E_c1": ("e_c1", "frequency"),
    "E_c2": ("e_c2", "frequency"),
}
_PUMP_KEYS = {
    "Omega_Ex": ("omega_ex", "frequency"),
    "omega_p": ("omega_p", "frequency"),
}
_NSCHEME_KEYS = {
    "g1": ("g1", "frequency"),
    "g2": ("g2", "frequency"),
    "Omega_c": ("omega_c", "frequency"),
    "delta": ("delta", "frequency"),
    "Delta": ("big_delta", "frequency"),
    "gamma1": ("gamma1", "frequency"),
    "gamma2": ("gamma2", "frequency"),
    "gamma3": ("gamma3", "frequency"),
    "gamma4": ("gamma4", "frequency"),
    "gamma_phi": ("gamma_phi", "frequency"),
    "kappa1": ("kappa1", "frequency"),
    "kappa2": ("kappa2", "frequency"),
}


@dataclass(frozen=True)
class Config:
    molecule: MoleculeParams = MoleculeParams()
    pump: PumpParams = PumpParams()
    nscheme: NSchemeParams = NSchemeParams()
    truncation: Truncation = Truncation()
    b0_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 0.8, 41))
    omega_ex_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.8, 3.0, 24))
    gamma5_grid: np.ndarray = field(default_factory=lambda: np.linspace(0.0, 1e-3, 21))
    sweep_gamma1: float = 5e-4
    sweep_gamma2: float = 5e-4
    sweep_gamma3: float = 5e-4
    alpha: float = 2.0
    beta: float = 2.0
    n_max_cat: int = 20
    t_final: float = 50.0
    n_times: int = 201
    defaulted: tuple[str, ...] = ()  # every (section.key) the file did not set


def _fill(section, keymap, cls, base):
    kwargs = {}
    seen = set()
    for key in section:
        if key not in keymap:
            raise ConfigError(f"unknown key {key!r}; known: {sorted(keymap)}")
        attr, dim = keymap[key]
        kwargs[attr] = parse_quantity(section[key], dim, key)
        seen.add(key)
    return base if not kwargs else cls(**{**_asdict_shallow(base), **kwargs}), seen


def _asdict_shallow(obj):
    return {f.name: getattr(obj, f.name) for f in fields(obj)}


def load_config(path: str | None) -> Config:
    """Load an INI config; None or missing sections fall back to defaults."""
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keys are case-sensitive (delta vs Delta)
    if path is not None:
        read = cp.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")

    known_sections = {
        "molecule", "pump", "nscheme", "truncation", "grids", "sweep", "cat", "dynamics",
    }
    for s in cp.sections():
        if s not in known_sections:
            raise ConfigError(f"unknown section [{s}]; known: {sorted(known_sections)}")

    molecule, seen_mol = _fill(
        cp["molecule"] if cp.has_section("molecule") else {}, _MOLECULE_KEYS,
        MoleculeParams, MoleculeParams(),
    )
    pump, seen_pump = _fill(
        cp["pump"] if cp.has_section("pump") else {}, _PUMP_KEYS, PumpParams, PumpParams(),
    )
    nscheme, seen_ns = _fill(
        cp["nscheme"] if cp.has_section("nscheme") else {}, _NSCHEME_KEYS,
        NSchemeParams, NSchemeParams(),
    )

    trunc = Truncation()
    if cp.has_section("truncation"):
        sec = cp["truncation"]
        kw = {}
        for key in sec:
            if key not in ("n_max1", "n_max2"):
                raise ConfigError(f"unknown key {key!r} in [truncation]")
            kw[key] = int(parse_quantity(sec[key], "dimensionless", key))
        trunc = Truncation(**{**_asdict_shallow(trunc), **kw})

    extras: dict[str, object] = {}
    seen_extra: set[str] = set()

    def grab(section_name, key, dim, cast=float):
        if cp.has_section(section_name) and key in cp[section_name]:
            seen_extra.add(f"{section_name}.{key}")
            return cast(parse_quantity(cp[section_name][key], dim, key))
        return None

    def grab_grid(section_name, key, dim):
        if cp.has_section(section_name) and key in cp[section_name]:
            seen_extra.add(f"{section_name}.{key}")
            return parse_grid(cp[section_name][key], dim, key)
        return None

    for name, key, dim in (
        ("b0_grid", ("grids", "b0"), "dimensionless"),
        ("omega_ex_grid", ("grids", "Omega_Ex"), "frequency"),
        ("gamma5_grid", ("grids", "gamma5"), "frequency"),
    ):
        g = grab_grid(key[0], key[1], dim)
        if g is not None:
            extras[name] = g
    for name, key, dim, cast in (
        ("sweep_gamma1", ("sweep", "gamma1"), "frequency", float),
        ("sweep_gamma2", ("sweep", "gamma2"), "frequency", float),
        ("sweep_gamma3", ("sweep", "gamma3"), "frequency", float),
        ("alpha", ("cat", "alpha"), "dimensionless", float),
        ("beta", ("cat", "beta"), "dimensionless", float),
        ("n_max_cat", ("cat", "n_max"), "dimensionless", int),
        ("t_final", ("dynamics", "t_final"), "time", float),
        ("n_times", ("dynamics", "n_times"), "dimensionless", int),
    ):
        v = grab(key[0], key[1], dim, cast)
        if v is not None:
            extras[name] = v

    defaulted = []
    for sec_name, keymap, seen in (
        ("molecule", _MOLECULE_KEYS, seen_mol),
        ("pump", _PUMP_KEYS, seen_pump),
        ("nscheme", _NSCHEME_KEYS, seen_ns),
    ):
        for key in keymap:
            if key not in seen and key not in ("E_c1", "E_c2"):
                defaulted.append(f"{sec_name}.{key}")

    return Config(
        molecule=molecule,
        pump=pump,
        nscheme=nscheme,
        truncation=trunc,
        defaulted=tuple(sorted(defaulted)),
        **extras,
    )
