"""Scenario and sweep configuration.

Scenario files are JSON::

    {
      "unit": "Gamma",
      "atoms": [
        {"delta": 1.0, "gamma": 0.0, "k1": [1.0954451150103321, 0.0],
         "k2": [0.8944271909999159, 0.0], "phi": 0.0},
        {"delta": -1.0, "gamma": 0.0, "k1_rate": 1.2, "k2_rate": 0.8,
         "phi": 3.141592653589793}
      ],
      "drive": {"forward": [1.0, 0.0], "backward": [0.0, 0.0]}
    }

Complex numbers are ``[re, im]`` pairs (a bare real is also accepted).
``k1_rate``/``k2_rate`` give a signed |k|^2 instead of the amplitude.
Omitted numeric fields default to 0. ``unit`` is a label only.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigError
from .model import Drive, Emitter, EmitterChain, coupling_from_rate

SWEEP_PARAMETERS = ("power", "phase", "delta_common", "delta_antisym", "gamma_common")


def _complex(value, where):
    if isinstance(value, bool):
        raise ConfigError(f"{where}: expected a number or [re, im], got {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{where}: expected a number or [re, im], got {value!r}")


def _real(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}: expected a real number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{where}: must be finite, got {value!r}")
    return float(value)


def _pair(z):
    return [z.real, z.imag]


@dataclass(frozen=True)
class ScenarioConfig:
    atoms: tuple[Emitter, ...]
    drive: Drive = Drive()
    unit: str = "Gamma"

    def chain(self):
        return EmitterChain(self.atoms)

    def with_atoms(self, atoms):
        return replace(self, atoms=tuple(atoms))

    def with_drive(self, drive):
        return replace(self, drive=drive)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config root must be an object")
        unknown = set(data) - {"atoms", "drive", "unit"}
        if unknown:
            raise ConfigError(f"unknown top-level field(s): {sorted(unknown)}")
        raw_atoms = data.get("atoms")
        if not isinstance(raw_atoms, list) or not raw_atoms:
            raise ConfigError("atoms: expected a non-empty list")
        atoms = tuple(_atom(a, f"atoms[{i}]") for i, a in enumerate(raw_atoms))
        drive_data = data.get("drive", {})
        if not isinstance(drive_data, dict):
            raise ConfigError("drive: expected an object")
        unknown = set(drive_data) - {"forward", "backward"}
        if unknown:
            raise ConfigError(f"drive: unknown field(s) {sorted(unknown)}")
        drive = Drive(
            forward=_complex(drive_data.get("forward", 0.0), "drive.forward"),
            backward=_complex(drive_data.get("backward", 0.0), "drive.backward"),
        )
        unit = data.get("unit", "Gamma")
        if not isinstance(unit, str):
            raise ConfigError("unit: expected a string label")
        config = cls(atoms, drive, unit)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                config.chain()
        except ConfigError as exc:
            raise ConfigError(f"atoms: {exc}") from None
        return config

    def to_dict(self):
        return {
            "unit": self.unit,
            "atoms": [
                {"delta": a.delta, "gamma": a.gamma, "k1": _pair(complex(a.k1)),
                 "k2": _pair(complex(a.k2)), "phi": a.phi}
                for a in self.atoms
            ],
            "drive": {"forward": _pair(complex(self.drive.forward)),
                      "backward": _pair(complex(self.drive.backward))},
        }

    def dumps(self):
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def loads(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path):
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        try:
            return cls.loads(text)
        except ConfigError as exc:
            raise ConfigError(f"{path}: {exc}") from None


_ATOM_FIELDS = {"delta", "gamma", "k1", "k2", "k1_rate", "k2_rate", "phi"}


def _atom(data, where):
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(data) - _ATOM_FIELDS
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    couplings = {}
    for port in ("k1", "k2"):
        if port in data and f"{port}_rate" in data:
            raise ConfigError(f"{where}: give either {port} or {port}_rate, not both")
        if f"{port}_rate" in data:
            couplings[port] = complex(coupling_from_rate(_real(data[f"{port}_rate"], f"{where}.{port}_rate")))
        else:
            couplings[port] = _complex(data.get(port, 0.0), f"{where}.{port}")
    gamma = _real(data.get("gamma", 0.0), f"{where}.gamma")
    if gamma < 0:
        raise ConfigError(f"{where}.gamma: must be >= 0, got {gamma}")
    try:
        return Emitter(
            delta=_real(data.get("delta", 0.0), f"{where}.delta"),
            gamma=gamma,
            k1=couplings["k1"],
            k2=couplings["k2"],
            phi=_real(data.get("phi", 0.0), f"{where}.phi"),
        )
    except ConfigError as exc:
        raise ConfigError(f"{where}: {exc}") from None


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"sweep parameter must be one of {SWEEP_PARAMETERS}, got {self.parameter!r}")
        if self.steps < 2:
            raise ConfigError(f"steps must be >= 2, got {self.steps}")
        if not self.start < self.stop:
            raise ConfigError(f"need from < to, got {self.start} >= {self.stop}")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ConfigError("log scale requires from > 0")
        if self.parameter in ("power", "gamma_common") and self.start < 0:
            raise ConfigError(f"{self.parameter} cannot be negative")

    def grid(self):
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


def apply_parameter(config, parameter, value, direction="forward"):
    """Return ``config`` with one sweep knob set to ``value``.

    ``phase`` spaces the emitters uniformly (phi_i = i * value);
    ``delta_antisym`` alternates detunings +value, -value, ...;
    ``power`` drives only the port named by ``direction``.
    """
    atoms = list(config.atoms)
    if parameter == "power":
        amp = math.sqrt(value)
        drive = Drive(forward=amp) if direction == "forward" else Drive(backward=amp)
        return config.with_drive(drive)
    if parameter == "phase":
        atoms = [replace(a, phi=i * value) for i, a in enumerate(atoms)]
    elif parameter == "delta_common":
        atoms = [replace(a, delta=value) for a in atoms]
    elif parameter == "delta_antisym":
        atoms = [replace(a, delta=value if i % 2 == 0 else -value) for i, a in enumerate(atoms)]
    elif parameter == "gamma_common":
        atoms = [replace(a, gamma=value) for a in atoms]
    else:
        raise ConfigError(f"unknown sweep parameter {parameter!r}")
    return config.with_atoms(atoms)
