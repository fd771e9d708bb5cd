"""Run configuration in user units (nm, degrees, fs, cm^-1) and its parsing.

The text format is INI-style: ``[section]`` headers and ``key = value``
lines, ``#`` or ``;`` comments. Ranges are written ``start, stop, count``
and lists as comma separated values. The same structure is accepted as a
JSON object of objects. Recognised keys are listed in ``SCHEMA``.
"""

from __future__ import annotations

import configparser
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .constants import (
    FS,
    NM,
    PS,
    UM,
    angular_frequency_from_wavenumber_cm,
    wavelength_from_wavenumber,
    wavenumber_cm_from_angular_frequency,
    wavenumber_from_wavelength,
)
from .kernel import BRANCH_POLICIES, CONVENTIONS, REFERENCES, CascadeConfig, SampleConfig
from .modes import DEFAULT_MAX_MODE_INDEX, DEFAULT_RELATIVE_HALFWIDTH, CavityGeometry
from .phase_matching import KINDS, PulseSequence
from .response import VibronicModel
from .scan import DEFAULT_REFINEMENT, ScanRange, ScanSpec


class ConfigError(ValueError):
    """Bad configuration; ``where`` names the line or field at fault."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


# section -> key -> (type, default). Types: float, int, bool, str, range, floats, choice tuple.
SCHEMA: dict[str, dict[str, tuple[Any, Any]]] = {
    "beam": {
        "wavelength_nm": (float, 500.0),
        "theta2_deg": (float, 90.0),
        "theta3_deg": (float, 90.0),
        "phi_deg": (float, 0.0),
    },
    "cavity": {
        "length_nm": (float, 500.0),
        "max_mode_index": (int, DEFAULT_MAX_MODE_INDEX),
    },
    "window": {
        "relative_halfwidth": (float, DEFAULT_RELATIVE_HALFWIDTH),
    },
    "kernel": {
        "kinds": (("both",) + KINDS, "both"),
        "convention": (CONVENTIONS, "as-evaluated"),
        "reference": (REFERENCES, "unit-bound"),
        "branches": (BRANCH_POLICIES, "both"),
        "max_mode": (int, None),
    },
    "sample": {
        "molecule_count": (float, 1e6),
        "volume_um3": (float, 1.0),
        "dipole_scale": (float, 1.0),
    },
    "model": {
        "ground_cm": ("floats", (656.0,)),
        "excited_cm": ("floats", ()),
        "damping_ps": (float, 1.0),
        "dipole_scale": (float, 1.0),
    },
    "scan": {
        "length_nm": ("range", None),
        "theta2_deg": ("range", None),
        "theta3_deg": ("range", None),
        "refinement": (int, DEFAULT_REFINEMENT),
        "workers": (int, 1),
        "allow_outside_validity": (bool, False),
    },
    "signal": {
        "t2_fs": ("range", (0.0, 2000.0, 64)),
        "t4_fs": ("range", (0.0, 2000.0, 64)),
        "cascades": (bool, True),
        "cascade_gain": (float, 1.0),
    },
}

_BOOLS = {"1": True, "true": True, "yes": True, "on": True, "0": False, "false": False, "no": False, "off": False}


def _convert(kind, raw: Any, where: str):
    try:
        if raw is None:
            return None
        if kind is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError("must be finite")
            return v
        if kind is int:
            v = raw if isinstance(raw, int) and not isinstance(raw, bool) else float(raw)
            if v != int(v):
                raise ValueError("must be an integer")
            return int(v)
        if kind is bool:
            if isinstance(raw, bool):
                return raw
            return _BOOLS[str(raw).strip().lower()]
        if kind == "floats":
            items = raw if isinstance(raw, (list, tuple)) else [s for s in str(raw).split(",") if s.strip()]
            return tuple(float(x) for x in items)
        if kind == "range":
            items = raw if isinstance(raw, (list, tuple)) else [s for s in str(raw).split(",")]
            if len(items) == 1:
                v = float(items[0])
                return (v, v, 1)
            if len(items) != 3:
                raise ValueError("expected 'start, stop, count'")
            start, stop, count = float(items[0]), float(items[1]), _convert(int, items[2], where)
            return (start, stop, count)
        if isinstance(kind, tuple):
            v = str(raw).strip()
            if v not in kind:
                raise ValueError(f"expected one of {', '.join(kind)}")
            return v
        if kind is str:
            return str(raw)
    except ConfigError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(where, f"invalid value {raw!r} ({exc})") from None
    raise AssertionError(kind)


@dataclass
class RunConfig:
    """All run parameters, stored exactly as the user wrote them (user units)."""

    values: dict[str, dict[str, Any]] = field(default_factory=dict)

    @classmethod
    def defaults(cls) -> RunConfig:
        return cls({s: {k: d for k, (_, d) in keys.items()} for s, keys in SCHEMA.items()})

    @classmethod
    def from_mapping(cls, data: dict, origin: str = "<mapping>") -> RunConfig:
        cfg = cls.defaults()
        for section, entries in data.items():
            if section not in SCHEMA:
                raise ConfigError(f"{origin} [{section}]", "unknown section")
            if not isinstance(entries, dict):
                raise ConfigError(f"{origin} [{section}]", "section must be a table of keys")
            for key, raw in entries.items():
                cfg.set(section, key, raw, origin)
        return cfg

    @classmethod
    def from_text(cls, text: str, origin: str = "<text>") -> RunConfig:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
        parser.optionxform = str
        try:
            parser.read_string(text, source=origin)
        except configparser.Error as exc:
            if isinstance(exc, configparser.ParsingError) and exc.errors:
                line, text = exc.errors[0]
                raise ConfigError(f"{origin} line {line}", f"cannot parse {text.strip()!r}") from None
            line = getattr(exc, "lineno", None)
            where = f"{origin} line {line}" if line else origin
            raise ConfigError(where, str(exc).splitlines()[0]) from None
        data = {s: dict(parser.items(s)) for s in parser.sections()}
        return cls.from_mapping(data, origin)

    @classmethod
    def load(cls, path: str | Path) -> RunConfig:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(str(path), f"cannot read config ({exc.strerror})") from None
        if path.suffix.lower() == ".json":
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path} line {exc.lineno}", exc.msg) from None
            if not isinstance(data, dict):
                raise ConfigError(str(path), "top level must be an object")
            return cls.from_mapping(data, str(path))
        return cls.from_text(text, str(path))

    def set(self, section: str, key: str, raw: Any, origin: str = "<override>"):
        where = f"{origin} [{section}] {key}"
        if section not in SCHEMA:
            raise ConfigError(f"{origin} [{section}]", "unknown section")
        if key not in SCHEMA[section]:
            raise ConfigError(where, "unknown key")
        kind = SCHEMA[section][key][0]
        if isinstance(raw, str) and raw.strip().lower() in ("", "none") and kind in (int, "range"):
            self.values[section][key] = None
            return
        self.values[section][key] = _convert(kind, raw, where)

    def apply_override(self, assignment: str):
        """``section.key=value`` as given on the command line."""
        lhs, sep, rhs = assignment.partition("=")
        section, dot, key = lhs.strip().partition(".")
        if not sep or not dot:
            raise ConfigError(f"--set {assignment}", "expected section.key=value")
        self.set(section, key, rhs.strip(), "--set")

    def __getitem__(self, item: str) -> dict[str, Any]:
        return self.values[item]

    def to_mapping(self) -> dict[str, dict[str, Any]]:
        out = {}
        for s, entries in self.values.items():
            out[s] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in entries.items()}
        return out

    def echo_si(self) -> dict[str, dict[str, Any]]:
        """Parameters re-derived from the internal SI objects, in user units."""
        seq = self.sequence()
        k2, k3 = seq.pulse(2), seq.pulse(3)
        sample = self.sample()
        model = self.model()
        return {
            "beam": {
                "wavelength_nm": wavelength_from_wavenumber(k2.wavenumber) / NM,
                "theta2_deg": math.degrees(k2.theta),
                "theta3_deg": math.degrees(k3.theta),
                "phi_deg": math.degrees(k2.phi),
            },
            "cavity": {"length_nm": self.cavity().length / NM},
            "sample": {
                "molecule_count": sample.molecule_count,
                "volume_um3": sample.volume / UM**3,
                "dipole_scale": sample.dipole_scale,
            },
            "model": {
                "ground_cm": [wavenumber_cm_from_angular_frequency(w) for w in model.ground_frequencies],
                "damping_ps": model.damping * PS,
            },
        }

    # -- conversion to internal SI objects ---------------------------------

    def _field(self, section, key, check, message):
        v = self.values[section][key]
        if not check(v):
            raise ConfigError(f"[{section}] {key}", message)
        return v

    @property
    def wavenumber(self) -> float:
        lam = self._field("beam", "wavelength_nm", lambda v: v > 0, "must be > 0")
        return wavenumber_from_wavelength(lam * NM)

    def angle(self, key: str) -> float:
        deg = self._field("beam", key, lambda v: 0 <= v <= 180, "must lie in [0, 180] degrees")
        return math.radians(deg)

    @property
    def phi(self) -> float:
        deg = self._field("beam", "phi_deg", lambda v: 0 <= v < 360, "must lie in [0, 360) degrees")
        return math.radians(deg)

    def cavity(self) -> CavityGeometry:
        L = self._field("cavity", "length_nm", lambda v: v > 0, "must be > 0")
        n = self._field("cavity", "max_mode_index", lambda v: v >= 1, "must be >= 1")
        return CavityGeometry(L * NM, max_mode_index=n)

    def sequence(self, T2: float = 0.0, T4: float = 0.0) -> PulseSequence:
        return PulseSequence.degenerate(
            self.wavenumber, self.angle("theta2_deg"), self.angle("theta3_deg"), T2, T4, self.phi
        )

    @property
    def window_halfwidth(self) -> float:
        return self._field("window", "relative_halfwidth", lambda v: 0 <= v < 1, "must lie in [0, 1)")

    @property
    def kinds(self) -> tuple[str, ...]:
        k = self.values["kernel"]["kinds"]
        return KINDS if k == "both" else (k,)

    def cascade_config(self, kind: str = "sequential") -> CascadeConfig:
        k = self.values["kernel"]
        return CascadeConfig(
            kind=kind,
            branch_policy=k["branches"],
            denominator_convention=k["convention"],
            reference_convention=k["reference"],
        )

    @property
    def max_mode(self) -> int | None:
        return self._field("kernel", "max_mode", lambda v: v is None or v >= 1, "must be >= 1")

    def modes(self) -> tuple[int, ...] | None:
        m = self.max_mode
        return None if m is None else tuple(range(1, m + 1))

    def sample(self) -> SampleConfig:
        s = self.values["sample"]
        for key in ("molecule_count", "volume_um3", "dipole_scale"):
            self._field("sample", key, lambda v: v > 0, "must be > 0")
        self._field("sample", "molecule_count", lambda v: v >= 1, "must be >= 1")
        return SampleConfig(s["molecule_count"], s["volume_um3"] * UM**3, s["dipole_scale"])

    def model(self) -> VibronicModel:
        m = self.values["model"]
        g = self._field("model", "ground_cm", lambda v: len(v) >= 1 and min(v) >= 0, "need >= 1 non-negative value")
        e = self._field("model", "excited_cm", lambda v: not v or min(v) >= 0, "values must be >= 0")
        gamma = self._field("model", "damping_ps", lambda v: v > 0, "must be > 0")
        self._field("model", "dipole_scale", lambda v: v > 0, "must be > 0")
        return VibronicModel(
            tuple(angular_frequency_from_wavenumber_cm(w) for w in g),
            tuple(angular_frequency_from_wavenumber_cm(w) for w in e),
            gamma / PS,
            m["dipole_scale"],
        )

    def delay_axis(self, key: str):
        r = self._field("signal", key, lambda v: v is not None, "range required")
        start, stop, count = r
        if start < 0 or stop < start or count < 1 or (count == 1 and stop != start):
            raise ConfigError(f"[signal] {key}", "need 0 <= start <= stop and count >= 1")
        return ScanRange(start * FS, stop * FS, count).values()

    def scan_spec(self) -> ScanSpec:
        s = self.values["scan"]
        ranges = []
        for key, name, unit in (("length_nm", "length", NM), ("theta2_deg", "theta2", None), ("theta3_deg", "theta3", None)):
            r = s[key]
            if r is None:
                continue
            start, stop, count = r
            if unit is None:
                start, stop = math.radians(start), math.radians(stop)
            else:
                start, stop = start * unit, stop * unit
            try:
                ranges.append((name, ScanRange(start, stop, count)))
            except ValueError as exc:
                raise ConfigError(f"[scan] {key}", str(exc)) from None
        if not ranges:
            raise ConfigError("[scan]", "no swept parameter (set length_nm, theta2_deg or theta3_deg)")
        if s["refinement"] is None or s["refinement"] < 0:
            raise ConfigError("[scan] refinement", "must be >= 0")
        try:
            return ScanSpec(
                wavenumber=self.wavenumber,
                length=self.cavity().length,
                theta2=self.angle("theta2_deg"),
                theta3=self.angle("theta3_deg"),
                ranges=tuple(ranges),
                config=self.cascade_config(),
                kinds=self.kinds,
                max_mode=self.max_mode,
                window_halfwidth=self.window_halfwidth,
                max_mode_index=self.values["cavity"]["max_mode_index"],
                allow_outside_validity=s["allow_outside_validity"],
            )
        except ValueError as exc:
            raise ConfigError("[scan]", str(exc)) from None
