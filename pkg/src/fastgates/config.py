"""Sectioned key = value run configuration.

The file format is INI-style with sections trap, scheme, laser, motional,
optimizer and output.  Values are given in bench units (MHz, nm, amu, ns)
and converted to SI here; everything downstream is SI plus dimensionless.
"""

from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace

from .constants import ATOMIC_MASS, CA40_MASS_AMU, CA40_WAVELENGTH_M, DEFAULT_NBAR
from .schemes import ASYMMETRIC, FAMILY_DUAN, FAMILY_FRAG, FAMILY_GZC, SYMMETRIC


class ConfigError(ValueError):
    """Invalid or missing configuration value; carries the field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass(frozen=True)
class TrapSection:
    frequency_mhz: float = 1.2        # axial COM frequency nu / 2 pi
    mass_amu: float = CA40_MASS_AMU
    wavelength_nm: float = CA40_WAVELENGTH_M * 1e9
    ion_count: int = 2

    @property
    def axial_frequency(self) -> float:
        return 2.0 * math.pi * self.frequency_mhz * 1e6

    @property
    def ion_mass(self) -> float:
        return self.mass_amu * ATOMIC_MASS

    @property
    def laser_wavenumber(self) -> float:
        return 2.0 * math.pi / (self.wavelength_nm * 1e-9)


@dataclass(frozen=True)
class SchemeSection:
    family: str = FAMILY_FRAG
    convention: str = ASYMMETRIC
    target_pair: tuple[int, int] = (1, 2)


@dataclass(frozen=True)
class LaserSection:
    repetition_rate_ghz: float = 5.0   # math.inf for instantaneous groups

    @property
    def repetition_rate(self) -> float:
        if math.isinf(self.repetition_rate_ghz):
            return math.inf
        return self.repetition_rate_ghz * 1e9


@dataclass(frozen=True)
class MotionalSection:
    nbar: tuple[float, ...] = (DEFAULT_NBAR,)  # scalar broadcast or per mode


@dataclass(frozen=True)
class OptimizerSection:
    objective: str = "min-time"        # min-time | max-fidelity
    initial_temperature: float = 0.0   # 0 = derive from random feasible samples
    cooling_factor: float = 0.97
    steps: int = 200
    restarts: int = 8
    rng_seed: int = 0
    time_move_scale_ns: float = 0.0    # 0 = derive from the seed timings
    n_min: int = 1
    n_max: int = 150
    infidelity_threshold: float = 1e-8
    overlap_margin: float = 2.0        # min-time margin, repetition periods
    cycles: int = 1                    # duan family only


@dataclass(frozen=True)
class OutputSection:
    directory: str = "."
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class RunConfig:
    trap: TrapSection = field(default_factory=TrapSection)
    scheme: SchemeSection = field(default_factory=SchemeSection)
    laser: LaserSection = field(default_factory=LaserSection)
    motional: MotionalSection = field(default_factory=MotionalSection)
    optimizer: OptimizerSection = field(default_factory=OptimizerSection)
    output: OutputSection = field(default_factory=OutputSection)


def _get(parser, section, key, cast, default, validate=None):
    path = f"{section}.{key}"
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        value = cast(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, f"cannot parse {raw!r}: {exc}") from None
    if validate is not None:
        err = validate(value)
        if err:
            raise ConfigError(path, err)
    return value


def _float_or_inf(raw: str) -> float:
    if raw.strip().lower() in ("inf", "infinity"):
        return math.inf
    return float(raw)


def _float_tuple(raw: str) -> tuple[float, ...]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if not parts:
        raise ValueError("empty list")
    return tuple(float(p) for p in parts)


def _int_pair(raw: str) -> tuple[int, int]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ValueError("expected two integers")
    return int(parts[0]), int(parts[1])


def _str_tuple(raw: str) -> tuple[str, ...]:
    parts = [p for p in raw.replace(",", " ").split() if p]
    if not parts:
        raise ValueError("empty list")
    return tuple(parts)


_POSITIVE = lambda v: None if v > 0 else "must be positive"
_NONNEG = lambda v: None if v >= 0 else "must be nonnegative"


def parse_config(text: str) -> RunConfig:
    parser = configparser.ConfigParser()
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("(file)", f"parse failure: {exc}") from None
    known = {"trap", "scheme", "laser", "motional", "optimizer", "output"}
    for sec in parser.sections():
        if sec not in known:
            raise ConfigError(sec, "unknown section")

    trap = TrapSection(
        frequency_mhz=_get(parser, "trap", "frequency_mhz", float,
                           TrapSection.frequency_mhz, _POSITIVE),
        mass_amu=_get(parser, "trap", "mass_amu", float,
                      TrapSection.mass_amu, _POSITIVE),
        wavelength_nm=_get(parser, "trap", "wavelength_nm", float,
                           TrapSection.wavelength_nm, _POSITIVE),
        ion_count=_get(parser, "trap", "ion_count", int, TrapSection.ion_count,
                       lambda v: None if v >= 1 else "must be at least 1"),
    )
    scheme = SchemeSection(
        family=_get(parser, "scheme", "family", str, SchemeSection.family,
                    lambda v: None if v in (FAMILY_GZC, FAMILY_FRAG, FAMILY_DUAN)
                    else f"unknown family {v!r}"),
        convention=_get(parser, "scheme", "convention", str,
                        SchemeSection.convention,
                        lambda v: None if v in (SYMMETRIC, ASYMMETRIC)
                        else f"unknown convention {v!r}"),
        target_pair=_get(parser, "scheme", "target_pair", _int_pair,
                         SchemeSection.target_pair,
                         lambda v: None if 1 <= v[0] < v[1]
                         else "must be an increasing 1-based pair"),
    )
    # The pair is validated against the crystal where a gate is designed,
    # so crystal-only runs may use any ion count.
    laser = LaserSection(
        repetition_rate_ghz=_get(parser, "laser", "repetition_rate_ghz",
                                 _float_or_inf,
                                 LaserSection.repetition_rate_ghz, _POSITIVE),
    )
    motional = MotionalSection(
        nbar=_get(parser, "motional", "nbar", _float_tuple,
                  MotionalSection.nbar,
                  lambda v: None if all(x >= 0 for x in v)
                  else "occupations must be nonnegative"),
    )
    optimizer = OptimizerSection(
        objective=_get(parser, "optimizer", "objective", str,
                       OptimizerSection.objective,
                       lambda v: None if v in ("min-time", "max-fidelity")
                       else f"unknown objective {v!r}"),
        initial_temperature=_get(parser, "optimizer", "initial_temperature",
                                 float, OptimizerSection.initial_temperature,
                                 _NONNEG),
        cooling_factor=_get(parser, "optimizer", "cooling_factor", float,
                            OptimizerSection.cooling_factor,
                            lambda v: None if 0 < v < 1
                            else "must be in (0, 1)"),
        steps=_get(parser, "optimizer", "steps", int, OptimizerSection.steps,
                   _POSITIVE),
        restarts=_get(parser, "optimizer", "restarts", int,
                      OptimizerSection.restarts,
                      lambda v: None if v >= 1 else "must be at least 1"),
        rng_seed=_get(parser, "optimizer", "rng_seed", int,
                      OptimizerSection.rng_seed, _NONNEG),
        time_move_scale_ns=_get(parser, "optimizer", "time_move_scale_ns",
                                float, OptimizerSection.time_move_scale_ns,
                                _NONNEG),
        n_min=_get(parser, "optimizer", "n_min", int, OptimizerSection.n_min,
                   _POSITIVE),
        n_max=_get(parser, "optimizer", "n_max", int, OptimizerSection.n_max,
                   _POSITIVE),
        infidelity_threshold=_get(parser, "optimizer", "infidelity_threshold",
                                  float, OptimizerSection.infidelity_threshold,
                                  _POSITIVE),
        overlap_margin=_get(parser, "optimizer", "overlap_margin", float,
                            OptimizerSection.overlap_margin,
                            lambda v: None if v >= 1
                            else "must be at least 1 repetition period"),
        cycles=_get(parser, "optimizer", "cycles", int,
                    OptimizerSection.cycles,
                    lambda v: None if v >= 1 else "must be at least 1"),
    )
    if optimizer.n_min > optimizer.n_max:
        raise ConfigError("optimizer.n_min", "n_min exceeds n_max")
    output = OutputSection(
        directory=_get(parser, "output", "directory", str,
                       OutputSection.directory),
        formats=_get(parser, "output", "formats", _str_tuple,
                     OutputSection.formats,
                     lambda v: None if all(f in ("csv", "json") for f in v)
                     else "formats must be csv or json"),
    )
    return RunConfig(trap, scheme, laser, motional, optimizer, output)


def serialize_config(config: RunConfig) -> str:
    """Inverse of parse_config: parse(serialize(c)) == c."""
    parser = configparser.ConfigParser()
    fr = config.laser.repetition_rate_ghz
    parser["trap"] = {
        "frequency_mhz": repr(config.trap.frequency_mhz),
        "mass_amu": repr(config.trap.mass_amu),
        "wavelength_nm": repr(config.trap.wavelength_nm),
        "ion_count": str(config.trap.ion_count),
    }
    parser["scheme"] = {
        "family": config.scheme.family,
        "convention": config.scheme.convention,
        "target_pair": "{}, {}".format(*config.scheme.target_pair),
    }
    parser["laser"] = {
        "repetition_rate_ghz": "inf" if math.isinf(fr) else repr(fr),
    }
    parser["motional"] = {
        "nbar": ", ".join(repr(x) for x in config.motional.nbar),
    }
    opt = config.optimizer
    parser["optimizer"] = {
        "objective": opt.objective,
        "initial_temperature": repr(opt.initial_temperature),
        "cooling_factor": repr(opt.cooling_factor),
        "steps": str(opt.steps),
        "restarts": str(opt.restarts),
        "rng_seed": str(opt.rng_seed),
        "time_move_scale_ns": repr(opt.time_move_scale_ns),
        "n_min": str(opt.n_min),
        "n_max": str(opt.n_max),
        "infidelity_threshold": repr(opt.infidelity_threshold),
        "overlap_margin": repr(opt.overlap_margin),
        "cycles": str(opt.cycles),
    }
    parser["output"] = {
        "directory": config.output.directory,
        "formats": ", ".join(config.output.formats),
    }
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def load_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def with_seed(config: RunConfig, seed: int) -> RunConfig:
    return replace(config, optimizer=replace(config.optimizer, rng_seed=seed))
