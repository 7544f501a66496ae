"""Line-oriented run configuration.

The format is ``key = value`` lines grouped under ``[section]`` headers;
``#`` starts a comment.  Sections and keys::

    [run]     mode, output
    [model]   units, N, Gamma, omega_r, epsilon, g, J
    [drive]   lambda1, lambda2, Omega1, Omega2, phi1, phi2, convention
    [sweep]   <variable> = start:stop:steps | v1, v2, ... | value
    [line]    gamma_line, factor
    [oracle]  n_max, sites, dt, t_final, include_qubit, leak_threshold

``units = gamma`` (the default) means every frequency and rate is given in
units of the qubit decay rate, so ``Gamma`` must be 1.  ``units = absolute``
takes the numbers as they are.  Every key is optional; omitted keys take the
values in :data:`DEFAULT_MODEL`, :data:`DEFAULT_DRIVE` and friends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .errors import DegenerateDrive, IncommensurateMomentum, ParseError, ValidationError
from .fock_oracle import FockConfig
from .model import BESSEL_CONVENTIONS, EffectiveModel, ModelParams, effective_couplings

MODES = ("effective", "steady", "evolve", "phase", "bandmap", "oracle", "emit")
UNITS = ("gamma", "absolute")

# Defaults in units of Gamma: a 10-site ring with 2J/Delta = 1.2 and
# sideband-engineered eta ~ 0.39.
DEFAULT_MODEL = dict(N=10, Gamma=1.0, omega_r=0.05, epsilon=20.0, g=0.05, J=6e-5)
DEFAULT_DRIVE = dict(
    lambda1=5.0,
    lambda2=2.01,
    Omega1=20.0 - 0.05 + 1e-4,
    Omega2=20.0 + 0.05 + 1e-4,
    phi1=0.0,
    phi2=0.0,
)
DEFAULT_LINE = dict(gamma_line=0.01, factor=1.0)

MODEL_KEYS = ("units", "N", "Gamma", "omega_r", "epsilon", "g", "J")
DRIVE_KEYS = ("lambda1", "lambda2", "Omega1", "Omega2", "phi1", "phi2", "convention")
LINE_KEYS = ("gamma_line", "factor")
ORACLE_KEYS = ("n_max", "sites", "dt", "t_final", "include_qubit", "leak_threshold")
RUN_KEYS = ("mode", "output")
SECTIONS = ("run", "model", "drive", "sweep", "line", "oracle")

SWEEP_VARIABLES = frozenset({"eta", "E", "t", "cuts", "n_max"} | {f.name for f in fields(ModelParams)})


@dataclass
class RunConfig:
    model: ModelParams = field(default_factory=lambda: ModelParams(**DEFAULT_MODEL, **DEFAULT_DRIVE))
    sweep: dict = field(default_factory=dict)
    output_path: str = "-"
    mode: str = "steady"
    units: str = "gamma"
    convention: str = "tone"
    gamma_line: float = DEFAULT_LINE["gamma_line"]
    line_factor: float = DEFAULT_LINE["factor"]
    oracle: FockConfig = field(default_factory=lambda: FockConfig(n_max=12, sites=2))

    def effective(self) -> EffectiveModel:
        return effective_couplings(self.model, self.convention)

    def sweep_values(self, name: str, default=None) -> tuple:
        return self.sweep.get(name, default)


def _number(text: str, lineno: int, key: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{key}: expected a number, got {text!r}", lineno) from None


def _integer(text: str, lineno: int, key: str) -> int:
    value = _number(text, lineno, key)
    if value != int(value):
        raise ParseError(f"{key}: expected an integer, got {text!r}", lineno)
    return int(value)


def _boolean(text: str, lineno: int, key: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ParseError(f"{key}: expected true/false, got {text!r}", lineno)


def _sweep_values(text: str, lineno: int, key: str) -> tuple:
    if ":" in text:
        parts = [s.strip() for s in text.split(":")]
        if len(parts) != 3:
            raise ParseError(f"{key}: range must be start:stop:steps", lineno)
        start, stop = _number(parts[0], lineno, key), _number(parts[1], lineno, key)
        steps = _integer(parts[2], lineno, key)
        if steps < 1:
            raise ValidationError("step count must be >= 1", f"sweep.{key}")
        return tuple(float(v) for v in np.linspace(start, stop, steps))
    items = [s.strip() for s in text.split(",")]
    if not items or any(not s for s in items):
        raise ValidationError("empty value list", f"sweep.{key}")
    return tuple(_number(s, lineno, key) for s in items)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text.

    Raises :class:`ParseError` (with the line number) for malformed lines,
    unknown sections and unknown keys, and :class:`ValidationError` for values
    that parse but make no sense, for example an unstable drive.
    """
    raw: dict[str, dict[str, tuple[str, int]]] = {s: {} for s in SECTIONS}
    allowed = {
        "run": RUN_KEYS,
        "model": MODEL_KEYS,
        "drive": DRIVE_KEYS,
        "line": LINE_KEYS,
        "oracle": ORACLE_KEYS,
    }
    section = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(line)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"malformed section header {line!r}", lineno)
            section = line[1:-1].strip()
            if section not in SECTIONS:
                raise ParseError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        if section is None:
            raise ParseError("key outside of any [section]", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key or not value:
            raise ParseError(f"expected 'key = value', got {line!r}", lineno)
        if section == "sweep":
            if key not in SWEEP_VARIABLES:
                raise ParseError(f"unknown sweep variable {key!r}", lineno)
        elif key not in allowed[section]:
            raise ParseError(f"unknown key {key!r} in [{section}]", lineno)
        if key in raw[section]:
            raise ParseError(f"duplicate key {key!r} in [{section}]", lineno)
        raw[section][key] = (value, lineno)

    cfg = RunConfig()

    run = raw["run"]
    mode = run["mode"][0] if "mode" in run else cfg.mode
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}, expected one of {MODES}", "run.mode")
    output = run["output"][0] if "output" in run else cfg.output_path

    model_kw = dict(DEFAULT_MODEL)
    units = cfg.units
    for key, (value, lineno) in raw["model"].items():
        if key == "units":
            units = value
        elif key == "N":
            model_kw[key] = _integer(value, lineno, key)
        else:
            model_kw[key] = _number(value, lineno, key)
    if units not in UNITS:
        raise ValidationError(f"unknown units {units!r}, expected one of {UNITS}", "model.units")
    if units == "gamma" and model_kw["Gamma"] != 1.0:
        raise ValidationError("must be 1 when units = gamma", "model.Gamma")

    drive_kw = dict(DEFAULT_DRIVE)
    convention = cfg.convention
    for key, (value, lineno) in raw["drive"].items():
        if key == "convention":
            convention = value
        else:
            drive_kw[key] = _number(value, lineno, key)
    if convention not in BESSEL_CONVENTIONS:
        raise ValidationError(f"unknown convention {convention!r}", "drive.convention")

    try:
        model = ModelParams(**model_kw, **drive_kw)
    except ValueError as exc:
        raise ValidationError(str(exc), "model") from None

    sweep = {}
    for key, (value, lineno) in raw["sweep"].items():
        sweep[key] = _sweep_values(value, lineno, key)

    line_kw = dict(DEFAULT_LINE)
    for key, (value, lineno) in raw["line"].items():
        line_kw[key] = _number(value, lineno, key)
    if line_kw["gamma_line"] < 0:
        raise ValidationError("must be non-negative", "line.gamma_line")

    oracle_kw = dict(n_max=12, sites=2)
    for key, (value, lineno) in raw["oracle"].items():
        if key in ("n_max", "sites"):
            oracle_kw[key] = _integer(value, lineno, key)
        elif key == "include_qubit":
            oracle_kw[key] = _boolean(value, lineno, key)
        else:
            oracle_kw[key] = _number(value, lineno, key)
    try:
        oracle = FockConfig(**oracle_kw)
    except ValueError as exc:
        raise ValidationError(str(exc), "oracle") from None

    cfg = RunConfig(
        model=model,
        sweep=sweep,
        output_path=output,
        mode=mode,
        units=units,
        convention=convention,
        gamma_line=line_kw["gamma_line"],
        line_factor=line_kw["factor"],
        oracle=oracle,
    )
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    """Check that the drive yields a usable, stable, commensurate model."""
    try:
        m = cfg.effective()
    except IncommensurateMomentum:
        raise ValidationError("incommensurate q: phi1 - phi2 is off the momentum grid", "drive.phi1") from None
    except DegenerateDrive as exc:
        raise ValidationError(f"degenerate drive: {exc}", "drive.lambda1") from None
    except ValueError as exc:
        raise ValidationError(str(exc), "drive") from None
    if not m.stable:
        raise ValidationError("unstable: eta >= 1", "drive")
    for name, values in cfg.sweep.items():
        if len(values) == 0:
            raise ValidationError("empty range", f"sweep.{name}")
        if not all(math.isfinite(v) for v in values):
            raise ValidationError("values must be finite", f"sweep.{name}")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(cfg: RunConfig) -> str:
    """Text that :func:`parse_config` maps back to an equal RunConfig."""
    lines = ["[run]", f"mode = {cfg.mode}", f"output = {cfg.output_path}", "", "[model]", f"units = {cfg.units}"]
    for key in MODEL_KEYS[1:]:
        lines.append(f"{key} = {_fmt(getattr(cfg.model, key))}")
    lines += ["", "[drive]"]
    for key in DRIVE_KEYS[:-1]:
        lines.append(f"{key} = {_fmt(getattr(cfg.model, key))}")
    lines.append(f"convention = {cfg.convention}")
    lines += ["", "[sweep]"]
    for key in sorted(cfg.sweep):
        lines.append(f"{key} = " + ", ".join(repr(float(v)) for v in cfg.sweep[key]))
    lines += ["", "[line]", f"gamma_line = {_fmt(cfg.gamma_line)}", f"factor = {_fmt(cfg.line_factor)}"]
    lines += ["", "[oracle]"]
    o = cfg.oracle
    lines += [f"n_max = {o.n_max}", f"sites = {o.sites}"]
    if o.dt is not None:
        lines.append(f"dt = {_fmt(float(o.dt))}")
    if o.t_final is not None:
        lines.append(f"t_final = {_fmt(float(o.t_final))}")
    lines.append(f"include_qubit = {_fmt(o.include_qubit)}")
    lines.append(f"leak_threshold = {_fmt(float(o.leak_threshold))}")
    return "\n".join(lines) + "\n"


def with_mode(cfg: RunConfig, mode: str) -> RunConfig:
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}", "run.mode")
    return replace(cfg, mode=mode)
