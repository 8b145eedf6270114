"""Run configuration: a flat ``key = value`` text format with dotted sections.

Example::

    # receiver-anchored uniform line
    line.R = 2.5e-3          # ohm/m
    line.L = 1.8e-6          # H/m
    line.G = 20e-6           # S/m
    line.C = 0.2e-9          # F/m
    line.length = 1170       # m
    line.generations = 50
    source.frequency = 2300  # Hz
    load = 500               # ohm, complex allowed: 500+20j
    damage.rb_1 = 0.1

Blank lines and ``#`` comments are ignored.  Every key may appear once.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from typing import Callable

from .analytic import BoundaryCondition, LineParams
from .errors import LadderError
from .ladder import (
    Anchor,
    ComponentId,
    DamageCase,
    NetworkSpec,
    ReceiverVoltage,
    TransmitterVoltageMagnitude,
)
from .scenarios import BallastProfile, TrainSpec, ballast_damage, default_ballast_profile


class ConfigError(LadderError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = "" if line is None else f"{line}:{column or 1}: "
        super().__init__(f"{where}{message}")


@dataclass(frozen=True)
class AnchorConfig:
    kind: str = "receiver"
    magnitude: float = 110.0
    phase_deg: float = 0.0

    def to_anchor(self) -> Anchor:
        if self.kind == "receiver":
            return ReceiverVoltage(cmath.rect(self.magnitude, math.radians(self.phase_deg)))
        return TransmitterVoltageMagnitude(self.magnitude)


@dataclass(frozen=True)
class SweepConfig:
    start: float = 100.0
    stop: float = 10000.0
    points: int = 51
    spacing: str = "log"

    def frequencies(self) -> list[float]:
        import numpy as np

        if self.points == 1:
            return [self.start]
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points).tolist()
        return np.linspace(self.start, self.stop, self.points).tolist()


@dataclass(frozen=True)
class RunConfig:
    line: LineParams
    length: float
    generations: int
    frequency: float
    load: complex
    phi: float = 0.0
    anchor: AnchorConfig = field(default_factory=AnchorConfig)
    damage: DamageCase = field(default_factory=DamageCase)
    ballast: BallastProfile | None = None
    train: TrainSpec = field(default_factory=TrainSpec)
    validate_generations: tuple[int, ...] = (5, 10, 50)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    @property
    def dx(self) -> float:
        return self.length / self.generations

    @property
    def omega(self) -> float:
        return 2 * math.pi * self.frequency

    def network(self, generations: int | None = None, frequency: float | None = None) -> NetworkSpec:
        n = self.generations if generations is None else generations
        f = self.frequency if frequency is None else frequency
        return NetworkSpec.from_line(self.line, self.length, n, self.load, 2 * math.pi * f)

    def total_damage(self) -> DamageCase:
        """Explicit damage entries followed by the ballast profile, if any."""
        if self.ballast is None:
            return self.damage
        return self.damage.merged(ballast_damage(self.ballast))

    def boundary(self, v0: complex) -> BoundaryCondition:
        return BoundaryCondition(v0=v0, Z0=self.load, omega=self.omega, phi=self.phi)


# --- value parsers -------------------------------------------------------

def _float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("must be finite")
    return value


def _nonneg(text: str) -> float:
    value = _float(text)
    if value < 0:
        raise ValueError("must be >= 0")
    return value


def _positive(text: str) -> float:
    value = _float(text)
    if value <= 0:
        raise ValueError("must be > 0")
    return value


def _posint(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError("must be a positive integer")
    return value


def _complex(text: str) -> complex:
    value = complex(text.replace(" ", ""))
    if not cmath.isfinite(value):
        raise ValueError("must be finite")
    if value == 0:
        raise ValueError("must be nonzero")
    return value


def _choice(*options: str) -> Callable[[str], str]:
    def parse(text: str) -> str:
        if text not in options:
            raise ValueError(f"must be one of {', '.join(options)}")
        return text

    return parse


def _list(item: Callable[[str], object]) -> Callable[[str], tuple]:
    def parse(text: str) -> tuple:
        parts = [p.strip() for p in text.split(",")]
        if not parts or any(p == "" for p in parts):
            raise ValueError("expected a comma-separated list")
        return tuple(item(p) for p in parts)

    return parse


def _span(text: str) -> tuple[int, int]:
    values = _list(_posint)(text)
    if len(values) != 2:
        raise ValueError("expected 'first,last'")
    lo, hi = values
    if lo > hi:
        raise ValueError("first generation exceeds last")
    return lo, hi


KEYS: dict[str, Callable[[str], object]] = {
    "line.R": _nonneg,
    "line.L": _nonneg,
    "line.G": _nonneg,
    "line.C": _nonneg,
    "line.length": _positive,
    "line.generations": _posint,
    "source.frequency": _positive,
    "source.phi": _float,
    "load": _complex,
    "anchor.kind": _choice("receiver", "transmitter"),
    "anchor.magnitude": _nonneg,
    "anchor.phase_deg": _float,
    "ballast.span": _span,
    "ballast.rb_min": _positive,
    "ballast.c_max": _positive,
    "ballast.rb_factors": _list(_positive),
    "ballast.c_factors": _list(_positive),
    "train.wheelbases": _posint,
    "train.spacing": _positive,
    "train.wheel_resistance": _positive,
    "train.speed": _positive,
    "train.entry": _choice("receiver", "transmitter"),
    "validate.generations": _list(_posint),
    "sweep.start": _positive,
    "sweep.stop": _positive,
    "sweep.points": _posint,
    "sweep.spacing": _choice("log", "linear"),
}

REQUIRED = (
    "line.R",
    "line.L",
    "line.G",
    "line.C",
    "line.length",
    "line.generations",
    "source.frequency",
    "load",
)

_LINE = re.compile(r"^(\s*)([^=\s]+)\s*=\s*(.*?)\s*$")


@dataclass
class _Entry:
    value: object
    line: int
    column: int


def _tokenize(text: str) -> dict[str, _Entry]:
    entries: dict[str, _Entry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        m = _LINE.match(body)
        if m is None:
            col = len(body) - len(body.lstrip()) + 1
            raise ConfigError("expected 'key = value'", lineno, col)
        key, value = m.group(2), m.group(3)
        key_col = len(m.group(1)) + 1
        value_col = m.start(3) + 1
        if key in entries:
            raise ConfigError(f"duplicate key {key!r} (first set on line {entries[key].line})", lineno, key_col)
        if key.startswith("damage."):
            try:
                component = ComponentId.parse(key[len("damage."):])
            except LadderError as exc:
                raise ConfigError(str(exc), lineno, key_col + len("damage.")) from None
            try:
                amount = _positive(value)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}", lineno, value_col) from None
            entries[key] = _Entry((component, amount), lineno, key_col)
            continue
        parser = KEYS.get(key)
        if parser is None:
            raise ConfigError(f"unknown key {key!r}", lineno, key_col)
        if value == "":
            raise ConfigError(f"{key}: missing value", lineno, value_col)
        try:
            parsed = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}", lineno, value_col) from None
        entries[key] = _Entry(parsed, lineno, value_col)
    return entries


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text; raises ConfigError with a location."""
    entries = _tokenize(text)
    for key in REQUIRED:
        if key not in entries:
            raise ConfigError(f"missing required key {key!r}")

    def get(key: str, default=None):
        e = entries.get(key)
        return default if e is None else e.value

    def fail(key: str, message: str) -> ConfigError:
        e = entries.get(key)
        return ConfigError(message, e.line if e else None, e.column if e else None)

    try:
        line = LineParams(get("line.R"), get("line.L"), get("line.G"), get("line.C"))
    except LadderError as exc:
        raise fail("line.R", str(exc)) from None
    n = get("line.generations")

    damage_entries = [e for k, e in entries.items() if k.startswith("damage.")]
    for e in damage_entries:
        component, _ = e.value
        if component.generation > n:
            raise ConfigError(f"damage entry {component} exceeds {n} generations", e.line, e.column)
    damage = DamageCase(tuple(e.value for e in damage_entries))

    ballast = None
    if "ballast.span" in entries:
        lo, hi = get("ballast.span")
        if hi > n:
            raise fail("ballast.span", f"ballast span ends at {hi} but there are {n} generations")
        explicit = "ballast.rb_factors" in entries or "ballast.c_factors" in entries
        shaped = "ballast.rb_min" in entries or "ballast.c_max" in entries
        if explicit and shaped:
            raise fail("ballast.rb_min", "give either explicit factor lists or rb_min/c_max, not both")
        try:
            if explicit:
                size = hi - lo + 1
                ballast = BallastProfile(
                    lo,
                    hi,
                    get("ballast.rb_factors", (1.0,) * size),
                    get("ballast.c_factors", (1.0,) * size),
                )
            else:
                ballast = default_ballast_profile(lo, hi, get("ballast.rb_min", 0.3), get("ballast.c_max", 2.0))
        except LadderError as exc:
            raise fail("ballast.span", str(exc)) from None
    else:
        for key in ("ballast.rb_min", "ballast.c_max", "ballast.rb_factors", "ballast.c_factors"):
            if key in entries:
                raise fail(key, "ballast settings need ballast.span")

    defaults = TrainSpec()
    try:
        train = TrainSpec(
            wheelbase_count=get("train.wheelbases", defaults.wheelbase_count),
            wheelbase_spacing=get("train.spacing", defaults.wheelbase_spacing),
            wheel_resistance=get("train.wheel_resistance", defaults.wheel_resistance),
            speed=get("train.speed", defaults.speed),
            entry_end=get("train.entry", defaults.entry_end),
        )
    except LadderError as exc:
        raise fail("train.wheelbases", str(exc)) from None

    sd = SweepConfig()
    sweep = SweepConfig(
        start=get("sweep.start", sd.start),
        stop=get("sweep.stop", sd.stop),
        points=get("sweep.points", sd.points),
        spacing=get("sweep.spacing", sd.spacing),
    )
    if sweep.stop < sweep.start:
        raise fail("sweep.stop", "sweep.stop is below sweep.start")

    ad = AnchorConfig()
    anchor = AnchorConfig(
        kind=get("anchor.kind", ad.kind),
        magnitude=get("anchor.magnitude", ad.magnitude),
        phase_deg=get("anchor.phase_deg", ad.phase_deg),
    )
    if anchor.kind == "transmitter" and anchor.phase_deg != 0:
        raise fail("anchor.phase_deg", "transmitter anchor fixes magnitude only; phase must be 0")

    return RunConfig(
        line=line,
        length=get("line.length"),
        generations=n,
        frequency=get("source.frequency"),
        load=get("load"),
        phi=get("source.phi", 0.0),
        anchor=anchor,
        damage=damage,
        ballast=ballast,
        train=train,
        validate_generations=get("validate.generations", (5, 10, 50)),
        sweep=sweep,
    )


def _num(value: float) -> str:
    return repr(float(value))


def _cplx(value: complex) -> str:
    value = complex(value)
    if value.imag == 0:
        return _num(value.real)
    return repr(value).strip("()")


def format_config(cfg: RunConfig) -> list[str]:
    """Canonical ``key = value`` lines with every default spelled out.

    Floats use ``repr`` so the lines re-parse to an identical RunConfig.
    """
    lines = [
        f"line.R = {_num(cfg.line.R)}",
        f"line.L = {_num(cfg.line.L)}",
        f"line.G = {_num(cfg.line.G)}",
        f"line.C = {_num(cfg.line.C)}",
        f"line.length = {_num(cfg.length)}",
        f"line.generations = {cfg.generations}",
        f"source.frequency = {_num(cfg.frequency)}",
        f"source.phi = {_num(cfg.phi)}",
        f"load = {_cplx(cfg.load)}",
        f"anchor.kind = {cfg.anchor.kind}",
        f"anchor.magnitude = {_num(cfg.anchor.magnitude)}",
        f"anchor.phase_deg = {_num(cfg.anchor.phase_deg)}",
    ]
    for component, amount in cfg.damage.entries:
        lines.append(f"damage.{component} = {_num(amount)}")
    if cfg.ballast is not None:
        b = cfg.ballast
        lines.append(f"ballast.span = {b.g_lo},{b.g_hi}")
        lines.append("ballast.rb_factors = " + ",".join(_num(f) for f in b.rb_factors))
        lines.append("ballast.c_factors = " + ",".join(_num(f) for f in b.c_factors))
    t = cfg.train
    lines += [
        f"train.wheelbases = {t.wheelbase_count}",
        f"train.spacing = {_num(t.wheelbase_spacing)}",
        f"train.wheel_resistance = {_num(t.wheel_resistance)}",
        f"train.speed = {_num(t.speed)}",
        f"train.entry = {t.entry_end}",
        "validate.generations = " + ",".join(str(g) for g in cfg.validate_generations),
        f"sweep.start = {_num(cfg.sweep.start)}",
        f"sweep.stop = {_num(cfg.sweep.stop)}",
        f"sweep.points = {cfg.sweep.points}",
        f"sweep.spacing = {cfg.sweep.spacing}",
    ]
    return lines


def config_from_header(csv_text: str) -> RunConfig:
    """Rebuild the RunConfig echoed in the ``#`` block of a CSV produced by the CLI."""
    body = []
    for raw in csv_text.splitlines():
        if not raw.startswith("#"):
            break
        content = raw[1:].strip()
        if "=" in content:
            body.append(content)
    return parse_config("\n".join(body))
