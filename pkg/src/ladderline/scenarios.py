"""Damage-case generators for track-circuit scenarios.

Two applications are covered: static ballast degradation over a span of
generations, and a train traversing the track, which becomes a time series
of damage cases (each wheelbase shunts one generation's ballast resistance).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidParameterError, UnsupportedConfigurationError
from .ladder import (
    Anchor,
    ComponentId,
    ComponentKind,
    DamageCase,
    NetworkSpec,
    simulate,
)


@dataclass(frozen=True)
class BallastProfile:
    """Multipliers for rb and c on generations ``g_lo..g_hi`` (inclusive)."""

    g_lo: int
    g_hi: int
    rb_factors: tuple[float, ...]
    c_factors: tuple[float, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.g_lo <= self.g_hi:
            raise InvalidParameterError(f"bad ballast span [{self.g_lo}, {self.g_hi}]")
        object.__setattr__(self, "rb_factors", tuple(float(f) for f in self.rb_factors))
        object.__setattr__(self, "c_factors", tuple(float(f) for f in self.c_factors))
        size = self.g_hi - self.g_lo + 1
        for name in ("rb_factors", "c_factors"):
            factors = getattr(self, name)
            if len(factors) != size:
                raise InvalidParameterError(f"{name} has {len(factors)} values, span needs {size}")
            if any(not (math.isfinite(f) and f > 0) for f in factors):
                raise InvalidParameterError(f"{name} must be positive")
        if any(f > 1 for f in self.rb_factors) or any(f < 1 for f in self.c_factors):
            warnings.warn(
                "ballast profile raises rb or lowers c somewhere; degradation normally does the opposite",
                stacklevel=2,
            )

    @property
    def generations(self) -> range:
        return range(self.g_lo, self.g_hi + 1)

    def validate_for(self, n: int) -> None:
        if self.g_hi > n:
            raise InvalidParameterError(f"ballast span ends at {self.g_hi} but the network has {n} generations")


def default_ballast_profile(
    g_lo: int = 18, g_hi: int = 107, rb_min: float = 0.3, c_max: float = 2.0
) -> BallastProfile:
    """Smooth symmetric degradation: rb dips toward ``rb_min`` and c rises
    toward ``c_max`` at the centre of the span, both returning to 1 at the edges."""
    if not 0 < rb_min <= 1:
        raise InvalidParameterError(f"rb_min must be in (0, 1], got {rb_min}")
    if c_max < 1:
        raise InvalidParameterError(f"c_max must be >= 1, got {c_max}")
    m = g_hi - g_lo + 1
    k = np.arange(1, m + 1)
    w = np.sin(np.pi * k / (m + 1)) ** 2
    rb = 1.0 - (1.0 - rb_min) * w
    c = 1.0 + (c_max - 1.0) * w
    return BallastProfile(g_lo, g_hi, tuple(rb.tolist()), tuple(c.tolist()))


def ballast_damage(profile: BallastProfile) -> DamageCase:
    """All rb entries of the span first, then all c entries."""
    rb = [(ComponentId(g, ComponentKind.SHUNT_R), f) for g, f in zip(profile.generations, profile.rb_factors)]
    c = [(ComponentId(g, ComponentKind.SHUNT_C), f) for g, f in zip(profile.generations, profile.c_factors)]
    return DamageCase(tuple(rb + c))


def wheel_shunt_factor(rb: float, r_w: float) -> float:
    """Factor by which a wheelbase in parallel scales ``rb``: r_w / (rb + r_w)."""
    if not rb > 0 or not r_w > 0:
        raise InvalidParameterError("rb and r_w must be positive")
    if math.isinf(r_w):
        return 1.0
    return r_w / (rb + r_w)


@dataclass(frozen=True)
class TrainSpec:
    wheelbase_count: int = 20
    wheelbase_spacing: float = 10.0
    wheel_resistance: float = 102.0408
    speed: float = 100.0
    entry_end: str = "receiver"

    def __post_init__(self) -> None:
        if isinstance(self.wheelbase_count, bool) or not isinstance(self.wheelbase_count, int):
            raise InvalidParameterError("wheelbase_count must be an integer")
        if self.wheelbase_count < 1:
            raise InvalidParameterError("wheelbase_count must be >= 1")
        for name in ("wheelbase_spacing", "wheel_resistance", "speed"):
            value = getattr(self, name)
            if not (value > 0 and not math.isnan(value)):
                raise InvalidParameterError(f"{name} must be > 0, got {value!r}")
        if self.entry_end not in ("receiver", "transmitter"):
            raise InvalidParameterError(f"entry_end must be 'receiver' or 'transmitter', got {self.entry_end!r}")


@dataclass(frozen=True)
class TimelineEntry:
    t: float
    damage: DamageCase = field(default_factory=DamageCase)


def _occupied(n: int, wheels: int, k: int, entry_end: str) -> list[int]:
    if entry_end == "receiver":
        hi = min(n, n - k + wheels)
        lo = max(1, n - k + 1)
        return list(range(hi, lo - 1, -1))
    lo = max(1, k - wheels + 1)
    hi = min(n, k)
    return list(range(lo, hi + 1))


def train_timeline(spec: NetworkSpec, train: TrainSpec) -> list[TimelineEntry]:
    """One damage case per subsection step while any wheelbase is on the track.

    Step ``k`` happens at ``t = k dx / speed``; there are ``n + wheels - 1`` steps.
    """
    if not math.isclose(train.wheelbase_spacing, spec.dx, rel_tol=1e-9):
        raise UnsupportedConfigurationError(
            f"wheelbase spacing {train.wheelbase_spacing} m must equal the segment length {spec.dx} m"
        )
    if spec.und.rb is None:
        raise UnsupportedConfigurationError("wheel shunts need a finite ballast resistance (G > 0)")
    factor = wheel_shunt_factor(spec.und.rb, train.wheel_resistance)
    timeline = []
    for k in range(1, spec.n + train.wheelbase_count):
        gens = _occupied(spec.n, train.wheelbase_count, k, train.entry_end)
        entries = tuple((ComponentId(g, ComponentKind.SHUNT_R), factor) for g in gens)
        timeline.append(TimelineEntry(t=k * spec.dx / train.speed, damage=DamageCase(entries)))
    return timeline


def receiver_currents(spec: NetworkSpec, damages: Sequence[DamageCase], anchor: Anchor) -> np.ndarray:
    """Peak receiver current |I_n| for each damage case."""
    return np.array([abs(simulate(spec, d, anchor).I[-1]) for d in damages])
