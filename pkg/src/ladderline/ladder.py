"""Lumped RLGC ladder approximation of a (possibly damaged) line.

Generation ``g`` (1-based, counted from the transmitter) is a series branch of
two resistor/inductor pairs, one per rail, followed by a shunt resistor ``rb``
and shunt capacitor ``c`` across the rails.  Node ``g`` sits after generation
``g``; node 0 is the transmitter input and node ``n`` the receiver output
where the load ``z_out`` is attached.

For each node the network is summarised by

    Z_g = V_g / I_g     impedance looking toward the receiver
    H_g = V_out / V_g   voltage gain from node g to the receiver

which obey the one-generation fold

    Z_{g-1} = S_g + 1 / (1/rb_g + c_g s + 1/Z_g)
    H_{g-1} = H_g (1 - S_g / Z_{g-1})

with ``S_g`` the series branch impedance and base case ``(Z_n, H_n) = (z_out, 1)``.
"""

from __future__ import annotations

import cmath
import enum
import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .analytic import LineParams, LineProfile
from .errors import InvalidParameterError, SingularNetworkError


class ComponentKind(str, enum.Enum):
    SERIES_R_TOP = "r1"
    SERIES_R_BOTTOM = "r2"
    SERIES_L_TOP = "l1"
    SERIES_L_BOTTOM = "l2"
    SHUNT_R = "rb"
    SHUNT_C = "c"


_ID_PATTERN = re.compile(r"^(r1|r2|l1|l2|rb|c)_(-?\d+)$")


@dataclass(frozen=True, order=True)
class ComponentId:
    generation: int
    kind: ComponentKind

    def __post_init__(self) -> None:
        if isinstance(self.generation, bool) or not isinstance(self.generation, int):
            raise InvalidParameterError(f"generation must be an int, got {self.generation!r}")
        if self.generation < 1:
            raise InvalidParameterError(f"generation must be >= 1, got {self.generation}")
        object.__setattr__(self, "kind", ComponentKind(self.kind))

    @classmethod
    def parse(cls, text: str) -> "ComponentId":
        """Parse identifiers such as ``rb_18``, ``c_2`` or ``l1_5``."""
        m = _ID_PATTERN.match(text.strip())
        if m is None:
            raise InvalidParameterError(
                f"bad component id {text!r}; expected <kind>_<generation> with kind in r1,r2,l1,l2,rb,c"
            )
        return cls(int(m.group(2)), ComponentKind(m.group(1)))

    def shifted(self, offset: int) -> "ComponentId":
        return ComponentId(self.generation + offset, self.kind)

    def __str__(self) -> str:
        return f"{self.kind.value}_{self.generation}"


@dataclass(frozen=True)
class DamageCase:
    """Ordered multiplicative damage on individual components.

    The empty case is the undamaged network.
    """

    entries: tuple[tuple[ComponentId, float], ...] = ()

    def __post_init__(self) -> None:
        seen: set[ComponentId] = set()
        clean = []
        for component, amount in self.entries:
            if not isinstance(component, ComponentId):
                component = ComponentId.parse(str(component))
            amount = float(amount)
            if not (math.isfinite(amount) and amount > 0):
                raise InvalidParameterError(f"damage amount for {component} must be > 0, got {amount!r}")
            if component in seen:
                raise InvalidParameterError(f"duplicate damage entry for {component}")
            seen.add(component)
            clean.append((component, amount))
        object.__setattr__(self, "entries", tuple(clean))

    @classmethod
    def from_lists(cls, components: Sequence[ComponentId | str], amounts: Sequence[float]) -> "DamageCase":
        """Build from parallel lists, e.g. ``(["rb_1", "c_2"], [0.1, 2])``."""
        if len(components) != len(amounts):
            raise InvalidParameterError("component and amount lists differ in length")
        return cls(tuple(zip(components, amounts)))

    @property
    def components(self) -> list[ComponentId]:
        return [c for c, _ in self.entries]

    @property
    def amounts(self) -> list[float]:
        return [a for _, a in self.entries]

    def lookup(self) -> dict[ComponentId, float]:
        return dict(self.entries)

    def max_generation(self) -> int:
        return max((c.generation for c, _ in self.entries), default=0)

    def validate_for(self, n: int) -> None:
        top = self.max_generation()
        if top > n:
            raise InvalidParameterError(f"damage refers to generation {top} but the network has {n}")

    def merged(self, other: "DamageCase") -> "DamageCase":
        return DamageCase(self.entries + other.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __str__(self) -> str:
        names = ",".join(str(c) for c in self.components)
        amounts = ",".join(repr(a) for a in self.amounts)
        return f"([{names}],[{amounts}])"


def partition(damage: DamageCase) -> tuple[DamageCase, DamageCase]:
    """Split off the first generation; the rest is re-indexed for the subnetwork."""
    first = tuple((c, a) for c, a in damage.entries if c.generation == 1)
    rest = tuple((c.shifted(-1), a) for c, a in damage.entries if c.generation > 1)
    return DamageCase(first), DamageCase(rest)


@dataclass(frozen=True)
class UndamagedConstants:
    """Lumped values shared by every intact generation.

    ``rb is None`` encodes a line without shunt conductance (infinite rb).
    """

    r: float
    l: float
    rb: float | None
    c: float

    def __post_init__(self) -> None:
        for name in ("r", "l", "c"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")
        if self.rb is not None and not (math.isfinite(self.rb) and self.rb > 0):
            raise InvalidParameterError(f"rb must be finite and > 0 (or None), got {self.rb!r}")


def undamaged_constants(params: LineParams, dx: float) -> UndamagedConstants:
    """Lump per-length constants over one segment of length ``dx``.

    Series values are split evenly between the two rails.
    """
    if not (math.isfinite(dx) and dx > 0):
        raise InvalidParameterError(f"dx must be > 0, got {dx!r}")
    rb = None if params.G == 0 else 1.0 / (params.G * dx)
    return UndamagedConstants(r=params.R * dx / 2, l=params.L * dx / 2, rb=rb, c=params.C * dx)


@dataclass(frozen=True)
class GenerationConstants:
    r1: float
    r2: float
    l1: float
    l2: float
    rb: float | None
    c: float

    @classmethod
    def undamaged(cls, und: UndamagedConstants) -> "GenerationConstants":
        return cls(und.r, und.r, und.l, und.l, und.rb, und.c)

    @property
    def shunt_conductance(self) -> float:
        return 0.0 if self.rb is None else 1.0 / self.rb


@dataclass(frozen=True)
class NetworkSpec:
    n: int
    dx: float
    und: UndamagedConstants
    z_out: complex
    omega: float

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.dx) and self.dx > 0):
            raise InvalidParameterError(f"dx must be > 0, got {self.dx!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise InvalidParameterError(f"omega must be > 0, got {self.omega!r}")
        object.__setattr__(self, "z_out", complex(self.z_out))

    @classmethod
    def from_line(cls, params: LineParams, length: float, n: int, z_out: complex, omega: float) -> "NetworkSpec":
        dx = length / n
        return cls(n=n, dx=dx, und=undamaged_constants(params, dx), z_out=z_out, omega=omega)

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def s(self) -> complex:
        return 1j * self.omega

    def node_x(self) -> np.ndarray:
        """Distance from the receiver of nodes 0..n (transmitter first)."""
        return (self.n - np.arange(self.n + 1)) * self.dx


def generation_constants(spec: NetworkSpec, damage: DamageCase, g: int) -> GenerationConstants:
    if not 1 <= g <= spec.n:
        raise InvalidParameterError(f"generation {g} outside 1..{spec.n}")
    return _apply_damage(spec.und, damage.lookup(), g)


def _apply_damage(und: UndamagedConstants, lookup: dict[ComponentId, float], g: int) -> GenerationConstants:
    def f(kind: ComponentKind) -> float:
        return lookup.get(ComponentId(g, kind), 1.0)

    K = ComponentKind
    rb = None if und.rb is None else und.rb * f(K.SHUNT_R)
    return GenerationConstants(
        r1=und.r * f(K.SERIES_R_TOP),
        r2=und.r * f(K.SERIES_R_BOTTOM),
        l1=und.l * f(K.SERIES_L_TOP),
        l2=und.l * f(K.SERIES_L_BOTTOM),
        rb=rb,
        c=und.c * f(K.SHUNT_C),
    )


def series_branch(gc: GenerationConstants, s: complex) -> complex:
    """Series impedance of both rails, r1 + r2 + (l1 + l2) s."""
    return gc.r1 + gc.r2 + (gc.l1 + gc.l2) * s


def step_impedance(gc: GenerationConstants, Zs: complex, s: complex, generation: int | None = None) -> complex:
    """Impedance seen in front of one generation terminated by ``Zs``."""
    if Zs == 0:
        raise SingularNetworkError("subnetwork impedance is zero", generation)
    shunt = gc.shunt_conductance + gc.c * s + 1.0 / Zs
    if shunt == 0:
        raise SingularNetworkError("shunt admittance vanishes", generation)
    return series_branch(gc, s) + 1.0 / shunt


def step_gain(gc: GenerationConstants, Z: complex, Hs: complex, s: complex, generation: int | None = None) -> complex:
    """Voltage gain in front of one generation, given the gain ``Hs`` behind it."""
    if Z == 0:
        raise SingularNetworkError("input impedance is zero", generation)
    return Hs * (1 - series_branch(gc, s) / Z)


@dataclass(frozen=True)
class NodeResponse:
    Z: complex
    H: complex


def frequency_response(spec: NetworkSpec, damage: DamageCase = DamageCase()) -> list[NodeResponse]:
    """(Z_g, H_g) for nodes 0..n, folding generations from the receiver back.

    Raises SingularNetworkError carrying the offending generation index.
    """
    damage.validate_for(spec.n)
    lookup = damage.lookup()
    s = spec.s
    Z: complex = spec.z_out
    H: complex = 1.0 + 0j
    out = [NodeResponse(Z, H)]
    for g in range(spec.n, 0, -1):
        gc = _apply_damage(spec.und, lookup, g)
        Z = step_impedance(gc, Z, s, g)
        H = step_gain(gc, Z, H, s, g)
        if not (cmath.isfinite(Z) and cmath.isfinite(H)):
            raise SingularNetworkError("non-finite response", g)
        out.append(NodeResponse(Z, H))
    out.reverse()
    return out


@dataclass(frozen=True)
class ReceiverVoltage:
    """Fix the complex output voltage phasor."""

    v_out: complex


@dataclass(frozen=True)
class TransmitterVoltageMagnitude:
    """Fix |V| at the transmitter node; its phase is taken as zero."""

    magnitude: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.magnitude) and self.magnitude >= 0):
            raise InvalidParameterError(f"transmitter magnitude must be >= 0, got {self.magnitude!r}")


Anchor = Union[ReceiverVoltage, TransmitterVoltageMagnitude]


def node_phasors(responses: Sequence[NodeResponse], spec: NetworkSpec, anchor: Anchor) -> LineProfile:
    """Recover V_g and I_g at every node from one boundary quantity."""
    if len(responses) != spec.n + 1:
        raise InvalidParameterError(f"expected {spec.n + 1} responses, got {len(responses)}")
    H = np.array([r.H for r in responses], dtype=complex)
    Z = np.array([r.Z for r in responses], dtype=complex)
    zero = np.flatnonzero(H == 0)
    if zero.size:
        raise SingularNetworkError(f"voltage gain vanishes at node {int(zero[0])}", int(zero[0]))
    if isinstance(anchor, ReceiverVoltage):
        v_out = complex(anchor.v_out)
    elif isinstance(anchor, TransmitterVoltageMagnitude):
        v_out = anchor.magnitude * H[0]
    else:
        raise TypeError(f"unsupported anchor {anchor!r}")
    V = v_out / H
    V[-1] = v_out
    if isinstance(anchor, TransmitterVoltageMagnitude):
        V[0] = anchor.magnitude
    I = V / Z
    return LineProfile(x=spec.node_x(), V=V, I=I)


def simulate(spec: NetworkSpec, damage: DamageCase, anchor: Anchor) -> LineProfile:
    return node_phasors(frequency_response(spec, damage), spec, anchor)


def responses_as_arrays(responses: Iterable[NodeResponse]) -> tuple[np.ndarray, np.ndarray]:
    rs = list(responses)
    return (
        np.array([r.Z for r in rs], dtype=complex),
        np.array([r.H for r in rs], dtype=complex),
    )
