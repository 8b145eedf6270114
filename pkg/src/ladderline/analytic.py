"""Closed-form steady-state solution of a uniform RLGC transmission line.

Coordinates follow the track-circuit convention: ``x = 0`` is the receiver
(load) end and ``x`` grows toward the transmitter.  With that orientation the
phasors are

    V(x) = v0 / (1 + mu) * (exp(gamma x) + mu exp(-gamma x))
    I(x) = i0 / (1 - mu) * (exp(gamma x) - mu exp(-gamma x))

where ``i0 = v0 / Z0`` and ``mu`` is the load reflection coefficient.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import InvalidParameterError, SingularConfigurationError


@dataclass(frozen=True)
class LineParams:
    """Per-unit-length constants of a continuous line.

    R in ohm/m, L in H/m, G in S/m, C in F/m.
    """

    R: float
    L: float
    G: float
    C: float

    def __post_init__(self) -> None:
        for name in ("R", "L", "G", "C"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value!r}")
        if self.R == 0 and self.L == 0:
            raise InvalidParameterError("series impedance is identically zero (R = L = 0)")
        if self.G == 0 and self.C == 0:
            raise InvalidParameterError("shunt admittance is identically zero (G = C = 0)")

    def series_impedance(self, omega: float) -> complex:
        return complex(self.R, omega * self.L)

    def shunt_admittance(self, omega: float) -> complex:
        return complex(self.G, omega * self.C)


REFERENCE_LINE = LineParams(R=2.5e-3, L=1.8e-6, G=20e-6, C=0.2e-9)


@dataclass(frozen=True)
class BoundaryCondition:
    """Receiver-end boundary data: voltage phasor ``v0`` across load ``Z0``."""

    v0: complex
    Z0: complex
    omega: float
    phi: float = 0.0

    @property
    def i0(self) -> complex:
        if self.Z0 == 0:
            raise SingularConfigurationError("short-circuit load: Z0 = 0")
        return self.v0 / self.Z0


@dataclass(frozen=True)
class AnalyticConstants:
    gamma: complex
    Zc: complex
    mu: complex
    omega: float


def _check_omega(omega: float) -> None:
    if not (math.isfinite(omega) and omega > 0):
        raise InvalidParameterError(f"omega must be finite and > 0, got {omega!r}")


def _principal_sqrt(z: complex) -> complex:
    root = cmath.sqrt(z)
    # cmath.sqrt already returns Re >= 0; normalise the -0.0 corner on the imaginary axis.
    if root.real == 0 and root.imag < 0:
        root = -root
    return root


def propagation_constant(params: LineParams, omega: float) -> complex:
    """Return gamma = sqrt((R + jwL)(G + jwC)) on the principal branch."""
    _check_omega(omega)
    return _principal_sqrt(params.series_impedance(omega) * params.shunt_admittance(omega))


def characteristic_impedance(params: LineParams, omega: float) -> complex:
    """Return Zc = sqrt((R + jwL)/(G + jwC)) on the principal branch."""
    _check_omega(omega)
    return _principal_sqrt(params.series_impedance(omega) / params.shunt_admittance(omega))


def reflection_coefficient(Z0: complex, Zc: complex) -> complex:
    """Return mu = (Z0 - Zc)/(Z0 + Zc)."""
    denom = Z0 + Zc
    if denom == 0:
        raise SingularConfigurationError("Z0 + Zc = 0")
    return (Z0 - Zc) / denom


def analytic_constants(params: LineParams, boundary: BoundaryCondition) -> AnalyticConstants:
    gamma = propagation_constant(params, boundary.omega)
    Zc = characteristic_impedance(params, boundary.omega)
    if not cmath.isfinite(boundary.Z0):
        raise SingularConfigurationError("open-circuit load: current profile undefined (mu = 1)")
    mu = reflection_coefficient(boundary.Z0, Zc)
    return AnalyticConstants(gamma=gamma, Zc=Zc, mu=mu, omega=boundary.omega)


@dataclass(frozen=True)
class LineProfile:
    """Voltage and current phasors sampled along a line.

    Arrays are aligned; ``x`` is the distance from the receiver end in metres.
    For ladder profiles the entries are in node order (transmitter first).
    """

    x: np.ndarray
    V: np.ndarray
    I: np.ndarray

    @property
    def vmax(self) -> np.ndarray:
        """Peak of the time-domain voltage at each sample, i.e. |V|."""
        return np.abs(self.V)

    @property
    def imax(self) -> np.ndarray:
        return np.abs(self.I)

    def __len__(self) -> int:
        return len(self.x)

    def rows(self) -> list[tuple[float, complex, complex]]:
        return [(float(x), complex(v), complex(i)) for x, v, i in zip(self.x, self.V, self.I)]


def analytic_profile(
    params: LineParams,
    boundary: BoundaryCondition,
    positions: Iterable[float],
    length: float | None = None,
) -> LineProfile:
    """Evaluate V(x), I(x) of the uniform line at ``positions``.

    ``length`` optionally bounds the positions to ``[0, length]``.
    """
    x = np.asarray(list(positions), dtype=float)
    if np.any(x < 0) or (length is not None and np.any(x > length)):
        raise InvalidParameterError("positions must lie within [0, line length]")
    const = analytic_constants(params, boundary)
    mu = const.mu
    if 1 + mu == 0:
        raise SingularConfigurationError("mu = -1: voltage profile undefined")
    if 1 - mu == 0:
        raise SingularConfigurationError("mu = 1: current profile undefined")
    fwd = np.exp(const.gamma * x)
    bwd = np.exp(-const.gamma * x)
    V = boundary.v0 / (1 + mu) * (fwd + mu * bwd)
    I = boundary.i0 / (1 - mu) * (fwd - mu * bwd)
    # Reproduce the boundary exactly; the formula above is only exact up to rounding at x = 0.
    at_origin = x == 0
    V[at_origin] = boundary.v0
    I[at_origin] = boundary.i0
    return LineProfile(x=x, V=V, I=I)


def time_domain_sample(phasor, omega: float, phi: float, t):
    """Instantaneous value Re{phasor * exp(j(omega t + phi))}.

    Accepts scalars or numpy arrays for ``phasor`` and ``t``.
    """
    return np.real(np.multiply(phasor, np.exp(1j * (np.multiply(omega, t) + phi))))
