"""Shared parameter types for squeezed coherent thermal states.

Complex amplitudes (the displacement alpha, the characteristic-function
argument xi, the phase-space point eta) are plain Python ``complex`` values;
:func:`as_amplitude` validates them.  The thermal occupation ``n_bar`` is the
canonical thermal parameter, ``theta = beta * hbar * omega`` is derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """A parameter lies outside the domain where a quantity is defined."""


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def as_amplitude(z, name: str = "amplitude") -> complex:
    """Coerce ``z`` to a finite complex number."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return z


def as_ordering(p) -> float:
    """Validate an ordering parameter (1 normal, 0 symmetric, -1 anti-normal)."""
    return _check_finite("ordering parameter p", p)


def nbar_from_theta(theta: float) -> float:
    """Mean thermal occupation ``1 / (exp(theta) - 1)``."""
    theta = _check_finite("theta", theta)
    if theta <= 0.0:
        raise DomainError("non-positive inverse temperature product")
    return 1.0 / math.expm1(theta)


def theta_from_nbar(n_bar: float) -> float:
    """Inverse of :func:`nbar_from_theta`, ``log(1 + 1/n_bar)``."""
    n_bar = _check_finite("n_bar", n_bar)
    if n_bar < 0.0:
        raise DomainError(f"n_bar must be non-negative, got {n_bar!r}")
    if n_bar == 0.0:
        raise DomainError("infinite theta (vacuum limit)")
    return math.log1p(1.0 / n_bar)


@dataclass(frozen=True)
class SqueezeParam:
    """Squeeze parameter ``zeta = r * exp(i phi)`` with ``r >= 0``, ``phi in [0, 2pi)``."""

    r: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        r = _check_finite("squeeze magnitude r", self.r)
        if r < 0.0:
            raise DomainError(f"squeeze magnitude r must be >= 0, got {r!r}")
        phi = math.fmod(_check_finite("squeeze phase phi", self.phi), TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        if phi >= TWO_PI:  # fmod of a tiny negative can round up to 2pi
            phi = 0.0
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "phi", phi)

    @property
    def zeta(self) -> complex:
        return self.r * complex(math.cos(self.phi), math.sin(self.phi))

    @classmethod
    def from_zeta(cls, zeta) -> "SqueezeParam":
        zeta = as_amplitude(zeta, "zeta")
        return cls(abs(zeta), math.atan2(zeta.imag, zeta.real))


@dataclass(frozen=True)
class ThermalParam:
    """Thermal occupation of the reference oscillator."""

    n_bar: float = 0.0

    def __post_init__(self):
        n_bar = _check_finite("n_bar", self.n_bar)
        if n_bar < 0.0:
            raise DomainError(f"n_bar must be non-negative, got {n_bar!r}")
        object.__setattr__(self, "n_bar", n_bar)

    @property
    def theta(self) -> float:
        return theta_from_nbar(self.n_bar)

    @classmethod
    def from_theta(cls, theta: float) -> "ThermalParam":
        return cls(nbar_from_theta(theta))


@dataclass(frozen=True)
class StateParams:
    """Displacement, squeezing and thermal occupation of one state."""

    alpha: complex = 0j
    squeeze: SqueezeParam = field(default_factory=SqueezeParam)
    thermal: ThermalParam = field(default_factory=ThermalParam)

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_amplitude(self.alpha, "alpha"))
        if not isinstance(self.squeeze, SqueezeParam):
            raise TypeError("squeeze must be a SqueezeParam")
        if not isinstance(self.thermal, ThermalParam):
            raise TypeError("thermal must be a ThermalParam")

    @classmethod
    def make(cls, alpha=0j, r=0.0, phi=0.0, n_bar=0.0) -> "StateParams":
        return cls(alpha, SqueezeParam(r, phi), ThermalParam(n_bar))

    @property
    def r(self) -> float:
        return self.squeeze.r

    @property
    def phi(self) -> float:
        return self.squeeze.phi

    @property
    def n_bar(self) -> float:
        return self.thermal.n_bar

    def as_dict(self) -> dict:
        return {
            "alpha_re": self.alpha.real,
            "alpha_im": self.alpha.imag,
            "r": self.r,
            "phi": self.phi,
            "n_bar": self.n_bar,
        }


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Cell-centred rectangular sampling of a complex plane.

    Samples along each axis sit at ``center + (k + 1/2 - n/2) * spacing`` for
    ``k = 0..n-1`` with ``spacing = 2 * half_extent / n``, so the grid is
    symmetric about ``center`` and never samples the centre itself.
    """

    center: complex = 0j
    half_extent_re: float = 4.0
    half_extent_im: float = 4.0
    n_re: int = 256
    n_im: int = 256

    def __post_init__(self):
        object.__setattr__(self, "center", as_amplitude(self.center, "grid center"))
        for name in ("half_extent_re", "half_extent_im"):
            v = _check_finite(name, getattr(self, name))
            if v <= 0.0:
                raise DomainError(f"{name} must be positive")
            object.__setattr__(self, name, v)
        for name in ("n_re", "n_im"):
            n = getattr(self, name)
            if int(n) != n or not _is_pow2(int(n)) or n < 8:
                raise DomainError(f"{name} must be a power of two >= 8, got {n!r}")
            object.__setattr__(self, name, int(n))

    @classmethod
    def square(cls, half_extent: float, n: int = 256, center=0j) -> "PhaseSpaceGrid":
        return cls(center, half_extent, half_extent, n, n)

    @property
    def spacing_re(self) -> float:
        return 2.0 * self.half_extent_re / self.n_re

    @property
    def spacing_im(self) -> float:
        return 2.0 * self.half_extent_im / self.n_im

    @property
    def cell_area(self) -> float:
        return self.spacing_re * self.spacing_im

    @property
    def re_axis(self) -> np.ndarray:
        k = np.arange(self.n_re) + 0.5 - self.n_re / 2
        return self.center.real + k * self.spacing_re

    @property
    def im_axis(self) -> np.ndarray:
        k = np.arange(self.n_im) + 0.5 - self.n_im / 2
        return self.center.imag + k * self.spacing_im

    def mesh(self) -> np.ndarray:
        """Complex sample points, shape ``(n_im, n_re)`` (rows follow the imaginary axis)."""
        re, im = np.meshgrid(self.re_axis, self.im_axis, indexing="xy")
        return re + 1j * im

    def as_dict(self) -> dict:
        return {
            "center_re": self.center.real,
            "center_im": self.center.imag,
            "half_extent_re": self.half_extent_re,
            "half_extent_im": self.half_extent_im,
            "n_re": self.n_re,
            "n_im": self.n_im,
        }
