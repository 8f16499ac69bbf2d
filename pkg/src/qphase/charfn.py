"""Closed-form p-ordered characteristic functions.

``chi_a`` is the characteristic function of the Bogoliubov mode
``B = cosh(r) a + exp(i phi) sinh(r) a^dag - alpha`` in a thermal state of
``a``; ``chi_b`` is that of ``a`` in a thermal state of ``B``.  Both are
Gaussians in ``xi = x + i y`` times a pure phase set by the displacement.

All functions broadcast over numpy arrays of ``xi``.
"""

from __future__ import annotations

import math

import numpy as np

from .core import SqueezeParam, StateParams, as_amplitude, as_ordering


def _as_xi(xi):
    if np.ndim(xi) == 0:
        return as_amplitude(xi, "xi")
    xi = np.asarray(xi, dtype=complex)
    if not np.all(np.isfinite(xi)):
        raise ValueError("xi must be finite")
    return xi


def squeeze_quadratic_form(r: float, phi: float) -> tuple[float, float, float]:
    """Coefficients ``(qxx, qyy, qxy)`` with
    ``|xi cosh r - conj(xi) sinh r e^{i phi}|^2 = qxx x^2 + qyy y^2 + qxy x y``.

    Shared with the quasi-probability module so the Gaussian covariance has
    one definition.
    """
    c2, s2 = math.cosh(2 * r), math.sinh(2 * r)
    return (
        c2 - s2 * math.cos(phi),
        c2 + s2 * math.cos(phi),
        -2.0 * s2 * math.sin(phi),
    )


def chi_thermal(xi, n_bar: float, p: float):
    """Thermal characteristic function ``exp(-(n_bar + 1/2 - p/2) |xi|^2)``."""
    xi = _as_xi(xi)
    p = as_ordering(p)
    if not (math.isfinite(n_bar) and n_bar >= 0):
        raise ValueError("n_bar must be finite and non-negative")
    return np.exp(-(n_bar + 0.5 - 0.5 * p) * np.abs(xi) ** 2)


def chi_a(xi, params: StateParams, p: float):
    """Characteristic function of ``B`` in a thermal state of ``a``.

    The Gaussian factor is real; the displacement contributes the pure phase
    ``conj(xi) alpha - xi conj(alpha)``, so ``|chi_a|`` does not depend on alpha.
    """
    xi = _as_xi(xi)
    p = as_ordering(p)
    alpha = params.alpha
    r, phi, n_bar = params.r, params.phi, params.n_bar
    qxx, qyy, qxy = squeeze_quadratic_form(r, phi)
    x, y = np.real(xi), np.imag(xi)
    quad = qxx * x * x + qyy * y * y + qxy * x * y
    gauss = -(n_bar + 0.5) * quad + 0.5 * p * (x * x + y * y)
    # conj(xi) alpha - xi conj(alpha) = 2i Im(conj(xi) alpha)
    phase = 2.0 * (x * alpha.imag - y * alpha.real)
    return np.exp(gauss + 1j * phase)


def transform_params(params: StateParams) -> StateParams:
    """Parameter map carrying ``chi_a`` into ``chi_b``.

    ``alpha -> -(alpha cosh r - conj(alpha) sinh r e^{i phi})`` and
    ``zeta -> -zeta`` (``phi -> phi + pi``); the thermal part is unchanged.
    """
    r, phi = params.r, params.phi
    alpha = params.alpha
    rot = complex(math.cos(phi), math.sin(phi))
    new_alpha = -(alpha * math.cosh(r) - alpha.conjugate() * math.sinh(r) * rot)
    return StateParams(new_alpha, SqueezeParam(r, phi + math.pi), params.thermal)


def chi_b(xi, params: StateParams, p: float):
    """Characteristic function of ``a`` in a thermal state of ``B``.

    Evaluated as ``chi_a`` at the transformed parameters so the two agree
    bit for bit; :func:`chi_b_explicit` evaluates the closed form directly.
    """
    return chi_a(xi, transform_params(params), p)


def chi_b_explicit(xi, params: StateParams, p: float):
    """Direct evaluation of the closed form of ``chi_b`` without the parameter map.

    Used to cross-check :func:`chi_b`; agrees with it to rounding.
    """
    xi = _as_xi(xi)
    p = as_ordering(p)
    r, n_bar, alpha = params.r, params.n_bar, params.alpha
    rot = complex(math.cos(params.phi), math.sin(params.phi))
    c, s = math.cosh(r), math.sinh(r)
    delta = xi * c + np.conj(xi) * s * rot
    shifted = alpha * c - alpha.conjugate() * s * rot
    return np.exp(-(n_bar + 0.5) * np.abs(delta) ** 2 + 0.5 * p * np.abs(xi) ** 2
                  + xi * np.conj(shifted) - np.conj(xi) * shifted)
