"""Gaussian quasi-probability distributions W(eta, p).

The closed form is a normalised Gaussian centred at ``eta = -alpha`` whose
quadratic form is fixed by ``A^2``, ``B^2`` and ``C`` (see
:func:`gaussian_coefficients`).  :func:`fourier_w` computes the same
distribution by a discrete Fourier transform of any characteristic function
and serves as the cross-check.

FFT index map
-------------
For ``xi = x + i y`` and ``eta = e1 + i e2`` the transform kernel is
``exp(eta conj(xi) - conj(eta) xi) = exp(2i (x e2 - y e1))``.  The xi grid is
cell-centred about the origin with spacing ``h_x = 2 L_x / n_x``; the sum over
the ``x`` axis produces ``e2`` samples with spacing ``pi / (2 L_x)`` and the
sum over the ``y`` axis produces ``e1`` samples with spacing ``pi / (2 L_y)``.
Both output axes are cell-centred about ``eta_center``: with
``s = 1/2 - n/2`` the sample ``j`` sits at ``(j + s) h`` and output ``k`` at
``(k + s) * pi / (n h)``, so the kernel phase is ``2 pi (j + s)(k + s) / n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .charfn import squeeze_quadratic_form, transform_params
from .core import PhaseSpaceGrid, StateParams, as_amplitude, as_ordering

# Mutation hook for the verification suite: -1 flips the sign of C.
_C_SIGN = 1.0

DEFAULT_SAMPLES = 256
MAX_SAMPLES = 2048
# |chi| on the xi-grid boundary must fall below this
CHI_BOUNDARY_TOL = 1e-12
IMAG_RESIDUE_TOL = 1e-8


class SingularDistributionError(ValueError):
    """The quasi-distribution is not a normalizable Gaussian at this ordering."""


class GridSupportError(ValueError):
    """A sampling grid does not cover the support of the function on it."""


@dataclass(frozen=True)
class GaussianCoefficients:
    a2: float
    b2: float
    c: float

    @property
    def det(self) -> float:
        return 4.0 * self.a2 * self.b2 - self.c * self.c

    @property
    def valid(self) -> bool:
        return self.a2 > 0.0 and self.b2 > 0.0 and self.det > 0.0

    def require_valid(self) -> "GaussianCoefficients":
        if not self.valid:
            raise SingularDistributionError(
                "quasi-distribution not a normalizable Gaussian at this p "
                f"(need A^2 > 0, B^2 > 0, 4A^2B^2 - C^2 > 0; got A^2={self.a2:.6g}, "
                f"B^2={self.b2:.6g}, 4A^2B^2 - C^2={self.det:.6g})"
            )
        return self

    def covariance(self) -> np.ndarray:
        """Covariance of ``(e1, e2)`` under the normalised Gaussian."""
        return 0.5 * np.array([[self.b2, 0.5 * self.c], [0.5 * self.c, self.a2]])


@dataclass(frozen=True)
class QuasiProbGrid:
    grid: PhaseSpaceGrid
    values: np.ndarray  # shape (n_im, n_re), rows along e2
    p: float

    def total(self) -> float:
        return math.fsum(self.values.ravel()) * self.grid.cell_area

    def normalization_residual(self) -> float:
        return abs(self.total() - 1.0)

    @property
    def label(self) -> str:
        return classify_distribution(self.p)


def classify_distribution(p: float) -> str:
    p = as_ordering(p)
    if p == 1.0:
        return "P"
    if p == 0.0:
        return "Wigner"
    if p == -1.0:
        return "Q"
    return f"generalized({p:g})"


def gaussian_coefficients(params: StateParams, p: float) -> GaussianCoefficients:
    p = as_ordering(p)
    qxx, qyy, qxy = squeeze_quadratic_form(params.r, params.phi)
    h = params.n_bar + 0.5
    return GaussianCoefficients(
        a2=h * qxx - 0.5 * p,
        b2=h * qyy - 0.5 * p,
        c=-_C_SIGN * h * qxy,
    )


def linear_forms(eta, alpha: complex):
    """``(E, F)`` with ``E = 2 Im(alpha) + 2 e2`` and ``F = -2 Re(alpha) - 2 e1``."""
    eta = np.asarray(eta, dtype=complex) if np.ndim(eta) else as_amplitude(eta, "eta")
    return 2.0 * alpha.imag + 2.0 * np.imag(eta), -2.0 * alpha.real - 2.0 * np.real(eta)


def _w_from(coef: GaussianCoefficients, eta, alpha: complex):
    coef.require_valid()
    det = coef.det
    e, f = linear_forms(eta, alpha)
    expo = (coef.a2 * f * f + coef.b2 * e * e + coef.c * e * f) / det
    return 2.0 / (math.pi * math.sqrt(det)) * np.exp(-expo)


def w_a_closed(eta, params: StateParams, p: float):
    """Closed-form quasi-distribution of ``B``; peaks at ``eta = -alpha``."""
    return _w_from(gaussian_coefficients(params, p), eta, params.alpha)


def w_b_closed(eta, params: StateParams, p: float):
    """Closed-form quasi-distribution of ``a`` in the thermal state of ``B``."""
    return w_a_closed(eta, transform_params(params), p)


def _basis_params(params: StateParams, basis: str) -> StateParams:
    if basis == "a":
        return params
    if basis == "B":
        return transform_params(params)
    raise ValueError(f"basis must be 'a' or 'B', got {basis!r}")


def _next_pow2(x: float) -> int:
    return 1 << max(3, math.ceil(math.log2(max(x, 1.0))))


def default_eta_grid(params: StateParams, p: float, basis: str = "a",
                     n: int | None = None) -> PhaseSpaceGrid:
    """Grid centred on the peak spanning 6 standard deviations (at least 4.0).

    ``n`` defaults to 256, raised (up to 2048) when the Gaussian is so
    elongated that the short axis would be under-sampled.
    """
    eff = _basis_params(params, basis)
    coef = gaussian_coefficients(eff, p).require_valid()
    evals = np.linalg.eigvalsh(coef.covariance())
    sig_max, sig_min = math.sqrt(evals[-1]), math.sqrt(evals[0])
    half = max(4.0, 6.0 * sig_max)
    if n is None:
        # spacing must stay below ~0.8 of the narrowest standard deviation
        n = min(MAX_SAMPLES, max(DEFAULT_SAMPLES, _next_pow2(2.5 * half / sig_min)))
    return PhaseSpaceGrid.square(half, n, center=-eff.alpha)


def default_xi_grid(params: StateParams, p: float, basis: str = "a",
                    n: int = DEFAULT_SAMPLES) -> PhaseSpaceGrid:
    """Origin-centred xi grid wide enough for ``|chi|`` to reach 1e-13 at its edge."""
    eff = _basis_params(params, basis)
    coef = gaussian_coefficients(eff, p).require_valid()
    # |chi(xi)| = exp(-(A^2 x^2 + B^2 y^2 - C x y)); smallest curvature sets the reach
    m = np.array([[coef.a2, -0.5 * coef.c], [-0.5 * coef.c, coef.b2]])
    lam_min = np.linalg.eigvalsh(m)[0]
    half = math.sqrt(-math.log(1e-13) / lam_min) * 1.05
    return PhaseSpaceGrid.square(half, n)


def w_closed_grid(params: StateParams, p: float, basis: str = "a",
                  grid: PhaseSpaceGrid | None = None) -> QuasiProbGrid:
    if grid is None:
        grid = default_eta_grid(params, p, basis)
    values = w_a_closed(grid.mesh(), _basis_params(params, basis), p)
    return QuasiProbGrid(grid, np.asarray(values, dtype=float), as_ordering(p))


def _centered_dft(f: np.ndarray, axis: int, sign: int) -> np.ndarray:
    """``sum_j f_j exp(sign * 2 pi i (j + s)(k + s) / n)`` with ``s = 1/2 - n/2``."""
    n = f.shape[axis]
    s = 0.5 - 0.5 * n
    idx = np.arange(n)
    shape = [1] * f.ndim
    shape[axis] = n
    pre = np.exp(sign * 2j * np.pi * s * idx / n).reshape(shape)
    post = np.exp(sign * 2j * np.pi * (s * idx + s * s) / n).reshape(shape)
    if sign > 0:
        out = np.fft.ifft(f * pre, axis=axis) * n
    else:
        out = np.fft.fft(f * pre, axis=axis)
    return out * post


def fourier_w(chi: Callable, xi_grid: PhaseSpaceGrid, p: float,
              eta_center=0j) -> QuasiProbGrid:
    """Quasi-distribution ``(1/pi^2) int d^2xi chi(xi) exp(eta conj(xi) - conj(eta) xi)``.

    ``chi`` is evaluated on ``xi_grid`` (which must be centred at the origin);
    the returned eta grid has ``n_re = xi_grid.n_im`` and ``n_im = xi_grid.n_re``
    samples centred on ``eta_center``.
    """
    p = as_ordering(p)
    eta_center = as_amplitude(eta_center, "eta_center")
    if xi_grid.center != 0:
        raise ValueError("xi grid must be centred at the origin")
    xi = xi_grid.mesh()
    vals = np.asarray(chi(xi), dtype=complex)
    if vals.shape != xi.shape:
        vals = np.broadcast_to(vals, xi.shape).astype(complex)
    edge = np.concatenate([np.abs(vals[0]), np.abs(vals[-1]),
                           np.abs(vals[:, 0]), np.abs(vals[:, -1])]).max()
    if not np.isfinite(edge) or edge >= 1.0:
        raise SingularDistributionError(
            "quasi-distribution not a normalizable Gaussian at this p "
            "(characteristic function does not decay)"
        )
    if edge >= CHI_BOUNDARY_TOL:
        raise GridSupportError(
            f"xi-grid too small for characteristic function support (|chi| = {edge:.3g} at edge)"
        )
    # shift the output window: multiply by the kernel at eta_center
    x, y = xi.real, xi.imag
    vals = vals * np.exp(2j * (x * eta_center.imag - y * eta_center.real))
    # x (axis 1) -> e2 with kernel exp(+2i x e2); y (axis 0) -> e1 with exp(-2i y e1)
    out = _centered_dft(vals, axis=1, sign=+1)
    out = _centered_dft(out, axis=0, sign=-1)
    out *= xi_grid.cell_area / math.pi ** 2
    # out[k1, k2] is indexed (e1, e2); store rows along e2
    out = out.T
    imag = float(np.max(np.abs(out.imag)))
    if imag >= IMAG_RESIDUE_TOL:
        raise GridSupportError(f"imaginary residue {imag:.3g} exceeds {IMAG_RESIDUE_TOL:g}")
    eta_grid = PhaseSpaceGrid(
        eta_center,
        half_extent_re=math.pi * xi_grid.n_im / (4.0 * xi_grid.half_extent_im),
        half_extent_im=math.pi * xi_grid.n_re / (4.0 * xi_grid.half_extent_re),
        n_re=xi_grid.n_im,
        n_im=xi_grid.n_re,
    )
    return QuasiProbGrid(eta_grid, np.ascontiguousarray(out.real), p)


def dense_fourier_w(chi: Callable, xi_grid: PhaseSpaceGrid, eta_grid: PhaseSpaceGrid):
    """Direct O(n^3) evaluation of the same transform on arbitrary eta axes."""
    x, y = xi_grid.re_axis, xi_grid.im_axis
    vals = np.asarray(chi(xi_grid.mesh()), dtype=complex)  # (ny, nx)
    e1, e2 = eta_grid.re_axis, eta_grid.im_axis
    kx = np.exp(2j * np.outer(x, e2))  # (nx, n_e2)
    ky = np.exp(-2j * np.outer(e1, y))  # (n_e1, ny)
    out = ky @ vals @ kx  # (n_e1, n_e2)
    return (out.T * xi_grid.cell_area / math.pi ** 2)
