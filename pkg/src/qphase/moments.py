"""Mean photon number and number-variance combinations.

The ``operator`` argument names the mode being counted: ``"B"`` gives the
moments of the Bogoliubov mode ``B`` in a thermal state of ``a`` (read off
``chi_a``), ``"a"`` those of ``a`` in a thermal state of ``B`` (``chi_b``).
The second quantity reported is the combination ``<N^dag2 N^2>_p + <N>_p - <N>_p^2`` (written with ladder
operators), which equals the number variance at ``p = 1``.

Besides the closed forms there are two independent numerical routes:
Wirtinger finite differences of a characteristic function
(:func:`moment_fd`) and phase-space quadrature of a quasi-distribution grid
(:func:`moment_quadrature`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .charfn import chi_a, transform_params
from .core import StateParams, as_ordering
from .quasiprob import QuasiProbGrid

MAX_ORDER = 4
STEP_RANGE = (1e-5, 1e-1)


class UnderResolvedGridError(ValueError):
    """A quasi-distribution grid does not integrate to one."""


def _rot(phi: float) -> complex:
    return complex(math.cos(phi), math.sin(phi))


def mean_number_B(params: StateParams, p: float) -> float:
    """``<B^dag B>_p = n_bar cosh 2r + sinh^2 r + |alpha|^2 + (1 - p)/2``."""
    p = as_ordering(p)
    r = params.r
    return (params.n_bar * math.cosh(2 * r) + math.sinh(r) ** 2
            + abs(params.alpha) ** 2 + 0.5 * (1.0 - p))


def variance_combination_B(params: StateParams, p: float) -> float:
    p = as_ordering(p)
    r, n, alpha = params.r, params.n_bar, params.alpha
    mix = abs(alpha * math.cosh(r) + alpha.conjugate() * math.sinh(r) * _rot(params.phi)) ** 2
    c4 = math.cosh(4 * r)
    return (n * n * c4 + n * (c4 + 2.0 * mix) + 0.5 * math.sinh(2 * r) ** 2 + mix
            + 0.25 * (1.0 - p) ** 2
            + (1.0 - p) * ((n + 0.5) * math.cosh(2 * r) + abs(alpha) ** 2))


def mean_number_a(params: StateParams, p: float) -> float:
    """``<a^dag a>_p`` in the thermal state of ``B``."""
    p = as_ordering(p)
    r, alpha = params.r, params.alpha
    shifted = abs(alpha * math.cosh(r) - alpha.conjugate() * math.sinh(r) * _rot(params.phi)) ** 2
    return params.n_bar * math.cosh(2 * r) + math.sinh(r) ** 2 + shifted + 0.5 * (1.0 - p)


def variance_combination_a(params: StateParams, p: float) -> float:
    p = as_ordering(p)
    r, n, alpha = params.r, params.n_bar, params.alpha
    rot = _rot(params.phi)
    mix2 = abs(alpha * math.cosh(2 * r) - alpha.conjugate() * math.sinh(2 * r) * rot) ** 2
    shifted = abs(alpha * math.cosh(r) - alpha.conjugate() * math.sinh(r) * rot) ** 2
    c4 = math.cosh(4 * r)
    return (n * n * c4 + n * (c4 + 2.0 * mix2) + 0.5 * math.sinh(2 * r) ** 2 + mix2
            + 0.25 * (1.0 - p) ** 2
            + (1.0 - p) * ((n + 0.5) * math.cosh(2 * r) + shifted))


_MEAN = {"B": mean_number_B, "a": mean_number_a}
_COMB = {"B": variance_combination_B, "a": variance_combination_a}


def _check_operator(operator: str) -> str:
    if operator not in _MEAN:
        raise ValueError(f"operator must be 'a' or 'B', got {operator!r}")
    return operator


def mean_number(params: StateParams, p: float, operator: str = "B") -> float:
    return _MEAN[_check_operator(operator)](params, p)


def variance_combination(params: StateParams, p: float, operator: str = "B") -> float:
    return _COMB[_check_operator(operator)](params, p)


def mean_number_p1(params: StateParams, operator: str = "B") -> float:
    """Normally ordered mean photon number."""
    return mean_number(params, 1.0, operator)


def variance_p1(params: StateParams, operator: str = "B") -> float:
    """Number variance ``<N^2> - <N>^2``."""
    return variance_combination(params, 1.0, operator)


def mandel_q(params: StateParams, operator: str = "B") -> float:
    mean = mean_number_p1(params, operator)
    return variance_p1(params, operator) / mean - 1.0


# -- Wirtinger finite differences ---------------------------------------------

# second-order central stencils {offset: weight} for d^k/dx^k (times h^k)
_STENCILS = {
    0: {0: 1.0},
    1: {-1: -0.5, 1: 0.5},
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    3: {-2: -0.5, -1: 1.0, 1: -1.0, 2: 0.5},
    4: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


@lru_cache(maxsize=None)
def _wirtinger_terms(m: int, n: int) -> tuple[tuple[int, int, complex], ...]:
    """Expand ``(d/dxi)^m (-d/dxi*)^n`` into ``sum c_jk d_x^j d_y^k``."""
    # polynomial in (X, Y): dict {(j, k): coef}
    poly = {(0, 0): complex((-1) ** n * 0.5 ** (m + n))}
    factors = [(1.0, -1j)] * m + [(1.0, 1j)] * n
    for cx, cy in factors:
        out: dict = {}
        for (j, k), c in poly.items():
            out[(j + 1, k)] = out.get((j + 1, k), 0) + c * cx
            out[(j, k + 1)] = out.get((j, k + 1), 0) + c * cy
        poly = out
    return tuple((j, k, c) for (j, k), c in sorted(poly.items()) if c != 0)


def _fd_estimate(chi: Callable, m: int, n: int, h: float) -> complex:
    pts, weights = [], []
    for j, k, c in _wirtinger_terms(m, n):
        for ox, wx in _STENCILS[j].items():
            for oy, wy in _STENCILS[k].items():
                pts.append(complex(ox * h, oy * h))
                weights.append(c * wx * wy / h ** (j + k))
    vals = np.asarray(chi(np.array(pts)), dtype=complex)
    terms = np.asarray(weights) * vals
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def _curvature(chi: Callable, h0: float = 1e-2) -> float:
    v = np.asarray(chi(np.array([0j, h0, -h0, 1j * h0, -1j * h0])), dtype=complex)
    return max(abs(v[1] + v[2] - 2 * v[0]), abs(v[3] + v[4] - 2 * v[0])) / h0 ** 2


def default_step(chi: Callable, m: int, n: int) -> float:
    """1e-3 up to second order.

    Third- and fourth-order stencils amplify round-off as ``h^-4``, so there
    the step is scaled to the curvature of ``chi`` at the origin:
    ``0.03 / sqrt(max(|chi''|, 1))``.
    """
    if m + n <= 2:
        return 1e-3
    return min(STEP_RANGE[1], 0.03 / math.sqrt(max(_curvature(chi), 1.0)))


def moment_fd(chi: Callable, m: int, n: int, p: float | None = None,
              step: float | None = None) -> complex:
    """``(d/dxi)^m (-d/dxi*)^n chi`` at ``xi = 0`` by central differences
    with one Richardson level.

    ``chi`` must already carry its ordering; ``p`` is accepted for symmetry
    with the other routes and only validated.
    """
    if p is not None:
        as_ordering(p)
    if m < 0 or n < 0 or m + n > MAX_ORDER:
        raise ValueError(f"unsupported order m + n = {m + n} (max {MAX_ORDER})")
    h = default_step(chi, m, n) if step is None else float(step)
    if not (STEP_RANGE[0] <= h <= STEP_RANGE[1]):
        raise ValueError(f"step {h!r} outside [{STEP_RANGE[0]:g}, {STEP_RANGE[1]:g}]")
    if m == n == 0:
        return complex(chi(np.array([0j]))[0])
    coarse = _fd_estimate(chi, m, n, h)
    fine = _fd_estimate(chi, m, n, 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def moments_from_chi(chi: Callable, step: float | None = None) -> tuple[float, float]:
    """Mean and variance combination read off a characteristic function."""
    n11 = moment_fd(chi, 1, 1, step=step).real
    n22 = moment_fd(chi, 2, 2, step=step).real
    return n11, n22 + n11 - n11 * n11


# -- quadrature -------------------------------------------------------------

def moment_quadrature(w_grid: QuasiProbGrid, m: int, n: int, norm_tol: float = 1e-4) -> complex:
    """Cell-centred sum of ``W(eta) conj(eta)^m eta^n``."""
    if m < 0 or n < 0 or m + n > MAX_ORDER:
        raise ValueError(f"unsupported order m + n = {m + n} (max {MAX_ORDER})")
    resid = w_grid.normalization_residual()
    if resid > norm_tol:
        raise UnderResolvedGridError(
            f"grid under-resolved or under-extended (normalization residual {resid:.3g})"
        )
    eta = w_grid.grid.mesh()
    integrand = w_grid.values * np.conj(eta) ** m * eta ** n
    area = w_grid.grid.cell_area
    return complex(math.fsum(integrand.real.ravel()) * area,
                   math.fsum(integrand.imag.ravel()) * area)


def moments_from_grid(w_grid: QuasiProbGrid) -> tuple[float, float]:
    n11 = moment_quadrature(w_grid, 1, 1).real
    n22 = moment_quadrature(w_grid, 2, 2).real
    return n11, n22 + n11 - n11 * n11


# -- reports ------------------------------------------------------------------

@dataclass(frozen=True)
class MomentReport:
    mean: float
    second_combination: float
    variance_p1: float | None
    method: str  # closed | finite_difference | quadrature | oracle

    def as_dict(self) -> dict:
        d = {"mean": self.mean, "variance": self.second_combination, "method": self.method}
        if self.variance_p1 is not None:
            d["delta_n2"] = self.variance_p1
        return d


def closed_report(params: StateParams, p: float, operator: str = "B") -> MomentReport:
    p = as_ordering(p)
    comb = variance_combination(params, p, operator)
    return MomentReport(mean_number(params, p, operator), comb, comb if p == 1.0 else None, "closed")


def chi_for_operator(params: StateParams, p: float, operator: str) -> Callable:
    """Characteristic function whose derivatives give the ``operator`` moments."""
    eff = params if _check_operator(operator) == "B" else transform_params(params)
    return lambda xi: chi_a(xi, eff, p)
