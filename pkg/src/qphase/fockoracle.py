"""Brute-force truncated Fock-basis oracle.

Operators live on the basis ``|0>, ..., |N-1>``.  Exponentials of the
anti-Hermitian generators (displacement, squeezing, the characteristic
function kernel) are taken through the eigendecomposition of the Hermitian
matrix ``i G``: ``expm(G) = V diag(exp(-i lambda)) V^dag``.  This is
deterministic and exactly unitary in floating point up to rounding.

Truncation artefacts concentrate in the top corner of the basis.  Operator
identities are therefore checked on the "safe block", the leading
``N - max(10, N // 5)`` states; traces are global but the states used here
are required to have negligible weight near the corner.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .core import StateParams, as_amplitude, as_ordering

MIN_CUTOFF = 16
DEFAULT_MAX_CUTOFF = 1024
THERMAL_TAIL_TOL = 1e-12


class CutoffError(RuntimeError):
    """The truncated basis is too small for the requested state."""

    def __init__(self, message: str, suggested: int | None = None):
        super().__init__(message)
        self.suggested = suggested


class OracleHealthError(RuntimeError):
    """A trace that must be real came out with a sizeable imaginary part."""


class UntrustedOracleWarning(RuntimeWarning):
    """The oracle was evaluated outside its trust radius."""


def max_cutoff() -> int:
    return int(os.environ.get("QPHASE_MAX_CUTOFF", DEFAULT_MAX_CUTOFF))


def safe_size(n: int) -> int:
    return n - max(10, n // 5)


def annihilation(n: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1).astype(complex)


def expm_antihermitian(g: np.ndarray) -> np.ndarray:
    h = 1j * g
    h = 0.5 * (h + h.conj().T)
    lam, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * lam)) @ v.conj().T


def displacement(alpha: complex, n: int) -> np.ndarray:
    a = annihilation(n)
    return expm_antihermitian(alpha * a.conj().T - np.conj(alpha) * a)


def squeeze(zeta: complex, n: int) -> np.ndarray:
    a = annihilation(n)
    ad = a.conj().T
    return expm_antihermitian(-0.5 * zeta * ad @ ad + 0.5 * np.conj(zeta) * a @ a)


@dataclass(frozen=True)
class FockOperators:
    cutoff: int
    a_mat: np.ndarray
    adag_mat: np.ndarray
    d_mat: np.ndarray
    s_mat: np.ndarray
    b_mat: np.ndarray
    bdag_mat: np.ndarray
    params: StateParams

    @property
    def u_mat(self) -> np.ndarray:
        return self.s_mat @ self.d_mat

    def commutator_deviation(self) -> float:
        k = safe_size(self.cutoff)
        comm = self.b_mat @ self.bdag_mat - self.bdag_mat @ self.b_mat
        return float(np.abs(comm[:k, :k] - np.eye(k)).max())

    def unitarity_deviation(self) -> float:
        k = self.cutoff - max(1, self.cutoff // 10)
        dev = 0.0
        for m in (self.d_mat, self.s_mat):
            dev = max(dev, np.linalg.norm((m.conj().T @ m)[:k, :k] - np.eye(k), 2))
        return float(dev)


def b_closed(params: StateParams, n: int) -> np.ndarray:
    """``cosh r a + e^{i phi} sinh r a^dag - alpha``."""
    a = annihilation(n)
    rot = complex(math.cos(params.phi), math.sin(params.phi))
    return (math.cosh(params.r) * a + rot * math.sinh(params.r) * a.conj().T
            - params.alpha * np.eye(n))


def sandwich_pad(params: StateParams, n: int) -> int:
    """Working dimension for the sandwiched construction of ``B``.

    Squeezing spreads ``|k>`` out to roughly ``k e^{2r}``, so the product is
    formed in a larger basis and cropped.
    """
    reach = (n + 4 * abs(params.alpha) ** 2 + 16) * math.exp(2 * params.r) * 1.5 + 32
    return 1 << math.ceil(math.log2(reach))


def b_sandwich(params: StateParams, n: int, pad: int | None = None) -> np.ndarray:
    """``S(zeta) D(alpha) a D(-alpha) S(-zeta)``, built in ``pad`` dimensions, cropped to ``n``."""
    m = sandwich_pad(params, n) if pad is None else pad
    a = annihilation(m)
    d = displacement(params.alpha, m)
    s = squeeze(params.squeeze.zeta, m)
    u = s @ d
    return (u @ a @ u.conj().T)[:n, :n]


def build_operators(params: StateParams, cutoff: int, check_sandwich: bool = False) -> FockOperators:
    """Truncated matrices of ``a``, ``D(alpha)``, ``S(zeta)`` and ``B``.

    With ``check_sandwich`` the closed Bogoliubov form of ``B`` is compared on
    the safe block with the sandwiched product; disagreement above 1e-8
    raises :class:`CutoffError`.
    """
    if cutoff < MIN_CUTOFF:
        raise CutoffError(f"cutoff must be >= {MIN_CUTOFF}", suggested=MIN_CUTOFF)
    a = annihilation(cutoff)
    b = b_closed(params, cutoff)
    ops = FockOperators(
        cutoff=cutoff,
        a_mat=a,
        adag_mat=a.conj().T,
        d_mat=displacement(params.alpha, cutoff),
        s_mat=squeeze(params.squeeze.zeta, cutoff),
        b_mat=b,
        bdag_mat=b.conj().T,
        params=params,
    )
    if check_sandwich:
        dev = sandwich_deviation(ops)
        if dev > 1e-8:
            raise CutoffError(
                f"closed and sandwiched B disagree by {dev:.3g} on the safe block",
                suggested=2 * cutoff,
            )
    return ops


def sandwich_deviation(ops: FockOperators) -> float:
    k = safe_size(ops.cutoff)
    sand = b_sandwich(ops.params, ops.cutoff)
    return float(np.abs(sand[:k, :k] - ops.b_mat[:k, :k]).max())


@dataclass(frozen=True)
class DensityMatrix:
    rho: np.ndarray
    basis_label: str  # "a-thermal" or "B-thermal"

    @property
    def cutoff(self) -> int:
        return self.rho.shape[0]

    def hermiticity_error(self) -> float:
        return float(np.abs(self.rho - self.rho.conj().T).max())

    def trace_error(self) -> float:
        return abs(complex(np.trace(self.rho)) - 1.0)

    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.rho + self.rho.conj().T)
        return float(np.linalg.eigvalsh(h)[0])

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def tail_mass(self, k: int | None = None) -> float:
        """Diagonal weight on the top ``k`` states (default ``max(10, N // 5)``)."""
        n = self.cutoff
        k = n - safe_size(n) if k is None else k
        return float(np.real(np.diag(self.rho))[n - k:].sum())

    def mean_occupation(self) -> float:
        return float(np.real(np.diag(self.rho)) @ np.arange(self.cutoff))

    def check(self, tol: float = 1e-10) -> None:
        errs = (self.hermiticity_error(), self.trace_error(), -self.min_eigenvalue())
        if max(errs) > tol:
            raise CutoffError(
                "density matrix invariants violated (hermiticity {:.3g}, trace {:.3g}, "
                "negativity {:.3g})".format(*errs),
                suggested=2 * self.cutoff,
            )


def thermal_populations(n_bar: float, cutoff: int) -> np.ndarray:
    """Geometric occupation ``(1 - q) q^n`` with ``q = n_bar / (n_bar + 1)``, renormalised."""
    if not (math.isfinite(n_bar) and n_bar >= 0):
        raise ValueError("n_bar must be finite and non-negative")
    q = n_bar / (n_bar + 1.0)
    tail = q ** cutoff
    if tail >= THERMAL_TAIL_TOL:
        need = math.ceil(math.log(THERMAL_TAIL_TOL) / math.log(q)) + 1
        raise CutoffError(f"cutoff too small for n_bar={n_bar:g}", suggested=need)
    pops = (1.0 - q) * q ** np.arange(cutoff)
    return pops / math.fsum(pops)


def rho_a(n_bar: float, cutoff: int) -> DensityMatrix:
    """Thermal state of ``a``."""
    return DensityMatrix(np.diag(thermal_populations(n_bar, cutoff)).astype(complex), "a-thermal")


def rho_b(params: StateParams, cutoff: int, ops: FockOperators | None = None,
          tol: float = THERMAL_TAIL_TOL) -> DensityMatrix:
    """Thermal state of ``B``: ``U rho_a U^dag`` with ``U = S(zeta) D(alpha)``."""
    pops = thermal_populations(params.n_bar, cutoff)
    if ops is None:
        u = squeeze(params.squeeze.zeta, cutoff) @ displacement(params.alpha, cutoff)
    else:
        u = ops.u_mat
    rho = (u * pops) @ u.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    dm = DensityMatrix(rho, "B-thermal")
    tail = dm.tail_mass()
    if tail >= tol:
        raise CutoffError(
            f"cutoff {cutoff} too small: B-thermal tail mass {tail:.3g}",
            suggested=2 * cutoff,
        )
    dm.check()
    return dm


def _trust_ok(rho: DensityMatrix, op: np.ndarray, xi: complex) -> bool:
    # displacement reach in units of a: |<0|op|1>| + |<1|op|0>| (= e^r for B)
    gain = abs(op[0, 1]) + abs(op[1, 0])
    occ = (math.sqrt(max(rho.mean_occupation(), 0.0)) + abs(xi) * gain) ** 2
    return occ + 6.0 * math.sqrt(occ) + 10.0 < rho.cutoff


def oracle_chi(rho: DensityMatrix, ladder: tuple[np.ndarray, np.ndarray], xi, p: float) -> complex:
    """``Tr[rho expm(xi op^dag - conj(xi) op)] exp(p |xi|^2 / 2)``.

    Emits :class:`UntrustedOracleWarning` when the displaced state would
    reach the truncation corner.
    """
    xi = as_amplitude(xi, "xi")
    p = as_ordering(p)
    op, opdag = ladder
    if op.shape != rho.rho.shape:
        raise ValueError("density matrix and ladder operators must share the cutoff")
    if xi == 0:
        return complex(np.trace(rho.rho))
    if not _trust_ok(rho, op, xi):
        warnings.warn(f"|xi|={abs(xi):.3g} beyond oracle trust radius at cutoff {rho.cutoff}",
                      UntrustedOracleWarning, stacklevel=2)
    g = xi * opdag - np.conj(xi) * op
    h = 1j * g
    h = 0.5 * (h + h.conj().T)
    lam, v = np.linalg.eigh(h)
    # Tr[rho V e V^dag] = sum_k e_k (V^dag rho V)_kk
    diag = np.einsum("ik,ij,jk->k", v.conj(), rho.rho, v)
    return complex(np.sum(np.exp(-1j * lam) * diag) * math.exp(0.5 * p * abs(xi) ** 2))


def _real_trace(x: complex) -> float:
    if abs(x.imag) >= 1e-10:
        raise OracleHealthError(f"imaginary residue {x.imag:.3g} in a Hermitian expectation")
    return x.real


def oracle_moment(rho: DensityMatrix, number_op: np.ndarray, power: int) -> float:
    """``Tr[rho N^power]`` for ``power`` in {1, 2}."""
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    m = number_op if power == 1 else number_op @ number_op
    return _real_trace(complex(np.sum(rho.rho * m.T)))


def number_operator(op: np.ndarray) -> np.ndarray:
    return op.conj().T @ op


def oracle_ordered_moments(rho: DensityMatrix, op: np.ndarray, p: float) -> tuple[float, float]:
    """p-ordered ``<N>_p`` and ``<op^dag2 op^2>_p + <N>_p - <N>_p^2`` for ``N = op^dag op``.

    The normally ordered traces are converted with the ordering shift
    ``<op^dag^m op^n>_p = sum_k k! C(m,k) C(n,k) t^k <op^dag^(m-k) op^(n-k)>``,
    ``t = (1 - p) / 2``, which follows from ``chi_p = chi_1 exp(-t |xi|^2)``.
    """
    p = as_ordering(p)
    num = number_operator(op)
    n1 = oracle_moment(rho, num, 1)
    n2 = oracle_moment(rho, num, 2)
    normal22 = n2 - n1  # op^dag op op^dag op = op^dag2 op^2 + op^dag op
    t = 0.5 * (1.0 - p)
    mean = n1 + t
    m22 = normal22 + 4.0 * t * n1 + 2.0 * t * t
    return mean, m22 + mean - mean * mean


def adaptive_cutoff(params: StateParams, tol: float = 1e-12, cap: int | None = None) -> int:
    """Smallest power-of-two cutoff (>= 16) with thermal and B-thermal tails below ``tol``.

    The B-thermal tail is measured on the top ``max(10, N // 5)`` states of
    the truncated ``U rho_a U^dag``.
    """
    if not (1e-14 <= tol <= 1e-6):
        raise ValueError("tol must lie in [1e-14, 1e-6]")
    cap = max_cutoff() if cap is None else cap
    q = params.n_bar / (params.n_bar + 1.0)
    n = MIN_CUTOFF
    if q > 0:
        need = math.log(tol) / math.log(q)
        if need > n:
            n = 1 << math.ceil(math.log2(need))
    while n <= cap:
        if q ** n < min(tol, THERMAL_TAIL_TOL):
            try:
                rho_b(params, n, tol=tol)
                return n
            except CutoffError:
                pass
        n *= 2
    raise CutoffError(
        f"parameters too hot/squeezed for oracle (cutoff would exceed {cap})",
        suggested=n,
    )
