"""Seeded property sweep cross-checking every closed form.

Each check returns a :class:`CheckResult`; :func:`run_suite` runs them all
over one set of random draws (``n_bar in [0, 1]``, ``r in [0, 1]``,
``|alpha| <= 1``, ``phi in [0, 2pi)``) and is what ``qphase verify`` prints.
"""

from __future__ import annotations

import contextlib
import math
import warnings
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from . import quasiprob
from .charfn import chi_a, chi_b, chi_b_explicit, chi_thermal, transform_params
from .core import PhaseSpaceGrid, StateParams
from .fockoracle import (
    UntrustedOracleWarning,
    adaptive_cutoff,
    build_operators,
    number_operator,
    oracle_chi,
    oracle_moment,
    oracle_ordered_moments,
    rho_a,
    rho_b,
)
from .moments import (
    chi_for_operator,
    mean_number_B,
    mean_number_a,
    moments_from_chi,
    moments_from_grid,
    variance_combination_B,
    variance_combination_a,
)
from .quasiprob import (
    SingularDistributionError,
    default_xi_grid,
    fourier_w,
    gaussian_coefficients,
    w_a_closed,
    w_closed_grid,
)

DEFAULT_SEED = 20200416
ORDERINGS = (1.0, 0.0, -1.0)

TOL_CHI_ORACLE = 1e-8
TOL_TRANSFORM = 1e-14
TOL_FOURIER = 1e-5
TOL_NORMALIZATION = 1e-6
TOL_FD_REL = 1e-6
TOL_QUAD_REL = 1e-4
TOL_ORACLE_ABS = 1e-6
TOL_COMMUTATOR = 1e-8
TOL_RHO = 1e-10
TOL_CLOSED_VALUE = 1e-12
TOL_FFT_VALUE = 1e-6


@dataclass
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: max error {self.max_error:.3e} "
                f"(tol {self.tolerance:.1e}, {self.cases} cases){' - ' + self.detail if self.detail else ''}")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["max_error"] = float(f"{self.max_error:.6g}")
        return d


@dataclass
class Draw:
    """One random parameter point with lazily built oracle objects."""

    params: StateParams
    xis: list = field(default_factory=list)

    @cached_property
    def cutoff(self) -> int:
        return adaptive_cutoff(self.params, 1e-12)

    @cached_property
    def ops(self):
        return build_operators(self.params, self.cutoff)

    @cached_property
    def rho_a(self):
        return rho_a(self.params.n_bar, self.cutoff)

    @cached_property
    def rho_b(self):
        return rho_b(self.params, self.cutoff, self.ops)


def random_params(rng: np.random.Generator) -> StateParams:
    alpha = math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
    return StateParams.make(
        alpha=complex(alpha), r=rng.uniform(0.0, 1.0), phi=rng.uniform(0.0, 2 * math.pi),
        n_bar=rng.uniform(0.0, 1.0),
    )


def make_draws(seed: int = DEFAULT_SEED, n_draws: int = 20, n_xi: int = 10) -> list[Draw]:
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(n_draws):
        params = random_params(rng)
        xis = [complex(2.0 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform()))
               for _ in range(n_xi)]
        draws.append(Draw(params, xis))
    return draws


def _result(name, errors, tol, detail="", extra_ok=True) -> CheckResult:
    errors = [float(e) for e in errors]
    worst = max(errors) if errors else 0.0
    ok = bool(errors) and worst <= tol and extra_ok and all(math.isfinite(e) for e in errors)
    return CheckResult(name, ok, worst, tol, len(errors), detail)


def check_chi_oracle(draws: list[Draw]) -> CheckResult:
    errs = []
    untrusted = 0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UntrustedOracleWarning)
        for d in draws:
            ops = d.ops
            for i, xi in enumerate(d.xis):
                p = ORDERINGS[i % 3]
                oa = oracle_chi(d.rho_a, (ops.b_mat, ops.bdag_mat), xi, p)
                ob = oracle_chi(d.rho_b, (ops.a_mat, ops.adag_mat), xi, p)
                errs.append(abs(oa - chi_a(xi, d.params, p)))
                errs.append(abs(ob - chi_b(xi, d.params, p)))
        untrusted = sum(issubclass(w.category, UntrustedOracleWarning) for w in caught)
    return _result("chi_oracle_equivalence", errs, TOL_CHI_ORACLE,
                   f"untrusted={untrusted}", extra_ok=untrusted == 0)


def check_transform_identity(draws: list[Draw]) -> CheckResult:
    errs, explicit = [], []
    for d in draws:
        tp = transform_params(d.params)
        for i, xi in enumerate(d.xis):
            p = ORDERINGS[i % 3]
            b = chi_b(xi, d.params, p)
            errs.append(abs(b - chi_a(xi, tp, p)))
            explicit.append(abs(b - chi_b_explicit(xi, d.params, p)) / max(abs(b), 1e-300))
    worst_explicit = max(explicit)
    return _result("transform_identity", errs, TOL_TRANSFORM,
                   f"explicit form rel dev {worst_explicit:.1e}", extra_ok=worst_explicit < 1e-12)


def _fft_vs_closed(params: StateParams, p: float) -> float:
    grid = default_xi_grid(params, p)
    w = fourier_w(lambda xi: chi_a(xi, params, p), grid, p)
    eta = w.grid.mesh()
    mask = np.abs(eta) <= 3.0
    closed = w_a_closed(eta[mask], params, p)
    return float(np.abs(w.values[mask] - closed).max())


def check_fourier(draws: list[Draw]) -> CheckResult:
    errs = [_fft_vs_closed(d.params, p) for d in draws for p in (0.0, -1.0)]
    return _result("fourier_consistency", errs, TOL_FOURIER)


def check_normalization(draws: list[Draw]) -> CheckResult:
    errs, skipped = [], 0
    for d in draws:
        for basis in ("a", "B"):
            for p in ORDERINGS:
                try:
                    g = w_closed_grid(d.params, p, basis)
                except SingularDistributionError:
                    skipped += 1
                    continue
                errs.append(g.normalization_residual())
    return _result("normalization", errs, TOL_NORMALIZATION, f"singular P skipped={skipped}")


def check_three_path(draws: list[Draw]) -> CheckResult:
    """Closed form vs finite differences vs quadrature vs oracle, B moments.

    The error reported is the worst ratio error/tolerance across paths, so
    the check passes when it is at most 1.
    """
    ratios, skipped = [], 0
    worst = {"fd": 0.0, "quad": 0.0, "oracle": 0.0}
    for d in draws:
        for p in ORDERINGS:
            closed = (mean_number_B(d.params, p), variance_combination_B(d.params, p))
            fd = moments_from_chi(chi_for_operator(d.params, p, "B"))
            orc = oracle_ordered_moments(d.rho_a, d.ops.b_mat, p)
            for c, f, o in zip(closed, fd, orc):
                e_fd = abs(f - c) / abs(c)
                e_or = abs(o - c)
                worst["fd"] = max(worst["fd"], e_fd)
                worst["oracle"] = max(worst["oracle"], e_or)
                ratios += [e_fd / TOL_FD_REL, e_or / TOL_ORACLE_ABS]
            try:
                grid = w_closed_grid(d.params, p, "a")
            except SingularDistributionError:
                skipped += 1
                continue
            for c, q in zip(closed, moments_from_grid(grid)):
                e_q = abs(q - c) / abs(c)
                worst["quad"] = max(worst["quad"], e_q)
                ratios.append(e_q / TOL_QUAD_REL)
    detail = (f"fd rel {worst['fd']:.1e}, quadrature rel {worst['quad']:.1e}, "
              f"oracle abs {worst['oracle']:.1e}, singular P skipped={skipped}")
    return _result("three_path_moments", ratios, 1.0, detail)


def check_section5(draws: list[Draw]) -> CheckResult:
    errs = []
    for d in draws:
        num_a = number_operator(d.ops.a_mat)
        n1 = oracle_moment(d.rho_b, num_a, 1)
        n2 = oracle_moment(d.rho_b, num_a, 2)
        errs.append(abs(n1 - mean_number_a(d.params, 1.0)))
        errs.append(abs(n2 - n1 * n1 - variance_combination_a(d.params, 1.0)))
        # the state is thermal in B
        errs.append(abs(oracle_moment(d.rho_b, number_operator(d.ops.b_mat), 1) - d.params.n_bar))
    return _result("thermal_B_moments", errs, TOL_ORACLE_ABS)


def check_distribution_classes(draws: list[Draw]) -> CheckResult:
    """Q nonnegative, Wigner nonnegative for this family, P singular for squeezed vacuum."""
    errs = []
    singular_missed = 0
    for d in draws:
        params = d.params
        q_grid = w_closed_grid(params, -1.0, "a")
        errs.append(max(0.0, -float(q_grid.values.min())))
        q_fft = fourier_w(lambda xi: chi_a(xi, params, -1.0), default_xi_grid(params, -1.0), -1.0)
        errs.append(max(0.0, -1e-10 - float(q_fft.values.min())))
        coef = gaussian_coefficients(params, 0.0)
        # at p = 0 the determinant is exactly (2 n_bar + 1)^2 and A^2, B^2 > 0
        errs.append(abs(coef.det - (2 * params.n_bar + 1) ** 2) / coef.det)
        if not (coef.a2 > 0 and coef.b2 > 0):
            errs.append(math.inf)
        errs.append(max(0.0, -float(w_closed_grid(params, 0.0, "a").values.min())))
        sq_vac = StateParams.make(alpha=params.alpha, r=max(params.r, 1e-3), phi=params.phi)
        try:
            w_a_closed(0j, sq_vac, 1.0)
            singular_missed += 1
        except SingularDistributionError:
            pass
    return _result("distribution_classes", errs, 1e-12,
                   f"P-singularity missed={singular_missed}", extra_ok=singular_missed == 0)


def check_known_values() -> CheckResult:
    vac = StateParams()
    errs = [abs(w_a_closed(0j, vac, 0.0) - 2 / math.pi)]
    xi_grid = PhaseSpaceGrid.square(8.0, 256)
    de = math.pi / (2 * xi_grid.half_extent_re)
    # shift the output window by half a cell so that eta = 0 is a sample
    w = fourier_w(lambda xi: chi_thermal(xi, 0.0, 0.0), xi_grid, 0.0,
                  eta_center=complex(de / 2, de / 2))
    k = xi_grid.n_re // 2 - 1
    fft_err = abs(w.values[k, k] - 2 / math.pi)
    eta = PhaseSpaceGrid.square(4.0, 64).mesh()
    for n_bar in (0.0, 0.25, 1.0, 3.0):
        p_ = StateParams.make(n_bar=n_bar)
        s = 2 * n_bar + 1
        ref = 2 / (math.pi * s) * np.exp(-2 * np.abs(eta) ** 2 / s)
        errs.append(float(np.abs(w_a_closed(eta, p_, 0.0) - ref).max()))
    res = _result("known_values", errs, TOL_CLOSED_VALUE, f"fft vacuum peak dev {fft_err:.1e}",
                  extra_ok=fft_err <= TOL_FFT_VALUE)
    return res


def check_oracle_health(draws: list[Draw]) -> CheckResult:
    comm, rho_errs = [], []
    for d in draws:
        comm.append(d.ops.commutator_deviation())
        for rho in (d.rho_a, d.rho_b):
            rho_errs += [rho.hermiticity_error(), rho.trace_error(), max(0.0, -rho.min_eigenvalue())]
    worst_rho = max(rho_errs)
    return _result("oracle_health", comm, TOL_COMMUTATOR, f"rho invariants {worst_rho:.1e}",
                   extra_ok=worst_rho <= TOL_RHO)


@contextlib.contextmanager
def flipped_c_sign():
    """Test hook: evaluate the closed form with the cross term's sign reversed."""
    old = quasiprob._C_SIGN
    quasiprob._C_SIGN = -old
    try:
        yield
    finally:
        quasiprob._C_SIGN = old


@dataclass
class SuiteResult:
    seed: int
    n_draws: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "draws": self.n_draws,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


def run_suite(seed: int = DEFAULT_SEED, quick: bool = False, n_draws: int | None = None) -> SuiteResult:
    if n_draws is None:
        n_draws = 5 if quick else 20
    draws = make_draws(seed, n_draws, n_xi=5 if quick else 10)
    checks = [
        check_chi_oracle(draws),
        check_transform_identity(draws),
        check_fourier(draws),
        check_normalization(draws),
        check_three_path(draws),
        check_section5(draws),
        check_distribution_classes(draws),
        check_known_values(),
        check_oracle_health(draws),
    ]
    return SuiteResult(seed, n_draws, checks)
