"""Command-line entry point: ``qphase {grid,moments,chi-slice,verify}``.

Exit codes: 0 ok, 1 verification failure, 2 parameter/validity-domain
error, 3 I/O error, 4 oracle cutoff cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .charfn import chi_a, chi_b
from .core import DomainError, PhaseSpaceGrid, SqueezeParam, StateParams, ThermalParam, as_ordering
from .fockoracle import CutoffError, adaptive_cutoff, build_operators, oracle_ordered_moments, rho_a, rho_b
from .moments import (
    UnderResolvedGridError,
    chi_for_operator,
    closed_report,
    moments_from_chi,
    moments_from_grid,
)
from .quasiprob import (
    DEFAULT_SAMPLES,
    SingularDistributionError,
    classify_distribution,
    default_eta_grid,
    default_xi_grid,
    fourier_w,
    w_closed_grid,
)
from .verification import DEFAULT_SEED, TOL_FD_REL, TOL_ORACLE_ABS, TOL_QUAD_REL, flipped_c_sign, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_IO, EXIT_ORACLE = 0, 1, 2, 3, 4

DEFAULTS = {
    "alpha_re": 0.0,
    "alpha_im": 0.0,
    "r": 0.0,
    "phi": 0.0,
    "nbar": None,
    "theta": None,
    "p": 0.0,
    "basis": "a",
    "extent": None,
    "samples": None,
    "out": "-",
    "format": "csv",
    "method": "closed",
    "angle": 0.0,
    "verify": False,
    "seed": DEFAULT_SEED,
    "quick": False,
    "mutate_c_sign": False,
}


@dataclass
class RunConfig:
    command: str
    params: StateParams
    p: float
    basis: str = "a"
    extent: float | None = None
    samples: int | None = None
    out: str = "-"
    format: str = "csv"
    method: str = "closed"
    angle: float = 0.0
    verify: bool = False
    seed: int = DEFAULT_SEED
    quick: bool = False
    mutate_c_sign: bool = False

    @classmethod
    def from_options(cls, command: str, opts: dict) -> "RunConfig":
        if opts.get("nbar") is not None and opts.get("theta") is not None:
            raise DomainError("--nbar and --theta are mutually exclusive")
        if opts.get("theta") is not None:
            thermal = ThermalParam.from_theta(opts["theta"])
        else:
            thermal = ThermalParam(opts.get("nbar") or 0.0)
        params = StateParams(
            complex(opts["alpha_re"], opts["alpha_im"]),
            SqueezeParam(opts["r"], opts["phi"]),
            thermal,
        )
        if opts["basis"] not in ("a", "B"):
            raise DomainError("--basis must be 'a' or 'B'")
        if opts["format"] not in ("csv", "json"):
            raise DomainError("--format must be 'csv' or 'json'")
        if opts["method"] not in ("closed", "fft"):
            raise DomainError("--method must be 'closed' or 'fft'")
        samples = opts.get("samples")
        if samples is not None:
            samples = int(samples)
            if samples < 8 or samples & (samples - 1):
                raise DomainError("--samples must be a power of two >= 8")
        extent = opts.get("extent")
        if extent is not None and not (math.isfinite(extent) and extent > 0):
            raise DomainError("--extent must be positive")
        return cls(
            command=command,
            params=params,
            p=as_ordering(opts["p"]),
            basis=opts["basis"],
            extent=extent,
            samples=samples,
            out=opts["out"],
            format=opts["format"],
            method=opts["method"],
            angle=float(opts["angle"]),
            verify=bool(opts["verify"]),
            seed=int(opts["seed"]),
            quick=bool(opts["quick"]),
            mutate_c_sign=bool(opts["mutate_c_sign"]),
        )

    def metadata(self) -> dict:
        return {
            "version": __version__,
            "command": self.command,
            "params": self.params.as_dict(),
            "p": self.p,
            "basis": self.basis,
            "distribution": classify_distribution(self.p),
        }


def _write(text: str, out: str) -> None:
    if out in ("-", ""):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv(header: list[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format(float(v), ".17g") for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _chi(cfg: RunConfig):
    fn = chi_a if cfg.basis == "a" else chi_b
    return lambda xi: fn(xi, cfg.params, cfg.p)


def cmd_grid(cfg: RunConfig) -> int:
    if cfg.method == "fft":
        xi_grid = default_xi_grid(cfg.params, cfg.p, cfg.basis, n=cfg.samples or DEFAULT_SAMPLES)
        wg = w_closed_grid(cfg.params, cfg.p, cfg.basis)  # validity + peak location
        w = fourier_w(_chi(cfg), xi_grid, cfg.p, eta_center=wg.grid.center)
    else:
        if cfg.extent is not None:
            grid = PhaseSpaceGrid.square(cfg.extent, cfg.samples or DEFAULT_SAMPLES)
        else:
            grid = default_eta_grid(cfg.params, cfg.p, cfg.basis, n=cfg.samples)
        w = w_closed_grid(cfg.params, cfg.p, cfg.basis, grid)
    eta = w.grid.mesh()
    e1 = eta.real.ravel()
    e2 = eta.imag.ravel()
    vals = w.values.ravel()
    if cfg.format == "csv":
        text = _csv(["e1", "e2", "W"], zip(e1, e2, vals))
    else:
        meta = cfg.metadata()
        meta.update({
            "method": cfg.method,
            "grid": w.grid.as_dict(),
            "normalization_residual": w.normalization_residual(),
            "min_value": float(vals.min()),
            "columns": ["e1", "e2", "W"],
        })
        data = [[float(a), float(b), float(c)] for a, b, c in zip(e1, e2, vals)]
        text = _json({"metadata": meta, "data": data})
    _write(text, cfg.out)
    return EXIT_OK


def _rel(value: float, ref: float) -> float:
    # relative deviation, absolute for |ref| < 1 (vacuum means vanish at p = 1)
    return abs(value - ref) / max(abs(ref), 1.0)


def _moment_verification(cfg: RunConfig, operator: str, closed) -> tuple[dict, bool]:
    out: dict = {}
    ok = True
    fd = moments_from_chi(chi_for_operator(cfg.params, cfg.p, operator))
    dev = [_rel(f, c) for f, c in zip(fd, (closed.mean, closed.second_combination))]
    out["finite_difference"] = {"mean": fd[0], "variance": fd[1], "rel_dev_mean": dev[0],
                                "rel_dev_variance": dev[1], "tolerance": TOL_FD_REL}
    ok &= max(dev) <= TOL_FD_REL
    try:
        g = w_closed_grid(cfg.params, cfg.p, cfg.basis)
        q = moments_from_grid(g)
        dev = [_rel(v, c) for v, c in zip(q, (closed.mean, closed.second_combination))]
        out["quadrature"] = {"mean": q[0], "variance": q[1], "rel_dev_mean": dev[0],
                             "rel_dev_variance": dev[1], "tolerance": TOL_QUAD_REL}
        ok &= max(dev) <= TOL_QUAD_REL
    except (SingularDistributionError, UnderResolvedGridError) as exc:
        out["quadrature"] = {"skipped": str(exc)}
    n = adaptive_cutoff(cfg.params, 1e-12)
    ops = build_operators(cfg.params, n)
    if cfg.basis == "a":
        o = oracle_ordered_moments(rho_a(cfg.params.n_bar, n), ops.b_mat, cfg.p)
    else:
        o = oracle_ordered_moments(rho_b(cfg.params, n, ops), ops.a_mat, cfg.p)
    dev = [abs(v - c) for v, c in zip(o, (closed.mean, closed.second_combination))]
    out["oracle"] = {"mean": o[0], "variance": o[1], "abs_dev_mean": dev[0],
                     "abs_dev_variance": dev[1], "tolerance": TOL_ORACLE_ABS, "cutoff": n}
    ok &= max(dev) <= TOL_ORACLE_ABS
    out["passed"] = bool(ok)
    return out, ok


def cmd_moments(cfg: RunConfig) -> int:
    # basis a (chi_a) counts B photons; basis B (chi_b) counts a photons
    operator = "B" if cfg.basis == "a" else "a"
    rep = closed_report(cfg.params, cfg.p, operator)
    data = rep.as_dict()
    data["operator"] = operator
    ok = True
    if cfg.verify:
        data["verification"], ok = _moment_verification(cfg, operator, rep)
    _write(_json({"metadata": cfg.metadata(), "data": data}), cfg.out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_chi_slice(cfg: RunConfig) -> int:
    extent = 3.0 if cfg.extent is None else cfg.extent
    n = cfg.samples or DEFAULT_SAMPLES
    t = -extent + (np.arange(n) + 0.5) * (2 * extent / n)
    xi = t * complex(math.cos(cfg.angle), math.sin(cfg.angle))
    chi = np.asarray(_chi(cfg)(xi), dtype=complex)
    cols = ["t", "xi_re", "xi_im", "chi_re", "chi_im"]
    rows = list(zip(t, xi.real, xi.imag, chi.real, chi.imag))
    if cfg.format == "csv":
        text = _csv(cols, rows)
    else:
        meta = cfg.metadata()
        meta.update({"angle": cfg.angle, "extent": extent, "columns": cols})
        text = _json({"metadata": meta, "data": [[float(v) for v in row] for row in rows]})
    _write(text, cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.mutate_c_sign:
        with flipped_c_sign():
            result = run_suite(cfg.seed, quick=cfg.quick)
    else:
        result = run_suite(cfg.seed, quick=cfg.quick)
    for c in result.checks:
        print(c.line(), file=sys.stderr)
    summary = result.as_dict()
    summary["version"] = __version__
    summary["quick"] = cfg.quick
    _write(_json(summary), cfg.out)
    return EXIT_OK if result.passed else EXIT_VERIFY


COMMANDS = {"grid": cmd_grid, "moments": cmd_moments, "chi-slice": cmd_chi_slice, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with option values; flags override it")
    common.add_argument("--alpha-re", type=float)
    common.add_argument("--alpha-im", type=float)
    common.add_argument("--r", type=float, help="squeeze magnitude")
    common.add_argument("--phi", type=float, help="squeeze phase (radians)")
    thermal = common.add_mutually_exclusive_group()
    thermal.add_argument("--nbar", type=float, help="mean thermal occupation")
    thermal.add_argument("--theta", type=float, help="beta * hbar * omega")
    common.add_argument("--p", type=float, help="ordering: 1 normal (P), 0 symmetric (Wigner), -1 anti-normal (Q)")
    common.add_argument("--basis", choices=("a", "B"),
                        help="a: chi_a / W_a (thermal in a); B: chi_B / W_B (thermal in B)")
    common.add_argument("--extent", type=float, help="half extent of the sampled window")
    common.add_argument("--samples", type=int, help="samples per axis (power of two)")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="qphase", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qphase {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    g = sub.add_parser("grid", parents=[common], help="quasi-probability grid W(eta, p)")
    g.add_argument("--method", choices=("closed", "fft"))
    m = sub.add_parser("moments", parents=[common], help="mean number and variance report")
    m.add_argument("--verify", action="store_true", default=None,
                   help="add finite-difference, quadrature and Fock-oracle cross values")
    c = sub.add_parser("chi-slice", parents=[common], help="characteristic function along a ray")
    c.add_argument("--angle", type=float, help="ray direction in the xi plane (radians)")
    v = sub.add_parser("verify", parents=[common], help="run the property suite")
    v.add_argument("--quick", action="store_true", default=None, help="5 draws instead of 20")
    v.add_argument("--mutate-c-sign", action="store_true", default=None, help=argparse.SUPPRESS)
    return parser


def resolve_options(ns: argparse.Namespace) -> dict:
    opts = dict(DEFAULTS)
    if ns.config:
        with open(ns.config, encoding="utf-8") as fh:
            file_opts = json.load(fh)
        unknown = set(file_opts) - set(DEFAULTS)
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        opts.update(file_opts)
    given = {k: v for k, v in vars(ns).items() if k in DEFAULTS and v is not None}
    if "nbar" in given:
        opts["theta"] = None
    if "theta" in given:
        opts["nbar"] = None
    opts.update(given)
    return opts


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        opts = resolve_options(ns)
        cfg = RunConfig.from_options(ns.command, opts)
        return COMMANDS[ns.command](cfg)
    except CutoffError as exc:
        print(f"qphase: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except OSError as exc:
        print(f"qphase: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:  # parameter domain, singular distribution, grid support
        print(f"qphase: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
