"""Command-line harness: verification suites, kernel/profile emission, tables.

Subcommands
-----------
kernel      emit (r, value) samples of nu/gamma/rho/w as CSV
transform   read a profile CSV, apply the heat multiplier, write it back out
spherheat   spherical-heat limit report (JSON)
isometry    isometry limit report (JSON)
inversion   inversion limit report (JSON)
suite       named invariant suite; exit 0 iff all checks pass
table       convergence / kernel / profile CSV tables

Configuration is a flat key=value text file (--config) with flag overrides;
every output echoes the resolved config for provenance.  All quadrature
orders are fixed, so identical configs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import kernels, limits, spectral, spherical, trigexpr
from .errors import ConfigError

DEFAULT_LAMBDA_MAX = 8.0 / math.sqrt(0.5)


@dataclass(frozen=True)
class RunConfig:
    n: int = 1
    t: float = 1.0
    eps: float = 0.3
    A: float = 1.0
    detour: float = 0.5
    rmax: float = 16.0
    lambda_max: float = DEFAULT_LAMBDA_MAX
    num_lambda: int = 400
    lam: float = 1.0
    tol: float = 1e-6
    seed: int = 0
    suite: str = "all"
    out: str | None = None

    def validate(self) -> "RunConfig":
        if self.n < 0:
            raise ConfigError("n must be nonnegative")
        if self.t <= 0:
            raise ConfigError("t must be positive")
        if not (0 < self.eps < self.detour < self.A < math.pi):
            raise ConfigError("need 0 < eps < detour < A < pi")
        if self.tol <= 0:
            raise ConfigError("tolerances must be positive")
        if self.lambda_max <= 0 or self.num_lambda < 0 or self.rmax <= 0:
            raise ConfigError("grid parameters must be positive")
        return self

    def echo(self) -> str:
        # omit the output path so reruns to different files stay
        # byte-identical
        items = sorted((k, v) for k, v in asdict(self).items() if k != "out")
        return " ".join(f"{k}={v}" for k, v in items)


_FIELD_TYPES = {
    "n": int, "num_lambda": int, "seed": int, "suite": str, "out": str,
    "t": float, "eps": float, "A": float, "detour": float, "rmax": float,
    "lambda_max": float, "lam": float, "tol": float,
}


def load_config(path: str) -> dict:
    """Flat key=value file; '#' comments and blank lines ignored."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            if k not in _FIELD_TYPES:
                raise ConfigError(f"unknown config key: {k}")
            out[k] = _FIELD_TYPES[k](v)
    return out


def _build_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = replace(cfg, **load_config(args.config))
    overrides = {}
    for name in _FIELD_TYPES:
        val = getattr(args, name, None)
        if val is not None:
            overrides[name] = val
    return replace(cfg, **overrides).validate()


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def _write_json(doc: dict, out: str | None):
    text = json.dumps(_json_safe(doc), sort_keys=True, indent=2)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _open_out(out: str | None):
    return open(out, "w", newline="", encoding="utf-8") if out else sys.stdout


# ---------------------------------------------------------------------------
# subcommands


def cmd_kernel(args) -> int:
    cfg = _build_config(args)
    ks = kernels.build_kernels(kernels.ModelParams(cfg.n, cfg.t))
    table = {"nu": ks.nu_t, "gamma": ks.gamma_t, "rho": ks.rho_t, "w": ks.w_t}
    kern = table[args.flavor]
    r = np.linspace(0.0, cfg.rmax, args.num_r)
    if args.flavor in ("nu", "rho"):
        # grid guard: drop samples within eps of a pole at m*pi.  nu is
        # regular at the origin, but the wrapped translates of rho are not,
        # so for rho the origin is guarded too.
        m = np.round(r / math.pi)
        keep = np.abs(r - m * math.pi) > cfg.eps
        if args.flavor == "nu":
            keep |= m == 0
        r = r[keep]
    z = r + 1j * args.imag if args.complex else r
    vals = kern(z) if args.flavor == "rho" else kern.evaluate(z)
    vals = np.atleast_1d(np.asarray(vals, dtype=complex))
    fh = _open_out(cfg.out)
    try:
        w = csv.writer(fh)
        fh.write(f"# {cfg.echo()} flavor={args.flavor}\r\n")
        if args.complex:
            w.writerow(["re_r", "im_r", "re_v", "im_v"])
            for zz, vv in zip(np.atleast_1d(z), vals):
                w.writerow([repr(float(np.real(zz))), repr(float(np.imag(zz))),
                            repr(float(vv.real)), repr(float(vv.imag))])
        else:
            w.writerow(["r", "value"])
            for rr, vv in zip(r, vals):
                w.writerow([repr(float(rr)), repr(float(vv.real))])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_transform(args) -> int:
    cfg = _build_config(args)
    p = spectral.profile_from_csv(args.infile)
    q = spectral.heat_multiplier(p, cfg.t)
    spectral.profile_to_csv(q, cfg.out or args.infile + ".out.csv")
    report = {
        "config": cfg.echo(),
        "n": p.n,
        "plancherel_norm_in": spectral.plancherel_norm(p),
        "plancherel_norm_out": spectral.plancherel_norm(q),
    }
    print(json.dumps(_json_safe(report), sort_keys=True))
    return 0


def cmd_spherheat(args) -> int:
    cfg = _build_config(args)
    region = limits.PoleRegion(cfg.eps, cfg.A)
    report = limits.spher_heat_limit_check(
        cfg.lam, cfg.t, cfg.n, region=region, detour_radius=cfg.detour,
        tolerance=cfg.tol)
    doc = report.as_dict()
    doc["params"]["config"] = cfg.echo()
    _write_json(doc, cfg.out)
    return 0 if report.residual <= cfg.tol else 1


def _default_profile(cfg: RunConfig) -> spectral.SpectralProfile:
    grid, weights = spectral.gauss_legendre_grid(cfg.lambda_max,
                                                 cfg.num_lambda)
    return spectral.profile_from_fhat(
        lambda lam: np.exp(-lam ** 2 / 4.0), cfg.n, grid, weights)


def cmd_isometry(args) -> int:
    cfg = _build_config(args)
    region = limits.PoleRegion(cfg.eps, cfg.A)
    p = _default_profile(cfg)
    report = limits.isometry_limit_check(
        p, cfg.t, region=region, detour_radius=cfg.detour,
        tolerance=max(cfg.tol, 1e-4))
    doc = report.as_dict()
    doc["params"]["config"] = cfg.echo()
    _write_json(doc, cfg.out)
    return 0 if report.residual <= report.tolerance else 1


def cmd_inversion(args) -> int:
    cfg = _build_config(args)
    region = limits.PoleRegion(cfg.eps, cfg.A)
    p = _default_profile(cfg)
    report = limits.inversion_limit_check(
        p, cfg.t, region=region, detour_radius=cfg.detour,
        tolerance=max(cfg.tol, 1e-4))
    doc = report.as_dict()
    doc["params"]["config"] = cfg.echo()
    _write_json(doc, cfg.out)
    return 0 if report.residual <= report.tolerance else 1


# ---------------------------------------------------------------------------
# suites


def _suite_symbolic(cfg: RunConfig) -> list[dict]:
    checks = []
    for n in (1, 2):
        for flavor in (trigexpr.CIRCULAR, trigexpr.HYPERBOLIC):
            f = kernels.gaussian_expr(1.0, flavor)
            for op in ("adjoint", "forward"):
                res = kernels.verify_intertwining(n, flavor, f, op)
                checks.append(_check(f"intertwine_{op}_{flavor}_n{n}",
                                     res, 1e-9))
    return checks


def _suite_kernels(cfg: RunConfig) -> list[dict]:
    checks = []
    for n in (1, 2):
        w = kernels.flat_weight(n, cfg.t)
        nu2 = kernels.unwrapped_heat_kernel(n, 2.0 * cfg.t)
        ok = trigexpr.allclose(kernels.apply_adjoint_shift(w, n), nu2)
        checks.append(_check(f"Dstar_w_equals_nu2t_n{n}", 0.0 if ok else 1.0,
                             0.5))
        checks.append(_check(
            f"heat_equation_n{n}",
            kernels.heat_equation_residual(n, cfg.t, np.linspace(0.3, 3.0, 20)),
            1e-5))
    return checks


def _suite_spectral(cfg: RunConfig) -> list[dict]:
    checks = []
    c1 = spectral.calibrate_plancherel(1)
    checks.append(_check("C_1_matches_closed_form",
                         abs(c1 - (2 * math.pi) ** -2) / (2 * math.pi) ** -2,
                         1e-10))
    p = _default_profile(cfg)
    g = spectral.heat_multiplier(p, cfg.t)
    norm_direct = spectral.plancherel_norm(g)
    twice = spectral.heat_multiplier(spectral.heat_multiplier(p, cfg.t / 2),
                                     cfg.t / 2)
    checks.append(_check("semigroup_law",
                         float(np.max(np.abs(g.values - twice.values))),
                         1e-12))
    checks.append(_check("norm_positive", 0.0 if norm_direct > 0 else 1.0,
                         0.5))
    return checks


def _suite_isometry(cfg: RunConfig) -> list[dict]:
    region = limits.PoleRegion(cfg.eps, cfg.A)
    rep = limits.isometry_limit_check(_default_profile(cfg), cfg.t,
                                      region=region,
                                      detour_radius=cfg.detour)
    return [_check("isometry_residual", rep.residual, 1e-4)]


def _suite_inversion(cfg: RunConfig) -> list[dict]:
    region = limits.PoleRegion(cfg.eps, cfg.A)
    rep = limits.inversion_limit_check(_default_profile(cfg), cfg.t,
                                       region=region,
                                       detour_radius=cfg.detour)
    return [_check("inversion_residual", rep.residual, 1e-4)]


def _suite_surjectivity(cfg: RunConfig) -> list[dict]:
    p = _default_profile(cfg)
    F = spectral.heat_multiplier(p, cfg.t)
    rep = limits.surjectivity_diagnostic(F, cfg.t)
    err = float(np.max(np.abs(rep.recovered.values - p.values)))
    return [
        _check("surjectivity_finite", 0.0 if rep.verdict == "finite" else 1.0,
               0.5),
        _check("surjectivity_recovery", err, 1e-6),
    ]


_SUITES = {
    "symbolic": _suite_symbolic,
    "kernels": _suite_kernels,
    "spectral": _suite_spectral,
    "isometry": _suite_isometry,
    "inversion": _suite_inversion,
    "surjectivity": _suite_surjectivity,
}


def _check(name: str, value: float, tol: float) -> dict:
    return {"name": name, "value": float(value), "tol": tol,
            "passed": bool(value <= tol)}


def run_suite(name: str, cfg: RunConfig) -> tuple[int, dict]:
    if name != "all" and name not in _SUITES:
        raise ConfigError(f"unknown suite: {name}")
    names = list(_SUITES) if name == "all" else [name]
    checks = []
    for nm in names:
        checks.extend(_SUITES[nm](cfg))
    passed = all(c["passed"] for c in checks)
    report = {"suite": name, "config": cfg.echo(), "checks": checks,
              "passed": passed}
    return (0 if passed else 1), report


def cmd_suite(args) -> int:
    cfg = _build_config(args)
    code, report = run_suite(cfg.suite, cfg)
    _write_json(report, cfg.out)
    return code


# ---------------------------------------------------------------------------
# tables


def emit_table(kind: str, cfg: RunConfig) -> int:
    fh = _open_out(cfg.out)
    try:
        w = csv.writer(fh)
        fh.write(f"# {cfg.echo()} kind={kind}\r\n")
        if kind == "convergence":
            region = limits.PoleRegion(cfg.eps, cfg.A)
            rep = limits.spher_heat_limit_check(cfg.lam, cfg.t, cfg.n,
                                                region=region,
                                                detour_radius=cfg.detour)
            w.writerow(["j", "re_R", "im_R", "re_I", "im_I", "residual"])
            for j, (R, v) in enumerate(zip(rep.R_sequence, rep.values)):
                w.writerow([j, repr(float(R.real)), repr(float(R.imag)),
                            repr(float(v.real)), repr(float(v.imag)),
                            repr(float(abs(v - rep.target)))])
        elif kind == "kernel":
            nu = kernels.unwrapped_heat_kernel(cfg.n, cfg.t)
            r = np.linspace(0.0, cfg.rmax, 301)
            m = np.round(r / math.pi)
            r = r[(m == 0) | (np.abs(r - m * math.pi) > cfg.eps)]
            w.writerow(["r", "value"])
            for rr, vv in zip(r, np.real(nu.evaluate(r))):
                w.writerow([repr(float(rr)), repr(float(vv))])
        elif kind == "profile":
            p = _default_profile(cfg)
            w.writerow(["lambda", "re_fhat", "im_fhat"])
            for lam, v in zip(p.grid, p.values):
                w.writerow([repr(float(lam)), repr(float(v.real)),
                            repr(float(v.imag))])
        else:
            raise ConfigError(f"unknown table kind: {kind}")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_table(args) -> int:
    cfg = _build_config(args)
    return emit_table(args.kind, cfg)


# ---------------------------------------------------------------------------
# parser


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--config", help="flat key=value config file")
    sp.add_argument("--n", type=int)
    sp.add_argument("--t", type=float)
    sp.add_argument("--eps", dest="eps", type=float)
    sp.add_argument("--A", dest="A", type=float)
    sp.add_argument("--detour", dest="detour", type=float)
    sp.add_argument("--rmax", dest="rmax", type=float)
    sp.add_argument("--lambda-max", dest="lambda_max", type=float)
    sp.add_argument("--num-lambda", dest="num_lambda", type=int)
    sp.add_argument("--lambda", dest="lam", type=float)
    sp.add_argument("--tol", type=float)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", dest="out")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hyperheat",
        description="Heat-kernel analysis on odd-dimensional hyperbolic "
                    "spaces: kernels, transforms, and certified limits.")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="emit kernel samples as CSV")
    k.add_argument("--flavor", choices=["nu", "gamma", "rho", "w"],
                   default="nu")
    k.add_argument("--emit", choices=["csv"], default="csv")
    k.add_argument("--complex", action="store_true")
    k.add_argument("--imag", type=float, default=0.3,
                   help="imaginary offset for --complex sampling")
    k.add_argument("--num-r", dest="num_r", type=int, default=301)
    _add_common(k)
    k.set_defaults(func=cmd_kernel)

    tr = sub.add_parser("transform", help="heat-multiply a profile CSV")
    tr.add_argument("--in", dest="infile", required=True)
    _add_common(tr)
    tr.set_defaults(func=cmd_transform)

    sh = sub.add_parser("spherheat", help="spherical-heat limit report")
    _add_common(sh)
    sh.set_defaults(func=cmd_spherheat)

    iso = sub.add_parser("isometry", help="isometry limit report")
    _add_common(iso)
    iso.set_defaults(func=cmd_isometry)

    inv = sub.add_parser("inversion", help="inversion limit report")
    _add_common(inv)
    inv.set_defaults(func=cmd_inversion)

    su = sub.add_parser("suite", help="run a named verification suite")
    su.add_argument("--suite", dest="suite",
                    choices=sorted(_SUITES) + ["all"])
    _add_common(su)
    su.set_defaults(func=cmd_suite)

    tb = sub.add_parser("table", help="emit a CSV table")
    tb.add_argument("--kind", choices=["convergence", "kernel", "profile"],
                    required=True)
    _add_common(tb)
    tb.set_defaults(func=cmd_table)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
