"""relmarginal command line: CSV grids and JSON verification reports.

    relmarginal spectrum --m0 0 --lambda-max 10
    relmarginal marginal --beta 0.6 --plane position --grid -3:3:21
    relmarginal verify --check covariance --beta 0.6 --n 0
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DegenerateProjectionError, InvalidVelocityError, RelMarginalError
from .marginal import Grid, MarginalParams, MarginalParams1D, marginal_1d, plane_points
from .mathcore import QuadratureSpec, Scheme, integrate_2d
from .oscillator import (
    degeneracy,
    mass_squared,
    phi_momentum,
    psi_boosted,
    psi_lightcone,
    subsidiary_residual,
    unboost_zt,
)
from .relativity import (
    BoostConvention,
    Method,
    boosted_marginal,
    effective_beta,
    galileo_marginal_shift,
    verify_covariance,
)
from .wigner import (
    galileo_shift,
    ho_ground,
    wigner_eval,
    wigner_ground,
    wigner_numeric,
    wigner_total,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CHECKS = ("covariance", "normalization", "limits", "galileo", "subsidiary")

DEFAULTS = {
    "beta": 0.0,
    "n": 0,
    "a": 0,
    "b": 0,
    "k": 0,
    "m0": 0.0,
    "lambda_max": 10,
    "sigma": None,
    "plane": "position",
    "grid": None,
    "quad_scheme": "gauss-legendre",
    "quad_order": 96,
    "truncation": 8.0,
    "seed": 0,
    "out": None,
    "format": "csv",
    "precision": 17,
    "boost_convention": "eq2.2",
    "tol": None,
    "method": None,
    "check": "all",
    "space": "position",
    "v": 1.0,
    "t": 0.0,
    "mu": 0.0,
    "nu": 1.0,
    "h": 1e-4,
    "timing": False,
}


class UsageError(Exception):
    pass


def format_float(x: float, precision: int) -> str:
    """Shortest round-trip repr at full precision, ``%.{p}g`` otherwise."""
    x = float(x)
    if precision >= 17:
        return repr(x)
    return f"{x:.{precision}g}"


def _round(x: float, precision: int) -> float:
    return float(format_float(x, precision))


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    config = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        config[key] = value
    return config


def _coerce(key, value):
    default = DEFAULTS[key]
    if key == "grid":
        return value if isinstance(value, list) else [g.strip() for g in str(value).split(",")]
    if key == "timing":
        return value if isinstance(value, bool) else str(value).lower() in ("1", "true", "yes")
    if isinstance(default, bool):
        return bool(value)
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float) or key == "tol":
        return float(value)
    return value


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)

    def __getattr__(self, key):
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def validate(self):
        try:
            effective_beta(self.beta, self.boost_convention)
        except InvalidVelocityError as exc:
            raise UsageError(str(exc)) from None
        if not 6 <= self.precision <= 17:
            raise UsageError("--precision must lie in [6, 17]")
        for key in ("n", "a", "b", "k", "lambda_max"):
            if self.values[key] < 0:
                raise UsageError(f"--{key.replace('_', '-')} must be non-negative")
        if self.m0 < 0:
            raise UsageError("--m0 must be non-negative")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        try:
            BoostConvention(self.boost_convention)
            Scheme(self.quad_scheme)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    @property
    def beta_eff(self) -> float:
        return effective_beta(self.beta, self.boost_convention)

    @property
    def spec(self) -> QuadratureSpec:
        try:
            return QuadratureSpec(Scheme(self.quad_scheme), self.quad_order, self.truncation)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def grids(self, count: int, default: str = "-3:3:21") -> list[Grid]:
        texts = self.grid or [default]
        try:
            grids = [Grid.parse(t) for t in texts]
        except ValueError as exc:
            raise UsageError(f"bad --grid {texts}: expected min:max:count with count >= 2 ({exc})") from None
        if len(grids) == 1:
            grids = grids * count
        if len(grids) != count:
            raise UsageError(f"expected 1 or {count} --grid specifications, got {len(grids)}")
        return grids

    def params(self) -> MarginalParams:
        if self.sigma is not None:
            try:
                return MarginalParams.from_sigma(str(self.sigma).split(","))
            except (ValueError, RelMarginalError) as exc:
                raise UsageError(f"bad --sigma: {exc}") from None
        if self.plane == "position":
            return MarginalParams.position_plane()
        if self.plane == "momentum":
            return MarginalParams.momentum_plane()
        if self.plane == "random":
            return MarginalParams.random(self.seed)
        raise UsageError(f"unknown --plane {self.plane!r}")

    def echo(self) -> dict:
        out = {"command": self.command}
        for key in sorted(self.values):
            if key == "timing":
                continue
            out[key] = self.values[key]
        return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    a = common.add_argument
    a("--config", help="key = value file; flags override it")
    a("--beta", type=float, help="velocity parameter, |beta| < 1")
    a("--n", type=int, help="longitudinal quantum number")
    a("--a", type=int)
    a("--b", type=int)
    a("--k", type=int)
    a("--sigma", help="mu1,nu1,nu2,mu2,zeta1,eta1,eta2,zeta2")
    a("--plane", choices=["position", "momentum", "random"])
    a("--grid", action="append", metavar="MIN:MAX:COUNT", help="per axis, repeatable")
    a("--quad-scheme", choices=[s.value for s in Scheme])
    a("--quad-order", type=int)
    a("--truncation", type=float)
    a("--seed", type=int)
    a("--out")
    a("--format", choices=["csv", "json"])
    a("--precision", type=int)
    a("--boost-convention", choices=[c.value for c in BoostConvention])
    a("--tol", type=float)
    a("--method", choices=[m.value for m in Method])
    a("--timing", action="store_true", default=None, help="record runtime_ms in reports")

    parser = argparse.ArgumentParser(prog="relmarginal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="mass spectrum M^2 and k=0 degeneracy")
    p.add_argument("--m0", type=float)
    p.add_argument("--lambda-max", type=int)

    p = sub.add_parser("wavefunction", parents=[common], help="psi on a (z, t) grid or phi on (p_u, p_v)")
    p.add_argument("--space", choices=["position", "momentum"])

    sub.add_parser("wigner", parents=[common], help="Wigner function on a 4D (u, v, p_u, p_v) grid")
    sub.add_parser("marginal", parents=[common], help="marginal w(U, V) on a 2D grid")

    p = sub.add_parser("verify", parents=[common], help="run verification checks, emit JSON")
    p.add_argument("--check", choices=[*CHECKS, "all"])
    p.add_argument("--v", type=float, help="Galileo velocity")
    p.add_argument("--t", type=float, help="Galileo time")
    p.add_argument("--mu", type=float)
    p.add_argument("--nu", type=float)
    p.add_argument("--h", type=float, help="finite-difference step")
    return parser


def resolve(args: argparse.Namespace) -> RunConfig:
    values = dict(DEFAULTS)
    if args.config:
        try:
            file_values = read_config(args.config)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}") from None
        for key, value in file_values.items():
            try:
                values[key] = _coerce(key, value)
            except ValueError:
                raise UsageError(f"bad value for {key!r} in config: {value!r}") from None
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    config = RunConfig(args.command, values)
    config.validate()
    return config


# -- output ---------------------------------------------------------------


def write_table(config: RunConfig, columns, rows) -> str:
    p = config.precision
    if config.format == "json":
        body = {"columns": list(columns), "rows": [[_cell(v, p, json_mode=True) for v in row] for row in rows]}
        return json.dumps(body, indent=2) + "\n"
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_cell(v, p) for v in row) + "\n")
    return buf.getvalue()


def _cell(value, precision, json_mode=False):
    if isinstance(value, (int, np.integer)):
        return int(value) if json_mode else str(int(value))
    return _round(value, precision) if json_mode else format_float(value, precision)


def emit(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- data commands ----------------------------------------------------------


def cmd_spectrum(config: RunConfig):
    rows = [
        (lam, mass_squared(config.m0, lam, 0, 0, 0), degeneracy(lam))
        for lam in range(config.lambda_max + 1)
    ]
    if config.m0 == int(config.m0):
        rows = [(lam, int(m2), deg) for lam, m2, deg in rows]
    emit(config, write_table(config, ("lambda", "mass_squared", "degeneracy"), rows))
    return EXIT_OK


def cmd_wavefunction(config: RunConfig):
    gx, gy = config.grids(2)
    beta = config.beta_eff
    rows = []
    if config.space == "position":
        columns = ("z", "t", "psi")
        for z in gx.axis():
            for t in gy.axis():
                rows.append((z, t, float(psi_boosted(config.n, beta, z, t))))
    else:
        columns = ("p_u", "p_v", "phi")
        for pu in gx.axis():
            for pv in gy.axis():
                rows.append((pu, pv, phi_momentum(config.n, beta, pu, pv, config.spec)))
    emit(config, write_table(config, columns, rows))
    return EXIT_OK


def cmd_wigner(config: RunConfig):
    axes = [g.axis() for g in config.grids(4, default="-2:2:5")]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
    beta = config.beta_eff
    method = Method(config.method or ("analytic" if config.n == 0 else "numeric"))
    if method is Method.ANALYTIC:
        if config.n != 0:
            raise UsageError("analytic Wigner functions exist only for n = 0")
        vals = wigner_eval(wigner_ground(beta), pts)
    else:
        vals = wigner_numeric(config.n, beta, pts, config.spec)
    rows = [(*xi, w) for xi, w in zip(pts.tolist(), np.atleast_1d(vals).tolist())]
    emit(config, write_table(config, ("u", "v", "p_u", "p_v", "W"), rows))
    return EXIT_OK


def cmd_marginal(config: RunConfig):
    gu, gv = config.grids(2)
    params = config.params()
    params.check_rank()
    method = Method(config.method or ("analytic" if config.n == 0 else "numeric"))
    if method is Method.ANALYTIC and config.n != 0:
        raise UsageError("analytic marginals exist only for n = 0; use --method numeric")
    pts = plane_points(gu, gv)
    w = boosted_marginal(config.n, config.beta_eff, params, pts, method)
    rows = [(U, V, val) for (U, V), val in zip(pts.reshape(-1, 2).tolist(), w.ravel().tolist())]
    emit(config, write_table(config, ("U", "V", "w"), rows))
    return EXIT_OK


# -- verification -------------------------------------------------------------


def _tol(config, default):
    return config.tol if config.tol is not None else default


def check_covariance(config):
    params = config.params()
    n = config.n
    method = Method(config.method or ("analytic" if n == 0 else "numeric"))
    (grid,) = config.grids(1, default="-3:3:21" if method is Method.ANALYTIC else "-3:3:9")
    tol = _tol(config, 1e-10 if method is Method.ANALYTIC else 1e-5)
    report = verify_covariance(n, config.beta_eff, params, grid, tol, method)
    return {"n": n, "beta": config.beta, "sigma": params.as_dict(), "grid": str(grid), "method": method.value}, report.max_abs_deviation, tol


def check_normalization(config):
    n, beta, spec = config.n, config.beta_eff, config.spec
    # rest-frame box mapped into the lab (z, t) plane
    g = 1.0 / math.sqrt(1.0 - beta * beta)
    box = np.array([[g, g * beta], [g * beta, g]])
    psi_norm = integrate_2d(lambda z, t: psi_boosted(n, beta, z, t) ** 2, spec, transform=box)
    w_norm = wigner_total(n, beta, spec)
    dev = max(abs(psi_norm - 1.0), abs(w_norm - 1.0))
    params = {"n": n, "beta": config.beta, "psi_norm": psi_norm, "wigner_norm": w_norm}
    return params, dev, _tol(config, 1e-6)


def check_limits(config):
    n, beta = config.n, config.beta_eff
    method = Method(config.method or ("analytic" if n == 0 else "numeric"))
    (grid,) = config.grids(1)
    pts = plane_points(grid)
    u, v = pts[..., 0], pts[..., 1]
    pos = boosted_marginal(n, beta, MarginalParams.position_plane(), pts, method)
    mom = boosted_marginal(n, beta, MarginalParams.momentum_plane(), pts, method)
    psi2 = psi_lightcone(n, beta, u, v) ** 2
    phi2 = np.vectorize(lambda a, b: phi_momentum(n, beta, a, b, config.spec) ** 2)(u, v)
    dev_pos = float(np.max(np.abs(pos - psi2)))
    dev_mom = float(np.max(np.abs(mom - phi2)))
    tol = _tol(config, 1e-8 if method is Method.ANALYTIC else 1e-5)
    params = {
        "n": n,
        "beta": config.beta,
        "grid": str(grid),
        "method": method.value,
        "position_deviation": dev_pos,
        "momentum_deviation": dev_mom,
    }
    return params, max(dev_pos, dev_mom), tol


def check_galileo(config):
    state = ho_ground()
    try:
        p = MarginalParams1D(config.mu, config.nu)
    except DegenerateProjectionError as exc:
        raise UsageError(str(exc)) from None
    shift = galileo_marginal_shift(state, p, config.v, config.t)
    mean0, var0 = marginal_1d(state, p)
    mean1, var1 = marginal_1d(galileo_shift(state, config.v, config.t), p)
    dev = abs((mean1 - mean0) - shift) + abs(var1 - var0)
    params = {"mu": config.mu, "nu": config.nu, "v": config.v, "t": config.t, "shift": shift}
    return params, dev, _tol(config, 0.0)


def check_subsidiary(config):
    n, beta, h = config.n, config.beta_eff, config.h
    (grid,) = config.grids(1, default="-2:2:5")
    # grid is laid out in rest-frame coordinates, mapped to the lab
    res = 0.0
    for zr in grid.axis():
        for tr in grid.axis():
            z, t = unboost_zt(zr, tr, beta)
            res = max(res, subsidiary_residual(n, beta, z, t, h))
    params = {"n": n, "beta": config.beta, "h": h, "grid": str(grid)}
    return params, res, _tol(config, 1e-6)


CHECK_FUNCS = {
    "covariance": check_covariance,
    "normalization": check_normalization,
    "limits": check_limits,
    "galileo": check_galileo,
    "subsidiary": check_subsidiary,
}


def run_check(name, config) -> dict:
    start = time.perf_counter()
    params, dev, tol = CHECK_FUNCS[name](config)
    return {
        "check": name,
        "parameters": params,
        "max_deviation": dev,
        "tolerance": tol,
        "passed": bool(dev <= tol),
        "runtime_ms": (time.perf_counter() - start) * 1e3 if config.timing else None,
    }


def _severity(result):
    dev, tol = result["max_deviation"], result["tolerance"]
    if tol:
        return dev / tol
    return math.inf if dev else 0.0


def cmd_verify(config: RunConfig):
    start = time.perf_counter()
    if config.check == "all":
        results = [run_check(name, config) for name in CHECKS]
        worst = max(results, key=_severity)
        report = {
            "check": "all",
            "parameters": {"checks": list(CHECKS)},
            "max_deviation": worst["max_deviation"],
            "tolerance": worst["tolerance"],
            "passed": all(r["passed"] for r in results),
            "results": results,
        }
    else:
        report = run_check(config.check, config)
    report["runtime_ms"] = (time.perf_counter() - start) * 1e3 if config.timing else None
    report["config_echo"] = config.echo()
    emit(config, json.dumps(_json_round(report, config.precision), indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _json_round(obj, precision):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _round(obj, precision) if math.isfinite(obj) else str(obj)
    if isinstance(obj, dict):
        return {k: _json_round(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_round(v, precision) for v in obj]
    return obj


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "wigner": cmd_wigner,
    "marginal": cmd_marginal,
    "verify": cmd_verify,
}


def _glue_dash_values(argv):
    # "--grid -3:3:21" would otherwise read the value as an option
    out = []
    it = iter(argv)
    for token in it:
        if token in ("--grid", "--sigma"):
            value = next(it, None)
            out.append(token if value is None else f"{token}={value}")
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_dash_values(sys.argv[1:] if argv is None else list(argv)))
    try:
        config = resolve(args)
        return COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"relmarginal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateProjectionError as exc:
        print(
            f"relmarginal: degenerate projection: smallest singular value {exc.smallest_singular_value:.6e}",
            file=sys.stderr,
        )
        return EXIT_FAIL
    except RelMarginalError as exc:
        print(f"relmarginal: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
