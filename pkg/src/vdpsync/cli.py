"""Command-line driver.

Rates are given in units of gamma1 (``--gamma1`` sets the unit, default 1).
Values come from built-in defaults, then ``--config``, then explicit flags.
"""

from __future__ import annotations

import argparse
import configparser
import sys

import numpy as np

from .experiments import (
    DEFAULT_EPSILON,
    DrivePolicy,
    OmegaThError,
    omega_th,
    sweep_gamma_ratio,
    sweep_kappa,
    write_csv,
)
from .fock import InvalidStateError
from .liouvillian import DEFAULT_DIM, ModelParams, build_liouvillian
from .steady_state import ConvergenceError, SingularLiouvillianError, convergence_check, steady_state_direct
from .synchronization import coherence, mean_photon_number, phase_distribution

EXIT_OK = 0
EXIT_INVALID_CONFIG = 1
EXIT_SOLVER_FAILURE = 2
EXIT_SINGULAR_OMEGA_TH = 3

DEFAULTS = {
    "delta": 0.1,
    "omega": 1.0,
    "eta": 0.0,
    "gamma1": 1.0,
    "gamma2": 100.0,
    "kappa": 0.0,
    "dim": DEFAULT_DIM,
    "policy": "fixed",
    "epsilon": DEFAULT_EPSILON,
    "grid_start": None,
    "grid_stop": None,
    "grid_points": None,
    "values": None,
    "dims": "10,15,20",
    "tol": 1e-8,
    "out": None,
}
GRID_DEFAULTS = {
    "sweep-kappa": (0.0, 2.0, 41),
    "sweep-ratio": (3.0, 100.0, 2),
}
_FLOAT_KEYS = {"delta", "omega", "eta", "gamma1", "gamma2", "kappa", "epsilon",
               "grid_start", "grid_stop", "tol"}
_INT_KEYS = {"dim", "grid_points"}


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID_CONFIG, f"{self.prog}: error: {message}\n")


def read_config(path: str) -> dict[str, str]:
    """Read flat ``key = value`` lines with ``#`` comments."""
    parser = configparser.ConfigParser(
        delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",),
        interpolation=None,
    )
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[config]\n" + fh.read(), source=path)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    values = dict(parser["config"])
    unknown = sorted(set(values) - set(DEFAULTS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    return values


def _coerce(key: str, value):
    if value is None:
        return None
    try:
        if key in _FLOAT_KEYS:
            return float(value)
        if key in _INT_KEYS:
            return int(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {key}: {value!r}") from exc
    return value


def resolve_settings(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if args.config:
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag
    settings = {k: _coerce(k, v) for k, v in settings.items()}
    if settings["policy"] not in ("fixed", "compensated"):
        raise ConfigError(f"policy must be fixed or compensated, got {settings['policy']!r}")
    if not settings["gamma1"] > 0:
        raise ConfigError("gamma1 must be positive")
    return settings


def model_params(s: dict) -> ModelParams:
    g1 = s["gamma1"]
    try:
        return ModelParams(
            delta=s["delta"] * g1, omega=s["omega"] * g1, eta=s["eta"] * g1, gamma1=g1,
            gamma2=s["gamma2"] * g1, kappa=s["kappa"] * g1, dim=s["dim"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def sweep_values(s: dict, command: str) -> list[float]:
    if s["values"]:
        try:
            return [float(v) for v in str(s["values"]).split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"invalid values list {s['values']!r}") from exc
    start, stop, points = GRID_DEFAULTS[command]
    start = start if s["grid_start"] is None else s["grid_start"]
    stop = stop if s["grid_stop"] is None else s["grid_stop"]
    points = points if s["grid_points"] is None else s["grid_points"]
    if points < 1:
        raise ConfigError("grid-points must be >= 1")
    return [float(x) for x in np.linspace(start, stop, points)]


def _open_out(path):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _emit_records(records, out_path) -> int:
    stream, close = _open_out(out_path)
    try:
        write_csv(records, stream)
    finally:
        if close:
            stream.close()
    failed = [r for r in records if not r.ok]
    for rec in failed:
        print(f"warning: kappa/gamma1={rec.kappa_over_gamma1:g}: {rec.error}", file=sys.stderr)
    if records and len(failed) == len(records):
        return EXIT_SOLVER_FAILURE
    return EXIT_OK


def cmd_steady(s: dict) -> int:
    p = model_params(s)
    try:
        result = steady_state_direct(build_liouvillian(p))
    except (SingularLiouvillianError, InvalidStateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    rho = result.rho
    lines = [f"dim = {p.dim}", f"residual = {result.residual:.3e}"]
    for n in range(min(p.dim, 5)):
        lines.append(f"rho{n}{n} = {rho[n, n].real:.17g}")
    for n, m in ((0, 1), (0, 2), (1, 2)):
        if m < p.dim:
            lines.append(f"|rho{n}{m}| = {coherence(rho, n, m)[1]:.17g}")
    lines.append(f"mean_n = {mean_photon_number(rho):.17g}")
    lines.append(f"s_max = {phase_distribution(rho).s_max:.17g}")
    stream, close = _open_out(s["out"])
    try:
        stream.write("\n".join(lines) + "\n")
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_sweep_kappa(s: dict) -> int:
    p = model_params(s)
    kappas = [k * p.gamma1 for k in sweep_values(s, "sweep-kappa")]
    try:
        policy = DrivePolicy(mode=s["policy"], omega_fixed=p.omega, epsilon=s["epsilon"])
        records = sweep_kappa(p, kappas, policy)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return _emit_records(records, s["out"])


def cmd_sweep_ratio(s: dict) -> int:
    p = model_params(s)
    try:
        records = sweep_gamma_ratio(p, sweep_values(s, "sweep-ratio"))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return _emit_records(records, s["out"])


def cmd_omega_th(s: dict) -> int:
    g1 = s["gamma1"]
    try:
        value = omega_th(s["epsilon"], g1, s["delta"] * g1, s["kappa"] * g1)
    except OmegaThError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR_OMEGA_TH
    print(f"{value / g1:.17g}")
    return EXIT_OK


def cmd_converge(s: dict) -> int:
    p = model_params(s)
    try:
        dims = [int(d) for d in str(s["dims"]).split(",") if d.strip()]
        report = convergence_check(p, dims, s["tol"])
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER_FAILURE
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    for (a, b), dist in zip(zip(report.dims, report.dims[1:]), report.distances):
        print(f"{a} -> {b}: trace distance {dist:.3e}")
    print(f"converged = {str(report.converged).lower()} (tol {report.tol:g})")
    return EXIT_OK


COMMANDS = {
    "steady": cmd_steady,
    "sweep-kappa": cmd_sweep_kappa,
    "sweep-ratio": cmd_sweep_ratio,
    "omega-th": cmd_omega_th,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    for name in ("delta", "omega", "eta", "gamma1", "gamma2", "kappa"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--dim", type=int, help="Fock truncation")
    common.add_argument("--policy", choices=("fixed", "compensated"))
    common.add_argument("--epsilon", type=float, help="free parameter of the compensating drive")
    common.add_argument("--grid-start", dest="grid_start", type=float)
    common.add_argument("--grid-stop", dest="grid_stop", type=float)
    common.add_argument("--grid-points", dest="grid_points", type=int)
    common.add_argument("--values", help="comma-separated sweep values (overrides the grid)")
    common.add_argument("--dims", help="comma-separated truncations for converge")
    common.add_argument("--tol", type=float, help="trace-distance tolerance for converge")
    common.add_argument("--out", help="output path (default stdout)")

    parser = _Parser(prog="vdpsync", description="Driven quantum van der Pol oscillator experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "steady": "steady state at one parameter point",
        "sweep-kappa": "sweep single-photon loss kappa/gamma1 (CSV)",
        "sweep-ratio": "sweep gamma2/gamma1 (CSV)",
        "omega-th": "compensating drive strength for given epsilon and kappa",
        "converge": "truncation convergence report",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = resolve_settings(args)
        return COMMANDS[args.command](settings)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG


if __name__ == "__main__":
    sys.exit(main())
