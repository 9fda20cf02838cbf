"""Drive compensation, parameter sweeps and CSV output."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .fock import InvalidStateError
from .liouvillian import ModelParams, build_liouvillian
from .steady_state import SingularLiouvillianError, steady_state_direct
from .synchronization import DEFAULT_GRID, coherence, mean_photon_number, phase_distribution

DEFAULT_EPSILON = 0.05

CSV_COLUMNS = (
    "kappa_over_gamma1",
    "omega_over_gamma1",
    "s_max",
    "abs_rho01",
    "abs_rho02",
    "rho00",
    "rho11",
    "rho22",
    "mean_n",
    "residual",
    "error",
)


class OmegaThError(ValueError):
    """The compensating drive formula is singular or negative here."""


def omega_th(epsilon: float, gamma1: float, delta: float, kappa: float) -> float:
    """Drive strength that compensates single-photon loss ``kappa``.

        Omega_th^2 = eps (3g1 + k)(6 g1 k + 9 g1^2 + 4 delta^2 + k^2)
                     / (4 [g1 (1 - 6 eps) + k (1 - 2 eps)])
    """
    denominator = 4.0 * (gamma1 * (1.0 - 6.0 * epsilon) + kappa * (1.0 - 2.0 * epsilon))
    if denominator <= 0:
        raise OmegaThError(
            f"Omega_th is singular: denominator {denominator:.6g} <= 0 "
            f"(epsilon={epsilon}, gamma1={gamma1}, kappa={kappa})"
        )
    numerator = (
        epsilon
        * (3.0 * gamma1 + kappa)
        * (6.0 * gamma1 * kappa + 9.0 * gamma1**2 + 4.0 * delta**2 + kappa**2)
    )
    value = numerator / denominator
    if value < 0:
        raise OmegaThError(f"Omega_th^2 = {value:.6g} is negative (epsilon={epsilon})")
    return math.sqrt(value)


@dataclass(frozen=True)
class DrivePolicy:
    """How the harmonic drive is chosen at each sweep point.

    ``fixed`` keeps ``omega_fixed``; ``compensated`` uses ``omega_th(epsilon, ...)``.
    """

    mode: str = "fixed"
    omega_fixed: float = 1.0
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if self.mode not in ("fixed", "compensated"):
            raise ValueError(f"unknown drive policy {self.mode!r}")
        if not (math.isfinite(self.omega_fixed) and math.isfinite(self.epsilon)):
            raise ValueError("drive policy values must be finite")
        if self.mode == "compensated" and self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")

    def omega(self, p: ModelParams, kappa: float) -> float:
        if self.mode == "fixed":
            return self.omega_fixed
        return omega_th(self.epsilon, p.gamma1, p.delta, kappa)


@dataclass(frozen=True)
class SweepRecord:
    kappa_over_gamma1: float
    omega_over_gamma1: float | None
    s_max: float | None = None
    abs_rho01: float | None = None
    abs_rho02: float | None = None
    rho00: float | None = None
    rho11: float | None = None
    rho22: float | None = None
    mean_n: float | None = None
    residual: float | None = None
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


_SOLVER_ERRORS = (SingularLiouvillianError, InvalidStateError, OmegaThError, ValueError)


def measure(p: ModelParams, n_grid: int = DEFAULT_GRID) -> SweepRecord:
    """Solve one parameter point and collect every record column."""
    if p.dim < 3:
        raise ValueError("records need dim >= 3 for the rho22 / rho02 columns")
    result = steady_state_direct(build_liouvillian(p))
    rho = result.rho
    return SweepRecord(
        kappa_over_gamma1=p.kappa / p.gamma1,
        omega_over_gamma1=p.omega / p.gamma1,
        s_max=phase_distribution(rho, n_grid).s_max,
        abs_rho01=coherence(rho, 0, 1)[1],
        abs_rho02=coherence(rho, 0, 2)[1],
        rho00=float(rho[0, 0].real),
        rho11=float(rho[1, 1].real),
        rho22=float(rho[2, 2].real),
        mean_n=mean_photon_number(rho),
        residual=result.residual,
    )


def _safe_measure(p: ModelParams, kappa_ratio: float, omega_ratio: float | None) -> SweepRecord:
    try:
        return measure(p)
    except _SOLVER_ERRORS as exc:
        return SweepRecord(kappa_over_gamma1=kappa_ratio, omega_over_gamma1=omega_ratio, error=str(exc))


def _require_gain(p: ModelParams) -> None:
    if p.gamma1 <= 0:
        raise ValueError("sweeps report rates in units of gamma1, which must be positive")


def sweep_kappa(p: ModelParams, kappas: Sequence[float], policy: DrivePolicy) -> list[SweepRecord]:
    """One record per single-photon loss rate, in input order.

    ``p.kappa`` and ``p.omega`` are ignored; ``kappas`` and ``policy.omega_fixed``
    are absolute rates (same units as ``p.gamma1``).
    """
    _require_gain(p)
    kappas = [float(k) for k in kappas]
    if any(k < 0 for k in kappas):
        raise ValueError("kappas must be nonnegative")
    if any(b <= a for a, b in zip(kappas, kappas[1:])):
        raise ValueError("kappas must be strictly increasing")
    records = []
    for kappa in kappas:
        try:
            omega = policy.omega(p, kappa)
        except OmegaThError as exc:
            records.append(SweepRecord(kappa / p.gamma1, None, error=str(exc)))
            continue
        point = p.replace(kappa=kappa, omega=omega)
        records.append(_safe_measure(point, kappa / p.gamma1, omega / p.gamma1))
    return records


def sweep_gamma_ratio(p: ModelParams, ratios: Sequence[float]) -> list[SweepRecord]:
    """One record per ``gamma2/gamma1``; every other parameter taken from ``p``."""
    _require_gain(p)
    ratios = [float(r) for r in ratios]
    if any(r <= 0 for r in ratios):
        raise ValueError("gamma2/gamma1 ratios must be positive")
    return [
        _safe_measure(p.replace(gamma2=r * p.gamma1), p.kappa / p.gamma1, p.omega / p.gamma1)
        for r in ratios
    ]


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(records: Iterable[SweepRecord], stream) -> None:
    """Write records with 17 significant digits and LF line endings."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow([_fmt(getattr(rec, col)) for col in CSV_COLUMNS])


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()
