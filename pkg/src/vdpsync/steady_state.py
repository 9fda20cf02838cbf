"""Steady states of a Liouvillian: direct solve, RK4 time-evolution oracle,
and truncation convergence.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .fock import InvalidStateError, embed, unvectorize, validate_density_matrix, vectorize
from .liouvillian import ModelParams, build_liouvillian

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
TRACE_DRIFT_REPORT = 1e-8
TRACE_DRIFT_FATAL = 1e-3


class SingularLiouvillianError(RuntimeError):
    """The trace-constrained system is rank deficient (no unique steady state)."""


class IntegrationInstabilityError(RuntimeError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, dim: int, cause: Exception):
        super().__init__(f"steady state failed at dim={dim}: {cause}")
        self.dim = dim
        self.cause = cause


@dataclass(frozen=True)
class SteadyStateResult:
    rho: np.ndarray
    residual: float
    method: str  # "direct" or "evolved"


@dataclass(frozen=True)
class ConvergenceReport:
    dims: tuple[int, ...]
    distances: tuple[float, ...]
    tol: float
    converged: bool


def _superoperator_dim(s: np.ndarray) -> int:
    n = s.shape[0]
    dim = int(round(np.sqrt(n)))
    if s.shape != (n, n) or dim * dim != n:
        raise ValueError(f"superoperator shape {s.shape} is not dim^2 x dim^2")
    return dim


def _clean_state(rho: np.ndarray) -> np.ndarray:
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Half the sum of absolute eigenvalues of the Hermitian difference."""
    diff = np.asarray(rho) - np.asarray(sigma)
    diff = 0.5 * (diff + diff.conj().T)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def residual(s: np.ndarray, rho: np.ndarray) -> float:
    return float(np.max(np.abs(s @ vectorize(rho))))


def steady_state_direct(s: np.ndarray) -> SteadyStateResult:
    """Solve ``S vec(rho) = 0`` with ``tr rho = 1``.

    The row of ``S`` belonging to the vectorized (0, 0) entry is replaced by
    the trace functional ``vec(I)^T``; the right-hand side is the unit vector
    at that row. The residual is measured against the unmodified ``S``.
    """
    dim = _superoperator_dim(s)
    m = np.array(s, dtype=complex, copy=True)
    m[0, :] = vectorize(np.eye(dim, dtype=complex))
    rhs = np.zeros(dim * dim, dtype=complex)
    rhs[0] = 1.0
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            x = scipy.linalg.solve(m, rhs, check_finite=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as exc:
        raise SingularLiouvillianError(
            "trace-constrained Liouvillian is singular; the steady state is not unique"
        ) from exc
    rho = _clean_state(unvectorize(x, dim))
    rho = validate_density_matrix(rho)
    return SteadyStateResult(rho=rho, residual=residual(s, rho), method="direct")


def default_time_step(p: ModelParams) -> float:
    """Conservative RK4 step, ``1e-3 / (sum of all rates and drives)``."""
    scale = p.rate_scale
    if scale <= 0:
        raise ValueError("all rates and drives vanish; no natural time step")
    return 1e-3 / scale


def _rk4_propagator(s: np.ndarray, h: float) -> np.ndarray:
    # one classical RK4 step of a linear autonomous system is this polynomial
    n = s.shape[0]
    hs = h * s
    hs2 = hs @ hs
    hs3 = hs2 @ hs
    return np.eye(n, dtype=complex) + hs + hs2 / 2 + hs3 / 6 + (hs3 @ hs) / 24


def evolve(s: np.ndarray, rho0: np.ndarray, t_final: float, dt: float) -> np.ndarray:
    """Integrate ``d vec(rho)/dt = S vec(rho)`` with fixed-step classical RK4.

    The number of steps is ``ceil(t_final / dt)`` with the step shrunk to land
    exactly on ``t_final``. Because the generator is constant, the RK4 step is
    a fixed matrix ``P``; ``P^N`` is applied in binary chunks ``P^(2^k)`` so
    that long runs cost O(log N) matrix products. The trace is checked after
    every chunk.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt!r}")
    if t_final < 0:
        raise ValueError(f"t_final must be nonnegative, got {t_final!r}")
    dim = _superoperator_dim(s)
    rho0 = validate_density_matrix(rho0)
    if rho0.shape[0] != dim:
        raise ValueError(f"state dimension {rho0.shape[0]} does not match superoperator ({dim})")
    n_steps = int(np.ceil(t_final / dt - 1e-12)) if t_final > 0 else 0
    if n_steps == 0:
        return rho0.copy()

    trace_row = vectorize(np.eye(dim, dtype=complex))
    v = vectorize(rho0)
    chunk = _rk4_propagator(np.asarray(s, dtype=complex), t_final / n_steps)
    remaining = n_steps
    while True:
        if remaining & 1:
            v = chunk @ v
            drift = abs(trace_row @ v - 1.0)
            if not np.isfinite(drift) or drift > TRACE_DRIFT_FATAL:
                raise IntegrationInstabilityError(
                    f"trace drifted by {drift:.3e}; reduce dt"
                )
        remaining >>= 1
        if not remaining:
            break
        chunk = chunk @ chunk

    rho = unvectorize(v, dim)
    rho = 0.5 * (rho + rho.conj().T)
    drift = abs(np.trace(rho).real - 1.0)
    if drift > TRACE_DRIFT_REPORT:
        log.warning("evolve: renormalizing trace drift of %.3e", drift)
    return rho / np.trace(rho).real


def steady_state_evolved(
    p: ModelParams, t_final: float, dt: float | None = None, rho0: np.ndarray | None = None
) -> SteadyStateResult:
    """Long-time state reached from ``rho0`` (vacuum by default)."""
    s = build_liouvillian(p)
    if rho0 is None:
        rho0 = np.zeros((p.dim, p.dim), dtype=complex)
        rho0[0, 0] = 1.0
    rho = evolve(s, rho0, t_final, dt if dt is not None else default_time_step(p))
    return SteadyStateResult(rho=rho, residual=residual(s, rho), method="evolved")


def convergence_check(p: ModelParams, dims: Sequence[int], tol: float) -> ConvergenceReport:
    """Solve at each truncation and report consecutive trace distances."""
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2:
        raise ValueError("need at least two truncations to compare")
    if any(d < 3 for d in dims):
        raise ValueError(f"every truncation must be >= 3, got {dims}")
    if any(b < a for a, b in zip(dims, dims[1:])):
        raise ValueError(f"truncations must be non-decreasing, got {dims}")

    states = []
    for dim in dims:
        try:
            states.append(steady_state_direct(build_liouvillian(p.replace(dim=dim))).rho)
        except (SingularLiouvillianError, InvalidStateError) as exc:
            raise ConvergenceError(dim, exc) from exc
    distances = tuple(
        min(1.0, trace_distance(embed(small, big.shape[0]), big))
        for small, big in zip(states, states[1:])
    )
    return ConvergenceReport(
        dims=dims, distances=distances, tol=tol, converged=distances[-1] <= tol
    )
