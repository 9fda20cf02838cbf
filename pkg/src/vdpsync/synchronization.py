"""Phase distribution, synchronization measure and simple observables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import number_operator

DEFAULT_GRID = 512
MIN_GRID = 64
_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PhaseDistribution:
    """``P(phi)`` on a uniform grid over ``[0, 2pi)``.

    ``s_max`` is the peak of ``P(phi) - 1/(2pi)``, located at ``phi_max``.
    """

    grid: np.ndarray
    values: np.ndarray
    s_max: float
    phi_max: float


def _harmonics(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # c_k = sum_n rho[n, n+k], so P(phi) = (1/2pi) sum_k c_k exp(i k phi)
    dim = rho.shape[0]
    ks = np.arange(-(dim - 1), dim)
    return ks, np.array([np.trace(rho, offset=k) for k in ks])


def _evaluate(ks, cs, phi, order=0):
    terms = cs[:, None] * np.exp(1j * np.outer(ks, np.atleast_1d(phi)))
    return ((1j * ks[:, None]) ** order * terms).sum(axis=0) / _TWO_PI


def _polish_peak(ks, cs, phi0, step):
    """Newton iterations for dP/dphi = 0, kept within one grid spacing."""
    phi = phi0
    for _ in range(50):
        d1 = _evaluate(ks, cs, phi, 1).real[0]
        d2 = _evaluate(ks, cs, phi, 2).real[0]
        if d2 >= 0:
            return phi0
        update = -d1 / d2
        phi = float(np.clip(phi + update, phi0 - step, phi0 + step))
        if abs(update) < 1e-15:
            break
    return phi


def phase_distribution(rho: np.ndarray, n_grid: int = DEFAULT_GRID) -> PhaseDistribution:
    """``P(phi) = (1/2pi) sum_{n,m} exp(i(m-n)phi) rho[n, m]``.

    This is ``<phi|rho|phi>/(2pi)`` for the unnormalized phase states
    ``|phi> = sum_n exp(i n phi)|n>``. The grid maximum is refined by Newton
    steps, so ``s_max`` does not depend on ``n_grid`` beyond rounding.
    """
    if n_grid < MIN_GRID:
        raise ValueError(f"n_grid must be >= {MIN_GRID}, got {n_grid}")
    rho = np.asarray(rho, dtype=complex)
    ks, cs = _harmonics(rho)
    grid = np.arange(n_grid) * (_TWO_PI / n_grid)
    raw = _evaluate(ks, cs, grid)
    imag = np.max(np.abs(raw.imag))
    if imag > 1e-12:
        raise ValueError(f"phase distribution has imaginary part {imag:.3e}; rho is not Hermitian")
    values = raw.real

    i_max = int(np.argmax(values))
    phi = _polish_peak(ks, cs, grid[i_max], _TWO_PI / n_grid)
    peak = max(_evaluate(ks, cs, phi).real[0], values[i_max])
    if peak == values[i_max]:
        phi = grid[i_max]
    return PhaseDistribution(
        grid=grid, values=values, s_max=float(peak - 1.0 / _TWO_PI), phi_max=float(phi % _TWO_PI)
    )


def coherence(rho: np.ndarray, n: int, m: int) -> tuple[complex, float]:
    """Return ``rho[n, m]`` and its magnitude."""
    dim = rho.shape[0]
    if not (0 <= n < dim and 0 <= m < dim):
        raise IndexError(f"levels ({n}, {m}) outside truncation of dimension {dim}")
    value = complex(rho[n, m])
    return value, abs(value)


def mean_photon_number(rho: np.ndarray) -> float:
    n_bar = float(np.trace(number_operator(rho.shape[0]) @ rho).real)
    if -1e-10 <= n_bar < 0:
        return 0.0
    return n_bar
