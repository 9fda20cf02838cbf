"""Hamiltonian and Lindblad generator of the driven quantum van der Pol oscillator.

    drho/dt = -i[H, rho] + gamma1 D[a+] rho + gamma2 D[a^2] rho + kappa D[a] rho
    H = delta a+a + omega (a + a+) + eta (a^2 + a+^2)

with D[L] rho = L rho L+ - (L+L rho + rho L+L)/2. The Hamiltonian is in the
frame rotating with the drive.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .fock import adjoint, annihilation_operator, kronecker, number_operator

DEFAULT_DIM = 20


@dataclass(frozen=True)
class ModelParams:
    """Rates and drive strengths plus the Fock truncation.

    ``gamma1`` is the unit everything is quoted in by the experiments. It may be
    zero here so that pure-decay checks can be expressed.
    """

    delta: float = 0.0
    omega: float = 0.0
    eta: float = 0.0
    gamma1: float = 1.0
    gamma2: float = 0.0
    kappa: float = 0.0
    dim: int = DEFAULT_DIM

    def __post_init__(self):
        for name in ("delta", "omega", "eta", "gamma1", "gamma2", "kappa"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        for name in ("gamma1", "gamma2", "kappa"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative, got {getattr(self, name)!r}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def scaled(self, s: float) -> "ModelParams":
        """All rates and drives multiplied by ``s``; the truncation is kept."""
        return self.replace(
            delta=s * self.delta,
            omega=s * self.omega,
            eta=s * self.eta,
            gamma1=s * self.gamma1,
            gamma2=s * self.gamma2,
            kappa=s * self.kappa,
        )

    @property
    def rate_scale(self) -> float:
        return (
            self.gamma1 + self.gamma2 + self.kappa
            + abs(self.delta) + abs(self.omega) + abs(self.eta)
        )


def build_hamiltonian(p: ModelParams) -> np.ndarray:
    a = annihilation_operator(p.dim)
    ad = adjoint(a)
    return (
        p.delta * number_operator(p.dim)
        + p.omega * (a + ad)
        + p.eta * (a @ a + ad @ ad)
    )


def commutator_superoperator(h: np.ndarray) -> np.ndarray:
    """Superoperator of ``rho -> -i[H, rho]`` under column stacking."""
    eye = np.eye(h.shape[0], dtype=complex)
    return -1j * (kronecker(eye, h) - kronecker(h.T, eye))


def dissipator_superoperator(jump: np.ndarray, rate: float) -> np.ndarray:
    """Superoperator of ``rate * D[jump]`` under column stacking."""
    if rate < 0:
        raise ValueError(f"dissipation rate must be nonnegative, got {rate!r}")
    jump = np.asarray(jump, dtype=complex)
    eye = np.eye(jump.shape[0], dtype=complex)
    jdj = adjoint(jump) @ jump
    return rate * (
        kronecker(jump.conj(), jump)
        - 0.5 * kronecker(eye, jdj)
        - 0.5 * kronecker(jdj.T, eye)
    )


def build_liouvillian(p: ModelParams) -> np.ndarray:
    a = annihilation_operator(p.dim)
    # fixed order keeps the floating-point sum reproducible
    s = commutator_superoperator(build_hamiltonian(p))
    s = s + dissipator_superoperator(adjoint(a), p.gamma1)
    s = s + dissipator_superoperator(a @ a, p.gamma2)
    s = s + dissipator_superoperator(a, p.kappa)
    return s
