"""Truncated Fock-space operators and the column-stacking vectorization.

Operators are plain ``complex128`` numpy arrays with entry ``(n, m) = <n|O|m>``.
Vectorization stacks columns: ``vec(M)[i + dim*j] = M[i, j]``, so that
``vec(A @ X @ B) == kronecker(B.T, A) @ vec(X)``.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9


class InvalidStateError(ValueError):
    """Raised when a matrix violates the density-matrix invariants."""


def _check_dim(dim: int) -> int:
    if int(dim) != dim or dim < 2:
        raise ValueError(f"Fock dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def annihilation_operator(dim: int) -> np.ndarray:
    """Return ``a`` on the levels ``|0>..|dim-1>`` (``a|n> = sqrt(n)|n-1>``)."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)


def creation_operator(dim: int) -> np.ndarray:
    return adjoint(annihilation_operator(dim))


def number_operator(dim: int) -> np.ndarray:
    dim = _check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


def fock_state(dim: int, n: int) -> np.ndarray:
    """Projector ``|n><n|``."""
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise IndexError(f"level {n} outside truncation of dimension {dim}")
    rho = np.zeros((dim, dim), dtype=complex)
    rho[n, n] = 1.0
    return rho


def adjoint(op: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(op)).T.copy()


def kronecker(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def vectorize(m: np.ndarray) -> np.ndarray:
    """Column-stack ``m`` into a vector of length ``dim**2``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m.reshape(-1, order="F").copy()


def unvectorize(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    v = np.asarray(v)
    if v.ndim != 1 or v.size != dim * dim:
        raise ValueError(f"vector of length {v.size} cannot be reshaped to {dim}x{dim}")
    return v.reshape((dim, dim), order="F").copy()


def validate_density_matrix(rho: np.ndarray) -> np.ndarray:
    """Check Hermiticity, unit trace and numerical positivity; return ``rho``.

    Raises :class:`InvalidStateError` on the first violated invariant.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise InvalidStateError("density matrix has non-finite entries")
    herm_err = np.max(np.abs(rho - rho.conj().T))
    if herm_err > HERMITIAN_TOL:
        raise InvalidStateError(f"not Hermitian (max deviation {herm_err:.3e})")
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace {tr.real:.12g} differs from 1")
    min_eig = np.linalg.eigvalsh(rho).min()
    if min_eig < -POSITIVITY_TOL:
        raise InvalidStateError(f"negative eigenvalue {min_eig:.3e}")
    return rho


def embed(rho: np.ndarray, dim: int) -> np.ndarray:
    """Zero-pad ``rho`` into a larger truncation."""
    small = rho.shape[0]
    if dim < small:
        raise ValueError(f"cannot embed dimension {small} into {dim}")
    out = np.zeros((dim, dim), dtype=complex)
    out[:small, :small] = rho
    return out
