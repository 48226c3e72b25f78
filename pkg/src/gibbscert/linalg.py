"""Dense complex matrix kernel.

Hermitian eigendecomposition, matrix functions, tensor algebra, partial
traces, and the three operator norms used throughout the toolkit.  All
functions are pure: they never mutate their arguments and return fresh
arrays, so values can be shared freely across concurrent callers.

Tolerance conventions (explicit keyword arguments everywhere):

* ``TOL_STRUCTURAL = 1e-10`` guards structural checks (Hermiticity,
  orthonormality, trace normalization).
* ``TOL_DERIVED = 1e-9`` guards derived identities (round trips,
  reconstructions).

Eigenvalues in ``[-TOL_STRUCTURAL, 0]`` are treated as exact zeros by the
positive-semidefinite square root, so nearly rank-deficient thermal states
do not fail spuriously.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from .errors import DimensionMismatchError, NegativeEigenvalueError, NonHermitianError

TOL_STRUCTURAL = 1e-10
TOL_DERIVED = 1e-9

__all__ = [
    "TOL_STRUCTURAL",
    "TOL_DERIVED",
    "EigenDecomposition",
    "dagger",
    "is_hermitian",
    "eigh",
    "mat_func",
    "sqrtm_psd",
    "expm_hermitian",
    "neg_exp_scaled",
    "tensor",
    "partial_trace",
    "norm",
    "matrices_close",
]


class EigenDecomposition(NamedTuple):
    """Result of a Hermitian eigendecomposition.

    ``eigenvalues`` are real and ascending; ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns, so that
    ``A == eigenvectors @ diag(eigenvalues) @ eigenvectors.conj().T``
    within ``TOL_STRUCTURAL`` relative to ``max(1, ||A||)``.

    Inside a degenerate cluster the eigenvector choice is deterministic
    for identical input but otherwise arbitrary; do not rely on it.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def is_hermitian(m: np.ndarray, tol: float = TOL_STRUCTURAL) -> bool:
    """Check ``||M - M^dag||_2 <= tol * max(1, ||M||_2)`` (operator norm)."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = max(1.0, norm(m, "operator"))
    return norm(m - dagger(m), "operator") <= tol * scale


def _require_hermitian(m: np.ndarray, tol: float, what: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"{what}: expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m, tol):
        res = norm(m - dagger(m), "operator")
        raise NonHermitianError(f"{what}: matrix is not Hermitian (residual {res:.3e}, tol {tol:.1e})")
    return m


def eigh(a: np.ndarray, tol: float = TOL_STRUCTURAL) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Returns ascending real eigenvalues and orthonormal eigenvector columns.
    Raises :class:`NonHermitianError` if the symmetry check fails.
    """
    a = _require_hermitian(a, tol, "eigh")
    vals, vecs = np.linalg.eigh((a + dagger(a)) / 2.0)
    return EigenDecomposition(vals, vecs)


def mat_func(a: np.ndarray, fn: Callable[[np.ndarray], np.ndarray], tol: float = TOL_STRUCTURAL) -> np.ndarray:
    """Apply a scalar function to a Hermitian matrix through its eigenbasis."""
    vals, vecs = eigh(a, tol)
    return (vecs * fn(vals)) @ dagger(vecs)


def sqrtm_psd(a: np.ndarray, tol: float = TOL_STRUCTURAL) -> np.ndarray:
    """Positive-semidefinite square root.

    Eigenvalues in ``[-tol, 0]`` are clipped to zero; anything below
    ``-tol`` raises :class:`NegativeEigenvalueError`.  Satisfies
    ``sqrtm_psd(A) @ sqrtm_psd(A) == A`` within ``TOL_DERIVED`` for PSD A.
    """
    vals, vecs = eigh(a, tol)
    if vals[0] < -tol:
        raise NegativeEigenvalueError(
            f"sqrtm_psd: min eigenvalue {vals[0]:.3e} below -{tol:.1e}"
        )
    return (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ dagger(vecs)


def expm_hermitian(a: np.ndarray, tol: float = TOL_STRUCTURAL) -> np.ndarray:
    """Matrix exponential of a Hermitian matrix."""
    return mat_func(a, np.exp, tol)


def neg_exp_scaled(a: np.ndarray, beta: float, tol: float = TOL_STRUCTURAL) -> np.ndarray:
    """``exp(-beta * A)`` for Hermitian A; ``beta = 0`` gives the identity.

    Caller is responsible for any overflow-safe shifting (the Gibbs-state
    builder shifts by the ground energy before calling).
    """
    vals, vecs = eigh(a, tol)
    return (vecs * np.exp(-beta * vals)) @ dagger(vecs)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor as the slow index."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m: np.ndarray, dims: tuple[int, int], keep: str) -> np.ndarray:
    """Trace out one tensor factor of a bipartite operator.

    ``dims = (d_A, d_B)`` with A the slow (left) factor; ``keep`` is
    ``"A"`` or ``"B"``.  Preserves the total trace exactly up to float
    rounding.
    """
    m = np.asarray(m, dtype=complex)
    d_a, d_b = dims
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatchError(
            f"partial_trace: shape {m.shape} incompatible with dims ({d_a},{d_b})"
        )
    t = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.trace(t, axis1=1, axis2=3)
    if keep == "B":
        return np.trace(t, axis1=0, axis2=2)
    raise ValueError(f"partial_trace: keep must be 'A' or 'B', got {keep!r}")


def norm(m: np.ndarray, kind: str = "hilbert_schmidt") -> float:
    """Matrix norm of the requested kind.

    ``trace``            sum of singular values,
    ``hilbert_schmidt``  sqrt(Tr M^dag M),
    ``operator``         largest singular value.
    """
    m = np.asarray(m, dtype=complex)
    if kind == "trace":
        return float(np.linalg.norm(m, "nuc"))
    if kind == "hilbert_schmidt":
        return float(np.linalg.norm(m, "fro"))
    if kind == "operator":
        return float(np.linalg.norm(m, 2))
    raise ValueError(f"norm: unknown kind {kind!r}")


def matrices_close(a: np.ndarray, b: np.ndarray, tol: float = TOL_STRUCTURAL) -> bool:
    """Entrywise closeness within an explicit absolute tolerance."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return bool(np.max(np.abs(a - b)) <= tol)
