"""States, Hamiltonians, Gibbs states, and scalar quantities on states.

Defines the labeled-system type (:class:`SystemSpec`), density operators and
pure states bound to a system, and the scalar functionals used by the
certification layer: Uhlmann fidelity, purified distance, quantum Fisher
information with respect to the system Hamiltonian, min/max relative
entropies against a full-rank reference, and the spectral spread.

All values are immutable after construction and all functions are pure.

Numerical note on the purified distance: ``D_F = sqrt(1 - F^2)`` amplifies
rounding noise near ``F = 1`` (an absolute error ``e`` in ``F^2`` becomes
``sqrt(e)`` in ``D_F``).  Any computed gap ``1 - F^2`` at or below
``FIDELITY_GAP_FLOOR`` is indistinguishable from zero given
double-precision inputs and is reported as exactly zero.  Distances below
``sqrt(FIDELITY_GAP_FLOOR) ~ 3e-7`` are therefore not resolvable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import (
    DimensionMismatchError,
    NonHermitianError,
    NotPSDError,
    ZeroOverlapError,
)

FIDELITY_GAP_FLOOR = 1e-13

__all__ = [
    "FIDELITY_GAP_FLOOR",
    "SystemSpec",
    "DensityOperator",
    "PureState",
    "systems_compatible",
    "gibbs_state",
    "gibbs_weights",
    "fidelity",
    "fidelity_matrices",
    "purified_distance",
    "purified_distance_matrices",
    "qfi",
    "qfi_matrices",
    "d_min",
    "d_max",
    "spectral_spread",
    "trace_distance",
]


def _frozen_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SystemSpec:
    """A labeled quantum system: dimension, Hamiltonian, inverse temperature.

    The Hamiltonian is given in the computational basis, which doubles as
    the energy-level labeling ``tau_i = <i|tau|i>`` used by the
    constructions; levels are *not* re-sorted by energy.
    """

    label: str
    dim: int
    hamiltonian: np.ndarray
    beta: float

    def __post_init__(self) -> None:
        h = np.asarray(self.hamiltonian, dtype=complex)
        if h.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"system {self.label!r}: Hamiltonian shape {h.shape} != dim {self.dim}"
            )
        if not linalg.is_hermitian(h):
            raise NonHermitianError(f"system {self.label!r}: Hamiltonian is not Hermitian")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"system {self.label!r}: beta must be finite and positive")
        object.__setattr__(self, "hamiltonian", _frozen_array(h))

    def energies(self) -> np.ndarray:
        """Diagonal of the Hamiltonian (the level energies when H is diagonal)."""
        return np.real(np.diag(self.hamiltonian))


def systems_compatible(a: SystemSpec, b: SystemSpec, tol: float = linalg.TOL_STRUCTURAL) -> bool:
    """Same dimension, same Hamiltonian (entrywise), same beta."""
    return (
        a.dim == b.dim
        and linalg.matrices_close(a.hamiltonian, b.hamiltonian, tol)
        and abs(a.beta - b.beta) <= tol
    )


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """A positive unit-trace matrix bound to a :class:`SystemSpec`."""

    matrix: np.ndarray
    system: SystemSpec

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        d = self.system.dim
        if m.shape != (d, d):
            raise DimensionMismatchError(f"state shape {m.shape} != system dim {d}")
        if not linalg.is_hermitian(m):
            raise NonHermitianError("density operator is not Hermitian")
        vals = np.linalg.eigvalsh((m + linalg.dagger(m)) / 2)
        if vals[0] < -linalg.TOL_STRUCTURAL:
            raise NotPSDError(f"density operator has eigenvalue {vals[0]:.3e}")
        tr = np.real(np.trace(m))
        if abs(tr - 1.0) > linalg.TOL_STRUCTURAL:
            raise ValueError(f"density operator trace {tr!r} != 1")
        object.__setattr__(self, "matrix", _frozen_array(m))

    @classmethod
    def from_matrix(cls, matrix: np.ndarray, system: SystemSpec) -> "DensityOperator":
        return cls(matrix=matrix, system=system)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def is_full_rank(self, tol: float = 1e-14) -> bool:
        return bool(self.eigenvalues()[0] > tol)


@dataclass(frozen=True, eq=False)
class PureState:
    """A unit vector bound to a :class:`SystemSpec`."""

    amplitudes: np.ndarray
    system: SystemSpec

    def __post_init__(self) -> None:
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.shape != (self.system.dim,):
            raise DimensionMismatchError(
                f"amplitude count {v.shape[0]} != system dim {self.system.dim}"
            )
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            raise ValueError(f"pure state norm {nrm!r} != 1 (tolerance 1e-12)")
        object.__setattr__(self, "amplitudes", _frozen_array(v))

    @classmethod
    def basis(cls, system: SystemSpec, index: int) -> "PureState":
        v = np.zeros(system.dim, dtype=complex)
        v[index] = 1.0
        return cls(v, system)

    @classmethod
    def normalized(cls, amplitudes: np.ndarray, system: SystemSpec) -> "PureState":
        v = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(v / np.linalg.norm(v), system)

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def density(self) -> DensityOperator:
        return DensityOperator(self.projector(), self.system)


# -- Gibbs states -------------------------------------------------------------

def gibbs_state(system: SystemSpec) -> DensityOperator:
    """Thermal state ``exp(-beta H) / Tr exp(-beta H)`` of the system.

    Full rank for finite beta; commutes with H by construction.  The
    exponential is shifted by the ground energy before normalization so
    large ``beta * E`` cannot overflow.
    """
    vals, vecs = linalg.eigh(system.hamiltonian)
    w = np.exp(-system.beta * (vals - vals[0]))
    w /= w.sum()
    tau = (vecs * w) @ linalg.dagger(vecs)
    return DensityOperator(tau, system)


def gibbs_weights(system: SystemSpec) -> np.ndarray:
    """Diagonal of the Gibbs state in the computational basis,
    ``tau_i = <i|tau|i>``."""
    return np.real(np.diag(gibbs_state(system).matrix))


# -- fidelity and purified distance -------------------------------------------

_PURE_RANK_TOL = 1e-12


def fidelity_matrices(rho: np.ndarray, sigma: np.ndarray) -> float:
    """Uhlmann fidelity ``F = Tr sqrt(sqrt(rho) sigma sqrt(rho))`` on raw
    matrices.

    Rank-one arguments take the exact pure-state path
    ``F = sqrt(<psi|sigma|psi>)``, which is both cheaper and better
    conditioned.  Inputs are hermitized but not otherwise validated (this
    sits in optimizer hot loops); the returned value may exceed 1 by
    rounding noise, so consumers that need ``F in [0, 1]`` must clip.
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise DimensionMismatchError(f"fidelity: shapes {rho.shape} vs {sigma.shape}")
    rho = (rho + rho.conj().T) / 2
    sigma = (sigma + sigma.conj().T) / 2
    vals_r, vecs_r = np.linalg.eigh(rho)
    if vals_r.size == 1 or np.max(np.abs(vals_r[:-1])) <= _PURE_RANK_TOL:
        v = np.sqrt(max(vals_r[-1], 0.0)) * vecs_r[:, -1]
        return float(np.sqrt(max(0.0, np.real(v.conj() @ sigma @ v))))
    vals_s = np.linalg.eigvalsh(sigma)
    if np.max(np.abs(vals_s[:-1])) <= _PURE_RANK_TOL:
        return fidelity_matrices(sigma, rho)
    sq = (vecs_r * np.sqrt(np.clip(vals_r, 0.0, None))) @ vecs_r.conj().T
    inner = sq @ sigma @ sq
    vals = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    return float(np.sum(np.sqrt(np.clip(vals, 0.0, None))))


def fidelity(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Uhlmann fidelity between two states on systems of equal dimension."""
    return min(1.0, fidelity_matrices(rho.matrix, sigma.matrix))


def purified_distance_matrices(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``sqrt(1 - F^2)`` with the documented noise-floor snap to zero."""
    f = fidelity_matrices(rho, sigma)
    gap = 1.0 - f * f
    if gap <= FIDELITY_GAP_FLOOR:
        return 0.0
    return float(np.sqrt(min(1.0, gap)))


def purified_distance(rho: DensityOperator, sigma: DensityOperator) -> float:
    """Purified distance, a metric on states (symmetry and triangle
    inequality hold up to the numerical floor)."""
    return purified_distance_matrices(rho.matrix, sigma.matrix)


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    """``(1/2) ||rho - sigma||_1``."""
    return 0.5 * linalg.norm(np.asarray(rho) - np.asarray(sigma), "trace")


# -- quantum Fisher information ------------------------------------------------

_QFI_DEGENERATE_TOL = 1e-12


def qfi_matrices(rho: np.ndarray, hamiltonian: np.ndarray) -> float:
    """Quantum Fisher information of ``rho`` for the generator ``H``:

        2 * sum_{i,j} (l_i - l_j)^2 / (l_i + l_j) |<e_i|H|e_j>|^2

    Terms with ``l_i + l_j <= 1e-12`` are omitted: both eigenvalues vanish,
    so the numerator vanishes at equal rate.  Equals ``4 Var_psi(H)`` on
    pure states and is additive over tensor factors with additive H.
    """
    vals, vecs = linalg.eigh(np.asarray(rho, dtype=complex))
    h_eig = linalg.dagger(vecs) @ np.asarray(hamiltonian, dtype=complex) @ vecs
    lsum = vals[:, None] + vals[None, :]
    ldiff = vals[:, None] - vals[None, :]
    mask = lsum > _QFI_DEGENERATE_TOL
    weights = np.zeros_like(lsum)
    weights[mask] = ldiff[mask] ** 2 / lsum[mask]
    total = 2.0 * np.sum(weights * np.abs(h_eig) ** 2)
    return float(max(0.0, total))


def qfi(rho: DensityOperator) -> float:
    """QFI of a state with respect to its own system Hamiltonian."""
    return qfi_matrices(rho.matrix, rho.system.hamiltonian)


# -- relative entropies against a full-rank reference --------------------------

_OVERLAP_FLOOR = 1e-15


def d_min(psi: PureState, tau: DensityOperator) -> float:
    """Min-relative entropy ``-log2 Tr(psi tau)`` of a pure state against a
    full-rank reference."""
    if psi.system.dim != tau.system.dim:
        raise DimensionMismatchError("d_min: state and reference dimensions differ")
    overlap = float(np.real(psi.amplitudes.conj() @ tau.matrix @ psi.amplitudes))
    if overlap <= _OVERLAP_FLOOR:
        raise ZeroOverlapError(f"d_min: overlap {overlap:.3e} at or below {_OVERLAP_FLOOR:.0e}")
    return float(-np.log2(overlap))


def d_max(rho: DensityOperator, tau: DensityOperator) -> float:
    """Max-relative entropy ``log2 min{s | rho <= s tau}`` against a
    full-rank reference, via the top eigenvalue of
    ``tau^{-1/2} rho tau^{-1/2}``."""
    if rho.system.dim != tau.system.dim:
        raise DimensionMismatchError("d_max: state and reference dimensions differ")
    vals, vecs = linalg.eigh(tau.matrix)
    if vals[0] <= _OVERLAP_FLOOR:
        raise NotPSDError(f"d_max: reference is numerically singular (min eig {vals[0]:.3e})")
    inv_sqrt = (vecs / np.sqrt(vals)) @ linalg.dagger(vecs)
    middle = inv_sqrt @ rho.matrix @ inv_sqrt
    top = float(np.linalg.eigvalsh((middle + linalg.dagger(middle)) / 2)[-1])
    return float(np.log2(top))


def spectral_spread(operator: np.ndarray, tol: float = linalg.TOL_STRUCTURAL) -> float:
    """Spread ``lambda_max - lambda_min`` of a Hermitian operator."""
    vals, _ = linalg.eigh(operator, tol)
    return float(vals[-1] - vals[0])
