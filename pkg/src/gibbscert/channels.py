"""CPTP maps between labeled systems.

A :class:`QuantumChannel` stores a Kraus list together with its input and
output :class:`~gibbscert.quantum.SystemSpec`.  Construction checks shapes
and that both systems share one inverse temperature (the single-bath
setting); whether the Kraus list actually forms a CPTP map is reported by
:func:`validate`, never assumed, so deliberately broken channels can be
built and inspected.

Channel equality is always tested at the Choi level (Kraus freedom).  The
Choi matrix convention is *output slow, input fast*:

    choi(ch) = sum_ij  ch(|i><j|)  (x)  |i><j|

so the identity channel gives the unnormalized maximally entangled
projector and a trace-preserving channel has identity input marginal
``Tr_out C = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    BetaMismatchError,
    CoherentEnvironmentStateError,
    DimensionMismatchError,
    NotPSDError,
    NotTracePreservingError,
)
from .quantum import DensityOperator, SystemSpec, gibbs_state, systems_compatible

__all__ = [
    "QuantumChannel",
    "ChannelCertificate",
    "GibbsVerdict",
    "CovarianceVerdict",
    "Dilation",
    "validate",
    "choi",
    "kraus_from_choi",
    "compose",
    "tensor_with_identity",
    "is_gibbs_preserving",
    "is_covariant",
    "covariance_defect_grid",
    "covariance_defect_choi",
    "channel_from_dilation",
    "energy_conservation_defect",
    "total_hamiltonian",
    "identity_channel",
    "replacer_channel",
    "measure_prepare_channel",
    "mix_channels",
    "choi_distance",
]


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """A map stored as a Kraus list; each operator is d_out x d_in."""

    kraus: tuple
    input: SystemSpec
    output: SystemSpec

    def __post_init__(self) -> None:
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        shape = (self.output.dim, self.input.dim)
        for k in ops:
            if k.shape != shape:
                raise DimensionMismatchError(
                    f"Kraus operator shape {k.shape}, expected {shape}"
                )
        if abs(self.input.beta - self.output.beta) > linalg.TOL_STRUCTURAL:
            raise BetaMismatchError(
                f"input beta {self.input.beta} != output beta {self.output.beta}"
            )
        for k in ops:
            k.setflags(write=False)
        object.__setattr__(self, "kraus", ops)

    # -- action ---------------------------------------------------------------

    def apply_matrix(self, rho: np.ndarray) -> np.ndarray:
        """``sum_k M_k rho M_k^dag`` on a raw matrix."""
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self.input.dim, self.input.dim):
            raise DimensionMismatchError(
                f"state shape {rho.shape} != input dim {self.input.dim}"
            )
        out = np.zeros((self.output.dim, self.output.dim), dtype=complex)
        for k in self.kraus:
            out += k @ rho @ linalg.dagger(k)
        return out

    def apply(self, rho: DensityOperator) -> DensityOperator:
        """Apply to a density operator on the input system."""
        if rho.system.dim != self.input.dim:
            raise DimensionMismatchError("state lives on a different-dimensional system")
        return DensityOperator(self.apply_matrix(rho.matrix), self.output)

    def dual_apply(self, observable: np.ndarray) -> np.ndarray:
        """Heisenberg-picture dual ``sum_k M_k^dag A M_k`` for an observable
        on the output system; satisfies ``Tr(dual(A) B) = Tr(A ch(B))``."""
        a = np.asarray(observable, dtype=complex)
        if a.shape != (self.output.dim, self.output.dim):
            raise DimensionMismatchError(
                f"observable shape {a.shape} != output dim {self.output.dim}"
            )
        out = np.zeros((self.input.dim, self.input.dim), dtype=complex)
        for k in self.kraus:
            out += linalg.dagger(k) @ a @ k
        return out


@dataclass(frozen=True)
class ChannelCertificate:
    """Verdict object of :func:`validate`; residuals are always reported."""

    trace_preserving: bool
    completely_positive: bool
    tp_residual: float
    cp_residual: float

    @property
    def cptp(self) -> bool:
        return self.trace_preserving and self.completely_positive


def choi(ch: QuantumChannel) -> np.ndarray:
    """Choi matrix, output factor slow: ``sum_k vec(M_k) vec(M_k)^dag``
    with row-major vec."""
    d = ch.output.dim * ch.input.dim
    c = np.zeros((d, d), dtype=complex)
    for k in ch.kraus:
        v = k.reshape(-1)
        c += np.outer(v, v.conj())
    return c


def choi_distance(ch1: QuantumChannel, ch2: QuantumChannel) -> float:
    """Hilbert-Schmidt distance between Choi matrices (channel equality test)."""
    return linalg.norm(choi(ch1) - choi(ch2), "hilbert_schmidt")


def validate(ch: QuantumChannel, tol: float = linalg.TOL_DERIVED) -> ChannelCertificate:
    """Report trace preservation and complete positivity with residuals.

    TP residual is ``||sum M^dag M - 1||_op``; CP residual is the most
    negative Choi eigenvalue (0 when none).
    """
    acc = np.zeros((ch.input.dim, ch.input.dim), dtype=complex)
    for k in ch.kraus:
        acc += linalg.dagger(k) @ k
    tp_res = linalg.norm(acc - np.eye(ch.input.dim), "operator")
    c = choi(ch)
    min_eig = float(np.linalg.eigvalsh((c + linalg.dagger(c)) / 2)[0])
    cp_res = max(0.0, -min_eig)
    return ChannelCertificate(
        trace_preserving=bool(tp_res <= tol),
        completely_positive=bool(cp_res <= tol),
        tp_residual=float(tp_res),
        cp_residual=cp_res,
    )


def kraus_from_choi(
    c: np.ndarray,
    input_system: SystemSpec,
    output_system: SystemSpec,
    tol: float = linalg.TOL_DERIVED,
) -> QuantumChannel:
    """Rebuild a channel from a PSD Choi matrix with identity input marginal.

    Raises :class:`NotPSDError` / :class:`NotTracePreservingError` when the
    matrix fails either requirement beyond ``tol``.  The round trip
    ``kraus_from_choi(choi(ch))`` reproduces the channel action within
    ``tol`` on arbitrary inputs.
    """
    d_in, d_out = input_system.dim, output_system.dim
    c = np.asarray(c, dtype=complex)
    if c.shape != (d_in * d_out, d_in * d_out):
        raise DimensionMismatchError(f"Choi shape {c.shape} != {(d_in * d_out,) * 2}")
    c = (c + linalg.dagger(c)) / 2
    vals, vecs = np.linalg.eigh(c)
    scale = max(1.0, float(vals[-1]))
    if vals[0] < -tol * scale:
        raise NotPSDError(f"Choi min eigenvalue {vals[0]:.3e}")
    marginal = linalg.partial_trace(c, (d_out, d_in), keep="B")
    tp_res = linalg.norm(marginal - np.eye(d_in), "operator")
    if tp_res > tol * scale:
        raise NotTracePreservingError(f"Choi input marginal off identity by {tp_res:.3e}")
    kraus = [
        np.sqrt(v) * vecs[:, idx].reshape(d_out, d_in)
        for idx, v in enumerate(vals)
        if v > tol * scale
    ]
    if not kraus:
        raise NotPSDError("Choi matrix is numerically zero")
    return QuantumChannel(tuple(kraus), input_system, output_system)


def compose(ch2: QuantumChannel, ch1: QuantumChannel) -> QuantumChannel:
    """Composite ``ch2 after ch1``; inner systems must agree."""
    if not systems_compatible(ch1.output, ch2.input):
        raise DimensionMismatchError(
            f"cannot compose: inner systems {ch1.output.label!r} and {ch2.input.label!r} differ"
        )
    kraus = tuple(b @ a for b in ch2.kraus for a in ch1.kraus)
    return QuantumChannel(kraus, ch1.input, ch2.output)


def tensor_with_identity(ch: QuantumChannel, d_ref: int) -> QuantumChannel:
    """Extend with an untouched reference of dimension ``d_ref`` on the left
    (trivial reference Hamiltonian): ``id (x) ch``."""
    eye = np.eye(d_ref, dtype=complex)

    def extended(sys: SystemSpec, tag: str) -> SystemSpec:
        h = linalg.tensor(np.zeros((d_ref, d_ref)), np.eye(sys.dim)) + linalg.tensor(
            eye, sys.hamiltonian
        )
        return SystemSpec(f"R{d_ref}*{sys.label}{tag}", d_ref * sys.dim, h, sys.beta)

    kraus = tuple(linalg.tensor(eye, k) for k in ch.kraus)
    return QuantumChannel(kraus, extended(ch.input, ""), extended(ch.output, "'"))


# -- certification predicates ---------------------------------------------------

@dataclass(frozen=True)
class GibbsVerdict:
    ok: bool
    residual: float


def is_gibbs_preserving(ch: QuantumChannel, tol: float = linalg.TOL_DERIVED) -> GibbsVerdict:
    """Check ``ch(tau_in) == tau_out`` in trace norm."""
    if abs(ch.input.beta - ch.output.beta) > linalg.TOL_STRUCTURAL:
        raise BetaMismatchError("systems carry different inverse temperatures")
    image = ch.apply_matrix(gibbs_state(ch.input).matrix)
    residual = linalg.norm(image - gibbs_state(ch.output).matrix, "trace")
    return GibbsVerdict(ok=bool(residual <= tol), residual=float(residual))


@dataclass(frozen=True)
class CovarianceVerdict:
    ok: bool
    defect: float
    t_grid: tuple


def _bohr_frequencies(h: np.ndarray) -> np.ndarray:
    vals = np.linalg.eigvalsh(np.asarray(h, dtype=complex))
    diffs = np.abs(vals[:, None] - vals[None, :]).reshape(-1)
    diffs = diffs[diffs > 1e-12]
    if diffs.size == 0:
        return np.empty(0)
    out: list[float] = []
    for w in np.sort(diffs):
        if not out or w - out[-1] > 1e-12:
            out.append(float(w))
    return np.asarray(out)


def _covariance_t_grid(ch: QuantumChannel) -> tuple:
    freqs = np.concatenate(
        [_bohr_frequencies(ch.input.hamiltonian), _bohr_frequencies(ch.output.hamiltonian)]
    )
    if freqs.size == 0:
        return ()
    ts: list[float] = []
    for w in freqs:
        ts.extend([np.pi / w, 1.0 / w])
    # incommensurate samples guard against accidental periodicity alignment
    w_max, w_min = float(freqs.max()), float(freqs.min())
    ts.extend([np.sqrt(2.0) / w_max, np.e / w_min, (1 + np.sqrt(5.0)) / (2 * w_max)])
    return tuple(sorted(set(ts)))


def _twirled(ch: QuantumChannel, t: float) -> QuantumChannel:
    u_in = linalg.mat_func(ch.input.hamiltonian, lambda v: np.exp(-1j * v * t))
    u_out = linalg.mat_func(ch.output.hamiltonian, lambda v: np.exp(1j * v * t))
    return QuantumChannel(
        tuple(u_out @ k @ u_in for k in ch.kraus), ch.input, ch.output
    )


def covariance_defect_grid(ch: QuantumChannel) -> tuple[float, tuple]:
    """Max Choi distance between the channel and its time-conjugated
    version over a grid of times spanning the Bohr frequencies."""
    grid = _covariance_t_grid(ch)
    defect = 0.0
    c0 = choi(ch)
    for t in grid:
        defect = max(defect, linalg.norm(choi(_twirled(ch, t)) - c0, "hilbert_schmidt"))
    return defect, grid

def covariance_defect_choi(ch: QuantumChannel) -> float:
    """Algebraic covariance defect: commutator of the Choi matrix with the
    frequency-sector generator ``H_out (x) 1 - 1 (x) H_in^T``.

    Zero exactly when the channel commutes with time evolution for *all*
    real times, so it agrees verdict-wise with the finite grid test.
    """
    c = choi(ch)
    k = linalg.tensor(ch.output.hamiltonian, np.eye(ch.input.dim)) - linalg.tensor(
        np.eye(ch.output.dim), ch.input.hamiltonian.T
    )
    return linalg.norm(c @ k - k @ c, "hilbert_schmidt")


def is_covariant(ch: QuantumChannel, tol: float = 1e-8) -> CovarianceVerdict:
    """Grid-based covariance check; ``defect`` is the worst Choi distance
    found on the time grid (empty grid means trivially covariant)."""
    defect, grid = covariance_defect_grid(ch)
    return CovarianceVerdict(ok=bool(defect <= tol), defect=defect, t_grid=grid)


# -- dilations -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Dilation:
    """A unitary dilation ``rho -> Tr_env_out[ V (rho (x) env_state) V^dag ]``.

    ``unitary`` maps the ordered product ``system (x) environment`` to
    ``output (x) environment_out``.  The environment state may be mixed
    (e.g. a Gibbs state or a prepared resource); pure dilation statements
    are enforced where they are needed, not here.
    """

    system: SystemSpec
    environment: SystemSpec
    output: SystemSpec
    environment_out: SystemSpec
    unitary: np.ndarray
    env_state: DensityOperator

    def __post_init__(self) -> None:
        d_in = self.system.dim * self.environment.dim
        d_out = self.output.dim * self.environment_out.dim
        if d_in != d_out:
            raise DimensionMismatchError(
                f"dilation total dims differ: {d_in} vs {d_out}"
            )
        v = np.array(self.unitary, dtype=complex)
        if v.shape != (d_in, d_in):
            raise DimensionMismatchError(f"unitary shape {v.shape} != {(d_in, d_in)}")
        if linalg.norm(linalg.dagger(v) @ v - np.eye(d_in), "operator") > linalg.TOL_DERIVED:
            raise ValueError("dilation matrix is not unitary within 1e-9")
        if self.env_state.system.dim != self.environment.dim:
            raise DimensionMismatchError("environment state has wrong dimension")
        v.setflags(write=False)
        object.__setattr__(self, "unitary", v)

    def hamiltonian_in(self) -> np.ndarray:
        return total_hamiltonian(self.system, self.environment)

    def hamiltonian_out(self) -> np.ndarray:
        return total_hamiltonian(self.output, self.environment_out)


def total_hamiltonian(a: SystemSpec, b: SystemSpec) -> np.ndarray:
    """``H_a (x) 1 + 1 (x) H_b`` on the ordered product a (x) b."""
    return linalg.tensor(a.hamiltonian, np.eye(b.dim)) + linalg.tensor(
        np.eye(a.dim), b.hamiltonian
    )


def channel_from_dilation(dil: Dilation, weight_tol: float = 1e-14) -> QuantumChannel:
    """Kraus operators ``sqrt(w_l) (1 (x) <k|_env_out) V (1 (x) |chi_l>_env)``
    over the spectral decomposition ``env_state = sum_l w_l |chi_l><chi_l|``."""
    d_s, d_e = dil.system.dim, dil.environment.dim
    d_sp, d_ep = dil.output.dim, dil.environment_out.dim
    v4 = dil.unitary.reshape(d_sp, d_ep, d_s, d_e)
    w, chi = np.linalg.eigh(dil.env_state.matrix)
    kraus = []
    for l in range(len(w)):
        if w[l] <= weight_tol:
            continue
        amp = np.sqrt(w[l]) * chi[:, l]
        block = np.tensordot(v4, amp, axes=([3], [0]))  # (d_sp, d_ep, d_s)
        for k in range(d_ep):
            kraus.append(np.ascontiguousarray(block[:, k, :]))
    return QuantumChannel(tuple(kraus), dil.system, dil.output)


def energy_conservation_defect(dil: Dilation) -> float:
    """Hilbert-Schmidt norm of ``V H_in - H_out V``.

    When input and output factorizations coincide this is the commutator
    norm ``||[V, H_tot]||_2``; for relabeled factor orders it is the same
    quantity expressed in each side's own frame.
    """
    v = dil.unitary
    return linalg.norm(v @ dil.hamiltonian_in() - dil.hamiltonian_out() @ v, "hilbert_schmidt")


def incoherent_env_defect(dil: Dilation) -> float:
    """``||[env_state, H_env]||_2`` - zero for incoherent environments."""
    h = dil.environment.hamiltonian
    m = dil.env_state.matrix
    return linalg.norm(m @ h - h @ m, "hilbert_schmidt")


def require_incoherent_env(dil: Dilation, tol: float = linalg.TOL_STRUCTURAL) -> None:
    defect = incoherent_env_defect(dil)
    if defect > tol:
        raise CoherentEnvironmentStateError(
            f"environment state carries energetic coherence (defect {defect:.3e})"
        )


# -- convenience builders ---------------------------------------------------------

def identity_channel(system: SystemSpec) -> QuantumChannel:
    return QuantumChannel((np.eye(system.dim, dtype=complex),), system, system)


def replacer_channel(input_system: SystemSpec, target: DensityOperator) -> QuantumChannel:
    """Discard the input and prepare ``target``."""
    w, chi = np.linalg.eigh(target.matrix)
    kraus = []
    for l in range(len(w)):
        if w[l] <= 1e-14:
            continue
        for k in range(input_system.dim):
            m = np.zeros((target.system.dim, input_system.dim), dtype=complex)
            m[:, k] = np.sqrt(w[l]) * chi[:, l]
            kraus.append(m)
    return QuantumChannel(tuple(kraus), input_system, target.system)


def measure_prepare_channel(
    input_system: SystemSpec,
    output_system: SystemSpec,
    projectors: list[np.ndarray],
    preparations: list[np.ndarray],
) -> QuantumChannel:
    """``rho -> sum_m Tr(P_m rho) omega_m`` for projective effects ``P_m``
    summing to the identity and prepared states ``omega_m``.

    Kraus operators are ``sqrt(w_{m,l}) |chi_{m,l}><b_{m,k}|`` over the
    spectral data of each effect and preparation.
    """
    if len(projectors) != len(preparations):
        raise DimensionMismatchError("one preparation per projector required")
    total = sum(np.asarray(p, dtype=complex) for p in projectors)
    if linalg.norm(total - np.eye(input_system.dim), "operator") > linalg.TOL_DERIVED:
        raise NotTracePreservingError("projectors do not sum to the identity")
    kraus = []
    for p, omega in zip(projectors, preparations):
        pv, pb = np.linalg.eigh(np.asarray(p, dtype=complex))
        w, chi = np.linalg.eigh(np.asarray(omega, dtype=complex))
        for kk in range(len(pv)):
            if pv[kk] < 0.5:
                continue
            for l in range(len(w)):
                if w[l] <= 1e-14:
                    continue
                kraus.append(np.sqrt(w[l]) * np.outer(chi[:, l], pb[:, kk].conj()))
    return QuantumChannel(tuple(kraus), input_system, output_system)


def mix_channels(
    ch_a: QuantumChannel, ch_b: QuantumChannel, p: float
) -> QuantumChannel:
    """Convex mixture ``(1-p) ch_a + p ch_b`` of channels with matching
    systems."""
    if not (
        systems_compatible(ch_a.input, ch_b.input)
        and systems_compatible(ch_a.output, ch_b.output)
    ):
        raise DimensionMismatchError("mixture requires matching input/output systems")
    if not 0.0 <= p <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    kraus = tuple(np.sqrt(1.0 - p) * k for k in ch_a.kraus) + tuple(
        np.sqrt(p) * k for k in ch_b.kraus
    )
    return QuantumChannel(kraus, ch_a.input, ch_a.output)
