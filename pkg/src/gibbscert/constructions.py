"""Factory for the explicit Gibbs-preserving channels, state pairs, and
dilations handled by the toolkit.

Every factory returns a :class:`ConstructionResult` whose channel has been
checked to be CPTP and Gibbs-preserving; when a reversible pair with an
exact recovery exists it is attached, and named scalars (mixing ratio,
energies, closed-form off-diagonal energy-change values) are recorded in
``metadata``.

Conventions: the energy eigenbasis is the computational basis, levels are
indexed in construction input order (never re-sorted by weight), and
superposition coefficients are fixed real and nonnegative so orthogonal
partners are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .channels import (
    Dilation,
    QuantumChannel,
    is_gibbs_preserving,
    measure_prepare_channel,
    validate,
)
from .errors import (
    BetaMismatchError,
    CheckFailedError,
    ConditionNotMetError,
    DimensionMismatchError,
    InfeasibleEtaError,
    InvalidIndexError,
    InvalidSpectrumError,
    NonPositiveAError,
    NotOrthogonalError,
    NotPSDError,
    PreconditionViolatedError,
)
from .quantum import (
    DensityOperator,
    PureState,
    SystemSpec,
    d_max,
    d_min,
    gibbs_state,
    gibbs_weights,
    qfi,
)

__all__ = [
    "ReversiblePair",
    "ConstructionResult",
    "faist_channel",
    "coherent_measurement_channel",
    "general_pairwise_channel",
    "corollary_inputs",
    "proposition_channel",
    "state_transition_channel",
    "appendix_e_dilations",
    "tightness_example",
]

_PSD_FEASIBILITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ReversiblePair:
    """Two mutually orthogonal input states, optionally with the explicit
    recovery channel that restores them after the channel they accompany."""

    rho1: DensityOperator
    rho2: DensityOperator
    recovery: QuantumChannel | None = None

    def __post_init__(self) -> None:
        overlap = abs(np.trace(self.rho1.matrix @ self.rho2.matrix))
        if overlap > _PSD_FEASIBILITY_TOL:
            raise NotOrthogonalError(f"pair overlap Tr(rho1 rho2) = {overlap:.3e}")


@dataclass(frozen=True, eq=False)
class ConstructionResult:
    channel: QuantumChannel
    pair: ReversiblePair | None
    metadata: dict = field(default_factory=dict)


def _certified(
    channel: QuantumChannel,
    pair: ReversiblePair | None,
    metadata: dict,
) -> ConstructionResult:
    """Internal gate: every factory output must be CPTP and Gibbs-preserving."""
    cert = validate(channel)
    if not cert.cptp:
        raise CheckFailedError(
            f"constructed channel is not CPTP (tp {cert.tp_residual:.2e}, cp {cert.cp_residual:.2e})"
        )
    verdict = is_gibbs_preserving(channel)
    if not verdict.ok:
        raise CheckFailedError(
            f"constructed channel is not Gibbs-preserving (residual {verdict.residual:.2e})"
        )
    return ConstructionResult(channel=channel, pair=pair, metadata=metadata)


def _require_diagonal(system: SystemSpec, err: type) -> np.ndarray:
    h = system.hamiltonian
    off = h - np.diag(np.diag(h))
    if linalg.norm(off, "operator") > linalg.TOL_STRUCTURAL:
        raise err(
            f"system {system.label!r}: Hamiltonian must be diagonal in the computational basis"
        )
    return np.real(np.diag(h))


# -- measure-and-prepare qubit channel with a free output state ----------------

def faist_channel(system: SystemSpec, eta: DensityOperator) -> ConstructionResult:
    """Qubit channel ``rho -> <1|rho|1> eta + <0|rho|0> sigma`` with
    ``sigma = (tau - <1|tau|1> eta) / <0|tau|0>``.

    Gibbs-preserving by construction for any feasible ``eta``; with a
    coherent ``eta`` it creates coherence from the incoherent input
    ``|1><1|``.  Raises :class:`InfeasibleEtaError` when the induced sigma
    has an eigenvalue below ``-1e-10``.
    """
    if system.dim != 2:
        raise DimensionMismatchError("faist_channel is a qubit construction")
    if eta.system.dim != 2:
        raise DimensionMismatchError("eta must be a qubit state")
    tau = gibbs_state(system).matrix
    tau0 = float(np.real(tau[0, 0]))
    tau1 = float(np.real(tau[1, 1]))
    sigma = (tau - tau1 * eta.matrix) / tau0
    min_eig = float(np.linalg.eigvalsh((sigma + linalg.dagger(sigma)) / 2)[0])
    if min_eig < -_PSD_FEASIBILITY_TOL:
        raise InfeasibleEtaError(
            f"induced sigma has eigenvalue {min_eig:.3e}; chosen eta is infeasible"
        )
    proj0 = np.diag([1.0, 0.0]).astype(complex)
    proj1 = np.diag([0.0, 1.0]).astype(complex)
    channel = measure_prepare_channel(system, system, [proj1, proj0], [eta.matrix, sigma])
    eta_s = DensityOperator(eta.matrix, system)
    sigma_s = DensityOperator(sigma, system)
    meta = {
        "tau0": tau0,
        "tau1": tau1,
        "qfi_eta": qfi(eta_s),
        "qfi_sigma": qfi(sigma_s),
    }
    result = _certified(channel, None, meta)
    return result


# -- coherent-basis measurement qubit channel ----------------------------------

def _plus_minus(dim: int = 2) -> tuple[np.ndarray, np.ndarray]:
    plus = np.zeros(dim, dtype=complex)
    minus = np.zeros(dim, dtype=complex)
    plus[0] = plus[1] = 1 / np.sqrt(2.0)
    minus[0], minus[1] = 1 / np.sqrt(2.0), -1 / np.sqrt(2.0)
    return plus, minus


def _coherent_measurement(beta: float, energy: float, label: str) -> tuple[ConstructionResult, SystemSpec, SystemSpec]:
    s_in = SystemSpec(f"{label}", 2, np.diag([0.0, energy]), beta)
    s_out = SystemSpec(f"{label}'", 2, np.zeros((2, 2)), beta)
    plus, minus = _plus_minus()
    e0 = np.array([1.0, 0.0], dtype=complex)
    e1 = np.array([0.0, 1.0], dtype=complex)
    kraus = (np.outer(e0, plus.conj()), np.outer(e1, minus.conj()))
    channel = QuantumChannel(kraus, s_in, s_out)
    recovery = QuantumChannel(
        (np.outer(plus, e0.conj()), np.outer(minus, e1.conj())), s_out, s_in
    )
    pair = ReversiblePair(
        DensityOperator(np.outer(plus, plus.conj()), s_in),
        DensityOperator(np.outer(minus, minus.conj()), s_in),
        recovery,
    )
    meta = {"C": energy / 2.0, "r": 0.5, "energy_gap": energy}
    return _certified(channel, pair, meta), s_in, s_out


def coherent_measurement_channel(beta: float) -> ConstructionResult:
    """Measurement in the maximally coherent qubit basis with incoherent
    re-preparation: ``rho -> <+|rho|+> |0><0| + <-|rho|-> |1><1|``.

    Input Hamiltonian ``|1><1|``, trivial output Hamiltonian; maps the
    Gibbs state to ``1/2`` for every beta, and the pair ``{|+>, |->}`` is
    perfectly recovered by re-preparing ``|+->`` from the outcome.  The
    off-diagonal energy-change value for that pair is exactly ``1/2``.
    """
    result, _, _ = _coherent_measurement(beta, 1.0, "S")
    return result


# -- general two-outcome pairwise-reversible construction ----------------------

def _orthogonal_partner(
    psi: PureState, i: int, j: int
) -> PureState:
    """Deterministic orthogonal partner supported on levels ``(i, j)``:
    ``conj(a_j)|i> - conj(a_i)|j>`` normalized."""
    a = psi.amplitudes
    v = np.zeros(psi.system.dim, dtype=complex)
    v[i] = np.conj(a[j])
    v[j] = -np.conj(a[i])
    return PureState.normalized(v, psi.system)


def general_pairwise_channel(
    psi: PureState, phi: PureState, tol: float = 1e-8
) -> ConstructionResult:
    """Two-outcome measure-and-prepare channel
    ``rho -> Tr(psi rho) phi + Tr[(1-psi) rho] eta`` with
    ``eta = (tau' - Tr(psi tau) phi) / Tr[(1-psi) tau]``.

    Feasibility requires the entropy matching conditions

        d_min(psi||tau) == d_min(phi||tau') == d_max(phi||tau')

    within ``tol`` and that ``psi`` occupies two levels of distinct energy.
    Then eta is a valid state orthogonal to phi, the pair
    ``{psi, psi_perp}`` is exactly recoverable, and the off-diagonal
    energy-change value is ``|a_i a_j| |E_i - E_j| / sqrt(a_i^2 + a_j^2) > 0``.
    """
    s_in, s_out = psi.system, phi.system
    energies = _require_diagonal(s_in, PreconditionViolatedError)
    _require_diagonal(s_out, PreconditionViolatedError)
    tau_in = gibbs_state(s_in)
    tau_out = gibbs_state(s_out)

    dmin_psi = d_min(psi, tau_in)
    dmin_phi = d_min(phi, tau_out)
    dmax_phi = d_max(phi.density(), tau_out)
    if abs(dmin_psi - dmin_phi) > tol:
        raise PreconditionViolatedError(
            "entropy matching failed: "
            f"d_min(psi||tau)={dmin_psi:.12g} vs d_min(phi||tau')={dmin_phi:.12g} "
            f"(residual {abs(dmin_psi - dmin_phi):.3e})"
        )
    if abs(dmin_phi - dmax_phi) > tol:
        raise PreconditionViolatedError(
            "flatness failed: "
            f"d_min(phi||tau')={dmin_phi:.12g} vs d_max(phi||tau')={dmax_phi:.12g} "
            f"(residual {abs(dmin_phi - dmax_phi):.3e})"
        )

    occupied = [n for n in range(s_in.dim) if abs(psi.amplitudes[n]) > 1e-8]
    level_pair = None
    for a_idx in range(len(occupied)):
        for b_idx in range(a_idx + 1, len(occupied)):
            i, j = occupied[a_idx], occupied[b_idx]
            if abs(energies[i] - energies[j]) > 1e-12:
                level_pair = (i, j)
                break
        if level_pair:
            break
    if level_pair is None:
        raise PreconditionViolatedError(
            "psi must occupy two levels with distinct energies"
        )
    i, j = level_pair

    psi_proj = psi.projector()
    phi_proj = phi.projector()
    overlap_tau = float(np.real(np.trace(psi_proj @ tau_in.matrix)))
    eta = (tau_out.matrix - overlap_tau * phi_proj) / (1.0 - overlap_tau)
    eta = (eta + linalg.dagger(eta)) / 2
    min_eig = float(np.linalg.eigvalsh(eta)[0])
    if min_eig < -_PSD_FEASIBILITY_TOL:
        raise PreconditionViolatedError(
            f"induced eta has eigenvalue {min_eig:.3e}; entropy conditions too loose"
        )

    eye_in = np.eye(s_in.dim, dtype=complex)
    eye_out = np.eye(s_out.dim, dtype=complex)
    channel = measure_prepare_channel(
        s_in, s_out, [psi_proj, eye_in - psi_proj], [phi_proj, eta]
    )
    psi_perp = _orthogonal_partner(psi, i, j)
    recovery = measure_prepare_channel(
        s_out, s_in, [phi_proj, eye_out - phi_proj], [psi_proj, psi_perp.projector()]
    )
    pair = ReversiblePair(psi.density(), psi_perp.density(), recovery)

    a_i, a_j = abs(psi.amplitudes[i]), abs(psi.amplitudes[j])
    c_closed = a_i * a_j * abs(energies[i] - energies[j]) / np.sqrt(a_i**2 + a_j**2)
    local_change = s_in.hamiltonian - channel.dual_apply(s_out.hamiltonian)
    c_exact = abs(complex(psi.amplitudes.conj() @ local_change @ psi_perp.amplitudes))
    meta = {
        "C": c_exact,
        "C_closed_form": float(c_closed),
        "level_i": float(i),
        "level_j": float(j),
        "d_min_psi": dmin_psi,
        "d_min_phi": dmin_phi,
        "d_max_phi": dmax_phi,
        "phi_eta_overlap": float(np.real(np.trace(phi_proj @ eta))),
    }
    return _certified(channel, pair, meta)


def corollary_inputs(
    s_in: SystemSpec, s_out: SystemSpec, i: int, j: int, i_prime: int
) -> tuple[PureState, PureState, float]:
    """Input pair for :func:`general_pairwise_channel` from the strict
    Gibbs-weight ordering ``tau_{S,i} < tau_{S',i'} < tau_{S,j}``:

        r = (tau_{S',i'} - tau_{S,j}) / (tau_{S,i} - tau_{S,j})
        psi = sqrt(r)|i> + sqrt(1-r)|j>,   phi = |i'>

    The returned states satisfy the entropy matching conditions within
    1e-10 for desk-scale energies.
    """
    _require_diagonal(s_in, ConditionNotMetError)
    _require_diagonal(s_out, ConditionNotMetError)
    for name, idx, dim in (("i", i, s_in.dim), ("j", j, s_in.dim), ("i'", i_prime, s_out.dim)):
        if not 0 <= idx < dim:
            raise InvalidIndexError(f"index {name}={idx} outside [0, {dim})")
    if i == j:
        raise InvalidIndexError("indices i and j must differ")
    w_in = gibbs_weights(s_in)
    w_out = gibbs_weights(s_out)
    t_i, t_j, t_ip = float(w_in[i]), float(w_in[j]), float(w_out[i_prime])
    if not (t_i < t_ip < t_j):
        raise ConditionNotMetError(
            "strict ordering tau_{S,i} < tau_{S',i'} < tau_{S,j} violated: "
            f"tau_i={t_i:.12g}, tau_i'={t_ip:.12g}, tau_j={t_j:.12g}"
        )
    r = (t_ip - t_j) / (t_i - t_j)
    amp = np.zeros(s_in.dim, dtype=complex)
    amp[i] = np.sqrt(r)
    amp[j] = np.sqrt(1.0 - r)
    psi = PureState.normalized(amp, s_in)
    phi = PureState.basis(s_out, i_prime)
    return psi, phi, float(r)


# -- alternative construction on adjacent levels --------------------------------

def proposition_channel(
    d: int, d_prime: int, energies, i: int, beta: float
) -> ConstructionResult:
    """Channel measuring the coherent pair on adjacent levels ``(i, i+1)``
    of a d-level system and preparing ``|0>, |1>`` (plus a residual state
    on the complement) in a d'-level system sharing the same spectrum.

    Requires ``d >= 3``, ``2 <= d' <= d``, an ascending energy list, and a
    strict gap ``E_{i+1} > E_i`` with ``1 <= i <= d-2``.  The pair
    ``{|+>_{i,i+1}, |->_{i,i+1}}`` is exactly recoverable and its
    off-diagonal energy-change value is ``(E_{i+1} - E_i) / 2``.
    """
    e = np.asarray(list(energies), dtype=float)
    if d < 3:
        raise InvalidSpectrumError("construction needs d >= 3")
    if not 2 <= d_prime <= d:
        raise InvalidSpectrumError("construction needs 2 <= d' <= d")
    if e.size < d:
        raise InvalidSpectrumError(f"need at least {d} energies, got {e.size}")
    e = e[:d]
    if np.any(np.diff(e) < -1e-12):
        raise InvalidSpectrumError("energies must be ascending")
    if not np.any(np.diff(e[1:]) > 1e-12):
        raise InvalidSpectrumError("spectrum is fully degenerate above the ground level")
    if not 1 <= i <= d - 2:
        raise InvalidIndexError(f"index i={i} outside [1, {d - 2}]")
    if not e[i + 1] > e[i] + 1e-12:
        raise InvalidIndexError(f"levels {i},{i + 1} are degenerate: E={e[i]!r}")

    s_in = SystemSpec("Sd", d, np.diag(e), beta)
    s_out = SystemSpec("Sd'", d_prime, np.diag(e[:d_prime]), beta)
    tau_in = gibbs_state(s_in).matrix
    tau_out = gibbs_state(s_out).matrix

    plus = np.zeros(d, dtype=complex)
    minus = np.zeros(d, dtype=complex)
    plus[i] = plus[i + 1] = 1 / np.sqrt(2.0)
    minus[i], minus[i + 1] = 1 / np.sqrt(2.0), -1 / np.sqrt(2.0)
    plus_proj = np.outer(plus, plus.conj())
    minus_proj = np.outer(minus, minus.conj())
    p_rest = np.eye(d, dtype=complex) - plus_proj - minus_proj

    w_plus = float(np.real(plus.conj() @ tau_in @ plus))
    w_minus = float(np.real(minus.conj() @ tau_in @ minus))
    ket0 = np.zeros((d_prime, d_prime), dtype=complex)
    ket0[0, 0] = 1.0
    ket1 = np.zeros((d_prime, d_prime), dtype=complex)
    ket1[1, 1] = 1.0
    rest_weight = float(np.real(np.trace(p_rest @ tau_in)))
    eta = (tau_out - w_plus * ket0 - w_minus * ket1) / rest_weight
    eta = (eta + linalg.dagger(eta)) / 2
    min_eig = float(np.linalg.eigvalsh(eta)[0])
    if min_eig < -_PSD_FEASIBILITY_TOL:
        raise NotPSDError(f"residual state eta has eigenvalue {min_eig:.3e}")

    channel = measure_prepare_channel(
        s_in, s_out, [plus_proj, minus_proj, p_rest], [ket0, ket1, eta]
    )
    recovery = measure_prepare_channel(
        s_out,
        s_in,
        [np.eye(d_prime, dtype=complex) - ket1, ket1],
        [plus_proj, minus_proj],
    )
    pair = ReversiblePair(
        DensityOperator(plus_proj, s_in), DensityOperator(minus_proj, s_in), recovery
    )
    meta = {
        "C": (e[i + 1] - e[i]) / 2.0,
        "level_i": float(i),
        "gap": float(e[i + 1] - e[i]),
        "eta_min_eig": min_eig,
    }
    return _certified(channel, pair, meta)


# -- state-transition channel ----------------------------------------------------

def state_transition_channel(
    s_in: SystemSpec, s_out: SystemSpec, i: int, j: int, i_prime: int
) -> tuple[ConstructionResult, PureState, PureState, DensityOperator]:
    """Channel realizing the transition ``|eta_+> -> |i'>`` whose every
    Gibbs-preserving implementation has the same diverging coherence cost.

    Built from the strict weight ordering of :func:`corollary_inputs`;
    returns the channel result plus the transition states: the coherent
    input ``|eta_+> = sqrt(r)|i> + sqrt(1-r)|j>``, its orthogonal partner
    ``|eta_-> = sqrt(1-r)|i> - sqrt(r)|j>``, and the residual output state
    ``xi``.  The pair's squared off-diagonal energy-change value is
    ``r (1-r) (E_i - E_j)^2``.
    """
    eta_plus, phi, r = corollary_inputs(s_in, s_out, i, j, i_prime)
    result = general_pairwise_channel(eta_plus, phi)
    energies = np.real(np.diag(s_in.hamiltonian))
    c_squared = r * (1.0 - r) * (energies[i] - energies[j]) ** 2
    meta = dict(result.metadata)
    meta.update({"r": r, "C_squared_closed_form": float(c_squared)})
    certified = ConstructionResult(result.channel, result.pair, meta)

    tau_out = gibbs_state(s_out).matrix
    overlap = float(np.real(eta_plus.amplitudes.conj() @ gibbs_state(s_in).matrix @ eta_plus.amplitudes))
    xi = (tau_out - overlap * phi.projector()) / (1.0 - overlap)
    xi_state = DensityOperator((xi + linalg.dagger(xi)) / 2, s_out)
    eta_minus_pure = PureState.normalized(
        _orthogonal_partner(eta_plus, i, j).amplitudes, s_in
    )
    return certified, eta_plus, eta_minus_pure, xi_state


# -- explicit dilations for the coherence-creating channel ------------------------

def _swap_gate(d: int = 2) -> np.ndarray:
    s = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            s[b * d + a, a * d + b] = 1.0
    return s


def _cnot_control_first() -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = m[1, 1] = 1.0  # |00>,|01> fixed
    m[3, 2] = m[2, 3] = 1.0  # |10><->|11>
    return m


def _move_middle_front(d0: int, d1: int, d2: int) -> np.ndarray:
    """Permutation sending basis ``|a,b,c>`` (dims d0,d1,d2) to ``|b,a,c>``."""
    n = d0 * d1 * d2
    p = np.zeros((n, n), dtype=complex)
    for a in range(d0):
        for b in range(d1):
            for c in range(d2):
                src = (a * d1 + b) * d2 + c
                dst = (b * d0 + a) * d2 + c
                p[dst, src] = 1.0
    return p


def appendix_e_dilations(
    beta: float, eta: DensityOperator, sigma: DensityOperator
) -> tuple[Dilation, Dilation, float]:
    """Two energy-conserving dilations whose composition implements the
    measure-and-prepare qubit channel ``rho -> <1|rho|1> eta + <0|rho|0> sigma``.

    Stage one copies the energy basis of S into a trivial-Hamiltonian
    environment qubit via a CNOT and discards S (a dephasing S -> E).
    Stage two conditionally swaps a prepared resource pair ``sigma (x) eta``
    into the output, controlled on E.  Both unitaries commute with the
    total Hamiltonian for ``H_E = 0`` and matching system Hamiltonians, so
    the only coherence consumed is the resource itself: the cost ceiling is
    ``qfi(eta) + qfi(sigma)``.
    """
    s_sys = eta.system
    if s_sys.dim != 2 or sigma.system.dim != 2:
        raise DimensionMismatchError("construction uses qubit systems")
    if abs(s_sys.beta - beta) > linalg.TOL_STRUCTURAL:
        raise BetaMismatchError(f"eta system beta {s_sys.beta} != requested beta {beta}")
    env = SystemSpec("E", 2, np.zeros((2, 2)), beta)

    # stage one: CNOT (control S, target E), keep E
    swap = _swap_gate(2)
    v1 = swap @ _cnot_control_first()
    ket0 = np.zeros((2, 2), dtype=complex)
    ket0[0, 0] = 1.0
    dil_u = Dilation(
        system=s_sys,
        environment=env,
        output=env,
        environment_out=s_sys,
        unitary=v1,
        env_state=DensityOperator(ket0, env),
    )

    # stage two: controlled swap of the prepared pair into the kept slot
    resource_h = linalg.tensor(s_sys.hamiltonian, np.eye(2)) + linalg.tensor(
        np.eye(2), s_sys.hamiltonian
    )
    resource_sys = SystemSpec("S*S~", 4, resource_h, beta)
    resource_state = DensityOperator(
        linalg.tensor(sigma.matrix, eta.matrix), resource_sys
    )
    cswap = linalg.tensor(np.diag([1.0, 0.0]), np.eye(4)) + linalg.tensor(
        np.diag([0.0, 1.0]), swap
    )
    v2 = _move_middle_front(2, 2, 2) @ cswap
    env_out_h = linalg.tensor(np.zeros((2, 2)), np.eye(2)) + linalg.tensor(
        np.eye(2), s_sys.hamiltonian
    )
    env_out = SystemSpec("E*S~", 4, env_out_h, beta)
    dil_v = Dilation(
        system=env,
        environment=resource_sys,
        output=s_sys,
        environment_out=env_out,
        unitary=v2,
        env_state=resource_state,
    )

    cost_upper = qfi(eta) + qfi(DensityOperator(sigma.matrix, s_sys))
    return dil_u, dil_v, float(cost_upper)


# -- near-saturating example for the cost bounds ----------------------------------

def tightness_example(
    a: float, beta: float = 1.0
) -> tuple[ConstructionResult, Dilation, float]:
    """Coherent-basis measurement channel scaled so the cost window closes
    to width ``2a``: input Hamiltonian ``(a/sqrt(2)) |1><1|``, trivial
    output Hamiltonian.

    Returns the channel (with reversible pair, off-diagonal energy change
    ``a / (2 sqrt(2))``), the energy-conserving dilation built from a
    Hadamard followed by a CNOT with a ``|0>`` environment, and the scale
    ``a/sqrt(2)``.  The dilation's rotated-Hamiltonian spread equals
    ``sqrt(2)`` times the scale, i.e. ``2 sqrt(2)`` times the off-diagonal
    energy-change value.
    """
    if not a > 0:
        raise NonPositiveAError(f"scale a must be positive, got {a!r}")
    a_tilde = a / np.sqrt(2.0)
    result, s_in, s_out = _coherent_measurement(beta, a_tilde, "T")

    hadamard = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)
    v = _swap_gate(2) @ _cnot_control_first() @ linalg.tensor(hadamard, np.eye(2))
    ket0 = np.zeros((2, 2), dtype=complex)
    ket0[0, 0] = 1.0
    dil = Dilation(
        system=s_in,
        environment=s_out,
        output=s_out,
        environment_out=s_in,
        unitary=v,
        env_state=DensityOperator(ket0, s_out),
    )
    return result, dil, float(a_tilde)
