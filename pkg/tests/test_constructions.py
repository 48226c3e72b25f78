import numpy as np
import pytest

from gibbscert import linalg
from gibbscert.channels import (
    channel_from_dilation,
    choi_distance,
    compose,
    energy_conservation_defect,
    is_covariant,
    is_gibbs_preserving,
    validate,
)
from gibbscert.constructions import (
    ReversiblePair,
    appendix_e_dilations,
    coherent_measurement_channel,
    corollary_inputs,
    faist_channel,
    general_pairwise_channel,
    proposition_channel,
    state_transition_channel,
    tightness_example,
)
from gibbscert.errors import (
    ConditionNotMetError,
    InfeasibleEtaError,
    InvalidIndexError,
    InvalidSpectrumError,
    NonPositiveAError,
    NotOrthogonalError,
    PreconditionViolatedError,
)
from gibbscert.quantum import (
    DensityOperator,
    PureState,
    SystemSpec,
    d_max,
    d_min,
    gibbs_state,
    gibbs_weights,
    purified_distance,
    qfi,
)

from conftest import random_pure_vector, random_weight_ordered_tuple


def qubit(beta=1.0, e1=1.0, label="S"):
    return SystemSpec(label, 2, np.diag([0.0, e1]), beta)


def recovery_error(result):
    """Worst-pair purified recovery error for a construction with a pair."""
    ch, pair = result.channel, result.pair
    worst = 0.0
    for rho in (pair.rho1, pair.rho2):
        restored = pair.recovery.apply_matrix(ch.apply_matrix(rho.matrix))
        worst = max(worst, purified_distance(rho, DensityOperator(restored, rho.system)))
    return worst


# -- reversible pair type -----------------------------------------------------------


def test_reversible_pair_requires_orthogonality():
    s = qubit()
    plus = PureState.normalized(np.array([1.0, 1.0]), s).density()
    with pytest.raises(NotOrthogonalError):
        ReversiblePair(plus, plus)


# -- measure-and-prepare channel with free output state ------------------------------


def test_faist_fixed_point_choice_gives_replacer():
    s = qubit(beta=0.7)
    tau = gibbs_state(s)
    result = faist_channel(s, tau)
    rng = np.random.default_rng(2)
    for _ in range(5):
        v = random_pure_vector(rng, 2)
        out = result.channel.apply_matrix(np.outer(v, v.conj()))
        assert np.max(np.abs(out - tau.matrix)) <= 1e-12


def test_faist_coherent_eta_creates_coherence():
    s = qubit(beta=1.0)
    plus = PureState.normalized(np.array([1.0, 1.0]), s).density()
    result = faist_channel(s, plus)
    excited = PureState.basis(s, 1).density()
    out = result.channel.apply(excited)
    assert np.max(np.abs(out.matrix - plus.matrix)) <= 1e-12  # coherent output
    assert not is_covariant(result.channel).ok
    assert result.metadata["qfi_eta"] == pytest.approx(1.0, abs=1e-10)


def test_faist_ground_eta_sigma_closed_form():
    s = qubit(beta=1.0)
    ground = PureState.basis(s, 0).density()
    result = faist_channel(s, ground)
    w = gibbs_weights(s)
    sigma = result.channel.apply_matrix(np.diag([1.0, 0.0]))  # outcome-0 preparation
    expected = (gibbs_state(s).matrix - w[1] * ground.matrix) / w[0]
    assert np.max(np.abs(sigma - expected)) <= 1e-12
    assert np.linalg.eigvalsh(expected)[0] >= -1e-10
    assert is_gibbs_preserving(result.channel).residual <= 1e-12


def test_faist_infeasible_eta_with_inverted_spectrum():
    s = SystemSpec("S", 2, np.diag([0.0, -1.0]), 1.0)  # excited level below ground
    ground = PureState.basis(s, 0).density()
    with pytest.raises(InfeasibleEtaError):
        faist_channel(s, ground)


# -- coherent-basis measurement channel ------------------------------------------------


def test_coherent_measurement_recovery_is_exact():
    result = coherent_measurement_channel(1.0)
    assert recovery_error(result) == 0.0


def test_coherent_measurement_gibbs_image_is_maximally_mixed():
    for beta in (0.1, 1.0, 10.0):
        result = coherent_measurement_channel(beta)
        image = result.channel.apply_matrix(gibbs_state(result.channel.input).matrix)
        assert linalg.norm(image - np.eye(2) / 2, "trace") <= 1e-12


def test_coherent_measurement_metadata():
    result = coherent_measurement_channel(2.0)
    assert result.metadata["C"] == 0.5
    assert result.metadata["r"] == 0.5


# -- general pairwise construction ------------------------------------------------------


def test_corollary_inputs_three_level():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    psi, phi, r = corollary_inputs(s, s, 2, 0, 1)
    assert 0.0 < r < 1.0
    w = gibbs_weights(s)
    assert w[2] < w[1] < w[0]
    assert abs(np.linalg.norm(psi.amplitudes) - 1.0) <= 1e-12
    assert np.argmax(np.abs(phi.amplitudes)) == 1


def test_corollary_inputs_qubit_to_trivial_r_half():
    for beta in (0.3, 1.0, 5.0):
        s = qubit(beta=beta)
        sp = SystemSpec("S'", 2, np.zeros((2, 2)), beta)
        psi, phi, r = corollary_inputs(s, sp, 1, 0, 0)
        assert abs(r - 0.5) <= 1e-12


def test_corollary_inputs_degenerate_weights_rejected():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    with pytest.raises(ConditionNotMetError):
        corollary_inputs(s, s, 1, 0, 1)  # tau_i == tau_i'


def test_corollary_outputs_satisfy_entropy_preconditions():
    rng = np.random.default_rng(7)
    for _ in range(30):
        s, sp, i, j, ip = random_weight_ordered_tuple(rng)
        psi, phi, r = corollary_inputs(s, sp, i, j, ip)
        tau_s, tau_sp = gibbs_state(s), gibbs_state(sp)
        a = d_min(psi, tau_s)
        b = d_min(phi, tau_sp)
        c = d_max(phi.density(), tau_sp)
        assert abs(a - b) <= 1e-9
        assert abs(b - c) <= 1e-9


def test_general_pairwise_channel_properties():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    psi, phi, r = corollary_inputs(s, s, 2, 0, 1)
    result = general_pairwise_channel(psi, phi)
    # prepared residual state is orthogonal to the target preparation
    assert abs(result.metadata["phi_eta_overlap"]) <= 1e-9
    # closed form for the off-diagonal energy change
    a_i, a_j = np.sqrt(r), np.sqrt(1 - r)
    expected = a_i * a_j * abs(0.0 - 2.0) / np.sqrt(a_i**2 + a_j**2)
    assert abs(result.metadata["C"] - expected) <= 1e-10
    assert abs(result.metadata["C_closed_form"] - expected) <= 1e-12
    assert result.metadata["C"] > 0
    assert recovery_error(result) <= 1e-8


def test_general_pairwise_dual_map_oracle():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    psi, phi, _ = corollary_inputs(s, s, 2, 0, 1)
    result = general_pairwise_channel(psi, phi)
    h_out = result.channel.output.hamiltonian
    # the image of any state orthogonal to psi is the residual preparation eta
    eta = result.channel.apply_matrix(result.pair.rho2.matrix)
    # symbolic dual: Tr(phi H') psi + Tr(eta H') (1 - psi)
    psi_p = psi.projector()
    expected = (
        np.real(np.trace(phi.projector() @ h_out)) * psi_p
        + np.real(np.trace(eta @ h_out)) * (np.eye(3) - psi_p)
    )
    assert np.max(np.abs(result.channel.dual_apply(h_out) - expected)) <= 1e-10


def test_general_pairwise_rejects_random_phi():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    psi, _, _ = corollary_inputs(s, s, 2, 0, 1)
    bad_phi = PureState.normalized(np.array([1.0, 1.0, 1.0]), s)
    with pytest.raises(PreconditionViolatedError):
        general_pairwise_channel(psi, bad_phi)


def test_general_pairwise_reproduces_coherent_measurement():
    beta = 1.0
    reference = coherent_measurement_channel(beta)
    s, sp = reference.channel.input, reference.channel.output
    psi, phi, r = corollary_inputs(s, sp, 1, 0, 0)
    assert abs(r - 0.5) <= 1e-12
    rebuilt = general_pairwise_channel(psi, phi)
    assert choi_distance(rebuilt.channel, reference.channel) <= 1e-9


# -- adjacent-level construction ----------------------------------------------------------


def test_proposition_channel_three_level():
    result = proposition_channel(3, 3, [0.0, 1.0, 2.0], 1, 1.0)
    assert result.metadata["C"] == 0.5
    assert recovery_error(result) <= 1e-8
    assert validate(result.channel).cptp


def test_proposition_channel_smaller_output():
    result = proposition_channel(4, 3, [0.0, 0.5, 1.5, 2.0], 1, 0.8)
    assert result.metadata["eta_min_eig"] >= -1e-10
    assert is_gibbs_preserving(result.channel).residual <= 1e-9


def test_proposition_channel_rejects_bad_inputs():
    with pytest.raises(InvalidSpectrumError):
        proposition_channel(3, 3, [0.0, 1.0, 1.0], 1, 1.0)  # degenerate above ground
    with pytest.raises(InvalidSpectrumError):
        proposition_channel(2, 2, [0.0, 1.0], 1, 1.0)  # d too small
    with pytest.raises(InvalidSpectrumError):
        proposition_channel(3, 3, [1.0, 0.0, 2.0], 1, 1.0)  # not ascending
    with pytest.raises(InvalidIndexError):
        proposition_channel(3, 3, [0.0, 1.0, 2.0], 0, 1.0)  # i below range
    with pytest.raises(InvalidIndexError):
        proposition_channel(4, 4, [0.0, 1.0, 1.0, 2.0], 1, 1.0)  # chosen gap degenerate


# -- state-transition channel ----------------------------------------------------------------


def test_state_transition_qubit_to_trivial():
    s = qubit()
    sp = SystemSpec("S'", 2, np.zeros((2, 2)), 1.0)
    result, eta_plus, eta_minus, xi = state_transition_channel(s, sp, 1, 0, 0)
    target = result.channel.apply_matrix(eta_plus.projector())
    assert linalg.norm(target - np.diag([1.0, 0.0]), "trace") <= 1e-10
    assert abs(eta_plus.amplitudes.conj() @ eta_minus.amplitudes) <= 1e-12


def test_state_transition_c_squared_identity():
    rng = np.random.default_rng(11)
    for _ in range(10):
        s, sp, i, j, ip = random_weight_ordered_tuple(rng)
        result, eta_plus, eta_minus, xi = state_transition_channel(s, sp, i, j, ip)
        r = result.metadata["r"]
        energies = np.real(np.diag(s.hamiltonian))
        closed = r * (1 - r) * (energies[i] - energies[j]) ** 2
        # direct evaluation on the pure pair
        change = s.hamiltonian - result.channel.dual_apply(sp.hamiltonian)
        direct = abs(eta_plus.amplitudes.conj() @ change @ eta_minus.amplitudes) ** 2
        assert abs(direct - closed) <= 1e-10 * max(1.0, closed)
        assert abs(result.metadata["C"] ** 2 - closed) <= 1e-10 * max(1.0, closed)


def test_state_transition_xi_orthogonal_to_target():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    result, eta_plus, eta_minus, xi = state_transition_channel(s, s, 2, 0, 1)
    assert abs(np.real(xi.matrix[1, 1])) <= 1e-12
    assert np.linalg.eigvalsh(xi.matrix)[0] >= -1e-10
    assert recovery_error(result) <= 1e-8


def test_state_transition_boundary_rejected():
    s = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    with pytest.raises(ConditionNotMetError):
        state_transition_channel(s, s, 1, 0, 1)


# -- two-stage dilations ------------------------------------------------------------------------


def test_appendix_e_dilations_energy_conserving_and_compose():
    beta = 1.0
    s = qubit(beta=beta)
    eta = PureState.normalized(np.array([1.0, 1.0]), s).density()
    faist = faist_channel(s, eta)
    sigma = DensityOperator(faist.channel.apply_matrix(np.diag([1.0, 0.0])), s)

    dil_u, dil_v, cost = appendix_e_dilations(beta, eta, sigma)
    assert energy_conservation_defect(dil_u) <= 1e-10
    assert energy_conservation_defect(dil_v) <= 1e-10

    lam1 = channel_from_dilation(dil_u)
    lam2 = channel_from_dilation(dil_v)
    assert validate(lam1).cptp and validate(lam2).cptp
    # stage one dephases in the energy basis
    rho = np.array([[0.6, 0.2 + 0.1j], [0.2 - 0.1j, 0.4]])
    assert np.max(np.abs(lam1.apply_matrix(rho) - np.diag([0.6, 0.4]))) <= 1e-12
    # composite equals the one-step measure-and-prepare channel
    assert choi_distance(compose(lam2, lam1), faist.channel) <= 1e-9
    assert abs(cost - (qfi(eta) + qfi(sigma))) <= 1e-12


def test_appendix_e_incoherent_resources_cost_zero():
    beta = 1.0
    s = qubit(beta=beta)
    ket0 = PureState.basis(s, 0).density()
    dil_u, dil_v, cost = appendix_e_dilations(beta, ket0, ket0)
    assert cost == 0.0
    lam2 = channel_from_dilation(dil_v)
    for v in (np.array([1.0, 0.0]), np.array([0.0, 1.0]), np.array([1.0, 1.0]) / np.sqrt(2)):
        out = lam2.apply_matrix(np.outer(v, v.conj()))
        assert abs(out[0, 1]) <= 1e-12  # outputs stay incoherent


def test_appendix_e_coherent_eta_cost_one():
    beta = 1.0
    s = qubit(beta=beta)
    plus = PureState.normalized(np.array([1.0, 1.0]), s).density()
    tau = gibbs_state(s)
    _, _, cost = appendix_e_dilations(beta, plus, tau)
    assert abs(cost - 1.0) <= 1e-10  # qfi(|+>) = 1, qfi(tau) = 0


# -- near-saturating example ---------------------------------------------------------------------


def test_tightness_example_values():
    result, dil, a_tilde = tightness_example(np.sqrt(2.0))
    assert abs(a_tilde - 1.0) <= 1e-12
    assert abs(result.metadata["C"] - 0.5) <= 1e-12
    h_in = dil.hamiltonian_in()
    v = dil.unitary
    gap = h_in - v.conj().T @ dil.hamiltonian_out() @ v
    from gibbscert.quantum import spectral_spread

    assert abs(spectral_spread(gap) - np.sqrt(2.0)) <= 1e-10


def test_tightness_gap_to_c_ratio():
    from gibbscert.quantum import spectral_spread

    for a in (0.1, 1.0, 10.0):
        result, dil, a_tilde = tightness_example(a)
        gap = dil.hamiltonian_in() - dil.unitary.conj().T @ dil.hamiltonian_out() @ dil.unitary
        assert abs(spectral_spread(gap) - 2 * np.sqrt(2.0) * result.metadata["C"]) <= 1e-10
        assert abs(spectral_spread(result.channel.input.hamiltonian) - a / np.sqrt(2.0)) <= 1e-12


def test_tightness_dilation_reproduces_channel():
    result, dil, _ = tightness_example(1.0)
    rebuilt = channel_from_dilation(dil)
    assert choi_distance(rebuilt, result.channel) <= 1e-9
    # the dilation deliberately fails to conserve energy; the rotated gap
    # feeding the cost ceiling is exactly that violation
    assert energy_conservation_defect(dil) > 0.1


def test_tightness_rejects_nonpositive_scale():
    with pytest.raises(NonPositiveAError):
        tightness_example(0.0)
    with pytest.raises(NonPositiveAError):
        tightness_example(-1.0)


# -- blanket certification of every construction --------------------------------------------------


def _all_constructed_results():
    s3 = SystemSpec("S", 3, np.diag([0.0, 1.0, 2.0]), 1.0)
    qb = qubit()
    plus = PureState.normalized(np.array([1.0, 1.0]), qb).density()
    psi, phi, _ = corollary_inputs(s3, s3, 2, 0, 1)
    results = [
        coherent_measurement_channel(1.0),
        faist_channel(qb, plus),
        general_pairwise_channel(psi, phi),
        proposition_channel(3, 3, [0.0, 1.0, 2.0], 1, 1.0),
        state_transition_channel(s3, s3, 2, 0, 1)[0],
        tightness_example(1.0)[0],
    ]
    return results


def test_every_construction_is_certified():
    for result in _all_constructed_results():
        cert = validate(result.channel)
        assert cert.cptp
        assert is_gibbs_preserving(result.channel).residual <= 1e-9
        if result.pair is not None and result.pair.recovery is not None:
            assert recovery_error(result) <= 1e-8
