"""Batch certification: construction registry, check execution, reports.

A scenario names a construction and a list of checks.  Running it builds
the construction, executes every requested check, writes
``<name>.summary.txt`` (human-readable verdicts) and ``<name>.bounds.csv``
(the evaluated cost-bound curves), and returns exit status 0 only if all
checks pass.  All floating-point output uses 12 significant digits and all
randomness is seeded, so identical scenario + seed give byte-identical CSV
bodies.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import certify, linalg
from .channels import (
    Dilation,
    QuantumChannel,
    channel_from_dilation,
    choi_distance,
    compose,
    energy_conservation_defect,
    is_gibbs_preserving,
    validate,
)
from .constructions import (
    ConstructionResult,
    appendix_e_dilations,
    coherent_measurement_channel,
    corollary_inputs,
    faist_channel,
    general_pairwise_channel,
    proposition_channel,
    state_transition_channel,
    tightness_example,
)
from .errors import (
    GibbsCertError,
    ScenarioParseError,
    UnknownConstructionError,
    UnknownParameterError,
)
from .quantum import DensityOperator, PureState, SystemSpec, gibbs_state
from .scenarios import EpsilonGridSpec, Scenario, load_scenario

__all__ = [
    "BuiltArtifacts",
    "CheckOutcome",
    "RunReport",
    "CONSTRUCTIONS",
    "CHECKS",
    "build_construction",
    "run_scenario",
    "sweep",
    "describe",
    "bundled_scenario_names",
    "bundled_scenario_path",
]

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_INPUT_ERROR = 2

_FMT = "{:.12g}"


def _fmt(x: float) -> str:
    return _FMT.format(float(x))


# -- construction registry ----------------------------------------------------------


@dataclass(frozen=True)
class BuiltArtifacts:
    """Everything a construction hands to the check layer."""

    result: ConstructionResult
    dilation: Dilation | None = None
    extras: dict = field(default_factory=dict)


def _as_matrix(value, what: str) -> np.ndarray:
    m = np.asarray(value, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ScenarioParseError(f"{what}: expected a square matrix block")
    return m


def _energy_list(value, what: str) -> list[float]:
    if isinstance(value, (int, float)):
        return [float(value)]
    if isinstance(value, list):
        return [float(v) for v in value]
    raise ScenarioParseError(f"{what}: expected a list of energies")


def _diag_system(label: str, energies: list[float], beta: float) -> SystemSpec:
    return SystemSpec(label, len(energies), np.diag(energies), beta)


def _build_coherent_measurement(params: dict) -> BuiltArtifacts:
    beta = float(params.get("beta", 1.0))
    return BuiltArtifacts(result=coherent_measurement_channel(beta))


def _build_faist(params: dict) -> BuiltArtifacts:
    beta = float(params.get("beta", 1.0))
    e1 = float(params.get("excited_energy", 1.0))
    system = SystemSpec("S", 2, np.diag([0.0, e1]), beta)
    if "eta" not in params:
        raise ScenarioParseError("faist_channel requires an 'eta' matrix block")
    eta = DensityOperator(_as_matrix(params["eta"], "eta"), system)
    return BuiltArtifacts(result=faist_channel(system, eta))


def _build_general_pairwise(params: dict) -> BuiltArtifacts:
    beta = float(params.get("beta", 1.0))
    s_in = _diag_system("S", _energy_list(params["input_energies"], "input_energies"), beta)
    s_out = _diag_system("S'", _energy_list(params["output_energies"], "output_energies"), beta)
    psi_m = np.asarray(params["psi"], dtype=complex)
    phi_m = np.asarray(params["phi"], dtype=complex)
    psi = PureState(psi_m.reshape(-1), s_in)
    phi = PureState(phi_m.reshape(-1), s_out)
    return BuiltArtifacts(result=general_pairwise_channel(psi, phi))


def _build_corollary(params: dict) -> BuiltArtifacts:
    beta = float(params.get("beta", 1.0))
    s_in = _diag_system("S", _energy_list(params["input_energies"], "input_energies"), beta)
    s_out = _diag_system("S'", _energy_list(params["output_energies"], "output_energies"), beta)
    i, j, ip = int(params["i"]), int(params["j"]), int(params["i_prime"])
    psi, phi, r = corollary_inputs(s_in, s_out, i, j, ip)
    built = general_pairwise_channel(psi, phi)
    meta = dict(built.metadata)
    meta["r"] = r
    return BuiltArtifacts(
        result=ConstructionResult(built.channel, built.pair, meta), extras={"r": r}
    )


def _build_proposition(params: dict) -> BuiltArtifacts:
    energies = _energy_list(params["energies"], "energies")
    result = proposition_channel(
        int(params["d"]),
        int(params["d_prime"]),
        energies,
        int(params["i"]),
        float(params.get("beta", 1.0)),
    )
    return BuiltArtifacts(result=result)


def _build_state_transition(params: dict) -> BuiltArtifacts:
    beta = float(params.get("beta", 1.0))
    s_in = _diag_system("S", _energy_list(params["input_energies"], "input_energies"), beta)
    s_out = _diag_system("S'", _energy_list(params["output_energies"], "output_energies"), beta)
    result, eta_plus, eta_minus, xi = state_transition_channel(
        s_in, s_out, int(params["i"]), int(params["j"]), int(params["i_prime"])
    )
    return BuiltArtifacts(result=result, extras={"xi_min_eig": float(np.linalg.eigvalsh(xi.matrix)[0])})


def _build_appendix_e(params: dict) -> BuiltArtifacts:
    beta = float(params.get("beta", 1.0))
    e1 = float(params.get("excited_energy", 1.0))
    system = SystemSpec("S", 2, np.diag([0.0, e1]), beta)
    if "eta" not in params:
        raise ScenarioParseError("appendix_e_dilations requires an 'eta' matrix block")
    eta = DensityOperator(_as_matrix(params["eta"], "eta"), system)
    one_step = faist_channel(system, eta)
    sigma_matrix = (
        _as_matrix(params["sigma"], "sigma")
        if "sigma" in params
        else one_step.channel.apply_matrix(np.diag([1.0, 0.0]).astype(complex))
    )
    sigma = DensityOperator(sigma_matrix, system)
    dil_u, dil_v, cost_upper = appendix_e_dilations(beta, eta, sigma)
    composite = compose(channel_from_dilation(dil_v), channel_from_dilation(dil_u))
    meta = dict(one_step.metadata)
    meta["cost_upper"] = cost_upper
    result = ConstructionResult(one_step.channel, one_step.pair, meta)
    return BuiltArtifacts(
        result=result,
        extras={
            "stage_one": dil_u,
            "stage_two": dil_v,
            "composite": composite,
            "cost_upper": cost_upper,
        },
    )


def _build_tightness(params: dict) -> BuiltArtifacts:
    a = float(params["a"])
    beta = float(params.get("beta", 1.0))
    result, dil, a_tilde = tightness_example(a, beta=beta)
    return BuiltArtifacts(result=result, dilation=dil, extras={"a": a, "a_tilde": a_tilde})


@dataclass(frozen=True)
class ConstructionEntry:
    name: str
    schema: dict
    description: str
    build: object


CONSTRUCTIONS: dict[str, ConstructionEntry] = {
    "coherent_measurement_channel": ConstructionEntry(
        name="coherent_measurement_channel",
        schema={"beta": "inverse temperature (default 1.0)"},
        description=(
            "Qubit channel measuring in the maximally coherent basis and "
            "re-preparing |0>/|1>; input Hamiltonian |1><1|, trivial output "
            "Hamiltonian. Carries the exactly recoverable pair {|+>, |->} with "
            "off-diagonal energy change 1/2, so its exact implementation cost "
            "diverges."
        ),
        build=_build_coherent_measurement,
    ),
    "faist_channel": ConstructionEntry(
        name="faist_channel",
        schema={
            "beta": "inverse temperature (default 1.0)",
            "excited_energy": "energy of level 1 (default 1.0)",
            "eta": "matrix block: qubit state prepared on outcome 1",
        },
        description=(
            "Qubit measure-and-prepare channel rho -> <1|rho|1> eta + <0|rho|0> sigma "
            "with sigma chosen to make the map Gibbs-preserving. A coherent eta lets "
            "the channel create coherence from the incoherent input |1><1|; its "
            "implementation cost is capped by qfi(eta) + qfi(sigma)."
        ),
        build=_build_faist,
    ),
    "general_pairwise_channel": ConstructionEntry(
        name="general_pairwise_channel",
        schema={
            "beta": "inverse temperature (default 1.0)",
            "input_energies": "space-separated level energies of the input system",
            "output_energies": "space-separated level energies of the output system",
            "psi": "matrix block (1 row): measured pure state on the input",
            "phi": "matrix block (1 row): prepared pure state on the output",
        },
        description=(
            "Two-outcome measure-and-prepare channel Tr(psi rho) phi + Tr[(1-psi) rho] eta, "
            "feasible when the min-relative entropy of psi matches the min- and "
            "max-relative entropies of phi against the Gibbs references. Exactly "
            "reversible on {psi, psi_perp} with positive off-diagonal energy change."
        ),
        build=_build_general_pairwise,
    ),
    "corollary_inputs": ConstructionEntry(
        name="corollary_inputs",
        schema={
            "beta": "inverse temperature (default 1.0)",
            "input_energies": "level energies of the input system",
            "output_energies": "level energies of the output system",
            "i": "input level with the smaller Gibbs weight",
            "j": "input level with the larger Gibbs weight",
            "i_prime": "output level with the intermediate Gibbs weight",
        },
        description=(
            "Builds the canonical feasible inputs psi = sqrt(r)|i> + sqrt(1-r)|j>, "
            "phi = |i'> from the strict Gibbs-weight ordering tau_i < tau'_i' < tau_j, "
            "then runs the general pairwise construction on them."
        ),
        build=_build_corollary,
    ),
    "proposition_channel": ConstructionEntry(
        name="proposition_channel",
        schema={
            "d": "input dimension (>= 3)",
            "d_prime": "output dimension (2 <= d' <= d)",
            "energies": "ascending level energies (at least d values)",
            "i": "lower level of the measured coherent pair (1 <= i <= d-2, E_{i+1} > E_i)",
            "beta": "inverse temperature (default 1.0)",
        },
        description=(
            "Alternative construction on one energy spectrum: measures the coherent "
            "pair on adjacent levels (i, i+1), prepares |0>/|1>, and routes the "
            "complement to a residual Gibbs-completing state. Off-diagonal energy "
            "change (E_{i+1} - E_i)/2."
        ),
        build=_build_proposition,
    ),
    "state_transition_channel": ConstructionEntry(
        name="state_transition_channel",
        schema={
            "beta": "inverse temperature (default 1.0)",
            "input_energies": "level energies of the input system",
            "output_energies": "level energies of the output system",
            "i": "input level with the smaller Gibbs weight",
            "j": "input level with the larger Gibbs weight",
            "i_prime": "target output level",
        },
        description=(
            "Channel realizing the pure-state transition sqrt(r)|i> + sqrt(1-r)|j> -> |i'> "
            "whose every Gibbs-preserving implementation carries the same diverging "
            "cost; squared off-diagonal energy change r(1-r)(E_i - E_j)^2."
        ),
        build=_build_state_transition,
    ),
    "appendix_e_dilations": ConstructionEntry(
        name="appendix_e_dilations",
        schema={
            "beta": "inverse temperature (default 1.0)",
            "excited_energy": "energy of level 1 (default 1.0)",
            "eta": "matrix block: qubit state prepared on outcome 1",
            "sigma": "matrix block: optional outcome-0 state (default: Gibbs-completing)",
        },
        description=(
            "Two-stage energy-conserving implementation of the coherence-creating "
            "measure-and-prepare channel: CNOT-copy into a trivial-Hamiltonian "
            "environment, then a controlled swap of the prepared resource pair. "
            "Cost ceiling qfi(eta) + qfi(sigma)."
        ),
        build=_build_appendix_e,
    ),
    "tightness_example": ConstructionEntry(
        name="tightness_example",
        schema={
            "a": "positive scale; the cost window closes to width 2a",
            "beta": "inverse temperature (default 1.0)",
        },
        description=(
            "Coherent-basis measurement channel with input Hamiltonian scaled to "
            "(a/sqrt(2))|1><1| plus its Hadamard-CNOT dilation; the floor and ceiling "
            "curves then pinch to C/eps - a <= sqrt(cost) <= sqrt(2) C/eps + a."
        ),
        build=_build_tightness,
    ),
}


def build_construction(identifier: str, params: dict) -> BuiltArtifacts:
    entry = CONSTRUCTIONS.get(identifier)
    if entry is None:
        known = ", ".join(sorted(CONSTRUCTIONS))
        raise UnknownConstructionError(f"unknown construction {identifier!r}; available: {known}")
    return entry.build(params)


# -- checks ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    details: str


def _check_validate(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    cert = validate(art.result.channel, tol=max(tol, 1e-9))
    details = f"tp_residual={_fmt(cert.tp_residual)} cp_residual={_fmt(cert.cp_residual)}"
    return CheckOutcome("validate", cert.cptp, details)


def _check_gibbs(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    verdict = is_gibbs_preserving(art.result.channel, tol=max(tol, 1e-9))
    return CheckOutcome("gibbs", verdict.ok, f"residual={_fmt(verdict.residual)}")


def _check_recovery(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    pair = art.result.pair
    if pair is None or pair.recovery is None:
        return CheckOutcome("recovery", False, "construction carries no recovery channel")
    worst = 0.0
    for rho in (pair.rho1, pair.rho2):
        restored = pair.recovery.apply_matrix(art.result.channel.apply_matrix(rho.matrix))
        from .quantum import purified_distance_matrices

        worst = max(worst, purified_distance_matrices(rho.matrix, restored))
    return CheckOutcome("recovery", worst <= 1e-8, f"worst_pair_error={_fmt(worst)}")


def _check_c_value(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    pair = art.result.pair
    if pair is None:
        return CheckOutcome("C", False, "construction carries no reversible pair")
    value = certify.compute_C(art.result.channel, pair)
    expected = art.result.metadata.get("C")
    if expected is not None and abs(value - expected) > 1e-9:
        return CheckOutcome(
            "C", False, f"C={_fmt(value)} disagrees with metadata C={_fmt(expected)}"
        )
    return CheckOutcome("C", True, f"C={_fmt(value)}")


def _check_delta(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    pair = art.result.pair
    if pair is None:
        return CheckOutcome("delta", False, "construction carries no reversible pair")
    est = certify.delta_with_recovery(art.result.channel, pair)
    if pair.recovery is not None:
        return CheckOutcome(
            "delta", est.value <= 1e-7, f"delta={_fmt(est.value)} (at attached recovery)"
        )
    return CheckOutcome("delta", True, f"delta={_fmt(est.value)} (optimized upper bound)")


def _epsilon_grid(scenario) -> np.ndarray:
    g = scenario.epsilon_grid
    return certify.log_epsilon_grid(g.minimum, g.maximum, g.points_per_decade)


def _bound_report(art: BuiltArtifacts, scenario) -> certify.BoundReport:
    grid = _epsilon_grid(scenario)
    ch = art.result.channel
    pair = art.result.pair
    c_value = certify.compute_C(ch, pair) if pair is not None else 0.0
    from .quantum import spectral_spread

    d_hs = spectral_spread(ch.input.hamiltonian)
    d_hsp = spectral_spread(ch.output.hamiltonian)
    lower = certify.lower_bound_theorem1(c_value, d_hs, d_hsp, grid)
    upper = None
    deltas = {"delta_HS": d_hs, "delta_HSp": d_hsp}
    violations = 0
    if art.dilation is not None:
        upper = certify.upper_bound_theorem5(art.dilation, grid)
        h_tot = art.dilation.hamiltonian_in()
        v = art.dilation.unitary
        deltas["delta_Htot"] = spectral_spread(h_tot)
        deltas["delta_Hgap"] = spectral_spread(
            h_tot - linalg.dagger(v) @ art.dilation.hamiltonian_out() @ v
        )
        violations = int(np.sum(lower > upper + 1e-9 * np.maximum(1.0, np.abs(upper))))
    return certify.BoundReport(
        epsilon_grid=grid,
        lower_sqrtF=lower,
        upper_sqrtF=upper,
        C_value=c_value,
        deltas=deltas,
        violations=violations,
    )


def _check_bounds(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    report = _bound_report(art, scenario)
    ok = report.violations == 0
    head = report.lower_sqrtF[0]
    details = f"lower(eps_min)={_fmt(head)} violations={report.violations}"
    return CheckOutcome("bounds", ok, details)


def _check_tightness(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    if "a" not in art.extras:
        return CheckOutcome("tightness", False, "only meaningful for tightness_example")
    report = certify.tightness_report(
        float(art.extras["a"]), _epsilon_grid(scenario)
    )
    return CheckOutcome(
        "tightness", report.violations == 0, f"violations={report.violations}"
    )


def _check_dilation(art: BuiltArtifacts, scenario, tol: float, seed: int) -> CheckOutcome:
    if "stage_one" in art.extras:
        d1 = energy_conservation_defect(art.extras["stage_one"])
        d2 = energy_conservation_defect(art.extras["stage_two"])
        gap = choi_distance(art.extras["composite"], art.result.channel)
        ok = d1 <= 1e-10 and d2 <= 1e-10 and gap <= 1e-9
        return CheckOutcome(
            "dilation",
            ok,
            f"defect1={_fmt(d1)} defect2={_fmt(d2)} composite_choi_gap={_fmt(gap)}",
        )
    if art.dilation is not None:
        rebuilt = channel_from_dilation(art.dilation)
        gap = choi_distance(rebuilt, art.result.channel)
        return CheckOutcome("dilation", gap <= 1e-9, f"choi_gap={_fmt(gap)}")
    return CheckOutcome("dilation", False, "construction carries no dilation")


CHECKS = {
    "validate": _check_validate,
    "gibbs": _check_gibbs,
    "recovery": _check_recovery,
    "C": _check_c_value,
    "delta": _check_delta,
    "bounds": _check_bounds,
    "tightness": _check_tightness,
    "dilation": _check_dilation,
}


# -- run / sweep / describe --------------------------------------------------------------


@dataclass(frozen=True)
class RunReport:
    scenario: Scenario
    outcomes: tuple
    exit_code: int
    summary_path: str | None
    csv_path: str | None


def _summary_text(scenario: Scenario, outcomes, params_line: str) -> str:
    lines = [
        f"scenario: {scenario.name}",
        f"construction: {scenario.construction}",
        f"params: {params_line}" if params_line else "params: (defaults)",
        f"seed: {scenario.seed}",
    ]
    for out in outcomes:
        status = "PASS" if out.passed else "FAIL"
        lines.append(f"check {out.name}: {status} ({out.details})")
    passed = sum(1 for o in outcomes if o.passed)
    verdict = "PASS" if passed == len(outcomes) else "FAIL"
    lines.append(f"result: {verdict} ({passed}/{len(outcomes)} checks)")
    return "\n".join(lines) + "\n"


def _params_line(params: dict) -> str:
    parts = []
    for key in sorted(params):
        value = params[key]
        if isinstance(value, np.ndarray):
            parts.append(f"{key}=<{value.shape[0]}x{value.shape[1]} matrix>")
        elif isinstance(value, list):
            parts.append(f"{key}=[{' '.join(_fmt(v) for v in value)}]")
        elif isinstance(value, float):
            parts.append(f"{key}={_fmt(value)}")
        else:
            parts.append(f"{key}={value}")
    return " ".join(parts)


def run_scenario(
    path, out_dir: str = ".", seed: int | None = None, tol: float = 1e-9
) -> RunReport:
    """Execute a scenario file end to end; writes summary and CSV reports.

    Exit code 0 when every requested check passes, 1 on a check failure.
    Parse and construction errors propagate as :class:`GibbsCertError`
    subclasses (the CLI maps them to exit code 2).
    """
    scenario = load_scenario(path)
    if seed is not None:
        scenario = Scenario(
            name=scenario.name,
            construction=scenario.construction,
            params=scenario.params,
            epsilon_grid=scenario.epsilon_grid,
            checks=scenario.checks,
            seed=seed,
        )
    for check_name in scenario.checks:
        if check_name not in CHECKS:
            known = ", ".join(sorted(CHECKS))
            raise ScenarioParseError(f"unknown check {check_name!r}; available: {known}")
    art = build_construction(scenario.construction, scenario.params)

    outcomes = tuple(
        CHECKS[name](art, scenario, tol, scenario.seed) for name in scenario.checks
    )

    os.makedirs(out_dir, exist_ok=True)
    summary_path = os.path.join(out_dir, f"{scenario.name}.summary.txt")
    with open(summary_path, "w", encoding="utf-8") as handle:
        handle.write(_summary_text(scenario, outcomes, _params_line(scenario.params)))
    csv_path = os.path.join(out_dir, f"{scenario.name}.bounds.csv")
    with open(csv_path, "w", encoding="utf-8") as handle:
        handle.write(certify.bound_report_csv(_bound_report(art, scenario)))

    all_passed = all(o.passed for o in outcomes)
    return RunReport(
        scenario=scenario,
        outcomes=outcomes,
        exit_code=EXIT_PASS if all_passed else EXIT_CHECK_FAILURE,
        summary_path=summary_path,
        csv_path=csv_path,
    )


def sweep(
    path,
    parameter: str,
    values: list[float],
    out_dir: str = ".",
    seed: int | None = None,
    tol: float = 1e-9,
) -> str:
    """Evaluate metadata and bound values against a swept parameter.

    ``parameter`` is either a numeric construction parameter (the channel
    is rebuilt per value) or the literal ``epsilon`` (single build, bound
    curves evaluated at each value).  Returns the CSV path; one row per
    value, deterministic under a fixed seed.
    """
    scenario = load_scenario(path)
    entry = CONSTRUCTIONS.get(scenario.construction)
    if entry is None:
        raise UnknownConstructionError(f"unknown construction {scenario.construction!r}")
    if parameter != "epsilon" and parameter not in entry.schema:
        raise UnknownParameterError(
            f"parameter {parameter!r} not in {scenario.construction!r} schema; "
            f"sweepable: {', '.join(sorted(set(entry.schema) | {'epsilon'}))}"
        )

    from .quantum import spectral_spread

    header = f"{parameter},epsilon,lower_sqrtF,upper_sqrtF,C,delta_HS,delta_HSp"
    rows = [header]
    if parameter == "epsilon":
        art = build_construction(scenario.construction, scenario.params)
        pair = art.result.pair
        c_value = certify.compute_C(art.result.channel, pair) if pair is not None else 0.0
        d_hs = spectral_spread(art.result.channel.input.hamiltonian)
        d_hsp = spectral_spread(art.result.channel.output.hamiltonian)
        for eps in values:
            lower = certify.lower_bound_theorem1(c_value, d_hs, d_hsp, np.array([eps]))[0]
            upper = (
                _fmt(certify.upper_bound_theorem5(art.dilation, np.array([eps]))[0])
                if art.dilation is not None
                else ""
            )
            rows.append(
                f"{_fmt(eps)},{_fmt(eps)},{_fmt(lower)},{upper},{_fmt(c_value)},"
                f"{_fmt(d_hs)},{_fmt(d_hsp)}"
            )
    else:
        for value in values:
            params = dict(scenario.params)
            params[parameter] = value
            art = build_construction(scenario.construction, params)
            pair = art.result.pair
            c_value = certify.compute_C(art.result.channel, pair) if pair is not None else 0.0
            d_hs = spectral_spread(art.result.channel.input.hamiltonian)
            d_hsp = spectral_spread(art.result.channel.output.hamiltonian)
            eps_min = scenario.epsilon_grid.minimum
            lower = certify.lower_bound_theorem1(c_value, d_hs, d_hsp, np.array([eps_min]))[0]
            upper = (
                _fmt(certify.upper_bound_theorem5(art.dilation, np.array([eps_min]))[0])
                if art.dilation is not None
                else ""
            )
            rows.append(
                f"{_fmt(value)},{_fmt(eps_min)},{_fmt(lower)},{upper},{_fmt(c_value)},"
                f"{_fmt(d_hs)},{_fmt(d_hsp)}"
            )

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{scenario.name}.sweep-{parameter}.csv")
    with open(csv_path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(rows) + "\n")
    return csv_path


def describe(identifier: str) -> str:
    """Parameter schema and description of a registered construction."""
    entry = CONSTRUCTIONS.get(identifier)
    if entry is None:
        known = "\n  ".join(sorted(CONSTRUCTIONS))
        raise UnknownConstructionError(
            f"unknown construction {identifier!r}; available:\n  {known}"
        )
    lines = [f"construction: {entry.name}", "", entry.description, "", "parameters:"]
    if entry.schema:
        for key in entry.schema:
            lines.append(f"  {key}: {entry.schema[key]}")
    else:
        lines.append("  (none)")
    return "\n".join(lines) + "\n"


# -- bundled scenarios ----------------------------------------------------------------------


def bundled_scenario_names() -> list[str]:
    from importlib import resources

    names = []
    for item in resources.files("gibbscert.data").iterdir():
        if item.name.endswith(".scn"):
            names.append(item.name[: -len(".scn")])
    return sorted(names)


def bundled_scenario_path(name: str) -> str:
    from importlib import resources

    candidate = resources.files("gibbscert.data") / f"{name}.scn"
    if not candidate.is_file():
        known = ", ".join(bundled_scenario_names())
        raise ScenarioParseError(f"no bundled scenario {name!r}; bundled: {known}")
    return str(candidate)
