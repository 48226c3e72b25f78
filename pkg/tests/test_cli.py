import numpy as np
import pytest

from gibbscert.channels import choi_distance
from gibbscert.cli import main
from gibbscert.constructions import coherent_measurement_channel
from gibbscert.errors import (
    ScenarioParseError,
    UnknownConstructionError,
    UnknownParameterError,
)
from gibbscert.runner import (
    bundled_scenario_names,
    bundled_scenario_path,
    describe,
    run_scenario,
    sweep,
)
from gibbscert.scenarios import (
    channel_from_record,
    channel_to_record,
    load_scenario,
    parse_scenario_text,
)

FAST_BUNDLED = ["eq9-qubit", "faist-plus", "prop-qutrit", "transition-qutrit"]


# -- scenario format -------------------------------------------------------------------


def test_parse_minimal_scenario():
    sc = parse_scenario_text(
        "name: demo\nconstruction: coherent_measurement_channel\n  beta: 2.0\n"
    )
    assert sc.name == "demo"
    assert sc.construction == "coherent_measurement_channel"
    assert sc.params == {"beta": 2.0}
    assert sc.seed == 0
    assert sc.checks == ()


def test_parse_matrix_and_list_values():
    text = (
        "name: m\n"
        "construction: faist_channel\n"
        "  beta: 1.0\n"
        "  eta:\n"
        "    row: [0.5, 0.0] [0.0, 0.5]\n"
        "    row: [0.0, -0.5] [0.5, 0.0]\n"
    )
    sc = parse_scenario_text(text)
    eta = sc.params["eta"]
    assert eta.shape == (2, 2)
    assert eta[0, 1] == 0.5j
    assert eta[1, 0] == -0.5j


def test_parse_rejects_malformed_input():
    with pytest.raises(ScenarioParseError):
        parse_scenario_text("just some text without keys")
    with pytest.raises(ScenarioParseError):
        parse_scenario_text("name: x\n")  # no construction
    with pytest.raises(ScenarioParseError):
        parse_scenario_text("name: x\nconstruction: c\n\tbad: tab\n")
    with pytest.raises(ScenarioParseError):
        parse_scenario_text(
            "name: x\nconstruction: faist_channel\n  eta:\n    row: not-a-pair\n"
        )


def test_unknown_check_rejected(tmp_path):
    path = tmp_path / "bad-check.scn"
    path.write_text(
        "name: bad-check\nconstruction: coherent_measurement_channel\nchecks: frobnicate\n"
    )
    with pytest.raises(ScenarioParseError):
        run_scenario(path, out_dir=str(tmp_path))


def test_unknown_construction_rejected(tmp_path):
    path = tmp_path / "bad-ctor.scn"
    path.write_text("name: bad-ctor\nconstruction: not_a_thing\n")
    with pytest.raises(UnknownConstructionError):
        run_scenario(path, out_dir=str(tmp_path))


# -- bundled scenarios ------------------------------------------------------------------


def test_bundled_scenarios_all_parse():
    names = bundled_scenario_names()
    assert "eq9-qubit" in names and "thm4-tightness-a1" in names
    for name in names:
        sc = load_scenario(bundled_scenario_path(name))
        assert sc.name == name


@pytest.mark.parametrize("name", FAST_BUNDLED)
def test_bundled_scenario_round_trip(name, tmp_path):
    report = run_scenario(bundled_scenario_path(name), out_dir=str(tmp_path))
    assert report.exit_code == 0, [o for o in report.outcomes if not o.passed]
    summary = open(report.summary_path).read()
    assert "result: PASS" in summary
    csv_body = open(report.csv_path).read()
    assert csv_body.startswith("epsilon,lower_sqrtF,upper_sqrtF,C,delta_HS,delta_HSp")


def test_eq9_summary_shows_c_half(tmp_path):
    report = run_scenario(bundled_scenario_path("eq9-qubit"), out_dir=str(tmp_path))
    summary = open(report.summary_path).read()
    assert "check C: PASS (C=0.5)" in summary


def test_tightness_scenario_lower_below_upper(tmp_path):
    report = run_scenario(
        bundled_scenario_path("thm4-tightness-a1"), out_dir=str(tmp_path)
    )
    assert report.exit_code == 0
    rows = open(report.csv_path).read().strip().split("\n")[1:]
    for row in rows:
        cells = row.split(",")
        assert float(cells[1]) <= float(cells[2]) + 1e-9


def test_determinism_byte_identical_csv(tmp_path):
    out_a = tmp_path / "a"
    out_b = tmp_path / "b"
    path = bundled_scenario_path("eq9-qubit")
    rep_a = run_scenario(path, out_dir=str(out_a), seed=3)
    rep_b = run_scenario(path, out_dir=str(out_b), seed=3)
    assert open(rep_a.csv_path, "rb").read() == open(rep_b.csv_path, "rb").read()
    assert open(rep_a.summary_path).read() == open(rep_b.summary_path).read()


def test_failing_check_gives_exit_one(tmp_path):
    path = tmp_path / "fail.scn"
    path.write_text(
        "name: fail\n"
        "construction: faist_channel\n"
        "  beta: 1.0\n"
        "  eta:\n"
        "    row: [0.5, 0.0] [0.5, 0.0]\n"
        "    row: [0.5, 0.0] [0.5, 0.0]\n"
        "checks: validate recovery\n"  # faist carries no recovery
    )
    report = run_scenario(path, out_dir=str(tmp_path))
    assert report.exit_code == 1
    assert any(not o.passed for o in report.outcomes)


# -- sweep ----------------------------------------------------------------------------------


def test_sweep_beta_c_constant(tmp_path):
    csv_path = sweep(
        bundled_scenario_path("eq9-qubit"), "beta", [0.1, 1.0, 10.0], out_dir=str(tmp_path)
    )
    rows = open(csv_path).read().strip().split("\n")
    assert rows[0].startswith("beta,epsilon,")
    assert len(rows) == 4
    for row in rows[1:]:
        assert float(row.split(",")[4]) == pytest.approx(0.5, abs=1e-12)


def test_sweep_epsilon_matches_arithmetic(tmp_path):
    values = [1e-3, 1e-2, 1e-1, 1.0, 10.0]
    csv_path = sweep(
        bundled_scenario_path("eq9-qubit"), "epsilon", values, out_dir=str(tmp_path)
    )
    rows = open(csv_path).read().strip().split("\n")[1:]
    for row, eps in zip(rows, values):
        lower = float(row.split(",")[2])
        assert lower == pytest.approx(max(0.0, 0.5 / eps - 1.0), rel=1e-9)


def test_sweep_empty_values_header_only(tmp_path):
    csv_path = sweep(bundled_scenario_path("eq9-qubit"), "beta", [], out_dir=str(tmp_path))
    content = open(csv_path).read()
    assert content == "beta,epsilon,lower_sqrtF,upper_sqrtF,C,delta_HS,delta_HSp\n"


def test_sweep_unknown_parameter(tmp_path):
    with pytest.raises(UnknownParameterError):
        sweep(bundled_scenario_path("eq9-qubit"), "gamma", [1.0], out_dir=str(tmp_path))


# -- describe --------------------------------------------------------------------------------


def test_describe_known_constructions():
    text = describe("coherent_measurement_channel")
    assert "beta" in text
    text = describe("tightness_example")
    assert "a:" in text


def test_describe_unknown_lists_available():
    with pytest.raises(UnknownConstructionError) as err:
        describe("definitely_not_registered")
    assert "coherent_measurement_channel" in str(err.value)


# -- channel serialization record --------------------------------------------------------------


def test_channel_record_round_trip():
    ch = coherent_measurement_channel(1.3).channel
    text = channel_to_record(ch, name="eq9")
    rebuilt = channel_from_record(text)
    assert choi_distance(rebuilt, ch) <= 1e-12
    assert rebuilt.input.beta == ch.input.beta
    assert np.allclose(rebuilt.input.hamiltonian, ch.input.hamiltonian)


# -- argparse entry point ------------------------------------------------------------------------


def test_main_run_bundled(tmp_path, capsys):
    code = main(["run", "eq9-qubit", "--out", str(tmp_path)])
    captured = capsys.readouterr()
    assert code == 0
    assert "result: PASS" in captured.out


def test_main_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("nonsense without structure")
    assert main(["run", str(bad), "--out", str(tmp_path)]) == 2
    assert main(["describe", "nope"]) == 2
    missing = tmp_path / "missing" / "nowhere.scn"
    assert main(["run", str(missing), "--out", str(tmp_path)]) == 2


def test_main_sweep(tmp_path, capsys):
    code = main(
        [
            "sweep",
            "eq9-qubit",
            "--param",
            "epsilon",
            "--values",
            "0.01,0.1",
            "--out",
            str(tmp_path),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "sweep written:" in out
