import io
import json
import math

import numpy as np
import pandas as pd
import pytest

import main
from errors import ConfigError, QuadratureFailure


def test_parse_range():
    values = main.parse_range("0:1:0.1")
    assert len(values) == 11
    assert values[0] == 0.0 and values[-1] == 1.0
    assert values[3] == 0.3
    np.testing.assert_array_equal(main.parse_range("0.5"), [0.5])
    assert len(main.parse_range("-1:1:0.5")) == 5


@pytest.mark.parametrize("text", ["a:b:c", "0:1", "0:1:0", "1:0:0.1"])
def test_parse_range_errors(text):
    with pytest.raises(ConfigError):
        main.parse_range(text)


def test_kernel_free(tmp_path):
    out = tmp_path / "free.csv"
    code = main.main(["kernel", "--potential", "free", "--nmax", "2",
                      "--u", "0:1:0.5", "--v", "0:1:0.5", "--out", str(out)])
    assert code == 0
    df = pd.read_csv(out)
    assert list(df.columns) == ["u", "v", "T0", "T1", "T2", "sum"]
    assert len(df) == 9
    np.testing.assert_allclose(df["T0"], df["u"] / 4, atol=1e-15)
    assert (df["T1"] == 0).all() and (df["T2"] == 0).all()


def test_kernel_linear_file(tmp_path):
    potential = tmp_path / "linear.json"
    potential.write_text(json.dumps({"coeffs": [1.0, 1.0]}))
    out = tmp_path / "linear.csv"
    assert main.main(["kernel", "--potential", str(potential), "--nmax", "3",
                      "--u", "0:1:0.25", "--v", "0:1:0.25", "--out", str(out)]) == 0
    df = pd.read_csv(out)
    assert len(df) == 25
    assert (df[["T1", "T2", "T3"]] == 0).all().all()


def test_kernel_quartic_boundary_row(capsys):
    assert main.main(["kernel", "--potential", "quartic", "--nmax", "1", "--grid", "11",
                      "--u", "0:1:0.5", "--v", "0:1:0.5"]) == 0
    df = pd.read_csv(io.StringIO(capsys.readouterr().out))
    edge = df[df["v"] == 0]
    np.testing.assert_allclose(edge["T0"], edge["u"] / 4, atol=1e-15)
    assert (edge["T1"] == 0).all()
    assert (df.loc[(df["u"] > 0) & (df["v"] > 0), "T1"] > 0).all()


def test_wigner_rows(tmp_path):
    out = tmp_path / "tau.csv"
    assert main.main(["wigner", "--potential", "harmonic", "--nmax", "1",
                      "--q", "-1", "--p", "1", "--out", str(out)]) == 0
    row = pd.read_csv(out).iloc[0]
    assert row["tau_classical"] == pytest.approx(math.pi / 4, abs=1e-9)
    assert "tau_ltoa_4" in row.index and "scaling_T1" in row.index


def test_wigner_free_json(capsys):
    assert main.main(["wigner", "--potential", "free", "--nmax", "0",
                      "--q=-2:-1:1", "--p", "0.5", "--format", "json"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert len(rows) == 2
    for row in rows:
        expected = -row["q"] / row["p"]
        assert row["tau_classical"] == pytest.approx(expected, rel=1e-12)
        assert row["T0"] == pytest.approx(expected, rel=1e-12)


def test_wigner_arrival_shift(tmp_path):
    out = tmp_path / "shifted.csv"
    assert main.main(["wigner", "--potential", "free", "--nmax", "0", "--arrival", "2",
                      "--q", "1", "--p", "1", "--out", str(out)]) == 0
    assert pd.read_csv(out).iloc[0]["tau_classical"] == pytest.approx(1.0)


def test_operator_with_wavefunction(tmp_path):
    grid = np.linspace(-2.0, 2.0, 6)
    psi = tmp_path / "psi.csv"
    pd.DataFrame({"q": grid, "re": np.exp(-grid ** 2), "im": np.zeros(6)}).to_csv(psi, index=False)
    out = tmp_path / "matrix.csv"
    assert main.main(["operator", "--potential", "free", "--nmax", "0", "--L", "2", "--N", "6",
                      "--psi", str(psi), "--out", str(out)]) == 0
    assert len(pd.read_csv(out)) == 36
    record = json.loads((tmp_path / "matrix.expectation.json").read_text())
    assert set(record) == {"value", "imag_residue", "hermiticity_defect"}
    assert record["hermiticity_defect"] <= 1e-14
    # a real, symmetric packet does not move on average
    assert record["value"] == pytest.approx(0.0, abs=1e-12)


def test_verify_only(tmp_path):
    out = tmp_path / "report.json"
    assert main.main(["verify", "--only", "free-kernel", "--only", "linear-vanishing",
                      "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert [c["name"] for c in report["checks"]] == ["free-kernel", "linear-vanishing"]


def test_config_error_exit_code(capsys):
    assert main.main(["kernel", "--potential", "does-not-exist.json"]) == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "ConfigError"
    assert main.main(["verify", "--only", "no-such-check"]) == 2
    assert main.main(["kernel", "--potential", "free", "--nmax", "-1"]) == 2


@pytest.mark.parametrize("argv", [
    ["kernel", "--nmax", "abc"],
    ["kernel", "--format", "xml"],
    ["no-such-command"],
    [],
])
def test_bad_arguments_report_json(argv, capsys):
    assert main.main(argv) == 2
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error"] == "ConfigError"
    assert error["message"]


def test_numerical_error_exit_code(monkeypatch, capsys):
    def failing(*args, **kwargs):
        raise QuadratureFailure("refinement cap reached")

    monkeypatch.setattr(main, "get_engine", failing)
    assert main.main(["kernel", "--potential", "quartic", "--u", "0.5", "--v", "0.5"]) == 3
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error == {"error": "QuadratureFailure", "message": "refinement cap reached"}


def test_byte_identical_output(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        main.main(["kernel", "--potential", "harmonic", "--nmax", "1",
                   "--u", "0:1:0.5", "--v", "0:1:0.5", "--out", str(path)])
    assert paths[0].read_bytes() == paths[1].read_bytes()
