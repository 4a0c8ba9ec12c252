"""CLI and input-document tests: run main() in process, check exits and output."""

import json
import math

import numpy as np
import pytest

from neqtemp.cli import SWEEP_HEADER, main
from neqtemp.exceptions import ValidationError
from neqtemp.io import (
    extended_real,
    matrix_from_pairs,
    matrix_to_pairs,
    parse_input_document,
)


def pairs(m):
    return matrix_to_pairs(np.asarray(m, dtype=complex))


def gibbs_qubit_doc(beta=2.0):
    e = np.array([-0.5, 0.5])
    p = np.exp(-beta * e)
    p /= p.sum()
    return {
        "kind": "single",
        "dims": 2,
        "matrices": {"H": pairs(np.diag(e)), "rho": pairs(np.diag(p))},
    }


def write_doc(tmp_path, doc, name="in.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


class TestTemp:
    def test_gibbs_qubit(self, tmp_path, capsys):
        path = write_doc(tmp_path, gibbs_qubit_doc(beta=2.0))
        assert main(["temp", path]) == 0
        report = json.loads(capsys.readouterr().out)["report"]["temperature_report"]
        assert report["beta"] == pytest.approx(2.0, abs=1e-12)
        assert report["temperature"] == pytest.approx(0.5, abs=1e-12)
        assert not report["rank_deficient"]

    def test_maximally_mixed_reports_inf(self, tmp_path, capsys):
        doc = gibbs_qubit_doc()
        doc["matrices"]["rho"] = pairs(np.eye(2) / 2.0)
        assert main(["temp", write_doc(tmp_path, doc)]) == 0
        report = json.loads(capsys.readouterr().out)["report"]["temperature_report"]
        assert report["temperature"] == "inf"
        assert report["free_energy"] == "undefined"

    def test_identity_hamiltonian_is_numerical_failure(self, tmp_path, capsys):
        doc = gibbs_qubit_doc()
        doc["matrices"]["H"] = pairs(np.eye(2))
        assert main(["temp", write_doc(tmp_path, doc)]) == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_strict_rejects_pure_state(self, tmp_path, capsys):
        doc = gibbs_qubit_doc()
        doc["matrices"]["rho"] = pairs(np.diag([1.0, 0.0]))
        path = write_doc(tmp_path, doc)
        assert main(["temp", path, "--strict"]) == 2
        capsys.readouterr()
        assert main(["temp", path]) == 0
        report = json.loads(capsys.readouterr().out)["report"]["temperature_report"]
        assert report["temperature"] == 0.0
        assert report["rank_deficient"]

    def test_stdin_and_out_file(self, tmp_path, monkeypatch, capsys):
        import io as _io

        monkeypatch.setattr("sys.stdin", _io.StringIO(json.dumps(gibbs_qubit_doc())))
        out = tmp_path / "report.json"
        assert main(["temp", "-", "--out", str(out)]) == 0
        assert capsys.readouterr().out == ""
        assert json.loads(out.read_text())["report"]["temperature_report"]["beta"] == pytest.approx(2.0)

    def test_bad_json_exits_1(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["temp", str(path)]) == 1
        assert "error:" in capsys.readouterr().err


class TestBipartite:
    def test_model_document(self, tmp_path, capsys):
        doc = {
            "kind": "model",
            "model_params": {"omega_S": 2.0, "omega_B": 1.0, "lam": 0.2, "beta": 1.0},
        }
        assert main(["bipartite", write_doc(tmp_path, doc)]) == 0
        report = json.loads(capsys.readouterr().out)["report"]
        assert report["correlation"]["beta_chi"] == pytest.approx(-1.0, abs=1e-9)
        assert report["relation"]["beta_SB"] == pytest.approx(1.0, abs=1e-9)
        assert abs(report["relation"]["residual"]) < 1e-9

    def test_explicit_matrices(self, tmp_path, capsys):
        from neqtemp.models import TwoQubitXYParams, build_two_qubit_xy

        sys_ = build_two_qubit_xy(
            TwoQubitXYParams(omega_S=2.0, omega_B=1.0, lam=0.2, beta=1.0)
        )
        doc = {
            "kind": "bipartite",
            "dims": [2, 2],
            "matrices": {
                "H_S": pairs(sys_.H_S.matrix),
                "H_B": pairs(sys_.H_B.matrix),
                "H_I": pairs(sys_.H_I.matrix),
                "rho_SB": pairs(sys_.rho_SB.matrix),
            },
        }
        assert main(["bipartite", write_doc(tmp_path, doc)]) == 0
        report = json.loads(capsys.readouterr().out)["report"]
        # Matrix-document route must agree exactly with the model route.
        assert report["correlation"]["beta_chi"] == pytest.approx(-1.0, abs=1e-9)
        assert report["relation"]["beta_tilde_S"] == pytest.approx(1.0, abs=1e-9)
        assert report["relation"]["beta_tilde_B"] == pytest.approx(1.0, abs=1e-9)

    def test_wrong_kind_exits_1(self, tmp_path, capsys):
        assert main(["bipartite", write_doc(tmp_path, gibbs_qubit_doc())]) == 1
        assert "error:" in capsys.readouterr().err


class TestSweep:
    ARGS = ["sweep", "--axis", "lambda", "--values", "0.05,0.2,1.0",
            "--omega-s", "2.0", "--omega-b", "1.0", "--beta", "1.0"]

    def test_header_and_rows(self, capsys):
        assert main(self.ARGS) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == SWEEP_HEADER
        assert len(lines) == 4
        first = lines[1].split(",")
        assert float(first[0]) == 0.05
        assert float(first[3]) == pytest.approx(1.0, abs=1e-9)  # beta_SB
        assert float(first[4]) == pytest.approx(-1.0, abs=1e-9)  # beta_chi

    def test_byte_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(self.ARGS + ["--out", str(a)]) == 0
        assert main(self.ARGS + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bad_axis_exits_1(self, capsys):
        assert main(["sweep", "--axis", "mass", "--values", "1.0"]) == 1
        assert "axis" in capsys.readouterr().err

    def test_unknown_model_exits_1(self, capsys):
        assert main(["sweep", "--model", "spin-chain", "--axis", "beta",
                     "--values", "1.0"]) == 1
        capsys.readouterr()

    def test_bad_values_exit_1(self, capsys):
        assert main(["sweep", "--axis", "beta", "--values", "1.0,zap"]) == 1
        capsys.readouterr()


class TestVerifyCommand:
    def test_suite_passes(self, capsys):
        assert main(["verify", "gibbs", "--seed", "3", "--count", "10"]) == 0
        assert "PASS" in capsys.readouterr().out

    def test_unknown_suite_exits_1(self, capsys):
        assert main(["verify", "frobnicate"]) == 1
        capsys.readouterr()


class TestDocumentParsing:
    def test_pairs_round_trip(self):
        rng = np.random.default_rng(41)
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        np.testing.assert_array_equal(matrix_from_pairs(matrix_to_pairs(m)), m)

    def test_rejects_bare_numbers(self):
        with pytest.raises(ValidationError):
            matrix_from_pairs([[1.0, 0.0], [0.0, 1.0]])

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValidationError):
            parse_input_document({"kind": "tripartite"})

    def test_rejects_missing_matrix(self):
        doc = gibbs_qubit_doc()
        del doc["matrices"]["rho"]
        with pytest.raises(ValidationError):
            parse_input_document(doc)

    def test_rejects_shape_mismatch(self):
        doc = gibbs_qubit_doc()
        doc["dims"] = 3
        with pytest.raises(ValidationError):
            parse_input_document(doc)

    def test_rejects_bad_options(self):
        doc = gibbs_qubit_doc()
        doc["options"] = {"clip": 0.0}
        with pytest.raises(ValidationError):
            parse_input_document(doc)

    def test_extended_real_values(self):
        assert extended_real(1.5) == 1.5
        assert extended_real(math.inf) == "inf"
        assert extended_real(-math.inf) == "-inf"
        assert extended_real(math.nan) == "undefined"
