import json

import numpy as np
import pytest

from gaugelab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSample:
    def test_batch_csv_shape(self, capsys, tmp_path):
        out = tmp_path / "paths.csv"
        code, _, _ = run_cli(
            capsys, "sample", "--model", "wiener:level=5", "--count", "3",
            "--seed", "7", "--out", str(out),
        )
        assert code == 0
        rows = out.read_text().strip().splitlines()
        assert len(rows) == 3
        assert len(rows[0].split(",")) == 33

    def test_grid_format_roundtrip(self, capsys, tmp_path):
        out = tmp_path / "path.csv"
        code, _, _ = run_cli(
            capsys, "sample", "--model", "wiener:level=4", "--count", "1",
            "--format", "grid", "--seed", "3", "--out", str(out),
        )
        assert code == 0
        assert out.read_text().startswith("t,value\n")

    def test_seq_model(self, capsys):
        code, out, _ = run_cli(capsys, "sample", "--model", "seq:dim=8", "--count", "2")
        assert code == 0
        assert len(out.strip().splitlines()) == 2

    def test_grid_format_needs_single_wiener(self, capsys):
        code, _, err = run_cli(
            capsys, "sample", "--model", "seq:dim=4", "--format", "grid"
        )
        assert code == 2

    def test_determinism(self, capsys):
        _, out1, _ = run_cli(capsys, "sample", "--model", "wiener:level=4", "--seed", "9")
        _, out2, _ = run_cli(capsys, "sample", "--model", "wiener:level=4", "--seed", "9")
        assert out1 == out2


class TestNorms:
    def test_linear_path_norms(self, capsys, tmp_path):
        run_cli(capsys, "sample", "--model", "wiener:level=4", "--count", "1",
                "--format", "grid", "--seed", "3", "--out", str(tmp_path / "p.csv"))
        # overwrite with the deterministic ramp for exact values
        t = np.linspace(0, 1, 17)
        (tmp_path / "p.csv").write_text(
            "t,value\n" + "".join(f"{x:.17g},{x:.17g}\n" for x in t)
        )
        code, out, _ = run_cli(
            capsys, "norms", "--input", str(tmp_path / "p.csv"),
            "--alpha", "0.5", "--delta", "0.5",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["sup_norm"] == pytest.approx(1.0)
        assert payload["h12_norm"] == pytest.approx(1.0)
        assert payload["holder_norm(0.5)"] == pytest.approx(1.0)
        assert payload["modulus(0.5)"] == pytest.approx(0.5)


class TestAtomsAndGauge:
    def test_build_then_gauge(self, capsys, tmp_path):
        atoms_path = tmp_path / "atoms.csv"
        code, out, _ = run_cli(
            capsys, "build-atoms", "--shape", "reciprocal-holder:alpha=0.25",
            "--model", "wiener:level=5", "--count", "32", "--modes", "16",
            "--seed", "2", "--out", str(atoms_path),
        )
        assert code == 0
        assert atoms_path.exists() and (tmp_path / "atoms.csv.provenance.json").exists()

        query_path = tmp_path / "query.csv"
        first_atom = atoms_path.read_text().splitlines()[0]
        query_path.write_text(first_atom + "\n")
        code, out, _ = run_cli(
            capsys, "gauge", "--atoms", str(atoms_path), "--query", str(query_path),
            "--radius", "1.0",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["status"] == "optimal"
        assert float(payload["value"]) <= 1.0 + 1e-8
        assert payload["member"] is True


class TestVerifyShape:
    def test_floor_shape_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-shape", "--shape", "floor:alpha=-0.5",
            "--model", "seq:dim=32", "--samples", "60", "--seed", "4",
        )
        assert code == 0
        payload = json.loads(out)
        assert set(payload) == {"a", "codomain", "b", "c", "d"}

    def test_identity_control_fails(self, capsys):
        code, out, _ = run_cli(
            capsys, "verify-shape", "--shape", "identity-control",
            "--model", "wiener:level=5", "--samples", "30", "--seed", "4",
            "--property", "d",
        )
        assert code == 1

    def test_unknown_shape_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "verify-shape", "--shape", "mystery", "--samples", "20"
        )
        assert code == 2
        assert "unknown shape" in err


class TestRun:
    def test_run_config_and_exit_codes(self, capsys, tmp_path):
        config = {
            "id": "cli-tiny",
            "seed": 5,
            "checks": ["cs-bound"],
            "params": {"cs-bound": {"samples": 40, "level": 6, "modes": 8}},
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        code, out, _ = run_cli(
            capsys, "run", "--config", str(cfg_path), "--out", str(tmp_path / "res"),
        )
        assert code == 0
        manifest = json.loads(out)
        assert manifest["all_passed"] is True
        assert (tmp_path / "res" / "cs-bound.json").exists()

    def test_bad_config_exit_two(self, capsys, tmp_path):
        cfg_path = tmp_path / "bad.json"
        cfg_path.write_text(json.dumps({"id": "x"}))
        code, _, err = run_cli(capsys, "run", "--config", str(cfg_path))
        assert code == 2
        assert "configuration error" in err

    def test_failing_check_exit_one(self, capsys, tmp_path):
        config = {
            "id": "cli-fail",
            "seed": 5,
            "checks": ["shape-floor"],
            "params": {"shape-floor": {"alpha": 0.7, "samples": 20}},
        }
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(config))
        code, _, _ = run_cli(
            capsys, "run", "--config", str(cfg_path), "--out", str(tmp_path / "res"),
        )
        assert code == 1


class TestEmbedDiag:
    def test_cs_alias(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, "embed-diag", "--check", "cs", "--seed", "3",
            "--out", str(tmp_path),
        )
        assert code == 0
        assert (tmp_path / "cs-bound.json").exists()


class TestList:
    def test_catalog_json(self, capsys):
        code, out, _ = run_cli(capsys, "list")
        assert code == 0
        catalog = json.loads(out)
        assert {"shapes", "models", "checks"} <= set(catalog)
