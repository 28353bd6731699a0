import json

import pytest

from gaugelab.experiments import (
    CHECK_IDS,
    ConfigError,
    ExperimentConfig,
    list_builtins,
    run,
)

TINY_PARAMS = {
    "cs-bound": {"samples": 50, "level": 7, "modes": 16},
    "witnesses": {"levels": [6, 7], "samples": 60},
    "small-holder": {"samples": 60, "level": 8, "delta_list": [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625]},
}


def tiny_config(checks, seed=11, extra=None):
    payload = {
        "id": "tiny",
        "seed": seed,
        "checks": list(checks),
        "params": {k: v for k, v in TINY_PARAMS.items() if k in checks},
    }
    if extra:
        payload.update(extra)
    return ExperimentConfig.from_dict(payload)


class TestConfig:
    def test_roundtrip_identity(self):
        cfg = tiny_config(["cs-bound"], extra={"out_dir": "x", "model": {"level": 9}})
        again = ExperimentConfig.from_json(cfg.to_json())
        assert again == cfg
        assert again.to_json() == cfg.to_json()

    def test_missing_fields_itemized(self):
        with pytest.raises(ConfigError) as err:
            ExperimentConfig.from_dict({"seed": 3})
        message = str(err.value)
        assert "id" in message and "checks" in message

    def test_unknown_check_rejected(self):
        with pytest.raises(ConfigError, match="checks"):
            ExperimentConfig.from_dict({"id": "x", "seed": 1, "checks": ["nope"]})

    def test_unknown_top_level_key_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"id": "x", "seed": 1, "checks": [], "zap": 1})

    def test_hash_ignores_out_dir(self):
        a = tiny_config(["cs-bound"], extra={"out_dir": "a"})
        b = tiny_config(["cs-bound"], extra={"out_dir": "b"})
        assert a.config_hash() == b.config_hash()

    def test_hash_tracks_seed(self):
        assert tiny_config(["cs-bound"], seed=1).config_hash() != tiny_config(
            ["cs-bound"], seed=2
        ).config_hash()

    def test_param_merge_order(self):
        cfg = ExperimentConfig.from_dict(
            {
                "id": "m",
                "seed": 0,
                "checks": ["cs-bound"],
                "model": {"level": 9},
                "params": {"cs-bound": {"level": 6}},
            }
        )
        merged = cfg.check_params("cs-bound", {"level": 10, "samples": 5})
        assert merged["level"] == 6  # per-check params win over global sections
        assert merged["samples"] == 5


class TestRun:
    def test_empty_checks_pass(self, tmp_path):
        manifest = run(tiny_config([]), out_dir=tmp_path)
        assert manifest.all_passed
        assert manifest.checks == {}
        assert (tmp_path / "manifest.json").exists()

    def test_artifacts_hashed(self, tmp_path):
        manifest = run(tiny_config(["cs-bound"]), out_dir=tmp_path)
        assert manifest.checks["cs-bound"]["passed"]
        import hashlib

        for name, digest in manifest.artifacts.items():
            assert hashlib.sha256((tmp_path / name).read_bytes()).hexdigest() == digest

    def test_error_isolation(self, tmp_path):
        cfg = ExperimentConfig.from_dict(
            {
                "id": "err",
                "seed": 1,
                "checks": ["cs-bound", "shape-floor"],
                "params": {
                    "cs-bound": TINY_PARAMS["cs-bound"],
                    # floor shape requires alpha in (-1, 0): this raises
                    "shape-floor": {"alpha": 0.7, "samples": 20},
                },
            }
        )
        manifest = run(cfg, out_dir=tmp_path)
        assert manifest.checks["cs-bound"]["passed"]
        assert not manifest.checks["shape-floor"]["passed"]
        assert "alpha" in manifest.checks["shape-floor"]["error"]
        assert not manifest.all_passed

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = tiny_config(["cs-bound", "witnesses"])
        run(cfg, out_dir=tmp_path / "a")
        run(cfg, out_dir=tmp_path / "b", threads=4)
        for name in ("cs-bound.json", "witnesses.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
        ma = json.loads((tmp_path / "a" / "manifest.json").read_text())
        mb = json.loads((tmp_path / "b" / "manifest.json").read_text())
        assert ma["artifacts"] == mb["artifacts"]
        assert ma["config_hash"] == mb["config_hash"]

    def test_infinity_encoding(self, tmp_path):
        # reports must stay valid JSON even with infinite values
        from gaugelab.experiments import write_json

        write_json(tmp_path / "x.json", {"v": float("inf"), "w": [1.0, float("-inf")]})
        payload = json.loads((tmp_path / "x.json").read_text())
        assert payload == {"v": "inf", "w": [1.0, "-inf"]}


class TestCatalog:
    def test_floor_range(self):
        catalog = list_builtins()
        floor = next(s for s in catalog["shapes"] if s["name"] == "floor")
        assert floor["alpha_range"] == [-1.0, 0.0]

    def test_reciprocal_range(self):
        catalog = list_builtins()
        rec = next(s for s in catalog["shapes"] if s["name"] == "reciprocal-holder")
        assert rec["alpha_range"] == [0.0, 0.5]

    def test_identity_marked_negative_control(self):
        catalog = list_builtins()
        ident = next(s for s in catalog["shapes"] if s["name"] == "identity-control")
        assert ident["note"] == "negative control (fails property d)"

    def test_every_check_described(self):
        catalog = list_builtins()
        assert set(catalog["checks"]) == set(CHECK_IDS)


def test_bundled_example_config_is_valid():
    from importlib import resources

    text = resources.files("gaugelab").joinpath("configs/holder_example.json").read_text()
    cfg = ExperimentConfig.from_json(text)
    assert cfg.id == "holder-example"
    assert set(cfg.checks) == {
        "shape-reciprocal-holder",
        "sandwich",
        "full-measure",
        "cs-bound",
    }
