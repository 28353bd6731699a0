"""Reproducible experiment driver.

A JSON config names an experiment id, a master seed and a list of checks;
optional sections override the documented per-check defaults.  Running a
config executes every check (failures in one never abort its siblings),
writes one JSON/CSV artifact set per check plus a manifest listing a content
hash for every emitted file, and reports aggregate pass/fail.

Determinism contract: every check derives its own sub-seed from the master
seed and its id, all sampling uses per-index streams, and artifact files
contain no timestamps, so re-running a config byte-reproduces every artifact
regardless of execution order or worker count.  The manifest's timestamp is
the single nondeterministic field, confined there on purpose.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .embedding_diagnostics import (
    ball_covering,
    compactness_profile,
    crossing_radius,
    cs_bound_check,
    dichotomy_sweep,
    full_measure_mc,
    small_ball_holder_bound,
    small_holder_membership,
    containment_witnesses,
)
from .function_core import GridFunction, h12_norm_batch, holder_norm_batch
from .gaussian_models import (
    ProductGaussianModel,
    WienerModel,
    kl_basis,
    kl_coeff_batch,
    wiener_batch,
)
from .generated_space import (
    build_atoms,
    enlarge_atoms,
    gauge,
    gauge_profile,
    sandwich_check,
)
from .rng import derive_seed, stream
from .shape_functions import (
    floor_metric_shape,
    identity_shape,
    reciprocal_holder_shape,
    verify_shape,
)

GAUGE_LAW_TOL = 1e-8


# ---------------------------------------------------------------------------
# configuration


CHECK_IDS = (
    "covering",
    "cs-bound",
    "dichotomy",
    "full-measure",
    "gauge-laws",
    "sandwich",
    "shape-floor",
    "shape-identity-control",
    "shape-reciprocal-holder",
    "small-ball",
    "small-holder",
    "witnesses",
)

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["id", "seed", "checks"],
    "additionalProperties": False,
    "properties": {
        "id": {"type": "string", "minLength": 1},
        "seed": {"type": "integer", "minimum": 0},
        "checks": {
            "type": "array",
            "items": {"enum": list(CHECK_IDS)},
        },
        "out_dir": {"type": "string"},
        "model": {"type": "object"},
        "shape": {"type": "object"},
        "schedules": {"type": "object"},
        "tolerances": {"type": "object"},
        "params": {
            "type": "object",
            "additionalProperties": {"type": "object"},
            "propertyNames": {"enum": list(CHECK_IDS)},
        },
    },
}


class ConfigError(ValueError):
    """Raised when a config fails schema validation; carries itemized errors."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; see CONFIG_SCHEMA for the layout."""

    id: str
    seed: int
    checks: tuple
    out_dir: str | None = None
    model: dict = field(default_factory=dict)
    shape: dict = field(default_factory=dict)
    schedules: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentConfig":
        validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
        errors = [
            f"{'/'.join(str(p) for p in err.absolute_path) or '<root>'}: {err.message}"
            for err in sorted(validator.iter_errors(payload), key=str)
        ]
        if errors:
            raise ConfigError(errors)
        return cls(
            id=payload["id"],
            seed=payload["seed"],
            checks=tuple(payload["checks"]),
            out_dir=payload.get("out_dir"),
            model=payload.get("model", {}),
            shape=payload.get("shape", {}),
            schedules=payload.get("schedules", {}),
            tolerances=payload.get("tolerances", {}),
            params=payload.get("params", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        payload = {"id": self.id, "seed": self.seed, "checks": list(self.checks)}
        if self.out_dir is not None:
            payload["out_dir"] = self.out_dir
        for name in ("model", "shape", "schedules", "tolerances", "params"):
            value = getattr(self, name)
            if value:
                payload[name] = value
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def config_hash(self) -> str:
        """Content hash of everything that determines results (not out_dir)."""
        payload = self.to_dict()
        payload.pop("out_dir", None)
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def check_params(self, check_id: str, defaults: dict) -> dict:
        """Defaults, overlaid by the global sections, then per-check params."""
        merged = dict(defaults)
        for section in (self.model, self.shape, self.schedules, self.tolerances):
            for key, value in section.items():
                if key in merged:
                    merged[key] = value
        merged.update(self.params.get(check_id, {}))
        return merged

    def check_seed(self, check_id: str) -> int:
        return derive_seed(self.seed, check_id)


# ---------------------------------------------------------------------------
# deterministic artifact writing


def _encode(value):
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, (np.floating, np.integer)):
        return _encode(value.item())
    if isinstance(value, np.ndarray):
        return [_encode(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    return value


def write_json(path: Path, payload) -> None:
    path.write_text(json.dumps(_encode(payload), indent=2, sort_keys=True) + "\n")


def write_csv(path: Path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format(v, ".17g") if isinstance(v, float) else v for v in row]
        )
    path.write_text(buf.getvalue())


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# check implementations


def _check_cs_bound(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params("cs-bound", {"samples": 1000, "level": 10, "modes": 64})
    report = cs_bound_check(p["samples"], p["level"], cfg.check_seed("cs-bound"), p["modes"])
    write_json(out_dir / "cs-bound.json", report)
    return report["pass"], report, ["cs-bound.json"]


def _check_small_ball(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "small-ball",
        {
            "eps_list": [0.005, 0.01],
            "alphas": [0.2, 0.25],
            "samples": 80,
            "level": 10,
            "min_accepted": 50,
        },
    )
    seed = cfg.check_seed("small-ball")
    reports = []
    ok = True
    for alpha in p["alphas"]:
        rep = small_ball_holder_bound(
            p["eps_list"], alpha, p["samples"], p["level"],
            derive_seed(seed, alpha), p["min_accepted"],
        )
        reports.append(rep)
        ok = ok and rep["pass"]
    payload = {"reports": reports, "pass": ok}
    write_json(out_dir / "small-ball.json", payload)
    return ok, payload, ["small-ball.json"]


def _shape_check(cfg, out_dir, check_id, phi, model, modes, expect_d):
    p = cfg.check_params(check_id, {"samples": 1000})
    reports = verify_shape(
        phi, model, p["samples"], cfg.check_seed(check_id), modes=modes
    )
    table = {name: rep.to_json_dict() for name, rep in reports.items()}
    others = all(rep.passed for name, rep in reports.items() if name != "d")
    ok = others and (reports["d"].passed == expect_d)
    payload = {
        "shape": phi.describe(),
        "reports": table,
        "expected_d": expect_d,
        "pass": ok,
    }
    write_json(out_dir / f"{check_id}.json", payload)
    return ok, payload, [f"{check_id}.json"]


def _check_shape_floor(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params("shape-floor", {"alpha": -0.5, "dim": 64})
    model = ProductGaussianModel(p["dim"], seed=cfg.check_seed("shape-floor"))
    phi = floor_metric_shape(p["alpha"])
    return _shape_check(cfg, out_dir, "shape-floor", phi, model, p["dim"], expect_d=True)


def _check_shape_reciprocal(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params("shape-reciprocal-holder", {"alpha": 0.25, "level": 8, "modes": 64})
    model = WienerModel(p["level"], seed=cfg.check_seed("shape-reciprocal-holder"))
    phi = reciprocal_holder_shape(p["alpha"])
    return _shape_check(
        cfg, out_dir, "shape-reciprocal-holder", phi, model, p["modes"], expect_d=True
    )


def _check_shape_identity(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params("shape-identity-control", {"level": 8, "modes": 64})
    model = WienerModel(p["level"], seed=cfg.check_seed("shape-identity-control"))
    phi = identity_shape(model)
    return _shape_check(
        cfg, out_dir, "shape-identity-control", phi, model, p["modes"], expect_d=False
    )


def _law_queries(level, modes, seed, count, scale_lo=0.5, scale_hi=2.0):
    """Unit-H KL paths with random scales; they live in the atom span."""
    coeff = kl_coeff_batch(modes, seed, count)
    paths = coeff @ kl_basis(modes, level).T
    paths /= h12_norm_batch(paths)[:, None]
    scales = np.array(
        [stream(derive_seed(seed, "scale"), i).uniform(scale_lo, scale_hi) for i in range(count)]
    )
    return paths * scales[:, None]


def _check_gauge_laws(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "gauge-laws",
        {
            "level": 8,
            "alpha": 0.25,
            "modes": 64,
            "atom_count": 512,
            "atom_counts": [128, 256, 512, 1024],
            "pairs": 100,
            "profile_queries": 5,
            "enlarge_queries": 20,
            "enlarge_extra": 32,
        },
    )
    seed = cfg.check_seed("gauge-laws")
    model = WienerModel(p["level"], seed=derive_seed(seed, "model"))
    phi = reciprocal_holder_shape(p["alpha"])
    atoms = build_atoms(phi, model, p["atom_count"], derive_seed(seed, "atoms"), p["modes"])

    xs = _law_queries(p["level"], p["modes"], derive_seed(seed, "x"), p["pairs"])
    ys = _law_queries(p["level"], p["modes"], derive_seed(seed, "y"), p["pairs"])
    gx = [gauge(x, atoms) for x in xs]
    gy = [gauge(y, atoms) for y in ys]

    lam_seed = derive_seed(seed, "lambda")
    worst_homog = 0.0
    for i, (x, g) in enumerate(zip(xs, gx)):
        lam = stream(lam_seed, i).uniform(0.25, 4.0) * (1 if i % 2 == 0 else -1)
        scaled = gauge(lam * x, atoms)
        worst_homog = max(worst_homog, abs(scaled.value - abs(lam) * g.value))

    worst_triangle = 0.0
    for x, y, a, b in zip(xs, ys, gx, gy):
        g_sum = gauge(x + y, atoms)
        worst_triangle = max(worst_triangle, g_sum.value - a.value - b.value)

    profile_rows = []
    profile_ok = True
    prof_seed = derive_seed(seed, "profile")
    for q in range(p["profile_queries"]):
        query = _law_queries(p["level"], p["modes"], derive_seed(prof_seed, q), 1)[0]
        values = [
            r.value
            for r in gauge_profile(query, phi, model, p["atom_counts"], derive_seed(seed, "atoms"), p["modes"])
        ]
        monotone = all(b <= a + GAUGE_LAW_TOL for a, b in zip(values, values[1:]))
        profile_ok = profile_ok and monotone
        profile_rows.append({"values": values, "monotone": monotone})

    extra = wiener_batch(p["level"], derive_seed(seed, "extra"), p["enlarge_extra"])
    bigger = enlarge_atoms(atoms, list(extra))
    worst_enlarge = -math.inf
    enlarge_rows = []
    for x in xs[: p["enlarge_queries"]]:
        before = gauge(x, atoms).value
        after = gauge(x, bigger).value
        drop = after - before if math.isfinite(before) else (0.0 if after <= before else math.inf)
        worst_enlarge = max(worst_enlarge, drop)
        enlarge_rows.append({"before": before, "after": after})

    ok = (
        worst_homog <= GAUGE_LAW_TOL
        and worst_triangle <= GAUGE_LAW_TOL
        and profile_ok
        and worst_enlarge <= GAUGE_LAW_TOL
    )
    payload = {
        "max_homogeneity_error": worst_homog,
        "max_triangle_excess": worst_triangle,
        "profile": profile_rows,
        "enlargement": enlarge_rows,
        "max_enlargement_increase": worst_enlarge,
        "tolerance": GAUGE_LAW_TOL,
        "pass": ok,
    }
    write_json(out_dir / "gauge-laws.json", payload)
    return ok, payload, ["gauge-laws.json"]


def _check_sandwich(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "sandwich",
        {
            "level": 8,
            "alpha": 0.25,
            "modes": 64,
            "atom_counts": [256, 4096],
            "queries": 20,
            "query_modes": 8,
        },
    )
    seed = cfg.check_seed("sandwich")
    model = WienerModel(p["level"], seed=derive_seed(seed, "model"))
    phi = reciprocal_holder_shape(p["alpha"])
    counts = sorted(p["atom_counts"])
    full = build_atoms(phi, model, counts[-1], derive_seed(seed, "atoms"), p["modes"])

    coeff = kl_coeff_batch(p["query_modes"], derive_seed(seed, "queries"), p["queries"])
    paths = coeff @ kl_basis(p["query_modes"], p["level"]).T
    paths /= holder_norm_batch(paths, p["alpha"])[:, None]

    rows = []
    lower_ok = True
    gaps = {c: [] for c in counts}
    for path in paths:
        query = GridFunction(p["level"], path)
        entry = {}
        for c in counts:
            rep = sandwich_check(query, p["alpha"], full.prefix(c))
            lower_ok = lower_ok and rep.lower_ok
            gaps[c].append(rep.gap)
            entry[str(c)] = rep.to_json_dict()
        rows.append(entry)
    medians = {c: float(np.median(gaps[c])) for c in counts}
    shrinks = medians[counts[-1]] < medians[counts[0]]
    ok = lower_ok and shrinks
    payload = {
        "median_gaps": {str(c): medians[c] for c in counts},
        "lower_bound_ok": lower_ok,
        "median_gap_shrinks": shrinks,
        "queries": rows,
        "pass": ok,
    }
    write_json(out_dir / "sandwich.json", payload)
    return ok, payload, ["sandwich.json"]


def _check_full_measure(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "full-measure",
        {
            "alpha": 0.25,
            "level": 10,
            "samples": 2000,
            "r_list": [round(0.25 * k, 2) for k in range(1, 41)],
            "threshold": 0.99,
        },
    )
    estimates = full_measure_mc(
        p["alpha"], p["r_list"], p["samples"], p["level"], cfg.check_seed("full-measure")
    )
    monotone = all(b.p_hat >= a.p_hat for a, b in zip(estimates, estimates[1:]))
    crossing = crossing_radius(estimates, p["threshold"])
    ok = monotone and crossing is not None
    payload = {
        "alpha": p["alpha"],
        "level": p["level"],
        "samples": p["samples"],
        "monotone": monotone,
        "crossing_radius": crossing,
        "threshold": p["threshold"],
        "estimates": [e.to_json_dict() for e in estimates],
        "pass": ok,
    }
    write_json(out_dir / "full-measure.json", payload)
    write_csv(
        out_dir / "full-measure-cdf.csv",
        ["r", "p_hat", "stderr"],
        [(e.radius, e.p_hat, e.stderr) for e in estimates],
    )
    return ok, payload, ["full-measure.json", "full-measure-cdf.csv"]


def _check_dichotomy(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "dichotomy",
        {"alphas": [0.25, 0.75], "levels": [8, 9, 10], "samples": 500},
    )
    report = dichotomy_sweep(
        p["alphas"], p["levels"], p["samples"], cfg.check_seed("dichotomy")
    )
    write_json(out_dir / "dichotomy.json", report)
    return report["pass"], report, ["dichotomy.json"]


def _check_witnesses(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params("witnesses", {"levels": [8, 9, 10], "samples": 500})
    report = containment_witnesses(p["levels"], p["samples"], cfg.check_seed("witnesses"))
    write_json(out_dir / "witnesses.json", report)
    return report["pass"], report, ["witnesses.json"]


def _check_covering(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "covering",
        {
            "level": 8,
            "ball_modes": 32,
            "ball_eps": [0.2, 0.1],
            "floor_dim": 64,
            "floor_alpha": -0.5,
            "floor_eps": [0.25, 0.2],
            "holder_alpha": 0.25,
            "holder_modes": 64,
            "holder_eps": [0.6, 0.5],
            "sample_counts": [2000, 4000],
        },
    )
    seed = cfg.check_seed("covering")
    wiener = WienerModel(p["level"], seed=derive_seed(seed, "wiener"))
    seq = ProductGaussianModel(p["floor_dim"], seed=derive_seed(seed, "seq"))
    legs = {
        "cm-ball": ball_covering(
            wiener, p["ball_eps"], p["sample_counts"], derive_seed(seed, "ball"),
            p["ball_modes"],
        ),
        "floor-image": compactness_profile(
            floor_metric_shape(p["floor_alpha"]), seq, p["floor_eps"],
            p["sample_counts"], derive_seed(seed, "floor"), p["floor_dim"],
        ),
        "reciprocal-holder-image": compactness_profile(
            reciprocal_holder_shape(p["holder_alpha"]), wiener, p["holder_eps"],
            p["sample_counts"], derive_seed(seed, "holder"), p["holder_modes"],
        ),
    }
    ok = all(rep.saturated for reports in legs.values() for rep in reports)
    payload = {
        "legs": {name: [r.to_json_dict() for r in reports] for name, reports in legs.items()},
        "pass": ok,
    }
    write_json(out_dir / "covering.json", payload)
    return ok, payload, ["covering.json"]


def _check_small_holder(cfg: ExperimentConfig, out_dir: Path):
    p = cfg.check_params(
        "small-holder",
        {
            "alpha": 0.25,
            "control_alpha": 0.75,
            "delta_list": [2.0**-k for k in range(0, 9)],
            "samples": 500,
            "level": 10,
            "decay_threshold": 0.5,
            "control_threshold": 0.9,
        },
    )
    seed = cfg.check_seed("small-holder")
    main = small_holder_membership(
        p["alpha"], p["delta_list"], p["samples"], p["level"], seed
    )
    control = small_holder_membership(
        p["control_alpha"], p["delta_list"], p["samples"], p["level"], seed
    )
    ok = (
        main["pass"]
        and main["tail_over_global"] < p["decay_threshold"]
        and control["tail_over_global"] > p["control_threshold"]
    )
    payload = {
        "main": main,
        "control": control,
        "decay_threshold": p["decay_threshold"],
        "control_threshold": p["control_threshold"],
        "pass": ok,
    }
    write_json(out_dir / "small-holder.json", payload)
    return ok, payload, ["small-holder.json"]


CHECK_RUNNERS = {
    "covering": _check_covering,
    "cs-bound": _check_cs_bound,
    "dichotomy": _check_dichotomy,
    "full-measure": _check_full_measure,
    "gauge-laws": _check_gauge_laws,
    "sandwich": _check_sandwich,
    "shape-floor": _check_shape_floor,
    "shape-identity-control": _check_shape_identity,
    "shape-reciprocal-holder": _check_shape_reciprocal,
    "small-ball": _check_small_ball,
    "small-holder": _check_small_holder,
    "witnesses": _check_witnesses,
}

CHECK_DESCRIPTIONS = {
    "covering": "greedy-net saturation for the H-ball and both shape images",
    "cs-bound": "exact discrete Cauchy-Schwarz pair bound on unit-H paths",
    "dichotomy": "Hoelder-norm refinement scaling on both sides of alpha = 1/2",
    "full-measure": "empirical CDF of Wiener Hoelder norms reaching 0.99",
    "gauge-laws": "gauge homogeneity, triangle, nested-profile and enlargement laws",
    "sandwich": "gauge versus Hoelder norm lower bound and shrinking gap",
    "shape-floor": "floor shape passes all shape-function properties",
    "shape-identity-control": "identity control passes all but property d",
    "shape-reciprocal-holder": "reciprocal-Hoelder shape passes all properties",
    "small-ball": "exact small-ball Hoelder bound on filtered unit-H paths",
    "small-holder": "decay of the localized Hoelder defect for alpha < 1/2",
    "witnesses": "divergence-rate witnesses for proper containment",
}


# ---------------------------------------------------------------------------
# the driver


@dataclass(frozen=True)
class ResultManifest:
    """What a run produced: per-check outcomes and hashed artifact paths."""

    config_hash: str
    tool_version: str
    generated_at: str
    checks: dict
    artifacts: dict
    all_passed: bool

    def to_json_dict(self) -> dict:
        return {
            "config_hash": self.config_hash,
            "tool_version": self.tool_version,
            "generated_at": self.generated_at,
            "checks": self.checks,
            "artifacts": self.artifacts,
            "all_passed": self.all_passed,
        }


def run(config: ExperimentConfig, out_dir=None, threads: int | None = None) -> ResultManifest:
    """Execute the config's checks and write artifacts plus manifest.json.

    ``threads`` is accepted as a speed hint only; every result is a pure
    function of (config, seed) by construction, so it can never change
    output.  The current implementation relies on vectorized kernels and
    runs checks sequentially.
    """
    target = Path(out_dir or config.out_dir or ".")
    target.mkdir(parents=True, exist_ok=True)
    outcomes = {}
    artifacts = {}
    for check_id in sorted(set(config.checks)):
        runner = CHECK_RUNNERS[check_id]
        started = time.monotonic()
        try:
            passed, _, files = runner(config, target)
            outcomes[check_id] = {"passed": bool(passed), "error": None}
        except Exception as exc:  # noqa: BLE001 - sibling checks must continue
            outcomes[check_id] = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
            files = []
        # wall time lives in the manifest next to the timestamp; artifacts
        # themselves stay byte-deterministic
        outcomes[check_id]["elapsed_s"] = round(time.monotonic() - started, 3)
        for name in files:
            artifacts[name] = _sha256(target / name)
    manifest = ResultManifest(
        config_hash=config.config_hash(),
        tool_version=__version__,
        generated_at=time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
        checks=outcomes,
        artifacts=artifacts,
        all_passed=all(o["passed"] for o in outcomes.values()),
    )
    write_json(target / "manifest.json", manifest.to_json_dict())
    return manifest


def list_builtins() -> dict:
    """Catalog of built-in shapes, models and checks."""
    return {
        "shapes": [
            {
                "name": "floor",
                "alpha_range": [-1.0, 0.0],
                "model": "sequence",
                "target": "origin",
                "description": "k(x) = floor(d(0, x)**alpha); needs a calibrated metric",
            },
            {
                "name": "reciprocal-holder",
                "alpha_range": [0.0, 0.5],
                "model": "wiener",
                "target": "holder unit ball",
                "description": "k(f) = 1 / ||f||_alpha; images lie on the Hoelder unit sphere",
            },
            {
                "name": "identity-control",
                "note": "negative control (fails property d)",
                "description": "k identically 1; the sphere itself, no blow-up at 0",
            },
        ],
        "models": [
            {
                "name": "wiener",
                "parameters": {"level": "dyadic grid level", "seed": "uint64"},
                "metric": "sup norm (calibrated: sup over the H-ball is 1)",
            },
            {
                "name": "sequence",
                "parameters": {
                    "dim": "truncation D",
                    "sigma": "per-coordinate standard deviations (default 1)",
                    "weights": "metric weights (default 2**-n)",
                },
                "metric": "c * sum w_n |dx_n| / (1 + |dx_n|), scale calibrated",
            },
        ],
        "checks": dict(CHECK_DESCRIPTIONS),
    }
