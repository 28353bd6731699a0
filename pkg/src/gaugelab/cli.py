"""Command-line interface.

Subcommands: sample, norms, verify-shape, build-atoms, gauge, embed-diag,
run, list.  Outputs are CSV/JSON only; every command is deterministic given
its seed.  The default output directory comes from --out, then the
GAUGELAB_OUT environment variable, then the working directory.  --threads is
accepted as a speed hint and never affects results.

Exit codes: 0 all checks passed, 1 some check failed, 2 configuration or
usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    ConfigError,
    ExperimentConfig,
    list_builtins,
    run as run_experiment,
    write_json,
)
from .function_core import (
    GridFunction,
    grid_from_csv,
    grid_to_csv,
    h12_norm,
    holder_norm,
    modulus_of_continuity,
    small_holder_defect,
    sup_norm,
)
from .gaussian_models import (
    ProductGaussianModel,
    WienerModel,
    product_coord_batch,
    wiener_batch,
)
from .generated_space import build_atoms, gauge, load_atoms, membership, save_atoms
from .shape_functions import (
    floor_metric_shape,
    identity_shape,
    reciprocal_holder_shape,
    verify_shape,
)

EMBED_DIAG_ALIASES = {
    "covering": "covering",
    "full-measure": "full-measure",
    "dichotomy": "dichotomy",
    "cs": "cs-bound",
    "small-ball": "small-ball",
    "witnesses": "witnesses",
    "small-holder": "small-holder",
}


def _parse_kv(text: str) -> tuple[str, dict]:
    """Split 'name:key=val,key=val' descriptors used by --shape and --model."""
    name, _, rest = text.partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise ValueError(f"malformed parameter {item!r} in {text!r}")
            try:
                params[key] = int(value)
            except ValueError:
                params[key] = float(value)
    return name, params


def _make_model(descriptor: str, seed: int):
    name, params = _parse_kv(descriptor)
    if name == "wiener":
        return WienerModel(level=int(params.get("level", 8)), seed=seed)
    if name == "seq":
        return ProductGaussianModel(dim=int(params.get("dim", 64)), seed=seed)
    raise ValueError(f"unknown model {name!r}; use wiener[:level=N] or seq[:dim=D]")


def _make_shape(descriptor: str, model):
    name, params = _parse_kv(descriptor)
    if name == "floor":
        return floor_metric_shape(params.get("alpha", -0.5))
    if name == "reciprocal-holder":
        return reciprocal_holder_shape(params.get("alpha", 0.25))
    if name == "identity-control":
        return identity_shape(model)
    raise ValueError(
        f"unknown shape {name!r}; use floor:alpha=A, reciprocal-holder:alpha=A "
        "or identity-control"
    )


def _out_dir(args) -> Path:
    target = Path(args.out or os.environ.get("GAUGELAB_OUT") or ".")
    target.mkdir(parents=True, exist_ok=True)
    return target


def _cmd_sample(args) -> int:
    model = _make_model(args.model, args.seed)
    if isinstance(model, WienerModel):
        rows = wiener_batch(model.level, args.seed, args.count)
    else:
        rows = product_coord_batch(model, args.count)
    if args.format == "grid":
        if not isinstance(model, WienerModel) or args.count != 1:
            print("grid format needs --model wiener and --count 1", file=sys.stderr)
            return 2
        text = grid_to_csv(GridFunction(model.level, rows[0]))
    else:
        text = "\n".join(",".join(format(v, ".17g") for v in row) for row in rows) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_norms(args) -> int:
    f = grid_from_csv(Path(args.input).read_text())
    payload = {
        "level": f.level,
        "sup_norm": sup_norm(f),
        "h12_norm": h12_norm(f),
        f"holder_norm({args.alpha})": holder_norm(f, args.alpha),
        f"modulus({args.delta})": modulus_of_continuity(f, args.delta),
        f"small_holder_defect({args.alpha},{args.delta})": small_holder_defect(
            f, args.alpha, args.delta
        ),
    }
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_verify_shape(args) -> int:
    model = _make_model(args.model, args.seed)
    phi = _make_shape(args.shape, model)
    props = (
        ("a", "codomain", "b", "c", "d")
        if args.property == "all"
        else tuple(args.property.split(","))
    )
    reports = verify_shape(phi, model, args.samples, args.seed, properties=props)
    payload = {name: rep.to_json_dict() for name, rep in reports.items()}
    if args.out:
        write_json(_out_dir(args) / f"verify-{phi.name}.json", payload)
    json.dump(payload, sys.stdout, indent=2, sort_keys=True, default=str)
    sys.stdout.write("\n")
    return 0 if all(rep.passed for rep in reports.values()) else 1


def _cmd_build_atoms(args) -> int:
    model = _make_model(args.model, args.seed)
    phi = _make_shape(args.shape, model)
    atoms = build_atoms(phi, model, args.count, args.seed, modes=args.modes)
    written = save_atoms(atoms, args.out)
    print("\n".join(written))
    return 0


def _load_query(path: str) -> np.ndarray:
    text = Path(path).read_text()
    if text.startswith("t,value"):
        return grid_from_csv(text).values
    first_line = text.strip().splitlines()[0]
    return np.array([float(v) for v in first_line.split(",")])


def _cmd_gauge(args) -> int:
    atoms = load_atoms(args.atoms)
    query = _load_query(args.query)
    result = gauge(query, atoms)
    payload = result.to_json_dict()
    if args.radius is not None:
        payload["radius"] = args.radius
        payload["member"] = membership(query, args.radius, atoms)
    json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def _cmd_embed_diag(args) -> int:
    check_id = EMBED_DIAG_ALIASES[args.check]
    config = ExperimentConfig.from_dict(
        {"id": f"embed-diag-{args.check}", "seed": args.seed, "checks": [check_id]}
    )
    manifest = run_experiment(config, out_dir=_out_dir(args), threads=args.threads)
    print(json.dumps(manifest.to_json_dict()["checks"], indent=2, sort_keys=True))
    return 0 if manifest.all_passed else 1


def _cmd_run(args) -> int:
    try:
        config = ExperimentConfig.from_json(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config = ExperimentConfig.from_dict({**config.to_dict(), "seed": args.seed})
    manifest = run_experiment(config, out_dir=args.out or config.out_dir
                              or os.environ.get("GAUGELAB_OUT") or ".",
                              threads=args.threads)
    print(json.dumps(manifest.to_json_dict(), indent=2, sort_keys=True))
    return 0 if manifest.all_passed else 1


def _cmd_list(args) -> int:
    json.dump(list_builtins(), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaugelab",
        description="numerical laboratory for gauge-normed intermediate spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw model samples as CSV (one path per row)")
    p.add_argument("--model", default="wiener:level=10")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["batch", "grid"], default="batch")
    p.add_argument("--out", help="output file (stdout otherwise)")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("norms", help="evaluate all norms of a grid-function CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--alpha", type=float, default=0.25)
    p.add_argument("--delta", type=float, default=0.5)
    p.set_defaults(func=_cmd_norms)

    p = sub.add_parser("verify-shape", help="run the shape-function property checks")
    p.add_argument("--shape", required=True, help="e.g. floor:alpha=-0.5")
    p.add_argument("--model", default="seq:dim=64")
    p.add_argument("--property", default="all", help="all or comma list of a,codomain,b,c,d")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the report under this directory")
    p.set_defaults(func=_cmd_verify_shape)

    p = sub.add_parser("build-atoms", help="sample shape images into an atom file")
    p.add_argument("--shape", required=True)
    p.add_argument("--model", default="wiener:level=8")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--modes", type=int, default=None)
    p.add_argument("--out", required=True, help="atom CSV path (sidecar JSON added)")
    p.set_defaults(func=_cmd_build_atoms)

    p = sub.add_parser("gauge", help="evaluate the gauge of a query against atoms")
    p.add_argument("--atoms", required=True)
    p.add_argument("--query", required=True, help="grid CSV or one-row vector CSV")
    p.add_argument("--radius", type=float, default=None, help="also test r-ball membership")
    p.set_defaults(func=_cmd_gauge)

    p = sub.add_parser("embed-diag", help="run one embedding diagnostic")
    p.add_argument("--check", required=True, choices=sorted(EMBED_DIAG_ALIASES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory")
    p.add_argument("--threads", type=int, default=None, help="speed hint; never affects results")
    p.set_defaults(func=_cmd_embed_diag)

    p = sub.add_parser("run", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", help="output directory")
    p.add_argument("--threads", type=int, default=None, help="speed hint; never affects results")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("list", help="print the catalog of shapes, models and checks")
    p.set_defaults(func=_cmd_list)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
