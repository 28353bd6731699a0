"""Radial maps on the Cameron-Martin unit sphere and their finite-sample checks.

A shape function scales each unit-sphere point x by a positive factor k(x)
with k(x) = k(-x), subject to four requirements: odd radial form, images
attracted to a compact target as x approaches 0 in the ambient metric,
boundedness of the Cameron-Martin norm away from 0, and blow-up of the
factor at 0.  The built-in instances are

* ``floor_metric_shape(alpha)`` with k(x) = floor(d(0, x)**alpha),
  alpha in (-1, 0), for metric-calibrated models;
* ``reciprocal_norm_shape`` with k(x) = 1 / ||x|| for a separating norm,
  notably the alpha-Hoelder seminorm with alpha in (0, 1/2);
* ``identity_shape()``, the deliberate negative control that satisfies
  everything except the blow-up property.

All four properties are asymptotic statements; the verifiers here are their
documented finite-sample surrogates, with pass thresholds gathered in
``ShapeCheckConfig``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .function_core import (
    GridFunction,
    SeqPoint,
    holder_norm,
    seq_metric_from_zero,
    sup_norm,
)
from .gaussian_models import (
    CMVector,
    Model,
    WienerModel,
    ambient_metric_from_zero,
    cm_norm,
    sample_sphere_H,
    sample_sphere_near_zero,
)
from .rng import derive_seed

DEFAULT_KL_MODES = 64


def point_metric_from_zero(x: GridFunction | SeqPoint) -> float:
    """Ambient metric distance from 0, read off the carrier itself."""
    if isinstance(x, GridFunction):
        return sup_norm(x)
    return seq_metric_from_zero(x.coords, x.weights, x.scale)


def point_metric(x, y) -> float:
    if isinstance(x, GridFunction):
        return float(np.abs(x.values - y.values).max())
    return seq_metric_from_zero(x.coords - y.coords, x.weights, x.scale)


def scale_point(x: GridFunction | SeqPoint, factor: float):
    if isinstance(x, GridFunction):
        return GridFunction(x.level, factor * x.values)
    return x.with_coords(factor * x.coords)


def zero_like(x: GridFunction | SeqPoint):
    if isinstance(x, GridFunction):
        return GridFunction(x.level, np.zeros_like(x.values))
    return x.with_coords(np.zeros_like(x.coords))


# ---------------------------------------------------------------------------
# targets for the attraction property


class SingletonTarget:
    """The origin; distance is the ambient metric itself (an exact net)."""

    name = "origin"
    net_resolution = 0.0

    def distance(self, x) -> float:
        return point_metric_from_zero(x)


class NormBallTarget:
    """Closed ball {||y|| <= radius} of a norm, via a membership oracle.

    Distance is 0 inside the ball; outside, it is the ambient metric to the
    radially projected boundary point, an upper bound on the true distance.
    The oracle plays the role of an exact (resolution-0) net of the ball.
    """

    net_resolution = 0.0

    def __init__(self, norm_fn: Callable, radius: float = 1.0, name: str = "norm-ball"):
        self.norm_fn = norm_fn
        self.radius = radius
        self.name = name

    def distance(self, x) -> float:
        v = self.norm_fn(x)
        if v <= self.radius * (1 + 1e-12):
            return 0.0
        return point_metric(x, scale_point(x, self.radius / v))


# ---------------------------------------------------------------------------
# shape functions


@dataclass(frozen=True)
class ShapeFunction:
    """A radial sphere map x -> radial_factor(x) * x with a target descriptor."""

    name: str
    radial_factor: Callable
    target: object = None
    params: dict = field(default_factory=dict)

    def apply(self, x: GridFunction | SeqPoint):
        return scale_point(x, self.radial_factor(x))

    def describe(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.name}:{args}"


def eval_shape(phi: ShapeFunction, x: CMVector):
    """Image of a unit-sphere point under the shape function."""
    if abs(x.cm_norm - 1.0) > 1e-9:
        raise ValueError(f"point is not on the Cameron-Martin unit sphere: {x.cm_norm}")
    return phi.apply(x.point)


def homogeneous_extension(phi: ShapeFunction, x, model: Model):
    """Degree-1 positively homogeneous extension of ``phi`` to all of H.

    Maps 0 to 0 and any other x to ||x||_H * phi(x / ||x||_H).
    """
    r = cm_norm(x, model)
    if r == 0.0:
        return zero_like(x)
    unit = scale_point(x, 1.0 / r)
    return scale_point(phi.apply(unit), r)


def floor_metric_shape(alpha: float) -> ShapeFunction:
    """k(x) = floor(d(0, x)**alpha) for alpha in (-1, 0); target is the origin.

    Requires the model's metric to be calibrated (d <= 1 on the unit sphere)
    so that the factor is a positive integer; the mathematical floor is used
    without smoothing, so the factor jumps exactly at integer powers.
    """
    if not -1.0 < alpha < 0.0:
        raise ValueError(f"alpha must lie in (-1, 0), got {alpha}")

    def radial(x) -> float:
        d = point_metric_from_zero(x)
        if d <= 0.0:
            raise ValueError("metric distance 0; the factor is undefined at 0")
        k = math.floor(d**alpha)
        if k < 1:
            raise ValueError(
                f"d(0, x) = {d} > 1: metric is not calibrated for the floor shape"
            )
        return float(k)

    return ShapeFunction("floor", radial, SingletonTarget(), {"alpha": alpha})


def reciprocal_norm_shape(
    norm_fn: Callable, name: str = "reciprocal", params: dict | None = None,
    target: object = None,
) -> ShapeFunction:
    """k(x) = 1 / ||x|| for a norm that separates points.

    The target defaults to the closed unit ball of the same norm, which
    contains the image by homogeneity.
    """
    if target is None:
        target = NormBallTarget(norm_fn, 1.0, name=f"{name}-unit-ball")

    def radial(x) -> float:
        v = norm_fn(x)
        if v <= 0.0:
            raise ValueError("norm vanishes on a nonzero point; it must separate points")
        return 1.0 / v

    return ShapeFunction(name, radial, target, dict(params or {}))


def reciprocal_holder_shape(alpha: float) -> ShapeFunction:
    """The Hoelder-normalizing shape f -> f / ||f||_alpha, alpha in (0, 1/2)."""
    if not 0.0 < alpha < 0.5:
        raise ValueError(f"alpha must lie in (0, 1/2), got {alpha}")
    return reciprocal_norm_shape(
        lambda f: holder_norm(f, alpha),
        name="reciprocal-holder",
        params={"alpha": alpha},
    )


def identity_shape(model: Model) -> ShapeFunction:
    """k identically 1: satisfies everything except the blow-up at 0.

    Kept as the standard negative control; its target is the Cameron-Martin
    unit ball, which contains the image (the sphere) outright.
    """
    ball = NormBallTarget(lambda x: cm_norm(x, model), 1.0, name="cm-unit-ball")
    return ShapeFunction("identity-control", lambda x: 1.0, ball)


# ---------------------------------------------------------------------------
# finite-sample verification


@dataclass(frozen=True)
class ShapeCheckConfig:
    """Documented pass thresholds for the finite-sample property checks."""

    oddness_tol: float = 1e-12
    codomain_metric_tol: float = 1e-9
    codomain_cm_tol: float = 1e-9
    attraction_slack: float = 1.05      # allowed uptick factor along shrinking radii
    attraction_floor: float = 0.1       # absolute fallback threshold for exact nets
    bounded_increase: float = 0.10      # allowed relative sup growth when N doubles
    blowup_factor: float = 2.0          # required inf growth per radius step
    blowup_escape: float = 1e3          # or the inf simply exceeds this
    # Radius schedules step down fast enough that the guaranteed blow-up
    # rates of the built-in shapes give at least a doubling per step.
    seq_radii: tuple = (2**-2, 2**-6, 2**-10, 2**-14)
    grid_radii: tuple = (2**-1, 2**-5)
    eps_levels: tuple = (0.25, 0.125)


@dataclass(frozen=True)
class ShapeCheckReport:
    """Outcome of one finite-sample property check.

    ``passed`` is a pure function of ``details`` and the thresholds recorded
    alongside it.
    """

    property: str
    samples_used: int
    statistic: float
    passed: bool
    details: list
    thresholds: dict

    def to_json_dict(self) -> dict:
        return {
            "property": self.property,
            "samples_used": self.samples_used,
            "statistic": self.statistic,
            "pass": self.passed,
            "details": self.details,
            "thresholds": self.thresholds,
        }


def _default_modes(model: Model, modes: int | None) -> int:
    if modes is not None:
        return modes
    return DEFAULT_KL_MODES if isinstance(model, WienerModel) else model.dim


def _radii_for(model: Model, config: ShapeCheckConfig):
    return config.grid_radii if isinstance(model, WienerModel) else config.seq_radii


def check_property_a(
    phi: ShapeFunction, model: Model, n_samples: int, seed: int,
    modes: int | None = None, config: ShapeCheckConfig = ShapeCheckConfig(),
) -> ShapeCheckReport:
    """Positivity of the radial factor and exact oddness on sphere samples."""
    if n_samples < 10:
        raise ValueError("need at least 10 samples")
    modes = _default_modes(model, modes)
    worst = 0.0
    ok = True
    for i in range(n_samples):
        x = sample_sphere_H(model, modes, seed, index=i)
        k_pos = phi.radial_factor(x.point)
        k_neg = phi.radial_factor((-x).point)
        asym = abs(k_pos - k_neg) / max(1.0, abs(k_pos))
        worst = max(worst, asym)
        if not (k_pos > 0.0 and asym <= config.oddness_tol):
            ok = False
    return ShapeCheckReport(
        "a", n_samples, worst, ok,
        [{"max_relative_asymmetry": worst}],
        {"oddness_tol": config.oddness_tol},
    )


def check_codomain(
    phi: ShapeFunction, model: Model, n_samples: int, seed: int,
    modes: int | None = None, config: ShapeCheckConfig = ShapeCheckConfig(),
) -> ShapeCheckReport:
    """Images stay in the closed unit metric ball and outside the open H-ball."""
    modes = _default_modes(model, modes)
    worst_metric = 0.0
    worst_cm = math.inf
    for i in range(n_samples):
        x = sample_sphere_H(model, modes, seed, index=i)
        y = eval_shape(phi, x)
        worst_metric = max(worst_metric, ambient_metric_from_zero(model, y))
        worst_cm = min(worst_cm, cm_norm(y, model))
    ok = (
        worst_metric <= 1.0 + config.codomain_metric_tol
        and worst_cm >= 1.0 - config.codomain_cm_tol
    )
    return ShapeCheckReport(
        "codomain", n_samples, worst_metric, ok,
        [{"max_metric_from_zero": worst_metric, "min_cm_norm": worst_cm}],
        {
            "codomain_metric_tol": config.codomain_metric_tol,
            "codomain_cm_tol": config.codomain_cm_tol,
        },
    )


def check_property_b(
    phi: ShapeFunction, model: Model, radii, n_samples: int, seed: int,
    modes: int | None = None, config: ShapeCheckConfig = ShapeCheckConfig(),
) -> ShapeCheckReport:
    """Attraction to the compact target as sphere points approach 0 in metric.

    Finite-sample proxy: for each radius r, the sup over conditioned samples
    with d(0, x) <= r of the distance from the image to the target must
    decrease (within a slack factor) and end below the documented threshold.
    """
    if phi.target is None:
        raise ValueError("shape function has no target descriptor for the b-check")
    radii = sorted(radii if radii is not None else _radii_for(model, config), reverse=True)
    modes = _default_modes(model, modes)
    rows = []
    used = 0
    sups = []
    for r_idx, r in enumerate(radii):
        samples = sample_sphere_near_zero(
            model, r, modes, derive_seed(seed, "b", r_idx), n_samples
        )
        if not samples:
            rows.append({"radius": r, "samples": 0, "sup_distance": None, "skipped": True})
            continue
        used += len(samples)
        sup_dist = max(phi.target.distance(phi.apply(x.point)) for x in samples)
        sups.append(sup_dist)
        rows.append({"radius": r, "samples": len(samples), "sup_distance": sup_dist})
    threshold = max(10.0 * phi.target.net_resolution, config.attraction_floor)
    monotone = all(b <= a * config.attraction_slack for a, b in zip(sups, sups[1:]))
    ok = bool(sups) and monotone and sups[-1] <= threshold
    return ShapeCheckReport(
        "b", used, sups[-1] if sups else math.inf, ok, rows,
        {
            "attraction_slack": config.attraction_slack,
            "threshold": threshold,
            "target": phi.target.name,
        },
    )


def check_property_c(
    phi: ShapeFunction, model: Model, eps_list, n_samples: int, seed: int,
    modes: int | None = None, config: ShapeCheckConfig = ShapeCheckConfig(),
) -> ShapeCheckReport:
    """H-boundedness of images away from 0: sup stays finite and stabilizes.

    For each eps, the sup of cm-norms over samples with d(0, x) >= eps is
    compared between the first N and the first 2N samples (nested prefixes);
    saturation means the sup grew by less than the configured fraction.
    """
    eps_list = list(eps_list if eps_list is not None else config.eps_levels)
    modes = _default_modes(model, modes)
    points = []
    for i in range(2 * n_samples):
        x = sample_sphere_H(model, modes, seed, index=i)
        points.append((ambient_metric_from_zero(model, x.point), x))
    rows = []
    ok = True
    worst = 0.0
    for eps in eps_list:
        if eps <= 0:
            raise ValueError("eps values must be positive")
        sup_half, sup_full, kept_half, kept_full = 0.0, 0.0, 0, 0
        for idx, (dist, x) in enumerate(points):
            if dist < eps:
                continue
            v = cm_norm(eval_shape(phi, x), model)
            kept_full += 1
            sup_full = max(sup_full, v)
            if idx < n_samples:
                kept_half += 1
                sup_half = max(sup_half, v)
        growth = (sup_full - sup_half) / sup_half if sup_half > 0 else math.inf
        stable = math.isfinite(sup_full) and growth < config.bounded_increase
        ok = ok and stable
        worst = max(worst, sup_full)
        rows.append(
            {
                "eps": eps, "samples_half": kept_half, "samples_full": kept_full,
                "sup_cm_half": sup_half, "sup_cm_full": sup_full, "growth": growth,
            }
        )
    return ShapeCheckReport(
        "c", 2 * n_samples, worst, ok, rows,
        {"bounded_increase": config.bounded_increase},
    )


def check_property_d(
    phi: ShapeFunction, model: Model, radii, n_samples: int, seed: int,
    modes: int | None = None, config: ShapeCheckConfig = ShapeCheckConfig(),
) -> ShapeCheckReport:
    """Blow-up of the radial factor at 0 along a shrinking radius schedule.

    Pass when the per-radius infimum of the factor eventually at least
    doubles at every step (some leading steps may be flat), or simply
    exceeds the escape threshold.
    """
    radii = sorted(radii if radii is not None else _radii_for(model, config), reverse=True)
    modes = _default_modes(model, modes)
    rows = []
    infs = []
    used = 0
    for r_idx, r in enumerate(radii):
        samples = sample_sphere_near_zero(
            model, r, modes, derive_seed(seed, "d", r_idx), n_samples
        )
        if not samples:
            rows.append({"radius": r, "samples": 0, "inf_factor": None, "skipped": True})
            continue
        used += len(samples)
        inf_k = min(phi.radial_factor(x.point) for x in samples)
        infs.append(inf_k)
        rows.append({"radius": r, "samples": len(samples), "inf_factor": inf_k})
    ratios = [b / a for a, b in zip(infs, infs[1:])]
    tail_ok = False
    for start in range(len(ratios)):
        if all(q >= config.blowup_factor for q in ratios[start:]):
            tail_ok = True
            break
    ok = bool(infs) and ((infs and infs[-1] >= config.blowup_escape) or (ratios and tail_ok))
    return ShapeCheckReport(
        "d", used, infs[-1] if infs else 0.0, ok, rows,
        {"blowup_factor": config.blowup_factor, "blowup_escape": config.blowup_escape},
    )


ALL_PROPERTIES = ("a", "codomain", "b", "c", "d")


def verify_shape(
    phi: ShapeFunction, model: Model, n_samples: int, seed: int,
    properties=ALL_PROPERTIES, modes: int | None = None,
    config: ShapeCheckConfig = ShapeCheckConfig(),
) -> dict:
    """Run the requested property checks; returns {property: ShapeCheckReport}."""
    runners = {
        "a": lambda: check_property_a(phi, model, n_samples, seed, modes, config),
        "codomain": lambda: check_codomain(phi, model, n_samples, seed, modes, config),
        "b": lambda: check_property_b(phi, model, None, n_samples, seed, modes, config),
        "c": lambda: check_property_c(phi, model, None, n_samples, seed, modes, config),
        "d": lambda: check_property_d(phi, model, None, n_samples, seed, modes, config),
    }
    unknown = set(properties) - set(runners)
    if unknown:
        raise ValueError(f"unknown properties: {sorted(unknown)}")
    return {p: runners[p]() for p in properties}
