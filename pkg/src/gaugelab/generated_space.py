"""Sampled unit balls and their Minkowski gauge, computed by linear programming.

The unit ball of a generated space is the closed convex hull of the shape
image of the Cameron-Martin unit sphere.  Here it is approximated from the
inside by finitely many symmetrized atoms, so every gauge value produced is a
certified upper bound of the true gauge: the reported coefficients are a
feasible convex-cone representation of the query up to the stated residual.

The gauge of x is the LP

    minimize sum(lambda)  subject to  sum(lambda_i * atom_i) = x, lambda >= 0,

solved with HiGHS.  A query outside the span of the atoms is reported as
infeasible with value +inf, preserving the extended-real semantics (points
outside the span have infinite gauge at this sample resolution).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .function_core import (
    GridFunction,
    SeqPoint,
    holder_norm,
    holder_norm_batch,
)
from .gaussian_models import (
    Model,
    ProductGaussianModel,
    WienerModel,
    point_values,
    product_coord_batch,
    sphere_value_batch,
    wiener_batch,
)
from .rng import derive_seed
from .shape_functions import ShapeFunction

FEASIBILITY_TOL = 1e-8
_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-9}


# ---------------------------------------------------------------------------
# ambient descriptors


@dataclass(frozen=True)
class GridAmbient:
    level: int
    kind: str = "grid"

    def metric_from_zero(self, rows: np.ndarray) -> np.ndarray:
        return np.abs(np.atleast_2d(rows)).max(axis=1)

    def homogeneous(self) -> bool:
        return True

    def to_json_dict(self) -> dict:
        return {"kind": "grid", "level": self.level}


@dataclass(frozen=True)
class SeqAmbient:
    weights: np.ndarray
    scale: float
    kind: str = "seq"

    def metric_from_zero(self, rows: np.ndarray) -> np.ndarray:
        a = np.abs(np.atleast_2d(rows))
        return self.scale * np.sum(self.weights * a / (1.0 + a), axis=1)

    def homogeneous(self) -> bool:
        return False

    def to_json_dict(self) -> dict:
        return {
            "kind": "seq",
            "weights": [float(w) for w in self.weights],
            "scale": self.scale,
        }


@dataclass(frozen=True)
class EuclidAmbient:
    dim: int
    kind: str = "euclid"

    def metric_from_zero(self, rows: np.ndarray) -> np.ndarray:
        return np.linalg.norm(np.atleast_2d(rows), axis=1)

    def homogeneous(self) -> bool:
        return True

    def to_json_dict(self) -> dict:
        return {"kind": "euclid", "dim": self.dim}


def ambient_of(model: Model):
    if isinstance(model, WienerModel):
        return GridAmbient(model.level)
    return SeqAmbient(model.weights, model.scale)


def _ambient_from_json(payload: dict):
    kind = payload["kind"]
    if kind == "grid":
        return GridAmbient(int(payload["level"]))
    if kind == "seq":
        return SeqAmbient(np.array(payload["weights"], dtype=float), float(payload["scale"]))
    if kind == "euclid":
        return EuclidAmbient(int(payload["dim"]))
    raise ValueError(f"unknown ambient kind {kind!r}")


# ---------------------------------------------------------------------------
# atom sets


@dataclass(frozen=True)
class AtomSet:
    """Symmetrized sample of the shape image; inner approximation of the ball.

    The matrix holds the ``n_base`` base atoms followed by their exact
    negations, so nested prefixes of the base atoms stay symmetric.  Every
    atom lies in the closed unit metric ball (the normalization making the
    gauge comparable with the ambient metric).
    """

    matrix: np.ndarray
    ambient: object
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", matrix)
        if matrix.ndim != 2 or matrix.shape[0] == 0 or matrix.shape[0] % 2 != 0:
            raise ValueError("atom matrix must be a nonempty 2-d array of symmetric pairs")
        half = matrix.shape[0] // 2
        if not np.array_equal(matrix[half:], -matrix[:half]):
            raise ValueError("atoms must be stored as base atoms followed by negations")
        dists = self.ambient.metric_from_zero(matrix[:half])
        if np.any(dists > 1.0 + 1e-9):
            raise ValueError(
                f"atoms exceed the unit metric ball: max d = {dists.max():.3e}"
            )

    @classmethod
    def from_points(cls, points: np.ndarray, ambient, provenance=None) -> "AtomSet":
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return cls(np.vstack([points, -points]), ambient, dict(provenance or {}))

    @property
    def n_base(self) -> int:
        return self.matrix.shape[0] // 2

    @property
    def ambient_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def base(self) -> np.ndarray:
        return self.matrix[: self.n_base]

    def prefix(self, n_samples: int) -> "AtomSet":
        """The sub-ball built from the first ``n_samples`` base atoms."""
        if not 1 <= n_samples <= self.n_base:
            raise ValueError(f"prefix size {n_samples} outside 1..{self.n_base}")
        prov = dict(self.provenance, prefix_of=self.n_base, count=n_samples)
        return AtomSet.from_points(self.base[:n_samples], self.ambient, prov)


def build_atoms(
    phi: ShapeFunction, model: Model, count: int, seed: int, modes: int | None = None
) -> AtomSet:
    """Map ``count`` sphere samples through the shape and symmetrize.

    Deterministic given (model, seed); sample ``i`` always uses stream ``i``,
    so atom sets with the same seed and different counts are nested.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if modes is None:
        modes = 64 if isinstance(model, WienerModel) else model.dim
    rows = sphere_value_batch(model, modes, seed, count)
    factors = radial_factors(phi, model, rows)
    atoms = rows * factors[:, None]
    provenance = {
        "shape": phi.describe(),
        "model": "wiener" if isinstance(model, WienerModel) else "sequence",
        "seed": seed,
        "count": count,
        "modes": modes,
    }
    return AtomSet.from_points(atoms, ambient_of(model), provenance)


def radial_factors(phi: ShapeFunction, model: Model, rows: np.ndarray) -> np.ndarray:
    """Vectorized radial factors for the built-in shapes; row loop otherwise."""
    if phi.name == "reciprocal-holder":
        return 1.0 / holder_norm_batch(rows, phi.params["alpha"])
    if phi.name == "floor" and isinstance(model, ProductGaussianModel):
        d = SeqAmbient(model.weights, model.scale).metric_from_zero(rows)
        if np.any(d > 1.0) or np.any(d <= 0.0):
            raise ValueError("metric not calibrated: sphere sample outside the unit ball")
        return np.floor(d ** phi.params["alpha"])
    if phi.name == "identity-control":
        return np.ones(rows.shape[0])
    out = np.empty(rows.shape[0])
    for i, row in enumerate(rows):
        point = (
            GridFunction(model.level, row)
            if isinstance(model, WienerModel)
            else model.point(row)
        )
        out[i] = phi.radial_factor(point)
    return out


# ---------------------------------------------------------------------------
# the gauge LP


@dataclass(frozen=True)
class GaugeResult:
    """Gauge value with its feasibility certificate.

    When status is "optimal" the sparse ``weights`` reproduce the query up to
    ``residual`` (Euclidean, <= 1e-8) and ``value`` is their sum, an upper
    bound on the true gauge of the true unit ball.  "infeasible" means the
    query is outside the atom span at this sample resolution (value +inf).
    """

    value: float
    weights: dict
    residual: float
    status: str

    def to_json_dict(self) -> dict:
        return {
            "value": self.value if math.isfinite(self.value) else "inf",
            "weights": {str(k): v for k, v in sorted(self.weights.items())},
            "residual": self.residual,
            "status": self.status,
        }


def _as_vector(x, atoms: AtomSet) -> np.ndarray:
    vec = point_values(x) if isinstance(x, (GridFunction, SeqPoint)) else np.asarray(x, float)
    if vec.shape != (atoms.ambient_dim,):
        raise ValueError(
            f"query has dimension {vec.shape}, atoms expect ({atoms.ambient_dim},)"
        )
    return vec


def gauge(x, atoms: AtomSet, feas_tol: float = FEASIBILITY_TOL) -> GaugeResult:
    """Minkowski gauge of ``x`` with respect to the sampled unit ball.

    Span membership is decided first by least squares: symmetric atoms make
    the cone they generate equal to their span, so a query off the span is
    infeasible outright (value +inf) rather than an LP artifact.  The LP is
    then solved with progressively relaxed solver tolerances until the
    certificate residual passes; failing that, the best bound is returned
    with status "tolerance".
    """
    raw = _as_vector(x, atoms)
    if not np.any(raw):
        return GaugeResult(0.0, {}, 0.0, "optimal")
    # Solving for the direction and rescaling makes gauge(s * x) = s * gauge(x)
    # exact by construction and keeps the LP well scaled.
    query_scale = float(np.linalg.norm(raw))
    vec = raw / query_scale
    a_eq = atoms.matrix.T
    coeff, _, _, _ = np.linalg.lstsq(a_eq, vec, rcond=None)
    span_dist = float(np.linalg.norm(a_eq @ coeff - vec))
    if span_dist > 0.5 * feas_tol:
        return GaugeResult(math.inf, {}, math.inf, "infeasible")
    cost = np.ones(atoms.matrix.shape[0])
    best = None
    for tol in (1e-10, 1e-9, None):
        options = (
            {"primal_feasibility_tolerance": tol, "dual_feasibility_tolerance": 1e-9}
            if tol is not None
            else {}
        )
        res = linprog(cost, A_eq=a_eq, b_eq=vec, bounds=(0, None),
                      method="highs", options=options)
        if res.status == 2:
            return GaugeResult(math.inf, {}, math.inf, "infeasible")
        if res.status != 0 or res.x is None:
            continue
        lam = _polish(a_eq, vec, np.maximum(res.x, 0.0))
        residual = float(np.linalg.norm(a_eq @ lam - vec))
        weights = {
            int(i): float(lam[i] * query_scale)
            for i in np.nonzero(lam > 1e-12)[0]
        }
        result = GaugeResult(
            float(lam.sum() * query_scale), weights, residual * query_scale,
            "optimal" if residual * query_scale <= feas_tol else "tolerance",
        )
        if result.status == "optimal":
            return result
        if best is None or result.residual < best.residual:
            best = result
    return best if best is not None else GaugeResult(math.inf, {}, math.inf, "tolerance")


def _polish(a_eq: np.ndarray, vec: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Re-solve the LP solution on its support by least squares.

    The optimal basis identifies which atoms carry weight; recomputing their
    coefficients directly from the linear system removes the solver's
    feasibility-tolerance noise from the certificate.  Falls back to the raw
    solution when the polished one stops being a certificate.
    """
    support = np.nonzero(lam > 1e-10 * max(1.0, float(lam.max())))[0]
    if support.size == 0 or support.size > 4 * a_eq.shape[0]:
        return lam
    sol, _, _, _ = np.linalg.lstsq(a_eq[:, support], vec, rcond=None)
    if np.any(sol < -1e-11):
        return lam
    polished = np.zeros_like(lam)
    polished[support] = np.maximum(sol, 0.0)
    old = float(np.linalg.norm(a_eq @ lam - vec))
    new = float(np.linalg.norm(a_eq @ polished - vec))
    return polished if new <= max(old, 1e-12) else lam


def gauge_relaxed(x, atoms: AtomSet, rho: float = 1e4) -> dict:
    """Residual-penalized diagnostic solve: min sum(lambda) + rho * ||slack||_1.

    For probing rank-deficient atom matrices only; its value is never a gauge
    (the slack lets it undercut the true one) and it is reported separately.
    """
    vec = _as_vector(x, atoms)
    k = atoms.matrix.shape[0]
    dim = atoms.ambient_dim
    cost = np.concatenate([np.ones(k), np.full(2 * dim, rho)])
    a_eq = np.hstack([atoms.matrix.T, np.eye(dim), -np.eye(dim)])
    res = linprog(cost, A_eq=a_eq, b_eq=vec, bounds=(0, None), method="highs",
                  options=_LP_OPTIONS)
    if res.status != 0 or res.x is None:
        return {"value": math.inf, "residual": math.inf, "diagnostic": True}
    lam = res.x[:k]
    slack = res.x[k:]
    return {
        "value": float(lam.sum()),
        "residual": float(np.abs(slack[:dim] - slack[dim:]).sum()),
        "diagnostic": True,
    }


def membership(x, radius: float, atoms: AtomSet) -> bool:
    """Whether x lies in radius * (sampled unit ball), up to the LP tolerance."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    result = gauge(x, atoms)
    return result.value <= radius + FEASIBILITY_TOL


def gauge_profile(
    x, phi: ShapeFunction, model: Model, schedule, seed: int, modes: int | None = None
) -> list:
    """Gauge of ``x`` along a nested schedule of atom counts.

    The per-index sampling streams make smaller atom sets exact prefixes of
    larger ones, so the values are monotone nonincreasing by construction of
    the hulls, not merely statistically.
    """
    schedule = list(schedule)
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError("schedule must be strictly increasing")
    full = build_atoms(phi, model, schedule[-1], seed, modes)
    return [gauge(x, full.prefix(count)) for count in schedule]


@dataclass(frozen=True)
class SandwichReport:
    """Gauge-versus-Hoelder comparison for one query."""

    holder_value: float
    gauge_result: GaugeResult
    gap: float
    lower_ok: bool

    def to_json_dict(self) -> dict:
        return {
            "holder_value": self.holder_value,
            "gauge": self.gauge_result.to_json_dict(),
            "gap": self.gap if math.isfinite(self.gap) else "inf",
            "lower_ok": self.lower_ok,
        }


def sandwich_check(x: GridFunction, alpha: float, atoms: AtomSet) -> SandwichReport:
    """Check holder_norm(x) <= gauge(x) and report the gap.

    With atoms on the Hoelder unit sphere the sampled hull sits inside the
    Hoelder unit ball, which forces the lower bound; the gap above it is the
    inner-approximation error and shrinks as atoms are added.
    """
    hn = holder_norm(x, alpha)
    g = gauge(x, atoms)
    gap = g.value - hn
    return SandwichReport(hn, g, gap, hn <= g.value + FEASIBILITY_TOL)


# ---------------------------------------------------------------------------
# enlargement


def _rescale_into_ball(rows: np.ndarray, ambient) -> np.ndarray:
    """Scale rows with metric distance > 1 back onto the unit metric sphere.

    Homogeneous ambients divide by the distance; the saturating sequence
    metric is monotone in the scale factor, so bisection does it there.
    """
    rows = np.atleast_2d(np.array(rows, dtype=float, copy=True))
    dists = ambient.metric_from_zero(rows)
    for i in np.nonzero(dists > 1.0)[0]:
        if ambient.homogeneous():
            rows[i] /= dists[i]
            continue
        lo, hi = 0.0, 1.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if ambient.metric_from_zero(rows[i] * mid)[0] <= 1.0:
                lo = mid
            else:
                hi = mid
        rows[i] *= lo
    return rows


def enlarge_atoms(atoms: AtomSet, extra) -> AtomSet:
    """Adjoin extra points (rescaled into the metric unit ball) and re-symmetrize.

    The hull can only grow, so gauges never increase under enlargement.
    """
    extra_rows = [point_values(p) if isinstance(p, (GridFunction, SeqPoint)) else np.asarray(p, float)
                  for p in extra]
    if not extra_rows:
        return atoms
    added = _rescale_into_ball(np.vstack(extra_rows), atoms.ambient)
    if added.shape[1] != atoms.ambient_dim:
        raise ValueError("extra points have the wrong ambient dimension")
    prov = dict(atoms.provenance, enlarged_by=int(added.shape[0]))
    return AtomSet.from_points(np.vstack([atoms.base, added]), atoms.ambient, prov)


def full_measure_enlargement(
    atoms: AtomSet, model: Model, count: int, seed: int
) -> AtomSet:
    """Adjoin measure samples rejected into the metric unit ball.

    This is the positive-measure enlargement: the hull picks up a set the
    Gaussian measure charges, so scaled copies of the new ball eventually
    capture most sample paths.  Raises when the rejection rate exceeds 99.9%.
    """
    if count == 0:
        return atoms
    accepted = []
    attempts = 0
    batch = max(count, 64)
    start = 0
    while len(accepted) < count:
        if isinstance(model, WienerModel):
            rows = wiener_batch(model.level, derive_seed(seed, "enlarge"), batch, start)
        else:
            rows = product_coord_batch(
                ProductGaussianModel(
                    model.dim, model.sigma, derive_seed(seed, "enlarge"),
                    model.weights, model.scale,
                ),
                batch,
                start,
            )
        start += batch
        attempts += batch
        dists = atoms.ambient.metric_from_zero(rows)
        accepted.extend(rows[dists <= 1.0])
        if attempts >= 1000 and len(accepted) < attempts / 1000:
            raise RuntimeError(
                f"rejection rate above 99.9% ({len(accepted)}/{attempts}); "
                "the metric unit ball is too small in this discretization"
            )
    return enlarge_atoms(atoms, accepted[:count])


@dataclass(frozen=True)
class LscReport:
    """Lower-semicontinuity probe along a convergent sequence."""

    limit_value: float
    tail_min: float
    violation: bool
    values: list

    def to_json_dict(self) -> dict:
        enc = lambda v: v if math.isfinite(v) else "inf"
        return {
            "limit_value": enc(self.limit_value),
            "tail_min": enc(self.tail_min),
            "violation": self.violation,
            "values": [enc(v) for v in self.values],
        }


def lsc_probe(sequence, limit, atoms: AtomSet, slack: float = 0.05) -> LscReport:
    """Compare the gauge at the limit with the tail minimum along the sequence.

    A lower-semicontinuous gauge cannot drop in the limit: the value at the
    limit should not exceed the tail values by more than the slack.  This is
    a sample-resolution diagnostic, not a proof.
    """
    values = [gauge(p, atoms).value for p in sequence]
    limit_value = gauge(limit, atoms).value
    tail = values[len(values) // 2 :] or values
    tail_min = min(tail) if tail else math.inf
    violation = limit_value > tail_min + slack
    return LscReport(limit_value, tail_min, violation, values)


# ---------------------------------------------------------------------------
# persistence


def save_atoms(atoms: AtomSet, path: str) -> list:
    """Write the atom matrix as CSV plus a JSON provenance sidecar.

    Returns the two paths written.  Only base atoms are stored; negations are
    restored on load.
    """
    sidecar = path + ".provenance.json"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in atoms.base:
        writer.writerow([format(v, ".17g") for v in row])
    with open(path, "w") as fh:
        fh.write(buf.getvalue())
    payload = {
        "ambient": atoms.ambient.to_json_dict(),
        "n_base": atoms.n_base,
        "provenance": atoms.provenance,
    }
    with open(sidecar, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return [path, sidecar]


def load_atoms(path: str) -> AtomSet:
    with open(path) as fh:
        rows = [[float(v) for v in row] for row in csv.reader(fh) if row]
    with open(path + ".provenance.json") as fh:
        payload = json.load(fh)
    ambient = _ambient_from_json(payload["ambient"])
    return AtomSet.from_points(np.array(rows), ambient, payload.get("provenance", {}))
