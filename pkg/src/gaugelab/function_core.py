"""Discrete carriers and norms for the two model spaces.

Two ambient spaces are realized at desk scale:

* paths on a dyadic grid of [0, 1] starting at zero, carrying the sup norm,
  the alpha-Hoelder seminorm, the small-Hoelder modulus and the discrete
  Dirichlet energy (``GridFunction``);
* a truncated weighted sequence space with a bounded translation-invariant
  metric ``d(x, y) = c * sum_n w_n |x_n - y_n| / (1 + |x_n - y_n|)``
  (``SeqPoint``), the non-normable model.

All grid norms treat the values as a piecewise-linear interpolant.  Extrema
of such an interpolant occur at the nodes, so the sup norm and the modulus
of continuity are exact.  The Hoelder seminorm is computed as the exact
maximum over all node pairs; the interpolant's true Hoelder constant can
exceed the node-pair value only between nodes, and this node-pair convention
is used consistently everywhere.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

# Full O(4^n) pair scans are exact up to this level; above it holder_norm
# falls back to the documented dyadic-pair subsample unless forced.
FULL_SCAN_MAX_LEVEL = 12


@dataclass(frozen=True)
class GridFunction:
    """A real path on the dyadic grid t_i = i * 2**-level of [0, 1].

    values[0] must be exactly 0 and all values finite.  Treated as immutable.
    """

    level: int
    values: np.ndarray

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be >= 1, got {self.level}")
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.shape != (2**self.level + 1,):
            raise ValueError(
                f"level {self.level} grid needs {2**self.level + 1} values, "
                f"got shape {values.shape}"
            )
        if values[0] != 0.0:
            raise ValueError("grid functions must start at 0")
        if not np.all(np.isfinite(values)):
            raise ValueError("grid values must all be finite")

    @property
    def spacing(self) -> float:
        return 2.0 ** -self.level

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, 2**self.level + 1)

    def __neg__(self) -> "GridFunction":
        return GridFunction(self.level, -self.values)


@dataclass(frozen=True)
class SeqPoint:
    """Element of the truncated sequence model, carrying its metric data.

    coords are the coordinates, weights the strictly positive nonincreasing
    metric weights with sum <= 1, and scale the global calibration factor c
    chosen so the Cameron-Martin unit ball has metric radius 1.
    """

    coords: np.ndarray
    weights: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "weights", weights)
        if coords.ndim != 1 or weights.shape != coords.shape:
            raise ValueError("coords and weights must be 1-d arrays of equal length")
        if not np.all(np.isfinite(coords)):
            raise ValueError("coords must be finite")
        if not np.all(weights > 0):
            raise ValueError("weights must be strictly positive")
        if np.any(np.diff(weights) > 0):
            raise ValueError("weights must be nonincreasing")
        if weights.sum() > 1 + 1e-12:
            raise ValueError("weights must sum to at most 1")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def dim(self) -> int:
        return self.coords.shape[0]

    def with_coords(self, coords: np.ndarray) -> "SeqPoint":
        return SeqPoint(coords, self.weights, self.scale)

    def __neg__(self) -> "SeqPoint":
        return self.with_coords(-self.coords)


@dataclass(frozen=True)
class HolderParams:
    """A (alpha, delta) pair for Hoelder/modulus computations.

    alpha in (0, 1); delta in (0, 1].  Full-measure statements for Wiener
    paths additionally need alpha < 1/2, which is checked where relied upon.
    """

    alpha: float
    delta: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (0, 1], got {self.delta}")


# ---------------------------------------------------------------------------
# grid norms


def sup_norm(f: GridFunction) -> float:
    """Sup norm of the interpolant; exact since extrema occur at nodes."""
    return float(np.abs(f.values).max())


def _lag_range(level: int, pairs: str) -> np.ndarray:
    n = 2**level
    if pairs == "full":
        return np.arange(1, n + 1)
    if pairs == "dyadic":
        return 2 ** np.arange(0, level + 1)
    raise ValueError(f"unknown pair mode {pairs!r}")


def _resolve_pairs(level: int, pairs: str) -> str:
    if pairs == "auto":
        return "full" if level <= FULL_SCAN_MAX_LEVEL else "dyadic"
    return pairs


def holder_norm(f: GridFunction, alpha: float, pairs: str = "auto") -> float:
    """alpha-Hoelder seminorm: max over node pairs of |f(a)-f(b)| / |a-b|**alpha.

    The scan over all pairs is exact but quadratic in the grid size, so it is
    used automatically only up to level 12; above that, pairs="auto" restricts
    to dyadic lags |a-b| = 2**-k (every offset, power-of-two separations),
    which is a documented subsample and a lower bound on the full scan.
    Pass pairs="full" or pairs="dyadic" to force a mode.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return float(holder_norm_batch(f.values[None, :], alpha, pairs=pairs)[0])


def holder_norm_batch(values: np.ndarray, alpha: float, pairs: str = "auto") -> np.ndarray:
    """Hoelder seminorms of many paths at once (rows of ``values``).

    Shares the pair-scan convention of :func:`holder_norm`; one vectorized
    pass per lag keeps memory linear in the grid size.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    lags, maxima = lag_maxima(values, pairs=pairs)
    h = 1.0 / (values.shape[1] - 1)
    return (maxima / (lags[:, None] * h) ** alpha).max(axis=0)


def lag_maxima(values: np.ndarray, pairs: str = "auto"):
    """Per-lag maxima of |f(t_i+k h) - f(t_i)| for each row.

    Returns (lags, maxima) with maxima[j, p] the largest absolute difference
    of path p at node separation lags[j].  All pairwise norms and moduli are
    maxima of these numbers against lag-dependent denominators, so computing
    them once serves every alpha at no extra scan cost.
    """
    values = np.atleast_2d(np.asarray(values, dtype=float))
    n = values.shape[1] - 1
    level = int(round(np.log2(n)))
    if 2**level != n:
        raise ValueError("row length must be a power of two plus one")
    lags = _lag_range(level, _resolve_pairs(level, pairs))
    maxima = np.empty((lags.shape[0], values.shape[0]))
    for j, k in enumerate(lags):
        maxima[j] = np.abs(values[:, k:] - values[:, :-k]).max(axis=1)
    return lags, maxima


def modulus_of_continuity(f: GridFunction, delta: float) -> float:
    """omega(delta): max of |f(t)-f(s)| over node pairs with |t-s| <= delta."""
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    values = f.values
    h = f.spacing
    max_lag = int(np.floor(delta / h + 1e-12))
    out = 0.0
    for k in range(1, max_lag + 1):
        out = max(out, float(np.abs(values[k:] - values[:-k]).max()))
    return out


def small_holder_defect(f: GridFunction, alpha: float, delta: float) -> float:
    """Localized Hoelder constant over pairs with 0 < |t-s| <= delta.

    Nondecreasing in delta and equal to holder_norm at delta = 1; its decay
    as delta -> 0 is the membership signal for the small-Hoelder class.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")
    values = f.values
    h = f.spacing
    max_lag = int(np.floor(delta / h + 1e-12))
    if max_lag < 1:
        raise ValueError(
            f"delta={delta} is below the grid spacing {h}; no pairs to scan"
        )
    out = 0.0
    for k in range(1, max_lag + 1):
        q = float(np.abs(values[k:] - values[:-k]).max()) / (k * h) ** alpha
        out = max(out, q)
    return out


def h12_norm(f: GridFunction) -> float:
    """Discrete Dirichlet-energy norm sqrt(sum (f_{i+1}-f_i)^2 / h).

    This is the exact first-derivative L2 norm of the piecewise-linear
    interpolant, i.e. the Cameron-Martin norm of the path model.
    """
    return float(h12_norm_batch(f.values[None, :])[0])


def h12_norm_batch(values: np.ndarray) -> np.ndarray:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    n = values.shape[1] - 1
    return np.sqrt(np.sum(np.diff(values, axis=1) ** 2, axis=1) * n)


def refine(f: GridFunction) -> GridFunction:
    """One deterministic dyadic refinement; midpoints by linear interpolation.

    Leaves every norm of the interpolant unchanged (the interpolant itself is
    unchanged).  The stochastic counterpart (Brownian-bridge midpoints) lives
    with the samplers.
    """
    old = f.values
    new = np.empty(2 * (old.shape[0] - 1) + 1)
    new[0::2] = old
    new[1::2] = 0.5 * (old[:-1] + old[1:])
    return GridFunction(f.level + 1, new)


# ---------------------------------------------------------------------------
# sequence-space metric


def frechet_metric(x: SeqPoint, y: SeqPoint) -> float:
    """Bounded translation-invariant metric of the sequence model."""
    if x.dim != y.dim or not np.array_equal(x.weights, y.weights) or x.scale != y.scale:
        raise ValueError("points live in differently configured sequence spaces")
    return seq_metric_from_zero(x.coords - y.coords, x.weights, x.scale)


def seq_metric_from_zero(delta: np.ndarray, weights: np.ndarray, scale: float) -> float:
    a = np.abs(np.asarray(delta, dtype=float))
    return float(scale * np.sum(weights * a / (1.0 + a)))


def calibrate_metric_scale(sigma, weights, tol: float = 1e-9) -> float:
    """Scale factor c making the Cameron-Martin ball have metric radius 1.

    Maximizes sum_n w_n x_n / (1 + x_n) over the ellipsoid
    sum_n x_n^2 / sigma_n^2 <= 1 (coordinates may be taken nonnegative since
    each term increases in |x_n|).  The objective is strictly concave, so the
    optimum is the unique KKT point: for a multiplier lam > 0 each coordinate
    solves w_n sigma_n^2 / (2 lam) = x_n (1 + x_n)^2, a scalar monotone
    equation handled by Newton; lam is then pinned by bisection on the
    ellipsoid constraint.  Returns 1 / sup, accurate to ~1e-9.
    """
    sigma = np.asarray(sigma, dtype=float)
    w = np.asarray(weights, dtype=float)
    if sigma.shape != w.shape or sigma.ndim != 1:
        raise ValueError("sigma and weights must be 1-d arrays of equal length")
    if not (np.all(sigma > 0) and np.all(w > 0)):
        raise ValueError("sigma and weights must be strictly positive")

    def coords_at(lam: float) -> np.ndarray:
        beta = w * sigma**2 / (2.0 * lam)
        x = np.minimum(beta, np.cbrt(beta))
        for _ in range(60):
            step = (x * (1.0 + x) ** 2 - beta) / ((1.0 + x) * (1.0 + 3.0 * x))
            x = np.maximum(x - step, 0.0)
        return x

    def excess(lam: float) -> float:
        x = coords_at(lam)
        return float(np.sum(x**2 / sigma**2)) - 1.0

    lo, hi = 1e-14, 1e14
    while excess(lo) < 0:
        lo *= 0.1
    while excess(hi) > 0:
        hi *= 10.0
    for _ in range(120):
        mid = np.sqrt(lo * hi)
        if excess(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-15:
            break
    x = coords_at(np.sqrt(lo * hi))
    x /= np.sqrt(np.sum(x**2 / sigma**2))  # land exactly on the ellipsoid
    sup = float(np.sum(w * x / (1.0 + x)))
    return 1.0 / sup


def default_weights(dim: int) -> np.ndarray:
    """The stock metric weights w_n = 2**-n, n = 1..dim."""
    return 2.0 ** -(np.arange(1, dim + 1, dtype=float))


# ---------------------------------------------------------------------------
# serialization


def grid_to_csv(f: GridFunction) -> str:
    """CSV with header t,value, one row per node, 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "value"])
    for t, v in zip(f.times, f.values):
        writer.writerow([format(t, ".17g"), format(v, ".17g")])
    return buf.getvalue()


def grid_from_csv(text: str) -> GridFunction:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["t", "value"]:
        raise ValueError("expected a t,value CSV header")
    values = np.array([float(v) for _, v in rows[1:]])
    level = int(round(np.log2(values.shape[0] - 1)))
    return GridFunction(level, values)


def seq_to_json(x: SeqPoint) -> str:
    payload = {
        "coords": [float(v) for v in x.coords],
        "weights": [float(v) for v in x.weights],
        "scale": float(x.scale),
    }
    return json.dumps(payload, sort_keys=True)


def seq_from_json(text: str) -> SeqPoint:
    payload = json.loads(text)
    return SeqPoint(
        np.array(payload["coords"], dtype=float),
        np.array(payload["weights"], dtype=float),
        float(payload["scale"]),
    )
