"""Samplers for the two Gaussian models and their Cameron-Martin geometry.

The path model is classical Wiener measure on the dyadic grid (independent
centered increments of variance 2**-level); its Cameron-Martin norm is the
discrete Dirichlet energy.  The sequence model is a product of centered
Gaussians with standard deviations sigma_n; its Cameron-Martin norm is the
weighted l2 norm sqrt(sum x_n**2 / sigma_n**2).

Every sampler is a pure function of ``(model, index)``: path ``index`` under
a model draws from its own Philox stream, so batches are order-independent,
prefix-stable and reproducible bit for bit regardless of worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .function_core import (
    GridFunction,
    SeqPoint,
    calibrate_metric_scale,
    default_weights,
    h12_norm,
    h12_norm_batch,
    seq_metric_from_zero,
    sup_norm,
)
from .rng import stream


@dataclass(frozen=True)
class WienerModel:
    """Wiener measure on level-``level`` grid paths.

    The ambient metric is the sup-norm distance; it is already calibrated in
    the sense that the Cameron-Martin unit ball has sup-norm radius exactly 1
    (|f(t)| <= sqrt(t) * ||f||_H with equality approached by f(t) = t).
    """

    level: int
    seed: int = 0

    def __post_init__(self):
        if self.level < 1:
            raise ValueError("level must be >= 1")


@dataclass(frozen=True)
class ProductGaussianModel:
    """Independent centered Gaussian coordinates with standard deviations sigma.

    Carries the sequence-space metric data as well: weights default to
    w_n = 2**-n and the scale is calibrated at construction so that
    sup {d(0, x) : ||x||_H <= 1} = 1.
    """

    dim: int
    sigma: np.ndarray = None
    seed: int = 0
    weights: np.ndarray = None
    scale: float = None

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        sigma = self.sigma
        sigma = np.full(self.dim, 1.0) if sigma is None else np.asarray(sigma, float)
        if sigma.shape != (self.dim,) or not np.all(sigma > 0):
            raise ValueError("sigma must be a length-dim array of positive reals")
        weights = self.weights
        weights = default_weights(self.dim) if weights is None else np.asarray(weights, float)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "weights", weights)
        scale = self.scale
        if scale is None:
            scale = calibrate_metric_scale(sigma, weights)
        object.__setattr__(self, "scale", float(scale))

    def point(self, coords: np.ndarray) -> SeqPoint:
        return SeqPoint(coords, self.weights, self.scale)


Model = WienerModel | ProductGaussianModel


@dataclass(frozen=True)
class KLExpansion:
    """A truncated sine-series element of the path Cameron-Martin space.

    Basis e_k(t) = sqrt(2) sin((k - 1/2) pi t) / ((k - 1/2) pi); each e_k has
    unit Dirichlet norm and the family is H-orthonormal, so the H-norm of the
    expansion is the l2 norm of its coefficients.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        coeff = np.asarray(self.coefficients, dtype=float)
        if coeff.ndim != 1 or coeff.shape[0] < 1:
            raise ValueError("coefficients must be a nonempty 1-d array")
        object.__setattr__(self, "coefficients", coeff)

    @property
    def modes(self) -> int:
        return self.coefficients.shape[0]

    def to_grid(self, level: int) -> GridFunction:
        basis = kl_basis(self.modes, level)
        return GridFunction(level, basis @ self.coefficients)


@dataclass(frozen=True)
class CMVector:
    """A model-space point with its (cached) Cameron-Martin norm."""

    point: GridFunction | SeqPoint
    cm_norm: float

    def __neg__(self) -> "CMVector":
        return CMVector(-self.point, self.cm_norm)


_kl_basis_cache: dict = {}


def kl_basis(modes: int, level: int) -> np.ndarray:
    """(grid, modes) matrix of the sine basis evaluated at the nodes."""
    key = (modes, level)
    if key not in _kl_basis_cache:
        t = np.linspace(0.0, 1.0, 2**level + 1)
        freq = (np.arange(1, modes + 1) - 0.5) * np.pi
        _kl_basis_cache[key] = np.sqrt(2.0) * np.sin(np.outer(t, freq)) / freq
    return _kl_basis_cache[key]


# ---------------------------------------------------------------------------
# samplers


def sample_wiener(model: WienerModel, index: int = 0) -> GridFunction:
    """One Wiener path: cumulative sum of N(0, 2**-level) increments."""
    return GridFunction(model.level, wiener_batch(model.level, model.seed, 1, start=index)[0])


def wiener_batch(level: int, seed: int, count: int, start: int = 0) -> np.ndarray:
    """(count, 2**level + 1) matrix of Wiener paths, one Philox stream per row."""
    n = 2**level
    scale = math.sqrt(2.0**-level)
    out = np.zeros((count, n + 1))
    for i in range(count):
        inc = stream(seed, start + i).standard_normal(n) * scale
        np.cumsum(inc, out=out[i, 1:])
    return out


def bridge_refine(f: GridFunction, seed: int, index: int = 0) -> GridFunction:
    """Stochastic dyadic refinement by Brownian-bridge midpoints.

    Conditionally on the level-n path, each midpoint is the cell average plus
    independent N(0, 2**-(n+2)) noise, which reproduces Wiener measure at
    level n + 1.
    """
    return GridFunction(
        f.level + 1, bridge_refine_batch(f.values[None, :], seed, start=index)[0]
    )


def bridge_refine_batch(values: np.ndarray, seed: int, start: int = 0) -> np.ndarray:
    values = np.atleast_2d(np.asarray(values, dtype=float))
    count, width = values.shape
    n = width - 1
    level = int(round(np.log2(n)))
    sd = math.sqrt(2.0 ** -(level + 2))
    out = np.empty((count, 2 * n + 1))
    out[:, 0::2] = values
    mid = 0.5 * (values[:, :-1] + values[:, 1:])
    for i in range(count):
        out[i, 1::2] = mid[i] + stream(seed, start + i).standard_normal(n) * sd
    return out


def sample_kl(modes: int, level: int, seed: int, index: int = 0) -> GridFunction:
    """Random truncated sine series with independent standard Gaussian weights."""
    coeff = stream(seed, index).standard_normal(modes)
    return KLExpansion(coeff).to_grid(level)


def kl_coeff_batch(modes: int, seed: int, count: int, start: int = 0) -> np.ndarray:
    out = np.empty((count, modes))
    for i in range(count):
        out[i] = stream(seed, start + i).standard_normal(modes)
    return out


def sample_product_gaussian(model: ProductGaussianModel, index: int = 0) -> SeqPoint:
    """One draw of the product Gaussian, as a SeqPoint of the model's space."""
    z = stream(model.seed, index).standard_normal(model.dim)
    return model.point(model.sigma * z)


def product_coord_batch(model: ProductGaussianModel, count: int, start: int = 0) -> np.ndarray:
    out = np.empty((count, model.dim))
    for i in range(count):
        out[i] = stream(model.seed, start + i).standard_normal(model.dim)
    return out * model.sigma


# ---------------------------------------------------------------------------
# Cameron-Martin norms and sphere samplers


def cm_norm(x: GridFunction | SeqPoint, model: Model) -> float:
    """Cameron-Martin norm of ``x`` under ``model``.

    Dirichlet energy for the path model, weighted l2 norm for the product
    model.  Divergence studies report infinity; it is never computed here.
    """
    if isinstance(model, WienerModel):
        if not isinstance(x, GridFunction):
            raise ValueError("Wiener model expects a GridFunction")
        return h12_norm(x)
    if not isinstance(x, SeqPoint):
        raise ValueError("product model expects a SeqPoint")
    if x.dim != model.dim:
        raise ValueError(f"dimension mismatch: point {x.dim}, model {model.dim}")
    return float(np.sqrt(np.sum((x.coords / model.sigma) ** 2)))


def sample_sphere_H(
    model: Model, m_or_d: int, seed: int, index: int = 0, negate: bool = False
) -> CMVector:
    """Gaussian sample normalized onto the Cameron-Martin unit sphere.

    For the path model ``m_or_d`` is the number of sine modes; for the
    product model it must equal the coordinate dimension.  The all-zero draw
    (probability 0, but representable) is resampled from the same stream.
    ``negate`` yields the antithetic point -x of the same index.
    """
    gen = stream(seed, index)
    if isinstance(model, WienerModel):
        coeff = gen.standard_normal(m_or_d)
        while not np.any(coeff):
            coeff = gen.standard_normal(m_or_d)
        path = KLExpansion(coeff).to_grid(model.level)
        norm = h12_norm(path)
        point = GridFunction(model.level, path.values / norm)
    else:
        if m_or_d != model.dim:
            raise ValueError("m_or_d must equal the product-model dimension")
        z = gen.standard_normal(model.dim)
        while not np.any(z):
            z = gen.standard_normal(model.dim)
        point = model.point(model.sigma * z / np.linalg.norm(z))
    if negate:
        point = -point
    return CMVector(point, 1.0)


def sphere_value_batch(model: Model, m_or_d: int, seed: int, count: int, start: int = 0) -> np.ndarray:
    """(count, ambient) matrix of unit-sphere samples (values or coords)."""
    if isinstance(model, WienerModel):
        coeff = kl_coeff_batch(m_or_d, seed, count, start)
        paths = coeff @ kl_basis(m_or_d, model.level).T
        return paths / h12_norm_batch(paths)[:, None]
    z = np.empty((count, model.dim))
    for i in range(count):
        z[i] = stream(seed, start + i).standard_normal(model.dim)
    return model.sigma * z / np.linalg.norm(z, axis=1)[:, None]


def block_bridge_paths(
    level: int, blocks: int, seed: int, count: int, start: int = 0
) -> np.ndarray:
    """Unit-H paths made of ``blocks`` independent Brownian bridges pinned to 0.

    Splitting [0, 1] into blocks and pinning the path to zero at every block
    boundary keeps the Dirichlet energy spread out while shrinking the sup
    norm like 1 / sqrt(blocks); after normalization these are Cameron-Martin
    unit-sphere points with arbitrarily small sup norm, the raw material for
    small-ball studies.
    """
    n = 2**level
    if blocks < 1 or n % blocks != 0 or n // blocks < 2:
        raise ValueError(f"blocks must divide 2**level with >= 2 cells each, got {blocks}")
    cells = n // blocks
    frac = (np.arange(cells + 1) / cells)[None, :]
    sd = math.sqrt(2.0**-level)
    out = np.empty((count, n + 1))
    for i in range(count):
        inc = stream(seed, start + i).standard_normal(n) * sd
        w = np.concatenate([[0.0], np.cumsum(inc)])
        for b in range(blocks):
            seg = w[b * cells : (b + 1) * cells + 1]
            out[i, b * cells : (b + 1) * cells + 1] = (
                seg - seg[0] - frac[0] * (seg[-1] - seg[0])
            )
    energy = h12_norm_batch(out)
    return out / energy[:, None]


def blocks_for_sup_radius(level: int, radius: float) -> int:
    """Block count whose normalized bridge paths mostly have sup norm < radius.

    Empirically the median sup norm is about 0.05 * 2**((10 - level) / 2) /
    sqrt(blocks); the returned power of two targets half the requested radius
    and is clamped to at least 4 cells per block.
    """
    target = 0.10 * 2.0 ** ((10 - level) / 2.0) / radius
    blocks = 2 ** max(0, math.ceil(math.log2(max(target, 1.0) ** 2)))
    return int(min(blocks, 2 ** (level - 2)))


def sample_sphere_near_zero(
    model: Model, radius: float, m_or_d: int, seed: int, count: int
) -> list:
    """Unit-sphere samples conditioned to metric distance <= radius from 0.

    Product model: samples supported on tail coordinates j..D where the
    weight tail already guarantees d(0, x) <= radius (each metric term is
    below its weight).  Path model: block-bridge paths with the block count
    matched to the radius, kept only when the sup norm lands in the annulus
    (radius/8, radius] so that samples track the requested scale instead of
    overshooting far below it.  Returns possibly fewer than ``count`` points
    when the radius is unreachable at this truncation or level.
    """
    out = []
    if isinstance(model, ProductGaussianModel):
        tail = model.scale * np.cumsum(model.weights[::-1])[::-1]
        reachable = np.nonzero(tail <= radius)[0]
        if reachable.size == 0:
            return out
        j = int(reachable[0])
        for i in range(count):
            z = stream(seed, i).standard_normal(model.dim - j)
            if not np.any(z):
                continue
            coords = np.zeros(model.dim)
            coords[j:] = model.sigma[j:] * z / np.linalg.norm(z)
            point = model.point(coords)
            if ambient_metric_from_zero(model, point) <= radius:
                out.append(CMVector(point, 1.0))
        return out
    blocks = blocks_for_sup_radius(model.level, radius)
    attempts = 16 * count
    paths = block_bridge_paths(model.level, blocks, seed, attempts)
    sups = np.abs(paths).max(axis=1)
    keep = (sups <= radius) & (sups > radius / 8.0)
    for row in paths[keep][:count]:
        out.append(CMVector(GridFunction(model.level, row), 1.0))
    return out


# ---------------------------------------------------------------------------
# ambient metric and vector views


def ambient_metric_from_zero(model: Model, x: GridFunction | SeqPoint) -> float:
    if isinstance(model, WienerModel):
        return sup_norm(x)
    return seq_metric_from_zero(x.coords, model.weights, model.scale)


def ambient_metric(model: Model, x, y) -> float:
    if isinstance(model, WienerModel):
        return float(np.abs(x.values - y.values).max())
    return seq_metric_from_zero(x.coords - y.coords, model.weights, model.scale)


def point_values(x: GridFunction | SeqPoint) -> np.ndarray:
    return x.values if isinstance(x, GridFunction) else x.coords


def point_from_values(model: Model, vec: np.ndarray):
    if isinstance(model, WienerModel):
        return GridFunction(model.level, vec)
    return model.point(vec)


# ---------------------------------------------------------------------------
# covariance estimation


@dataclass(frozen=True)
class CovarianceEstimate:
    """Monte Carlo estimate of R(f, g) = E[f(x) g(x)] with its standard error."""

    estimate: float
    stderr: float
    samples: int
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "estimate": self.estimate,
            "stderr": self.stderr,
            "N": self.samples,
            "seed": self.seed,
        }


def _functional_index(model: Model, functional) -> int:
    kind, arg = functional
    if isinstance(model, WienerModel):
        if kind != "eval":
            raise ValueError("path-model functionals are ('eval', t)")
        idx = int(round(float(arg) * 2**model.level))
        if not 0 <= idx <= 2**model.level:
            raise ValueError(f"evaluation time {arg} outside [0, 1]")
        return idx
    if kind != "coord":
        raise ValueError("product-model functionals are ('coord', i)")
    idx = int(arg)
    if not 0 <= idx < model.dim:
        raise ValueError(f"coordinate {idx} outside 0..{model.dim - 1}")
    return idx


def covariance_estimate(
    model: Model, functional_a, functional_b, samples: int
) -> CovarianceEstimate:
    """Monte Carlo covariance of two evaluation/coordinate functionals.

    Functionals are ('eval', t) on the path model (value at the nearest grid
    node) and ('coord', i) on the product model.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    ia = _functional_index(model, functional_a)
    ib = _functional_index(model, functional_b)
    if isinstance(model, WienerModel):
        batch = wiener_batch(model.level, model.seed, samples)
    else:
        batch = product_coord_batch(model, samples)
    prods = batch[:, ia] * batch[:, ib]
    est = float(prods.mean())
    stderr = float(prods.std(ddof=1) / math.sqrt(samples)) if samples > 1 else 0.0
    return CovarianceEstimate(est, stderr, samples, model.seed)
