import math

import numpy as np
import pytest

from gaugelab.function_core import GridFunction, h12_norm, h12_norm_batch, sup_norm
from gaugelab.gaussian_models import (
    CMVector,
    KLExpansion,
    ProductGaussianModel,
    WienerModel,
    ambient_metric_from_zero,
    block_bridge_paths,
    bridge_refine,
    bridge_refine_batch,
    cm_norm,
    covariance_estimate,
    kl_basis,
    sample_kl,
    sample_product_gaussian,
    sample_sphere_H,
    sample_sphere_near_zero,
    sample_wiener,
    wiener_batch,
)


class TestWienerSampler:
    def test_starts_at_zero_and_deterministic(self):
        model = WienerModel(level=8, seed=123)
        a, b = sample_wiener(model), sample_wiener(model)
        assert a.values[0] == 0.0
        assert np.array_equal(a.values, b.values)

    def test_distinct_indices_differ(self):
        model = WienerModel(level=6, seed=1)
        assert not np.array_equal(
            sample_wiener(model, index=0).values, sample_wiener(model, index=1).values
        )

    def test_terminal_variance(self):
        batch = wiener_batch(10, seed=77, count=10_000)
        var = batch[:, -1].var(ddof=1)
        assert 0.94 <= var <= 1.06

    def test_min_kernel_covariance(self):
        batch = wiener_batch(10, seed=78, count=10_000)
        q1, q3 = batch[:, 256], batch[:, 768]  # t = 1/4 and 3/4
        cov = np.mean(q1 * q3) - q1.mean() * q3.mean()
        assert abs(cov - 0.25) <= 0.03

    def test_coarse_restriction_matches_lower_level(self):
        # level-n paths on the even nodes are distributed like level-(n-1) paths
        fine = wiener_batch(9, seed=5, count=4000)
        coarse_view = fine[:, ::2]
        inc_var = np.diff(coarse_view, axis=1).var(ddof=1)
        assert abs(inc_var - 2.0**-8) <= 0.1 * 2.0**-8


class TestBridgeRefinement:
    def test_keeps_old_nodes_and_level(self):
        f = sample_wiener(WienerModel(level=6, seed=3))
        g = bridge_refine(f, seed=4)
        assert g.level == 7
        assert np.array_equal(g.values[0::2], f.values)

    def test_midpoint_conditional_variance(self):
        f = GridFunction(3, np.zeros(9))
        mids = bridge_refine_batch(np.zeros((20_000, 9)), seed=9)[:, 1::2]
        var = mids.var(ddof=1)
        assert abs(var - 2.0**-5) <= 0.05 * 2.0**-5
        assert f.level == 3

    def test_energy_doubles_in_expectation(self):
        # discrete Dirichlet energy of Wiener paths has mean 2**level
        paths = wiener_batch(8, seed=11, count=1000)
        refined = bridge_refine_batch(paths, seed=12)
        for level, batch in ((8, paths), (9, refined)):
            mean_energy = float(np.mean(h12_norm_batch(batch) ** 2))
            assert abs(mean_energy - 2.0**level) <= 0.1 * 2.0**level


class TestKL:
    def test_zero_coefficients_zero_path(self):
        path = KLExpansion(np.zeros(4)).to_grid(6)
        assert not np.any(path.values)

    def test_single_mode_unit_energy(self):
        path = KLExpansion(np.array([1.0])).to_grid(10)
        assert h12_norm(path) == pytest.approx(1.0, abs=1e-3)

    def test_parseval(self):
        rng = np.random.default_rng(2)
        coeff = rng.normal(size=16)
        path = KLExpansion(coeff).to_grid(10)
        assert h12_norm(path) ** 2 == pytest.approx(
            float(np.sum(coeff**2)), rel=1e-2
        )

    def test_sample_kl_deterministic(self):
        a = sample_kl(8, 6, seed=5)
        b = sample_kl(8, 6, seed=5)
        assert np.array_equal(a.values, b.values)


class TestProductGaussian:
    def test_degenerate_sigma_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            ProductGaussianModel(2, sigma=np.array([1.0, 0.0]))

    def test_coordinate_variances(self):
        model = ProductGaussianModel(2, sigma=np.array([1.0, 2.0]), seed=6)
        coords = np.vstack(
            [sample_product_gaussian(model, index=i).coords for i in range(10_000)]
        )
        assert np.allclose(coords.var(axis=0, ddof=1), [1.0, 4.0], rtol=0.05)
        corr = np.corrcoef(coords.T)[0, 1]
        assert abs(corr) <= 0.03

    def test_point_carries_metric_data(self):
        model = ProductGaussianModel(4, seed=1)
        x = sample_product_gaussian(model)
        assert np.array_equal(x.weights, model.weights)
        assert x.scale == model.scale


class TestCMNorm:
    def test_zero(self):
        model = ProductGaussianModel(3, seed=0)
        assert cm_norm(model.point(np.zeros(3)), model) == 0.0

    def test_weighted_l2(self):
        model = ProductGaussianModel(2, sigma=np.array([1.0, 2.0]), seed=0)
        assert cm_norm(model.point(np.array([1.0, 2.0])), model) == pytest.approx(
            math.sqrt(2.0), abs=1e-12
        )

    def test_wiener_is_dirichlet(self):
        model = WienerModel(level=5, seed=0)
        f = GridFunction(5, np.linspace(0, 1, 33))
        assert cm_norm(f, model) == pytest.approx(1.0, abs=1e-12)

    def test_mismatch(self):
        model = ProductGaussianModel(3, seed=0)
        other = ProductGaussianModel(4, seed=0)
        with pytest.raises(ValueError, match="dimension"):
            cm_norm(sample_product_gaussian(other), model)


class TestSphereSampler:
    @pytest.mark.parametrize(
        "model,m",
        [(WienerModel(level=7, seed=0), 32), (ProductGaussianModel(16, seed=0), 16)],
    )
    def test_unit_norm(self, model, m):
        for i in range(10):
            x = sample_sphere_H(model, m, seed=3, index=i)
            assert abs(cm_norm(x.point, model) - 1.0) <= 1e-12

    def test_antithetic(self):
        model = ProductGaussianModel(8, seed=0)
        x = sample_sphere_H(model, 8, seed=4, index=2)
        y = sample_sphere_H(model, 8, seed=4, index=2, negate=True)
        assert np.array_equal(y.coords if hasattr(y, "coords") else y.point.coords,
                              -x.point.coords)

    def test_mean_coordinate_near_zero(self):
        model = ProductGaussianModel(16, seed=0)
        coords = np.vstack(
            [sample_sphere_H(model, 16, seed=8, index=i).point.coords for i in range(1000)]
        )
        assert np.abs(coords.mean(axis=0)).max() <= 0.1

    def test_wrong_dim_rejected(self):
        with pytest.raises(ValueError, match="dimension"):
            sample_sphere_H(ProductGaussianModel(4, seed=0), 5, seed=0)


class TestNearZeroSampler:
    def test_sequence_tail_support(self):
        model = ProductGaussianModel(64, seed=0)
        for radius in (2.0**-2, 2.0**-10):
            points = sample_sphere_near_zero(model, radius, 64, seed=5, count=50)
            assert len(points) == 50
            for x in points[:5]:
                assert ambient_metric_from_zero(model, x.point) <= radius
                assert abs(cm_norm(x.point, model) - 1.0) <= 1e-12

    def test_sequence_unreachable_radius(self):
        model = ProductGaussianModel(4, seed=0)
        assert sample_sphere_near_zero(model, 1e-12, 4, seed=5, count=10) == []

    def test_grid_annulus(self):
        model = WienerModel(level=8, seed=0)
        radius = 2.0**-3
        points = sample_sphere_near_zero(model, radius, 64, seed=6, count=20)
        assert len(points) > 0
        for x in points:
            s = sup_norm(x.point)
            assert radius / 8.0 < s <= radius
            assert abs(cm_norm(x.point, model) - 1.0) <= 1e-12


class TestBlockBridges:
    def test_unit_energy_and_pinning(self):
        paths = block_bridge_paths(8, blocks=16, seed=3, count=8)
        assert np.allclose(h12_norm_batch(paths), 1.0, atol=1e-12)
        boundary = paths[:, ::16]  # block boundaries every 16 cells
        assert np.abs(boundary).max() == 0.0

    def test_invalid_blocks(self):
        with pytest.raises(ValueError, match="blocks"):
            block_bridge_paths(4, blocks=3, seed=0, count=1)


class TestCovariance:
    def test_needs_samples(self):
        with pytest.raises(ValueError, match="100"):
            covariance_estimate(WienerModel(5, seed=0), ("eval", 0.5), ("eval", 0.5), 10)

    def test_wiener_min_kernel(self):
        est = covariance_estimate(
            WienerModel(8, seed=17), ("eval", 0.3), ("eval", 0.7), 10_000
        )
        assert abs(est.estimate - 0.3) <= 3 * est.stderr

    def test_time_zero_exact(self):
        est = covariance_estimate(
            WienerModel(6, seed=1), ("eval", 0.0), ("eval", 0.5), 200
        )
        assert est.estimate == 0.0

    def test_product_diagonal(self):
        model = ProductGaussianModel(4, sigma=np.array([1.0, 1.0, 2.0, 1.0]), seed=9)
        est = covariance_estimate(model, ("coord", 2), ("coord", 2), 10_000)
        assert abs(est.estimate - 4.0) <= 3 * est.stderr

    def test_json_fields(self):
        est = covariance_estimate(WienerModel(5, seed=2), ("eval", 1.0), ("eval", 1.0), 200)
        payload = est.to_json_dict()
        assert set(payload) == {"estimate", "stderr", "N", "seed"}


class TestCMVector:
    def test_negation(self):
        model = ProductGaussianModel(4, seed=0)
        x = sample_sphere_H(model, 4, seed=1)
        y = -x
        assert isinstance(y, CMVector)
        assert np.array_equal(y.point.coords, -x.point.coords)
        assert y.cm_norm == x.cm_norm


def test_kl_basis_columns_are_unit_energy():
    basis = kl_basis(8, 10)
    energies = h12_norm_batch(basis.T)
    assert np.allclose(energies, 1.0, atol=2e-3)
