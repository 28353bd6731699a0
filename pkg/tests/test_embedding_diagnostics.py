import math

import numpy as np
import pytest

from gaugelab.embedding_diagnostics import (
    CoveringReport,
    MeasureEstimate,
    ball_covering,
    compactness_profile,
    containment_witnesses,
    crossing_radius,
    cs_bound_check,
    dichotomy_sweep,
    full_measure_mc,
    greedy_net,
    small_ball_holder_bound,
    small_holder_membership,
)
from gaugelab.function_core import default_weights
from gaugelab.gaussian_models import ProductGaussianModel, WienerModel
from gaugelab.shape_functions import floor_metric_shape, identity_shape


class TestGreedyNet:
    def test_single_point(self):
        rep = greedy_net(np.array([[0.3, 0.4]]), 0.5)
        assert rep.net_size == 1 and rep.sample_count == 1

    def test_two_separated_points(self):
        rep = greedy_net(np.array([[0.0], [1.0]]), 0.5)
        assert rep.net_size == 2

    def test_empty_input(self):
        rep = greedy_net(np.empty((0, 3)), 0.5)
        assert rep.net_size == 0 and rep.saturated

    def test_epsilon_positive(self):
        with pytest.raises(ValueError):
            greedy_net(np.zeros((2, 2)), 0.0)

    def test_rescan_covers_input(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(200, 4))
        rep = greedy_net(points, 1.0)
        # recompute cover from scratch: every point within eps of a net point
        net_rows = []
        dmin = np.full(200, np.inf)
        for i in range(200):
            if dmin[i] > 1.0:
                net_rows.append(points[i])
                dmin = np.minimum(dmin, np.abs(points - points[i]).max(axis=1))
        assert len(net_rows) == rep.net_size
        assert np.all(dmin <= 1.0)

    def test_identical_points_saturate(self):
        rep = greedy_net(np.zeros((100, 2)), 0.1)
        assert rep.net_size == 1 and rep.saturated

    def test_escaping_points_fail_saturation(self):
        # a straight march: every point opens a new net cell
        points = np.arange(100.0)[:, None] * 10.0
        rep = greedy_net(points, 0.5)
        assert rep.net_size == 100
        assert not rep.saturated

    def test_frechet_metric_requires_parameters(self):
        with pytest.raises(ValueError, match="weights"):
            greedy_net(np.zeros((3, 2)), 0.1, metric_id="frechet_seq")

    def test_holder_metric_id(self):
        rows = np.vstack([np.linspace(0, 1, 17), np.zeros(17)])
        rep = greedy_net(rows, 0.5, metric_id="holder:0.5")
        assert rep.net_size == 2  # holder distance of t vs 0 is 1

    def test_carrier_lists_infer_metric(self):
        from gaugelab.function_core import SeqPoint

        w = default_weights(4)
        pts = [SeqPoint(np.zeros(4), w), SeqPoint(np.full(4, 10.0), w)]
        rep = greedy_net(pts, 0.2)
        assert rep.net_size == 2


class TestCompactnessProfiles:
    def test_identity_shape_saturates(self):
        model = WienerModel(6, seed=0)
        reports = compactness_profile(
            identity_shape(model), model, [0.3], [500, 1000], seed=1, modes=16
        )
        assert all(isinstance(r, CoveringReport) for r in reports)
        assert reports[0].saturated

    def test_floor_shape_saturates(self):
        model = ProductGaussianModel(32, seed=0)
        reports = compactness_profile(
            floor_metric_shape(-0.5), model, [0.3, 0.25], [500, 1000], seed=2
        )
        assert all(r.saturated for r in reports)

    def test_ball_covering_runs(self):
        model = WienerModel(6, seed=0)
        reports = ball_covering(model, [0.25], [400, 800], seed=3, modes=16)
        assert reports[0].sample_count == 800
        assert reports[0].saturated


class TestFullMeasure:
    def test_zero_radius_probability_zero(self):
        ests = full_measure_mc(0.25, [0.0], 100, 7, seed=1)
        assert ests[0].p_hat == 0.0

    def test_monotone_and_crossing(self):
        r_list = [0.5 * k for k in range(1, 21)]
        ests = full_measure_mc(0.25, r_list, 400, 8, seed=2)
        probs = [e.p_hat for e in ests]
        assert all(b >= a for a, b in zip(probs, probs[1:]))
        assert crossing_radius(ests) is not None

    def test_estimate_fields(self):
        est = full_measure_mc(0.3, [2.0], 150, 6, seed=3)[0]
        assert isinstance(est, MeasureEstimate)
        assert est.samples == 150
        assert 0.0 <= est.p_hat <= 1.0
        assert est.stderr <= 0.5 / math.sqrt(150) + 1e-12


class TestDichotomy:
    def test_sweep_passes_module_thresholds(self):
        report = dichotomy_sweep([0.25, 0.75], [7, 8, 9], 200, seed=4)
        assert report["pass"]
        for row in report["rows"]:
            if row["alpha"] == 0.25:
                assert 0.8 <= row["median_ratio"] <= 1.2
            else:
                assert row["median_ratio"] >= 2 ** 0.25 * 0.9

    def test_deterministic_control_ratio_one(self):
        report = dichotomy_sweep([0.25], [6, 7], 50, seed=5)
        for row in report["control"]:
            assert all(abs(q - 1.0) < 1e-12 for q in row["ratios"])

    def test_levels_must_be_consecutive(self):
        with pytest.raises(ValueError, match="consecutive"):
            dichotomy_sweep([0.25], [6, 8], 50, seed=5)


class TestExactInequalities:
    def test_cs_bound_never_exceeded(self):
        report = cs_bound_check(200, 8, seed=6)
        assert report["pass"] and report["violations"] == 0
        assert report["max_quotient"] <= 1.0 + 1e-9

    def test_cs_bound_attained_by_linear_path(self):
        # f(t) = t is a unit-H path achieving quotient exactly 1 at (0, 1)
        from gaugelab.function_core import lag_maxima

        values = np.linspace(0.0, 1.0, 2**6 + 1)[None, :]
        lags, maxima = lag_maxima(values)
        quotients = maxima / np.sqrt(lags[:, None] * 2.0**-6)
        assert quotients.max() == pytest.approx(1.0, abs=1e-12)

    def test_small_ball_bound_formula(self):
        report = small_ball_holder_bound([0.005], 0.25, 20, 10, seed=7, min_accepted=20)
        row = report["rows"][0]
        assert row["bound"] == pytest.approx(0.1, abs=1e-15)
        assert row["violations"] == 0
        assert row["paths"] >= 20

    def test_small_ball_alpha_range(self):
        with pytest.raises(ValueError):
            small_ball_holder_bound([0.01], 0.5, 10, 8, seed=1)

    def test_bound_approaches_one_near_half(self):
        # (2 eps)**(1 - 2 alpha) -> 1 as alpha -> 1/2 regardless of eps
        for eps in (0.005, 0.05):
            assert (2 * eps) ** (1 - 2 * 0.499) == pytest.approx(1.0, abs=0.02)


class TestWitnesses:
    def test_h12_growth_and_control(self):
        report = containment_witnesses([7, 8, 9], 200, seed=8)
        assert report["pass"]
        h12_rows = [r for r in report["rows"] if r["witness"] == "h12"]
        for row in h12_rows:
            assert abs(row["median_ratio"] - math.sqrt(2)) <= 0.15 * math.sqrt(2)
        assert report["control_h12"]["start"] == pytest.approx(1.0, abs=1e-12)
        assert report["control_h12"]["end"] == pytest.approx(1.0, abs=1e-12)


class TestSmallHolderMembership:
    def test_linear_path_closed_form_sanity(self):
        # medians over Wiener paths decay; deterministic sanity lives in
        # function_core tests (defect of f(t)=t is delta**(1-alpha))
        report = small_holder_membership(0.25, [1.0, 0.5, 0.25], 100, 8, seed=9)
        meds = [r["median_defect"] for r in report["rows"]]
        assert all(b <= a + 1e-12 for a, b in zip(meds, meds[1:]))
        assert report["pass"]

    def test_high_alpha_control_does_not_decay(self):
        report = small_holder_membership(0.75, [1.0, 0.5, 0.25, 0.125], 100, 8, seed=9)
        assert report["tail_over_global"] > 0.9

    def test_delta_below_spacing_rejected(self):
        with pytest.raises(ValueError, match="spacing"):
            small_holder_membership(0.25, [1.0, 2.0**-9], 50, 8, seed=1)
