import numpy as np
import pytest

from bellcorr.domination import COINCIDES, find_domination_witness
from bellcorr.errors import ConfigurationError, InputError
from bellcorr.io import estimate_csv
from bellcorr.models import COSINE, LINEAR, FlippedSinglet, PRBox, Singlet
from bellcorr.montecarlo import (
    ExperimentConfig,
    ExperimentEstimate,
    bin_generator,
    estimate_to_model,
    outcomes_from_uniform,
    run_experiment,
    sample_axis_pair,
    sample_axis_pairs,
    sample_outcomes,
)

from conftest import random_antisymmetric_model, random_lhv_mixture

MODES = ["sphere", "coplanar"]


class TestAxisSampling:
    @pytest.mark.parametrize("mode", MODES)
    def test_parallel(self, mode):
        u, v = sample_axis_pair(mode, 0.0, bin_generator(1, 0))
        np.testing.assert_allclose(u, v, atol=1e-15)

    @pytest.mark.parametrize("mode", MODES)
    def test_antipodal(self, mode):
        u, v = sample_axis_pair(mode, np.pi, bin_generator(1, 0))
        np.testing.assert_allclose(u, -v, atol=1e-15)

    @pytest.mark.parametrize("mode", MODES)
    def test_separation_is_exact(self, mode):
        rng = bin_generator(5, 3)
        for theta in np.linspace(0, np.pi, 13):
            u, v = sample_axis_pairs(mode, theta, rng, 1000)
            np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1, atol=1e-12)
            np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1, atol=1e-12)
            np.testing.assert_allclose(np.sum(u * v, axis=1), np.cos(theta), atol=1e-10)

    def test_sphere_uniformity(self):
        u, v = sample_axis_pairs("sphere", np.pi / 2, bin_generator(9, 0), 100_000)
        assert abs(np.mean(np.sum(u * v, axis=1))) < 1e-9
        # each coordinate of a uniform unit vector has variance 1/3
        se = np.sqrt(1 / 3 / 100_000)
        assert np.all(np.abs(u.mean(axis=0)) < 5 * se)
        assert np.all(np.abs(v.mean(axis=0)) < 5 * se)
        np.testing.assert_allclose(np.mean(u ** 2, axis=0), 1 / 3, atol=5e-3)

    def test_coplanar_stays_in_plane(self):
        u, v = sample_axis_pairs("coplanar", 1.0, bin_generator(9, 0), 1000)
        assert np.all(u[:, 2] == 0) and np.all(v[:, 2] == 0)

    def test_domain(self):
        with pytest.raises(ValueError):
            sample_axis_pair("sphere", 4.0, bin_generator(1, 0))


class TestOutcomes:
    def test_inverse_transform_partitions_unit_interval(self):
        # quadrature over a fine uniform grid recovers each probability
        u = (np.arange(400_000) + 0.5) / 400_000
        for c in (-1.0, -0.5, 0.0, 0.3, 1.0):
            a, b = outcomes_from_uniform(c, u)
            for sa in (1, -1):
                for sb in (1, -1):
                    freq = np.mean((a == sa) & (b == sb))
                    assert freq == pytest.approx((1 + sa * sb * c) / 4, abs=1e-5)

    def test_singlet_parallel_always_opposite(self):
        rng = bin_generator(2, 0)
        pairs = [sample_outcomes(Singlet(), 0.0, rng) for _ in range(500)]
        assert all(a == -b for a, b in pairs)

    def test_pr_plateau_always_equal(self):
        rng = bin_generator(2, 1)
        pairs = [sample_outcomes(PRBox(), np.pi / 8, rng) for _ in range(500)]
        assert all(a == b for a, b in pairs)

    def test_scalar_and_vector_paths_agree(self):
        r1, r2 = bin_generator(4, 4), bin_generator(4, 4)
        scalar = [sample_outcomes(Singlet(), 1.0, r1) for _ in range(200)]
        a, b = outcomes_from_uniform(-np.cos(1.0), r2.random(200))
        assert scalar == list(zip(a.tolist(), b.tolist()))

    def test_singlet_third_pi_mean(self):
        # binomial standard error sqrt(0.75 / 1e6) ~ 8.7e-4; 4 sigma ~ 0.0035 < 0.004
        a, b = outcomes_from_uniform(-0.5, bin_generator(31, 0).random(1_000_000))
        assert np.mean(a * b.astype(int)) == pytest.approx(-0.5, abs=0.004)


class TestRunExperiment:
    def test_singlet_within_four_standard_errors(self):
        est = run_experiment(ExperimentConfig(Singlet(), trials_per_bin=100_000, bin_count=50, seed=1))
        assert np.all(np.abs(est.correlation + np.cos(est.theta)) <= 4 * est.std_error)

    def test_single_trial_flags_error(self):
        est = run_experiment(ExperimentConfig(Singlet(), trials_per_bin=1, bin_count=4, seed=1))
        assert np.all(np.isnan(est.std_error))
        assert np.all(np.abs(est.correlation) == 1)

    def test_identical_seeds_bit_identical(self):
        cfg = ExperimentConfig(PRBox(COSINE), trials_per_bin=3_000, bin_count=10, seed=99)
        assert estimate_csv(run_experiment(cfg)) == estimate_csv(run_experiment(cfg))

    def test_different_seeds_differ(self):
        a = run_experiment(ExperimentConfig(Singlet(), trials_per_bin=3_000, bin_count=5, seed=1))
        b = run_experiment(ExperimentConfig(Singlet(), trials_per_bin=3_000, bin_count=5, seed=2))
        assert not np.array_equal(a.correlation, b.correlation)

    def test_parallel_matches_serial(self):
        cfg = ExperimentConfig(Singlet(), trials_per_bin=5_000, bin_count=8, seed=4, axis_mode="coplanar")
        serial, parallel = run_experiment(cfg), run_experiment(cfg, workers=4)
        np.testing.assert_array_equal(serial.correlation, parallel.correlation)
        np.testing.assert_array_equal(serial.mean_a, parallel.mean_a)

    def test_bins_are_order_independent(self):
        # bin i depends only on (seed, i), so regenerating it alone reproduces it
        cfg = ExperimentConfig(Singlet(), trials_per_bin=2_000, bin_count=4, seed=6)
        est = run_experiment(cfg)
        from bellcorr.montecarlo import _run_bin

        again = _run_bin(Singlet(), float(est.theta[2]), 2_000, cfg.axis_mode, bin_generator(6, 2))
        assert again[0] == est.correlation[2]

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"trials_per_bin": 0},
            {"bin_count": 1},
            {"trials_per_bin": 2 ** 62, "bin_count": 4},
            {"seed": -1},
            {"seed": 2 ** 64},
        ],
    )
    def test_config_errors(self, kwargs):
        with pytest.raises(ConfigurationError):
            ExperimentConfig(Singlet(), **kwargs)

    @pytest.mark.parametrize("mode", MODES)
    def test_marginals_uniform_for_every_model(self, mode):
        rng = np.random.default_rng(21)
        n = 20_000
        models = [Singlet(), FlippedSinglet(), PRBox(LINEAR), random_lhv_mixture(rng), random_antisymmetric_model(rng)]
        for k, model in enumerate(models):
            est = run_experiment(ExperimentConfig(model, trials_per_bin=n, bin_count=10, seed=k, axis_mode=mode))
            assert np.all(np.abs(est.mean_a) <= 5 / np.sqrt(n))
            assert np.all(np.abs(est.mean_b) <= 5 / np.sqrt(n))

    def test_estimator_consistency(self):
        # frozen seeds; a 5-sigma excursion has probability ~6e-7 per bin
        rng = np.random.default_rng(33)
        models = [Singlet(), PRBox(COSINE), random_lhv_mixture(rng), random_antisymmetric_model(rng)]
        bins = exceed = 0
        for seed in range(5):
            for model in models:
                est = run_experiment(ExperimentConfig(model, trials_per_bin=10_000, bin_count=50, seed=seed))
                exceed += int(np.sum(np.abs(est.correlation - model(est.theta)) > 5 * est.std_error))
                bins += len(est.theta)
        assert exceed <= 1e-4 * bins


class TestEstimateToModel:
    def test_singlet_round_trip(self, singlet_million_run):
        _, est, _ = singlet_million_run
        model = estimate_to_model(est)
        assert model.tolerance_floor == est.max_std_error
        v = find_domination_witness(model, tolerance=5 * model.tolerance_floor)
        assert v.outcome == COINCIDES

    def test_pr_round_trip(self):
        est = run_experiment(ExperimentConfig(PRBox(COSINE), trials_per_bin=100_000, bin_count=50, seed=5))
        model = estimate_to_model(est)
        v = find_domination_witness(model, tolerance=5 * model.tolerance_floor)
        assert v.witness_found and v.family == "chsh2"

    def test_empty_bin(self):
        est = run_experiment(ExperimentConfig(Singlet(), trials_per_bin=10, bin_count=4, seed=0))
        n = est.n.copy()
        n[1] = 0
        broken = ExperimentEstimate(est.theta, n, est.correlation, est.std_error, est.mean_a, est.mean_b)
        with pytest.raises(InputError):
            estimate_to_model(broken)
