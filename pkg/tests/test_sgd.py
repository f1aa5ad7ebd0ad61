import math

import numpy as np
import pytest

from gspa.accountant import Cohort, amplify, amplify_composed
from gspa.data import make_blobs
from gspa.noise import NoiseSource
from gspa.sgd import (TrainConfig, clip_gradient, gradient_check, make_model,
                      noise_scale, train)
from gspa.tradeoff import PrivacyBudget

# (2C/m) * sqrt(2 ln(1.25/delta)) / eps at C=2, m=100, eps=1, delta=1e-5,
# frozen with mpmath at 40 digits
NOISE_SCALE_TABLE_CASE = 0.19379221050421558


def desk_config(**overrides):
    settings = dict(cohort=Cohort.uniform(20, 0.5, 1e-5), epochs=5, clients=20,
                    samples=400, seed=0)
    settings.update(overrides)
    return TrainConfig(**settings)


class TestNoiseScale:
    def test_frozen_value(self):
        got = noise_scale(2.0, 100, PrivacyBudget(1.0, 1e-5))
        assert got == pytest.approx(NOISE_SCALE_TABLE_CASE, rel=1e-12)

    def test_inverse_epsilon_scaling(self):
        half = noise_scale(2.0, 100, PrivacyBudget(2.0, 1e-5))
        assert half == pytest.approx(NOISE_SCALE_TABLE_CASE / 2.0, rel=1e-12)

    def test_linear_in_clip_bound(self):
        tiny = noise_scale(1e-9, 100, PrivacyBudget(1.0, 1e-5))
        assert tiny == pytest.approx(NOISE_SCALE_TABLE_CASE * 1e-9 / 2.0, rel=1e-9)

    @pytest.mark.parametrize("eps,delta", [(0.0, 1e-5), (1.0, 0.0), (1.0, 1.0)])
    def test_invalid_budget(self, eps, delta):
        with pytest.raises(ValueError):
            noise_scale(2.0, 100, PrivacyBudget(eps, delta))


class TestClipGradient:
    def test_rescaled_outside_ball(self):
        assert np.allclose(clip_gradient(np.array([3.0, 4.0]), 1.0), [0.6, 0.8])

    def test_identity_inside_ball(self):
        g = np.array([0.1, 0.0])
        assert np.array_equal(clip_gradient(g, 2.0), g)

    def test_zero_gradient(self):
        assert np.array_equal(clip_gradient(np.zeros(3), 1.0), np.zeros(3))

    def test_norm_never_exceeds_bound(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            g = rng.normal(size=10) * rng.uniform(0.1, 50)
            assert np.linalg.norm(clip_gradient(g, 2.0)) <= 2.0 + 1e-12


class TestModels:
    @pytest.mark.parametrize("spec", ["linear-softmax", "one-hidden-layer"])
    def test_gradient_check(self, spec):
        rng = np.random.default_rng(1)
        model = make_model(spec, dim=6, classes=3, hidden=8)
        params = model.init_params(rng)
        x = rng.normal(size=(40, 6))
        y = rng.integers(0, 3, size=40)
        assert gradient_check(model, params, x, y, rng=rng) <= 1e-5

    def test_unknown_spec(self):
        with pytest.raises(ValueError, match="model spec"):
            make_model("transformer", 4, 2)


class TestTrainConfig:
    def test_table_style_configuration_accepted(self):
        config = TrainConfig(cohort=Cohort.uniform(100, 1.0, 1e-5), epochs=50,
                             clients=100, samples=60_000, clip_bound=2.0,
                             step_size=0.05)
        assert config.clip_bound == 2.0
        assert config.epochs == 50

    def test_clients_must_divide_samples(self):
        with pytest.raises(ValueError, match="divide"):
            desk_config(samples=401)

    def test_delta_zero_rejected(self):
        with pytest.raises(ValueError, match="delta"):
            desk_config(cohort=Cohort.uniform(20, 0.5, 0.0))

    def test_budget_count_must_match_clients(self):
        with pytest.raises(ValueError, match="budget"):
            desk_config(cohort=Cohort.uniform(19, 0.5, 1e-5))


class TestTrain:
    def test_reproducible(self):
        dataset = make_blobs(400, 100, seed=[0, 101])
        a = train(dataset, desk_config())
        b = train(dataset, desk_config())
        assert np.array_equal(a.final_parameters, b.final_parameters)
        assert a.train_loss == b.train_loss
        assert a.test_accuracy == b.test_accuracy

    def test_config_echoed(self):
        dataset = make_blobs(400, 100, seed=[0, 101])
        config = desk_config()
        assert train(dataset, config).config == config

    def test_accounting_identity(self):
        dataset = make_blobs(400, 100, seed=[0, 101])
        config = desk_config(epochs=10)
        report = train(dataset, config)
        assert report.accounted_mu == amplify_composed(config.cohort, 10)
        assert report.accounted_mu.mu == pytest.approx(
            math.sqrt(10) * amplify(config.cohort).mu.mu, rel=1e-12)

    def test_zero_noise_separable_accuracy(self):
        dataset = make_blobs(1000, 400, seed=[0, 101])
        config = desk_config(epochs=20, samples=1000)
        report = train(dataset, config, noise=NoiseSource.zero())
        assert report.test_accuracy[-1] >= 0.98

    def test_one_hidden_layer_trains(self):
        dataset = make_blobs(400, 100, seed=[1, 101])
        config = desk_config(model="one-hidden-layer", hidden_units=16, epochs=8)
        report = train(dataset, config, noise=NoiseSource.zero())
        assert report.test_accuracy[-1] >= 0.9

    def test_pca_path(self):
        dataset = make_blobs(400, 100, seed=[2, 101])
        config = desk_config(pca_components=5)
        report = train(dataset, config, noise=NoiseSource.zero())
        # final parameters reflect the reduced input dimension
        assert report.final_parameters.size == (5 + 1) * 2

    def test_samples_must_match_dataset(self):
        dataset = make_blobs(500, 100, seed=[0, 101])
        with pytest.raises(ValueError, match="training set size"):
            train(dataset, desk_config())

    def test_per_epoch_metrics_lengths(self):
        dataset = make_blobs(400, 100, seed=[3, 101])
        report = train(dataset, desk_config(epochs=7))
        assert len(report.train_loss) == 7
        assert len(report.test_accuracy) == 7

    def test_central_budget_attached(self):
        dataset = make_blobs(400, 100, seed=[0, 101])
        report = train(dataset, desk_config(target_delta=1e-4))
        assert report.central.delta == 1e-4
        assert report.central.epsilon > 0.0

    def test_updates_are_clipped(self):
        # scale the features so raw gradients far exceed the clip bound; with
        # zero noise each of the m * T steps moves at most eta * C
        base = make_blobs(400, 100, seed=[4, 101])
        from gspa.data import Dataset
        dataset = Dataset(base.x_train * 1000.0, base.y_train,
                          base.x_test * 1000.0, base.y_test)
        config = desk_config(epochs=1, clip_bound=0.5, step_size=0.05,
                             check_gradients=False)
        report = train(dataset, config, noise=NoiseSource.zero())
        start = make_model(config.model, 20, 2).init_params(
            np.random.default_rng([config.seed, 0]))
        moved = np.linalg.norm(report.final_parameters - start)
        assert moved <= config.clients * config.step_size * config.clip_bound + 1e-9
