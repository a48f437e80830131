import numpy as np
import pytest

from bcaug.dataset import Dataset
from bcaug.loss import AugmentedTrainSet
from bcaug.model import (
    BadThreshold,
    DimMismatch,
    DivergedToNonFinite,
    LogisticModel,
    TrainConfig,
    fit,
    grad_loss,
    objective_loss,
)
from conftest import copy_correction_augmented, make_augmented


class TestPredict:
    def test_zero_beta(self, rng):
        model = LogisticModel(np.zeros(3))
        assert model.predict(rng.normal(size=3)) == 0.5

    def test_sigma_of_log3(self):
        model = LogisticModel([np.log(3.0)])
        assert model.predict([1.0]) == pytest.approx(0.75, rel=1e-12)

    def test_extreme_negative_stays_positive(self):
        model = LogisticModel([1.0])
        p = model.predict([-700.0])
        assert 0.0 < p < 1e-300 or p > 0  # finite, strictly positive
        assert np.isfinite(p) and p > 0.0

    def test_dim_mismatch(self):
        with pytest.raises(DimMismatch):
            LogisticModel(np.zeros(3)).predict([1.0, 2.0])

    def test_intercept_layout(self):
        model = LogisticModel([2.0, 1.0], intercept=True)
        # p = sigmoid(2*x + 1)
        assert model.predict([0.0]) == pytest.approx(1 / (1 + np.exp(-1.0)))

    def test_predictions_in_open_interval(self, rng):
        model = LogisticModel(rng.normal(size=4))
        x = rng.normal(size=(100, 4)) * 50
        p = model.predict_proba(x)
        assert np.all((p > 0) & (p < 1))


class TestClassify:
    def test_tie_goes_positive(self):
        model = LogisticModel(np.zeros(2))
        assert model.classify(np.zeros((1, 2))).tolist() == [1]

    def test_zero_beta_all_positive(self, rng):
        model = LogisticModel(np.zeros(2))
        assert model.classify(rng.normal(size=(5, 2))).tolist() == [1] * 5

    def test_threshold_validated(self):
        model = LogisticModel(np.zeros(2))
        with pytest.raises(BadThreshold):
            model.classify(np.zeros((1, 2)), threshold=1.0 + 1e-9)


class TestSerialization:
    def test_roundtrip(self, rng):
        model = LogisticModel(rng.normal(size=4), intercept=True)
        clone = LogisticModel.from_json(model.to_json())
        assert np.array_equal(model.beta, clone.beta)
        assert clone.intercept is True


def _finite_difference(objective, model, data, h=1e-6):
    base = model.beta.copy()
    grad = np.zeros_like(base)
    for j in range(base.size):
        plus, minus = base.copy(), base.copy()
        plus[j] += h
        minus[j] -= h
        up = objective_loss(objective, LogisticModel(plus, model.intercept), data)
        down = objective_loss(objective, LogisticModel(minus, model.intercept), data)
        grad[j] = (up - down) / (2 * h)
    return grad


class TestGradients:
    def test_symmetric_fixture_zero_gradient(self):
        x = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        y = np.array([1, 1, 0, 0])
        model = LogisticModel(np.zeros(2))
        g = grad_loss("raw", model, Dataset(x, y))
        # sigma(0)=1/2 for every row; gradient = mean of x*(1/2 - y)
        expected = (x * (0.5 - y)[:, None]).mean(axis=0)
        assert np.allclose(g, expected, atol=1e-15)

    def test_hand_computed_constant_covariate(self):
        x = np.ones((4, 3))
        y = np.ones(4, dtype=int)
        g = grad_loss("raw", LogisticModel(np.zeros(3)), Dataset(x, y))
        assert np.allclose(g, -0.5 * np.ones(3), atol=1e-15)

    @pytest.mark.parametrize("objective", ["raw", "syn", "bc"])
    def test_matches_finite_differences(self, objective):
        for trial in range(20):
            rng = np.random.default_rng(500 + trial)
            aug = make_augmented(rng, n1=6, n0=18, d=3, n_syn1=9, n_syn0=7)
            data = aug.raw if objective == "raw" else aug
            intercept = trial % 2 == 0
            p = 3 + (1 if intercept else 0)
            model = LogisticModel(rng.normal(scale=0.5, size=p), intercept=intercept)
            g = grad_loss(objective, model, data)
            fd = _finite_difference(objective, model, data)
            denom = np.maximum(np.abs(fd), 1e-8)
            assert np.max(np.abs(g - fd) / denom) < 1e-5


class TestFit:
    def test_separable_fixture_perfect_accuracy(self):
        x = np.concatenate([-np.ones(50), np.ones(50)]).reshape(-1, 1)
        y = np.concatenate([np.zeros(50, int), np.ones(50, int)])
        data = Dataset(x, y)
        result = fit("raw", data, TrainConfig(epochs=100, learning_rate=1.0))
        pred = result.model.classify(x)
        assert np.array_equal(pred, y)

    def test_zero_learning_rate_keeps_init(self, rng):
        data = Dataset(rng.normal(size=(10, 2)), (rng.random(10) < 0.5).astype(int))
        result = fit("raw", data, TrainConfig(epochs=5, learning_rate=0.0))
        assert np.array_equal(result.model.beta, np.zeros(2))

    def test_bc_equals_syn_when_correction_is_copy(self, rng):
        aug = copy_correction_augmented(rng)
        cfg = TrainConfig(epochs=60, learning_rate=0.3)
        syn = fit("syn", aug, cfg)
        bc = fit("bc", aug, cfg)
        assert np.array_equal(syn.model.beta, bc.model.beta)
        assert np.array_equal(syn.losses, bc.losses)

    def test_syn_with_no_synthetics_equals_raw(self, rng):
        aug = make_augmented(rng, n_syn1=0, n_syn0=1)
        cfg = TrainConfig(epochs=40)
        raw = fit("raw", aug.raw, cfg)
        syn = fit("syn", aug, cfg)
        assert np.array_equal(raw.model.beta, syn.model.beta)

    def test_monotone_loss_trajectory(self, rng):
        aug = make_augmented(rng, n1=20, n0=60, d=3)
        result = fit("bc", aug, TrainConfig(epochs=200, learning_rate=0.01))
        assert np.all(np.diff(result.losses) <= 1e-12)

    def test_trajectory_matches_public_losses(self, rng):
        from bcaug.loss import loss_bc

        aug = make_augmented(rng)
        result = fit("bc", aug, TrainConfig(epochs=10, learning_rate=0.1))
        assert result.final_loss == pytest.approx(loss_bc(result.model, aug), rel=1e-14)

    def test_divergence_detected(self, rng):
        # step large enough to overflow the coefficients to +-inf
        x = rng.normal(size=(20, 2)) * 100
        y = (rng.random(20) < 0.5).astype(int)
        with pytest.raises(DivergedToNonFinite):
            fit("raw", Dataset(x, y), TrainConfig(epochs=5, learning_rate=1e307))

    def test_deterministic(self, rng):
        aug = make_augmented(rng)
        cfg = TrainConfig(epochs=30)
        a = fit("syn", aug, cfg)
        b = fit("syn", aug, cfg)
        assert np.array_equal(a.model.beta, b.model.beta)

    def test_gaussian_init_reproducible(self, rng):
        data = Dataset(rng.normal(size=(10, 2)), (np.arange(10) % 2).astype(int))
        cfg = TrainConfig(epochs=1, learning_rate=0.0, init="gaussian")
        a = fit("raw", data, cfg, rng=np.random.default_rng(4))
        b = fit("raw", data, cfg, rng=np.random.default_rng(4))
        assert np.array_equal(a.model.beta, b.model.beta)
        assert a.model.beta.std() > 0

    def test_grad_tol_early_stop(self):
        # non-separable fixture with a finite optimum
        x = np.array([[1.0], [1.0], [-1.0]])
        y = np.array([1, 0, 0])
        data = Dataset(x, y)
        result = fit(
            "raw", data, TrainConfig(epochs=5000, learning_rate=0.5, grad_tol=1e-6)
        )
        assert result.losses.size < 5001
        g = grad_loss("raw", result.model, data)
        assert np.linalg.norm(g) <= 1e-5
