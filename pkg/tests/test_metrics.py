import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bcaug.metrics import (
    ConfusionMatrix,
    LengthMismatch,
    NotOrthonormal,
    ShapeMismatch,
    beta_mse,
    compute_metrics,
    confusion,
    sin_theta_distance,
)


class TestConfusion:
    def test_perfect_two(self):
        cm = confusion([1, 0], [1, 0])
        assert (cm.tp, cm.tn, cm.fp, cm.fn) == (1, 1, 0, 0)

    def test_all_predicted_positive(self):
        cm = confusion([1, 0, 0], [1, 1, 1])
        assert (cm.tp, cm.fp) == (1, 2)

    def test_empty(self):
        cm = confusion([], [])
        assert cm.total == 0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            confusion([1, 0], [1])


class TestComputeMetrics:
    def test_hand_arithmetic(self):
        r = compute_metrics(ConfusionMatrix(tp=1, fp=0, fn=1, tn=8))
        assert r.recall == pytest.approx(0.5)
        assert r.precision == pytest.approx(1.0)
        assert r.f1 == pytest.approx(2 / 3)
        assert r.jaccard == pytest.approx(0.5)
        assert r.accuracy == pytest.approx(0.9)

    def test_perfect_prediction(self):
        r = compute_metrics(ConfusionMatrix(tp=5, fp=0, fn=0, tn=10))
        for name in ("recall", "precision", "f_beta", "f1", "jaccard", "fowlkes_mallows", "accuracy", "mcc"):
            assert getattr(r, name) == pytest.approx(1.0)
        assert not r.degenerate

    def test_zero_denominator_convention(self):
        r = compute_metrics(ConfusionMatrix(tp=0, fp=0, fn=0, tn=4))
        assert r.precision == 0.0 and r.recall == 0.0 and r.f1 == 0.0
        assert r.mcc == 0.0
        assert r.accuracy == 1.0
        assert r.degenerate

    def test_fbeta_reduces_to_f1(self):
        cm = ConfusionMatrix(tp=6, fp=3, fn=2, tn=20)
        assert compute_metrics(cm, beta=1.0).f_beta == pytest.approx(
            compute_metrics(cm).f1
        )

    def test_fbeta_approaches_recall(self):
        cm = ConfusionMatrix(tp=6, fp=3, fn=2, tn=20)
        r = compute_metrics(cm, beta=100.0)
        assert r.f_beta == pytest.approx(r.recall, abs=1e-3)

    @given(
        st.integers(0, 100),
        st.integers(0, 100),
        st.integers(0, 100),
        st.integers(0, 100),
    )
    @settings(max_examples=300, deadline=None)
    def test_ranges(self, tp, fp, fn, tn):
        r = compute_metrics(ConfusionMatrix(tp, fp, fn, tn))
        for name in ("recall", "precision", "f_beta", "f1", "jaccard", "fowlkes_mallows", "accuracy"):
            assert 0.0 <= getattr(r, name) <= 1.0
        assert -1.0 <= r.mcc <= 1.0


class TestBetaMse:
    def test_zero(self):
        assert beta_mse([1.0, 2.0], [1.0, 2.0]) == 0.0

    def test_three_four(self):
        assert beta_mse([3.0, 4.0], [0.0, 0.0]) == pytest.approx(25.0)

    def test_summation_oracle(self, rng):
        a = rng.normal(size=10)
        b = rng.normal(size=10)
        expected = sum((float(x) - float(y)) ** 2 for x, y in zip(a, b))
        assert beta_mse(a, b) == pytest.approx(expected, rel=1e-14)

    def test_dim_mismatch(self):
        with pytest.raises(ShapeMismatch):
            beta_mse([1.0], [1.0, 2.0])


def _random_orthonormal(rng, d, r):
    q, rr = np.linalg.qr(rng.normal(size=(d, r)))
    return q * np.sign(np.diag(rr))


class TestSinTheta:
    def test_identical(self, rng):
        u = _random_orthonormal(rng, 5, 2)
        assert sin_theta_distance(u, u) == 0.0

    def test_rotation_invariance(self, rng):
        u = _random_orthonormal(rng, 6, 3)
        angle = 0.7
        rot = np.array(
            [
                [np.cos(angle), -np.sin(angle), 0.0],
                [np.sin(angle), np.cos(angle), 0.0],
                [0.0, 0.0, 1.0],
            ]
        )
        assert sin_theta_distance(u @ rot, u) == pytest.approx(0.0, abs=1e-7)

    def test_plane_angle(self):
        theta = np.pi / 6
        u = np.array([[1.0], [0.0]])
        v = np.array([[np.cos(theta)], [np.sin(theta)]])
        assert sin_theta_distance(v, u) == pytest.approx(0.5, rel=1e-12)

    def test_symmetry(self, rng):
        a = _random_orthonormal(rng, 7, 2)
        b = _random_orthonormal(rng, 7, 2)
        assert sin_theta_distance(a, b) == pytest.approx(sin_theta_distance(b, a), rel=1e-10)

    def test_not_orthonormal(self, rng):
        u = _random_orthonormal(rng, 4, 2)
        with pytest.raises(NotOrthonormal):
            sin_theta_distance(2.0 * u, u)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeMismatch):
            sin_theta_distance(_random_orthonormal(rng, 4, 2), _random_orthonormal(rng, 4, 3))
