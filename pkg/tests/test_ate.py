import numpy as np
import pytest

from bcaug.ate import (
    AipwResult,
    BadClip,
    CausalDataset,
    SingularDesign,
    aipw,
    fit_outcome_models,
    fit_propensity,
    linear_predict,
)
from bcaug.generators import make_generator
from bcaug.model import TrainConfig
from bcaug.simbench import CausalDgp, generate


def _toy_causal(rng, n=200, d=2, treated_frac=0.3, tau=2.0, noise=0.0):
    x = rng.normal(size=(n, d))
    z = (rng.random(n) < treated_frac).astype(int)
    if z.sum() < d + 2:
        z[: d + 2] = 1
    if (1 - z).sum() < d + 2:
        z[-(d + 2) :] = 0
    beta = np.arange(1, d + 1, dtype=float)
    y1 = x @ beta + tau + noise * rng.normal(size=n)
    y0 = x @ beta + noise * rng.normal(size=n)
    y = np.where(z == 1, y1, y0)
    return CausalDataset(x, z, y), beta


class TestOutcomeModels:
    def test_exact_interpolation(self, rng):
        x = rng.normal(size=(40, 1))
        z = np.array([1, 0] * 20)
        y = 2.0 * x[:, 0] + 1.0
        cd = CausalDataset(x, z, y)
        beta1, beta0 = fit_outcome_models(cd)
        for beta in (beta1, beta0):
            assert beta == pytest.approx([2.0, 1.0], abs=1e-10)

    def test_single_treated_sample_singular(self, rng):
        x = rng.normal(size=(30, 2))
        z = np.zeros(30, dtype=int)
        z[0] = 1
        cd = CausalDataset(x, z, rng.normal(size=30))
        with pytest.raises(SingularDesign):
            fit_outcome_models(cd)

    def test_collinear_design_singular(self, rng):
        base = rng.normal(size=(40, 1))
        x = np.hstack([base, 2.0 * base])
        z = np.array([1, 0] * 20)
        cd = CausalDataset(x, z, rng.normal(size=40))
        with pytest.raises(SingularDesign):
            fit_outcome_models(cd)

    def test_matches_pseudo_inverse(self, rng):
        cd, _ = _toy_causal(rng, n=300, d=3, noise=1.0)
        beta1, beta0 = fit_outcome_models(cd)
        treated = cd.z == 1
        design = np.hstack([cd.x[treated], np.ones((treated.sum(), 1))])
        ref = np.linalg.pinv(design) @ cd.y_obs[treated]
        assert beta1 == pytest.approx(ref, abs=1e-8)


class TestPropensity:
    def test_raw_is_plain_logistic_fit(self, rng):
        cd, _ = _toy_causal(rng, n=200)
        from bcaug.dataset import Dataset
        from bcaug.model import fit

        cfg = TrainConfig(epochs=30)
        direct = fit("raw", Dataset(cd.x, cd.z), cfg)
        prop = fit_propensity(cd, "raw", cfg=cfg)
        assert np.array_equal(prop.beta, direct.model.beta)

    def test_bc_equals_syn_on_correction_copy(self, rng):
        from bcaug.dataset import Dataset, partition_majority, split_by_class
        from bcaug.loss import AugmentedTrainSet
        from bcaug.model import fit

        cd, _ = _toy_causal(rng, n=120)
        data = Dataset(cd.x, cd.z)
        split = split_by_class(data)
        part = partition_majority(split, split.n0 // 2, rng)
        syn1 = rng.normal(size=(split.n0 - split.n1, 2))
        aug = AugmentedTrainSet(data, syn1, data.x[part.correction_idx].copy(), part)
        cfg = TrainConfig(epochs=25)
        a = fit("syn", aug, cfg)
        b = fit("bc", aug, cfg)
        assert np.array_equal(a.model.beta, b.model.beta)

    def test_consistency_at_large_n(self):
        rng = np.random.default_rng(42)
        n, d = 20000, 3
        gamma = np.array([0.7, -0.4, 0.2])
        x = rng.normal(size=(n, d))
        p = 1 / (1 + np.exp(-(x @ gamma)))
        z = (rng.random(n) < p).astype(int)
        cd = CausalDataset(x, z, rng.normal(size=n))
        model = fit_propensity(
            cd, "raw", cfg=TrainConfig(epochs=400, learning_rate=1.0)
        )
        assert np.linalg.norm(model.beta - gamma) < 0.1

    def test_syn_requires_treated_minority(self, rng):
        cd, _ = _toy_causal(rng, n=100, treated_frac=0.7)
        if cd.z.sum() <= cd.n - cd.z.sum():
            pytest.skip("draw came out treated-minority")
        with pytest.raises(Exception, match="minority"):
            fit_propensity(cd, "syn", make_generator("smote"), TrainConfig(epochs=5), rng)


class TestAipw:
    def test_exact_outcome_models_ignore_propensity(self, rng):
        cd, beta = _toy_causal(rng, n=150, tau=2.0, noise=0.0)
        mu1 = lambda x: x @ beta + 2.0  # noqa: E731
        mu0 = lambda x: x @ beta  # noqa: E731
        for e_const in (0.2, 0.5, 0.8):
            res = aipw(cd, mu1, mu0, lambda x: np.full(len(x), e_const))
            assert res.tau_hat == pytest.approx(2.0, abs=1e-10)

    def test_pure_ipw_hand_summation(self):
        x = np.arange(5, dtype=float).reshape(5, 1)
        z = np.array([1, 0, 1, 0, 0])
        y = np.array([2.0, 1.0, 3.0, -1.0, 0.5])
        e = np.array([0.4, 0.3, 0.6, 0.2, 0.5])
        cd = CausalDataset(x, z, y)
        res = aipw(
            cd,
            lambda m: np.zeros(len(m)),
            lambda m: np.zeros(len(m)),
            lambda m: e,
            clip_eta=0.01,
        )
        expected = np.mean(z * y / e - (1 - z) * y / (1 - e))
        assert res.tau_hat == pytest.approx(expected, rel=1e-12)

    def test_identity_tau_is_difference(self, rng):
        cd, beta = _toy_causal(rng, n=80, noise=1.0)
        beta1, beta0 = fit_outcome_models(cd)
        res = aipw(
            cd,
            lambda m: linear_predict(m, beta1),
            lambda m: linear_predict(m, beta0),
            lambda m: np.full(len(m), 0.3),
        )
        assert res.tau_hat == res.mu1_hat_bar - res.mu0_hat_bar

    def test_clip_validated(self, rng):
        cd, _ = _toy_causal(rng)
        zero = lambda m: np.zeros(len(m))  # noqa: E731
        with pytest.raises(BadClip):
            aipw(cd, zero, zero, zero, clip_eta=0.6)

    def test_unbiased_with_true_propensity_and_constant_outcomes(self):
        # doubly-robust leg: e = e*, outcome models arbitrary constants
        errs = []
        for seed in range(200):
            rng = np.random.default_rng(seed)
            dgp = CausalDgp(n=500, d=2, tau_true=1.0, treated_frac=0.2)
            trial = generate(dgp, rng)
            res = aipw(
                trial.data,
                lambda m: np.full(len(m), 3.0),
                lambda m: np.full(len(m), -1.0),
                trial.true_propensity,
                clip_eta=0.01,
            )
            errs.append(res.tau_hat - 1.0)
        errs = np.asarray(errs)
        se = errs.std(ddof=1) / np.sqrt(len(errs))
        assert abs(errs.mean()) < 3 * se


class TestCausalDataset:
    def test_validation(self, rng):
        with pytest.raises(Exception):
            CausalDataset(rng.normal(size=(4, 2)), [1, 1, 1, 1], np.zeros(4))
        with pytest.raises(Exception):
            CausalDataset(rng.normal(size=(4, 2)), [0, 1, 2, 0], np.zeros(4))
