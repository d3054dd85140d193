import math

import numpy as np
import pytest

import logitgof.exact as exact_mod
from logitgof import (
    ConfigError,
    Dataset,
    ModelSpec,
    exact_pvalue,
    exact_pvalues,
    parse_statistics,
)

DEVIANCE = parse_statistics(["deviance"])[0]
EUCLIDEAN = parse_statistics(["euclidean"])[0]


def intercept_only_dataset(y):
    return Dataset(y, np.zeros((len(y), 0)))


class TestHandEnumeration:
    def test_three_point_intercept_case(self):
        """All eight outcomes of n=3, worked by hand before comparing.

        Intercept-only refits depend only on the success count k, giving
        means k/3 (clamped at the boundary for k = 0 and 3) and deviances
        dev(0) ~ 0, dev(1) = dev(2) = -2[ln(1/3) + 2 ln(2/3)], dev(3) ~ 0.
        The observed y = (1,0,0) sits in class k=1, so the exceedance set
        is exactly the six outcomes of classes 1 and 2 (class 2 by the
        bitwise tie), with total weight

            3*(1/3)(2/3)^2 + 3*(1/3)^2(2/3) = 12/27 + 6/27 = 2/3.
        """
        d = intercept_only_dataset([1, 0, 0])
        res = exact_pvalue(d, ModelSpec(), ModelSpec(), DEVIANCE)
        assert res.outcomes_enumerated == 8
        assert res.p_exact == pytest.approx(2 / 3, abs=1e-12)

    def test_single_observation_covers_everything(self):
        # limitwise this is exactly 1; the mean clamp at 1e-10 shaves the
        # complementary outcome off the exceedance set, hence the tolerance
        d = intercept_only_dataset([1])
        res = exact_pvalue(d, ModelSpec(), ModelSpec(), EUCLIDEAN)
        assert res.outcomes_enumerated == 2
        assert res.p_exact == pytest.approx(1.0, abs=1e-9)


class TestRankInvariance:
    def _tiny_dataset(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=(9, 2))
        y = (rng.random(9) < 0.4).astype(int)
        if y.sum() in (0, 9):
            y[0] = 1 - y[0]
        return Dataset(y, x)

    def test_monotone_transform_of_statistic_changes_nothing(self, monkeypatch):
        d = self._tiny_dataset()
        tested, full = ModelSpec((0,)), ModelSpec((0, 1))
        base = exact_pvalue(d, tested, full, EUCLIDEAN).p_exact

        original = exact_mod.evaluate_batch
        monkeypatch.setattr(
            exact_mod, "evaluate_batch",
            lambda *a, **kw: 2.0 * original(*a, **kw) + 1.0,
        )
        transformed = exact_pvalue(d, tested, full, EUCLIDEAN).p_exact
        assert transformed == base

    def test_constant_statistic_gives_one(self, monkeypatch):
        d = self._tiny_dataset()
        monkeypatch.setattr(
            exact_mod, "evaluate_batch",
            lambda kinds, Y, mu_t, mu_f: np.ones((Y.shape[0], len(kinds))),
        )
        res = exact_pvalue(d, ModelSpec((0,)), ModelSpec((0, 1)), EUCLIDEAN)
        assert res.p_exact == pytest.approx(1.0, abs=1e-12)


class TestEnumerationMechanics:
    def test_chunk_size_cannot_matter(self, monkeypatch):
        d = Dataset(
            (np.arange(10) % 3 == 0).astype(int),
            np.linspace(-1.0, 1.0, 10)[:, None],
        )
        kinds = parse_statistics(["ks:mu-full", "deviance", "hl:3:mu-tested"])
        wide = exact_pvalues(d, ModelSpec(), ModelSpec((0,)), kinds)
        monkeypatch.setattr(exact_mod, "_CHUNK", 64)
        narrow = exact_pvalues(d, ModelSpec(), ModelSpec((0,)), kinds)
        for a, b in zip(wide, narrow):
            assert abs(a.p_exact - b.p_exact) < 1e-12

    def test_probabilities_are_probabilities(self, make_random_dataset):
        d = make_random_dataset(31, n=11, m=2)
        kinds = parse_statistics(["ks:mu-full", "kuiper:mu-full", "pearson-chi2"])
        for res in exact_pvalues(d, ModelSpec((0,)), ModelSpec((0, 1)), kinds):
            assert 0.0 < res.p_exact <= 1.0
            assert res.outcomes_enumerated == 2**11

    def test_enumeration_bound_is_enforced(self):
        d = intercept_only_dataset([0, 1] * 11)
        with pytest.raises(ConfigError, match="capped"):
            exact_pvalue(d, ModelSpec(), ModelSpec(), DEVIANCE)

    def test_requires_at_least_one_statistic(self):
        d = intercept_only_dataset([1, 0])
        with pytest.raises(ConfigError, match="at least one"):
            exact_pvalues(d, ModelSpec(), ModelSpec(), ())
