import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klconc.core import (
    CategoricalDist,
    CountVector,
    chain_rule_decompose,
    empirical_divergence,
    kl_divergence,
)
from klconc.errors import (
    DegenerateDistributionError,
    DimensionMismatchError,
    InvalidDistributionError,
)

LOG2 = math.log(2.0)


class TestCategoricalDist:
    def test_valid(self):
        d = CategoricalDist(np.array([0.3, 0.7]))
        assert d.k == 2

    def test_uniform(self):
        u = CategoricalDist.uniform(4)
        assert np.allclose(u.probs, 0.25)

    def test_rejects_bad_sum(self):
        with pytest.raises(InvalidDistributionError):
            CategoricalDist(np.array([0.3, 0.6]))

    def test_renormalizes_within_tolerance(self):
        d = CategoricalDist(np.array([0.5, 0.5 + 5e-13]))
        assert math.fsum(d.probs.tolist()) == pytest.approx(1.0, abs=1e-16)

    def test_rejects_k1(self):
        with pytest.raises(InvalidDistributionError):
            CategoricalDist(np.array([1.0]))

    def test_rejects_negative(self):
        with pytest.raises(InvalidDistributionError):
            CategoricalDist(np.array([-0.1, 1.1]))


class TestCountVector:
    def test_sum_enforced(self):
        with pytest.raises(InvalidDistributionError):
            CountVector(np.array([1, 2]), 4)

    def test_infers_n(self):
        assert CountVector(np.array([1, 2])).n == 3


class TestKlDivergence:
    def test_identity_is_zero(self):
        assert kl_divergence([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_point_mass(self):
        assert kl_divergence([1.0, 0.0], [0.5, 0.5]) == pytest.approx(LOG2, abs=1e-15)

    def test_infinite_branch(self):
        assert kl_divergence([0.5, 0.5], [1.0, 0.0]) == math.inf

    def test_dimension_error(self):
        with pytest.raises(DimensionMismatchError):
            kl_divergence([0.5, 0.5], [0.2, 0.3, 0.5])


class TestEmpiricalDivergence:
    def test_exact_match(self):
        x = CountVector(np.array([1, 1]), 2)
        assert empirical_divergence(x, [0.5, 0.5]) == 0.0

    def test_point_mass(self):
        x = CountVector(np.array([2, 0]), 2)
        assert empirical_divergence(x, [0.5, 0.5]) == pytest.approx(LOG2, abs=1e-15)

    def test_three_one(self):
        x = CountVector(np.array([3, 1]), 4)
        expected = 0.75 * math.log(1.5) + 0.25 * math.log(0.5)
        assert empirical_divergence(x, [0.5, 0.5]) == pytest.approx(expected, abs=1e-15)
        assert expected == pytest.approx(0.13081203594113694, abs=1e-15)

    def test_nonnegative_and_zero_iff_match(self):
        p = CategoricalDist(np.array([0.25, 0.25, 0.5]))
        for n in range(1, 13):
            for a in range(n + 1):
                for b in range(n - a + 1):
                    x = CountVector(np.array([a, b, n - a - b]), n)
                    v = empirical_divergence(x, p)
                    assert v >= 0.0
                    exact_match = all(
                        xi == n * pi for xi, pi in zip(x.counts, p.probs)
                    )
                    assert (v == 0.0) == exact_match

    def test_permutation_invariance(self):
        p = np.array([0.1, 0.2, 0.3, 0.4])
        x = CountVector(np.array([3, 0, 2, 5]), 10)
        base = empirical_divergence(x, p)
        for perm in itertools.permutations(range(4)):
            xp = CountVector(x.counts[list(perm)], 10)
            assert empirical_divergence(xp, p[list(perm)]) == pytest.approx(
                base, abs=1e-14
            )


class TestChainRule:
    def test_exact_match_case(self):
        x = CountVector(np.array([1, 1, 2]), 4)
        p = CategoricalDist(np.array([0.25, 0.25, 0.5]))
        binary, cond, weight = chain_rule_decompose(x, p)
        assert binary == 0.0 and cond == 0.0 and weight == 0.5

    def test_all_mass_last(self):
        x = CountVector(np.array([0, 0, 4]), 4)
        p = CategoricalDist(np.array([0.25, 0.25, 0.5]))
        binary, cond, weight = chain_rule_decompose(x, p)
        assert binary == pytest.approx(LOG2, abs=1e-15)
        assert weight == 0.0 and cond == 0.0

    def test_degenerate_last_prob(self):
        x = CountVector(np.array([0, 0, 4]), 4)
        with pytest.raises(DegenerateDistributionError):
            chain_rule_decompose(x, [0.0, 0.0, 1.0])

    @pytest.mark.parametrize("k", [3, 4])
    def test_identity_exhaustive(self, k):
        # decomposition reconstructs the divergence on every composition
        rng = np.random.default_rng(7)
        for _ in range(5):
            w = rng.uniform(0.1, 1.0, size=k)
            p = CategoricalDist(w / w.sum())
            for n in range(1, 21 if k == 3 else 11):
                for c in itertools.product(range(n + 1), repeat=k - 1):
                    if sum(c) > n:
                        continue
                    x = CountVector(np.array(list(c) + [n - sum(c)]), n)
                    binary, cond, weight = chain_rule_decompose(x, p)
                    assert binary + weight * cond == pytest.approx(
                        empirical_divergence(x, p), abs=1e-12
                    )


@given(
    st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5),
    st.lists(st.floats(0.01, 1.0), min_size=2, max_size=5),
)
@settings(max_examples=200, deadline=None)
def test_kl_nonnegative_property(wq, wp):
    if len(wq) != len(wp):
        return
    q = np.array(wq) / sum(wq)
    p = np.array(wp) / sum(wp)
    assert kl_divergence(q, p) >= 0.0
