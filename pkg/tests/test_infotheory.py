import itertools
from math import log2

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import oracle_entropy, oracle_mi
from sfib.errors import AbsoluteContinuityError, ConfigError, DimensionError
from sfib.infotheory import (
    DiscreteDistribution,
    discretize,
    empirical_distribution,
    entropy,
    fdl_objective_terms,
    information_plane_point,
    joint_counts,
    kl_divergence,
    kl_joint_vs_product,
    make_bin_spec,
    mutual_information,
)


class TestBinning:
    def test_fixed_range_edges(self):
        spec = make_bin_spec(np.zeros((2, 3)), 4, (0, 1))
        for dim in range(2):
            np.testing.assert_allclose(spec.edges(dim), [0, 0.25, 0.5, 0.75, 1])

    def test_observed_range(self):
        spec = make_bin_spec(np.array([[-2.0, 0.0, 6.0]]), 3)
        assert spec.lower[0] == -2.0
        assert spec.upper[0] == 6.0 + 1e-12

    def test_constant_dimension(self):
        spec = make_bin_spec(np.array([[3.0, 3.0]]), 5)
        assert spec.upper[0] > spec.lower[0]
        np.testing.assert_array_equal(discretize([[3.0, 3.0]], spec), [[0, 0]])

    def test_bad_bin_count(self):
        with pytest.raises(ConfigError):
            make_bin_spec(np.zeros((1, 3)), 1)

    @pytest.mark.parametrize("v, expected", [(0.5, 2), (1.0, 3), (-7.0, 0), (0.0, 0), (0.2499, 0), (9.0, 3)])
    def test_discretize(self, v, expected):
        spec = make_bin_spec(np.zeros((1, 1)), 4, (0, 1))
        assert discretize([[v]], spec)[0, 0] == expected

    def test_max_lands_in_last_bin(self, rng):
        x = rng.standard_normal((3, 50))
        b = discretize(x, make_bin_spec(x, 30))
        assert b.min() == 0 and b.max() == 29
        np.testing.assert_array_equal(b.argmax(axis=1), x.argmax(axis=1))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            discretize(np.zeros((2, 3)), make_bin_spec(np.zeros((3, 3)), 4, (0, 1)))


class TestEntropy:
    def test_examples(self):
        assert entropy(empirical_distribution([[1, 1, 1, 1]])) == 0.0
        p = empirical_distribution([[0, 1, 2, 3]])
        assert len(p) == 4 and entropy(p) == pytest.approx(2.0, abs=1e-15)
        p = empirical_distribution([[0, 0, 1, 2]])
        assert sorted(p.probabilities) == [0.25, 0.25, 0.5]
        assert entropy(p) == pytest.approx(1.5, abs=1e-15)

    def test_multivariate_keys(self):
        p = empirical_distribution([[0, 0, 1], [0, 1, 1]])
        assert set(p.support) == {(0, 0), (0, 1), (1, 1)}

    def test_distribution_validation(self):
        with pytest.raises(ValueError):
            DiscreteDistribution({"a": 0.5})
        assert "b" not in DiscreteDistribution({"a": 1.0, "b": 0.0})


class TestJointAndMI:
    a = [[0, 0, 1, 1, 0, 1]]
    b = [[0, 1, 0, 1, 0, 1]]

    def test_direct_tally(self):
        j = joint_counts(self.a, self.b)
        assert j.total == 6
        assert j.counts == {((0,), (0,)): 2, ((0,), (1,)): 1, ((1,), (0,)): 1, ((1,), (1,)): 2}

    def test_tally_mi(self):
        # 1 + 1 - H(2/6, 1/6, 1/6, 2/6)
        expected = 2 - (2 * (1 / 3) * log2(3) + 2 * (1 / 6) * log2(6))
        assert expected == pytest.approx(0.0817, abs=1e-4)
        assert mutual_information(joint_counts(self.a, self.b)) == pytest.approx(expected, abs=1e-14)

    def test_identical_variables(self):
        a = [[0, 1, 2, 3]]
        j = joint_counts(a, a)
        assert len(j.counts) == 4
        assert mutual_information(j) == pytest.approx(2.0, abs=1e-15)

    def test_constant_partner(self):
        a = [[0, 1, 2, 2]]
        j = joint_counts(a, [[5, 5, 5, 5]])
        assert len(j.counts) == len(empirical_distribution(a))
        assert mutual_information(j) == 0.0

    def test_marginals_reproduce_counts(self, rng):
        a, b = rng.integers(0, 3, (2, 40)), rng.integers(0, 4, (1, 40))
        j = joint_counts(a, b)
        assert sum(j.counts.values()) == j.total == 40
        ea = empirical_distribution(a)
        for key, c in j.marginal_a().items():
            assert c / 40 == ea[key]

    def test_sample_count_mismatch(self):
        with pytest.raises(DimensionError):
            joint_counts([[0, 1]], [[0, 1, 2]])

    @settings(max_examples=200)
    @given(st.integers(1, 60).flatmap(lambda n: st.tuples(
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
        st.lists(st.integers(0, 5), min_size=n, max_size=n),
    )))
    def test_properties(self, ab):
        a, b = np.array([ab[0]]), np.array([ab[1]])
        j = joint_counts(a, b)
        mi = mutual_information(j)
        ha = entropy(empirical_distribution(a))
        hb = entropy(empirical_distribution(b))
        assert 0.0 <= mi <= min(ha, hb) + 1e-12
        assert mi == mutual_information(joint_counts(b, a))
        assert abs(mi - kl_joint_vs_product(j)) < 1e-12
        # deterministic relabeling of a's symbols leaves I unchanged
        relabeled = (np.array(ab[0]) * 7 + 3) % 11
        assert abs(mutual_information(joint_counts([relabeled], b)) - mi) < 1e-12


class TestBruteForceOracle:
    def test_exhaustive_univariate(self):
        # every pair of binned sequences with n <= 4 samples and 3 bins
        cases = 0
        for n in range(1, 5):
            seqs = list(itertools.product(range(3), repeat=n))
            for sa in seqs:
                a = np.array([sa])
                assert abs(entropy(empirical_distribution(a)) - oracle_entropy(a, 3)) < 1e-12
                for sb in seqs:
                    b = np.array([sb])
                    assert abs(mutual_information(joint_counts(a, b)) - oracle_mi(a, b, 3)) < 1e-12
                    cases += 1
        assert cases >= 100

    @pytest.mark.parametrize("seed", range(150))
    def test_random_multivariate(self, seed):
        rng = np.random.default_rng(seed)
        n, bins = rng.integers(1, 5), rng.integers(2, 4)
        a = rng.integers(0, bins, (rng.integers(1, 3), n))
        b = rng.integers(0, bins, (rng.integers(1, 3), n))
        assert abs(entropy(empirical_distribution(a)) - oracle_entropy(a, bins)) < 1e-12
        assert abs(mutual_information(joint_counts(a, b)) - oracle_mi(a, b, bins)) < 1e-12


class TestKL:
    def test_equal(self):
        p = DiscreteDistribution({"a": 0.3, "b": 0.7})
        assert kl_divergence(p, p) == 0.0

    def test_value(self):
        p = DiscreteDistribution({0: 0.75, 1: 0.25})
        q = DiscreteDistribution({0: 0.5, 1: 0.5})
        assert kl_divergence(p, q) == pytest.approx(0.75 * log2(1.5) - 0.25, abs=1e-15)
        assert kl_divergence(p, q) == pytest.approx(0.188722, abs=1e-6)

    def test_point_mass_vs_uniform(self):
        p = DiscreteDistribution({"a": 1.0})
        assert kl_divergence(p, DiscreteDistribution.uniform("ab")) == pytest.approx(1.0)

    def test_absolute_continuity(self):
        p = DiscreteDistribution({"a": 0.5, "c": 0.5})
        with pytest.raises(AbsoluteContinuityError):
            kl_divergence(p, DiscreteDistribution.uniform("ab"))

    def test_callable_reference(self):
        p = DiscreteDistribution({0: 0.75, 1: 0.25})
        assert kl_divergence(p, lambda key: 0.5) == pytest.approx(0.188722, abs=1e-6)


class TestFDLTerms:
    def test_mi_term_matches(self, rng):
        xb, tb = rng.integers(0, 5, (3, 50)), rng.integers(0, 5, (2, 50))
        mi_term, kl_u, h = fdl_objective_terms(xb, tb, 5, 2)
        assert abs(mi_term - mutual_information(joint_counts(xb, tb))) < 1e-12
        assert h == entropy(empirical_distribution(tb))
        assert abs(kl_u - (2 * log2(5) - h)) < 1e-12

    def test_uniform_t(self):
        tb = np.array(list(itertools.product(range(3), repeat=2))).T
        _, kl_u, h = fdl_objective_terms(tb, tb, 3, 2)
        assert kl_u == pytest.approx(0.0, abs=1e-12)
        assert h == pytest.approx(log2(9))

    def test_concentrated_t(self):
        tb = np.zeros((2, 10), dtype=int)
        _, kl_u, h = fdl_objective_terms(np.arange(10)[None, :], tb, 30, 2)
        assert h == 0.0
        assert kl_u == pytest.approx(log2(900), abs=1e-12)
        assert kl_u == pytest.approx(9.8138, abs=1e-4)

    def test_kl_uniform_closed_form_small_grid(self, rng):
        tb = rng.integers(0, 3, (2, 20))
        p = empirical_distribution(tb)
        q = DiscreteDistribution.uniform(itertools.product(range(3), repeat=2))
        assert abs(kl_divergence(p, q) - (log2(9) - entropy(p))) < 1e-12


def test_information_plane_point_identical_variables(rng):
    x = rng.random((2, 40))
    mi, h = information_plane_point(x, x, bin_count=1000, t_range=None)
    assert mi == pytest.approx(h)
    assert h == pytest.approx(log2(40))
