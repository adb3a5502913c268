import json
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from symdis.cube import (
    Disjunction,
    EnumerationCapError,
    ProductDistribution,
    WeightProfile,
    binomial,
    dist_from_json,
    dist_to_json,
    eval_disjunction,
    exact_l1_error,
    exact_l2sq_error,
    layer_block_pmf,
    product_weight_pmf,
    sample,
    sample_counts,
    support,
)


@pytest.mark.parametrize("n, k, expected", [(4, 2, 6), (5, 0, 1), (3, 5, 0), (3, -1, 0), (0, 0, 1)])
def test_binomial(n, k, expected):
    assert binomial(n, k) == expected


def test_binomial_rejects_negative_n():
    with pytest.raises(ValueError):
        binomial(-1, 0)


class TestDisjunction:
    def test_monotone_all_zero(self):
        assert eval_disjunction(Disjunction(2, {1, 2}), (0, 0)) == 0

    def test_mixed_only_falsifier(self):
        c = Disjunction(2, {1}, {2})
        values = {x: eval_disjunction(c, x) for x in brute.points(2)}
        assert [x for x, v in values.items() if v == 0] == [(0, 1)]

    def test_empty_clause_is_zero(self):
        c = Disjunction(3)
        assert all(c(x) == 0 for x in brute.points(3))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            eval_disjunction(Disjunction(3, {1}), (0, 1))

    @pytest.mark.parametrize("kwargs", [dict(n=3, pos={1}, neg={1}), dict(n=3, pos={4}), dict(n=0)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            Disjunction(**kwargs)

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_product_formula(self, data):
        n = data.draw(st.integers(1, 10))
        lits = data.draw(st.lists(st.sampled_from([0, 1, 2]), min_size=n, max_size=n))
        pos = {i + 1 for i, l in enumerate(lits) if l == 1}
        neg = {i + 1 for i, l in enumerate(lits) if l == 2}
        c = Disjunction(n, pos, neg)
        for x in brute.points(n):
            prod = 1
            for i in pos:
                prod *= 1 - x[i - 1]
            for i in neg:
                prod *= x[i - 1]
            assert c(x) == 1 - prod


class TestLayerBlockPmf:
    def test_example_n4_r2(self):
        pmf = layer_block_pmf(4, 2, 2, 0)
        assert pmf == {(0, 0): Fraction(1, 6), (1, 0): Fraction(4, 6), (2, 0): Fraction(1, 6)}
        # oracle: count ones among x_1, x_2 over the six weight-2 points
        pts = brute.slice_points(4, 2)
        assert len(pts) == 6
        assert Fraction(sum(1 for x in pts if x[0] + x[1] == 1), 6) == Fraction(4, 6)

    def test_all_ones_layer(self):
        assert layer_block_pmf(3, 3, 1, 0) == {(1, 0): 1}

    def test_all_zeros_layer(self):
        assert layer_block_pmf(4, 0, 2, 1) == {(0, 0): 1}

    @pytest.mark.parametrize("args", [(4, 2, 3, 2), (4, 5, 1, 0), (4, 2, -1, 0)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            layer_block_pmf(*args)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_enumeration(self, n):
        for r in range(n + 1):
            pts = brute.slice_points(n, r)
            for k1 in range(n + 1):
                for k2 in range(n - k1 + 1):
                    counts = {}
                    for x in pts:
                        key = (sum(x[:k1]), sum(x[k1 : k1 + k2]))
                        counts[key] = counts.get(key, 0) + 1
                    want = {key: Fraction(c, len(pts)) for key, c in counts.items()}
                    assert layer_block_pmf(n, r, k1, k2) == want

    @pytest.mark.parametrize("n", range(1, 13))
    def test_marginal_is_hypergeometric(self, n):
        for r in range(n + 1):
            for k in range(n + 1):
                pmf = layer_block_pmf(n, r, k, 0)
                assert sum(pmf.values()) == 1
                for j in range(k + 1):
                    want = Fraction(comb(n - k, r - j) * comb(k, j), comb(n, r)) if 0 <= r - j else 0
                    assert pmf.get((j, 0), 0) == want


class TestProductWeightPmf:
    def test_uniform(self):
        half = Fraction(1, 2)
        assert product_weight_pmf([half] * 3) == [Fraction(comb(3, j), 8) for j in range(4)]

    def test_point_mass(self):
        assert product_weight_pmf([0, 0]) == [1, 0, 0]

    def test_hand_example(self):
        assert product_weight_pmf([Fraction(1, 3), Fraction(1, 2)]) == [
            Fraction(1, 3),
            Fraction(1, 2),
            Fraction(1, 6),
        ]

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            product_weight_pmf([Fraction(3, 2)])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=12), min_size=0, max_size=10))
    def test_matches_enumeration(self, mu):
        assert product_weight_pmf(mu) == brute.weight_pmf_by_enumeration(mu)

    def test_matches_enumeration_k14(self):
        rng = np.random.default_rng(5)
        mu = [Fraction(int(a), 17) for a in rng.integers(0, 18, size=14)]
        assert product_weight_pmf(mu) == brute.weight_pmf_by_enumeration(mu)


class TestDistributions:
    def test_weight_profile_validation(self):
        with pytest.raises(ValueError):
            WeightProfile(2, (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
        with pytest.raises(ValueError):
            WeightProfile(2, (1, 0))
        with pytest.raises(ValueError):
            WeightProfile(1, (Fraction(3, 2), Fraction(-1, 2)))

    def test_product_validation(self):
        with pytest.raises(ValueError):
            ProductDistribution(2, (Fraction(1, 2), 2))

    @pytest.mark.parametrize("n", range(1, 13))
    def test_symmetric_mass_sums_to_one(self, n):
        rho = [Fraction(m + 1) for m in range(n + 1)]
        total = sum(rho)
        D = WeightProfile(n, tuple(v / total for v in rho))
        assert sum(D.prob(x) for x in brute.points(n)) == 1
        assert sum(p for _, p in support(D)) == 1

    def test_product_support_matches_pointwise(self):
        D = ProductDistribution(4, (Fraction(1, 3), 0, Fraction(2, 5), 1))
        got = dict(support(D))
        for x in brute.points(4):
            assert got.get(x, 0) == brute.bernoulli_prob(x, D.mu)

    @pytest.mark.parametrize(
        "D",
        [
            WeightProfile(3, (Fraction(1, 7), Fraction(2, 7), 0, Fraction(4, 7))),
            ProductDistribution(3, (Fraction(1, 3), 0, 1)),
        ],
    )
    def test_json_round_trip(self, D):
        obj = json.loads(json.dumps(dist_to_json(D)))
        assert all("/" in v for v in obj["values"])
        assert dist_from_json(obj) == D

    def test_json_unknown_kind(self):
        with pytest.raises(ValueError):
            dist_from_json({"kind": "gaussian", "n": 1, "values": ["1/1"]})


class TestExactError:
    def test_identical(self):
        c = Disjunction(3, {1, 2})
        assert exact_l1_error(c, c, WeightProfile.uniform_cube(3)) == 0

    def test_single_bit(self):
        c = Disjunction(1, {1})
        assert exact_l1_error(c, lambda x: 1, ProductDistribution.uniform_cube(1)) == Fraction(1, 2)
        assert exact_l1_error(c, lambda x: 1, WeightProfile.uniform_cube(1)) == Fraction(1, 2)

    def test_zero_layer(self):
        c = Disjunction(4, {1, 2})
        assert exact_l1_error(c, lambda x: 1, WeightProfile.layer(4, 0)) == 1

    def test_l2sq(self):
        D = ProductDistribution.uniform_cube(2)
        assert exact_l2sq_error(lambda x: 2 * x[0], lambda x: 0, D) == 2

    def test_cap(self):
        with pytest.raises(EnumerationCapError):
            exact_l1_error(lambda x: 0, lambda x: 0, ProductDistribution.uniform_cube(6), cap=5)

    def test_cap_env(self, monkeypatch):
        monkeypatch.setenv("SYMDIS_ENUM_CAP", "3")
        with pytest.raises(EnumerationCapError):
            exact_l1_error(lambda x: 0, lambda x: 0, WeightProfile.uniform_cube(4))


class TestSampling:
    def test_point_mass_zero(self):
        xs = sample(WeightProfile.layer(5, 0), 1, 50)
        assert xs.shape == (50, 5) and not xs.any()

    def test_all_ones(self):
        xs = sample(ProductDistribution(4, (1, 1, 1, 1)), 1, 50)
        assert xs.all()

    def test_deterministic(self):
        D = WeightProfile.uniform_cube(6)
        assert np.array_equal(sample(D, 7, 100), sample(D, 7, 100))
        assert sample_counts(D, 7, 1000) == sample_counts(D, 7, 1000)

    def test_layer_frequencies_within_3_sigma(self):
        n, count = 10, 10**5
        D = WeightProfile.uniform_cube(n)
        xs = sample(D, 2024, count)
        freq = np.bincount(xs.sum(axis=1), minlength=n + 1)
        for m in range(n + 1):
            p = float(D.rho[m])
            sigma = np.sqrt(count * p * (1 - p))
            assert abs(freq[m] - count * p) <= 3 * sigma

    def test_points_within_layer_are_uniform(self):
        D = WeightProfile.layer(4, 2)
        xs = sample(D, 3, 60000)
        keys, counts = np.unique(xs, axis=0, return_counts=True)
        assert len(keys) == 6 and all(x.sum() == 2 for x in keys)
        sigma = np.sqrt(60000 * (1 / 6) * (5 / 6))
        assert np.all(np.abs(counts - 10000) <= 3 * sigma)

    def test_sample_counts_total_and_support(self):
        D = ProductDistribution(3, (Fraction(1, 4), 0, Fraction(1, 2)))
        counts = sample_counts(D, 11, 5000)
        assert sum(counts.values()) == 5000
        assert all(x[1] == 0 for x in counts)
