import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from constructive_born.errors import (
    IndexOutOfRange,
    InfeasibleDenominator,
    WeightError,
    ZeroProbability,
)
from constructive_born.logic import Atom, Or, atoms, count_nodes, unparse
from constructive_born.weights import (
    WeightVector,
    approximation_error,
    best_weights_for_total,
    expand_replicas,
    to_weights,
    weight_probability,
)
from helpers import brute_force_weights


class TestToWeights:
    def test_equal(self):
        assert to_weights([0.5, 0.5], 4096).weights == (1, 1)

    def test_quarter(self):
        assert to_weights([0.25, 0.75], 4096).weights == (1, 3)

    def test_thirds_against_exhaustive_search(self):
        probs = [0.333333, 0.666667]
        err, total, w = brute_force_weights(probs, 100)
        assert (total, w) == (3, [1, 2])
        assert to_weights(probs, 100).weights == (1, 2)

    def test_default_denominator(self):
        assert to_weights([0.2, 0.3, 0.5]).weights == (2, 3, 5)

    def test_single_outcome(self):
        assert to_weights([1.0], 5).weights == (1,)

    def test_zero_probability_rejected(self):
        with pytest.raises(ZeroProbability):
            to_weights([1.0, 0.0])

    def test_not_normalized(self):
        with pytest.raises(WeightError):
            to_weights([0.5, 0.6])

    def test_infeasible_denominator(self):
        with pytest.raises(InfeasibleDenominator):
            to_weights([0.25, 0.25, 0.5], 2)

    def test_accepts_fractions(self):
        assert to_weights([Fraction(2, 7), Fraction(5, 7)]).weights == (2, 5)

    def test_matches_exhaustive_search(self, rng):
        for _ in range(60):
            n = int(rng.integers(2, 4))
            max_den = int(rng.integers(n, 31 if n == 3 else 60))
            probs = rng.dirichlet(np.full(n, rng.choice([0.3, 1.0, 4.0]))).tolist()
            if min(probs) <= 0:
                continue
            err, total, w = brute_force_weights(probs, max_den)
            got = to_weights(probs, max_den)
            assert got.total == total
            assert list(got.weights) == w
            assert approximation_error(probs, got) == err

    def test_exact_for_rationals(self, rng):
        for _ in range(300):
            n = int(rng.integers(2, 9))
            total = int(rng.integers(n, 4097))
            cuts = np.sort(rng.choice(np.arange(1, total), n - 1, replace=False))
            w = np.diff(np.concatenate([[0], cuts, [total]]))
            probs = [Fraction(int(x), total) for x in w]
            got = to_weights([float(p) for p in probs], 4096)
            assert got.probabilities() == tuple(probs)

    def test_canonical_gcd(self, rng):
        for _ in range(200):
            probs = rng.dirichlet(np.ones(int(rng.integers(2, 6))))
            w = to_weights(probs, int(rng.integers(10, 500)))
            assert math.gcd(*w.weights) == 1

    def test_tiny_component_cannot_meet_half_step(self):
        # w >= 1 puts every component at >= 1/T >= 1/D, so p = 1e-5 is off by > 1/(2D)
        p = [1e-5, 1 - 1e-5]
        got = to_weights(p, 4096)
        assert approximation_error(p, got) >= 1 / got.total - 1e-5 - 1e-15
        assert approximation_error(p, got) > 1 / (2 * 4096)


class TestBestWeightsForTotal:
    def test_against_composition_enumeration(self, rng):
        for _ in range(1500):
            n = int(rng.integers(2, 5))
            probs = rng.dirichlet(np.full(n, rng.choice([0.2, 1.0, 5.0]))).tolist()
            total = int(rng.integers(n, 22))
            best = min(
                max(abs(wi / total - p) for wi, p in zip(w, probs))
                for w in _compositions(total, n)
            )
            w, err = best_weights_for_total(probs, total)
            assert sum(w) == total and min(w) >= 1
            assert err == pytest.approx(best, abs=1e-15)

    def test_total_below_outcome_count(self):
        with pytest.raises(InfeasibleDenominator):
            best_weights_for_total([0.5, 0.25, 0.25], 2)


def _compositions(total, n):
    for cuts in itertools.combinations(range(1, total), n - 1):
        bounds = (0, *cuts, total)
        yield [bounds[i + 1] - bounds[i] for i in range(n)]


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(1, 500), min_size=2, max_size=6),
    st.integers(16, 4096),
)
def test_round_trip_within_half_step(raw, max_den):
    total = sum(raw)
    probs = [w / total for w in raw]
    if total <= max_den:
        assert to_weights(probs, max_den).probabilities() == tuple(
            Fraction(w, total) for w in raw
        )
    elif min(probs) >= 1 / max_den:
        assert approximation_error(probs, to_weights(probs, max_den)) <= 1 / (2 * max_den)


class TestWeightProbability:
    def test_values(self):
        assert weight_probability(WeightVector((1, 1)), 1) == Fraction(1, 2)
        assert weight_probability(WeightVector((1, 3)), 2) == Fraction(3, 4)
        assert weight_probability(WeightVector.canonical((2, 2, 4)), 3) == Fraction(1, 2)

    def test_unnormalized_vector_same_ratio(self):
        # (2, 2, 4) is not canonical; its probabilities equal those of (1, 1, 2)
        with pytest.raises(WeightError):
            WeightVector((2, 2, 4))
        assert WeightVector.canonical((2, 2, 4)).weights == (1, 1, 2)

    def test_sum_is_exactly_one(self, rng):
        for _ in range(100):
            w = WeightVector.canonical(rng.integers(1, 1000, size=int(rng.integers(1, 10))).tolist())
            assert sum(weight_probability(w, n) for n in range(1, len(w) + 1)) == 1

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            weight_probability(WeightVector((1, 3)), 3)

    def test_rejects_nonpositive(self):
        with pytest.raises(WeightError):
            WeightVector((0, 1))


class TestExpandReplicas:
    def test_single(self):
        assert expand_replicas("a1", 1) == Atom("a1_1")

    def test_three(self):
        p = expand_replicas("a2", 3)
        assert p == Or(Or(Atom("a2_1"), Atom("a2_2")), Atom("a2_3"))
        assert unparse(p) == "((a2_1 | a2_2) | a2_3)"

    def test_count(self):
        p = expand_replicas("a1", 7)
        assert len(atoms(p)) == 7
        assert count_nodes(p, Atom) == 7

    def test_rejects_zero(self):
        with pytest.raises(WeightError):
            expand_replicas("a1", 0)
