import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superprob import (
    DensityMatrix,
    Event,
    is_pure,
    ket_of_event,
    make_outcome_space,
    mix,
    partition_of,
    rho_delta,
    rho_partition,
    rho_sigma,
)
from superprob.errors import (
    ConditioningOnNullError,
    DensityMatrixError,
    InternalConsistencyError,
    NormalizationError,
    SpaceMismatchError,
)

from oracles import sigma_by_loops
from strategies import masks, spaces

r2 = 1 / math.sqrt(2)


class TestKet:
    def test_fair_coin(self, coin):
        np.testing.assert_allclose(ket_of_event(coin.universe()).amplitudes, [r2, r2], atol=1e-12)

    def test_singleton(self, cards):
        np.testing.assert_array_equal(ket_of_event(cards.singleton("club")).amplitudes, [1, 0, 0, 0])

    def test_red_suits(self, cards):
        # oracle: sqrt((1/4) / (1/2)) on diamond and heart
        v = ket_of_event(cards.event(["diamond", "heart"])).amplitudes
        np.testing.assert_allclose(v, [0, r2, r2, 0], atol=1e-12)

    def test_null_event(self):
        space = make_outcome_space(["x", "y"], [1.0, 0.0])
        with pytest.raises(ConditioningOnNullError):
            ket_of_event(space.event(["y"]))


class TestRhoDelta:
    def test_coin(self, coin):
        assert rho_delta(coin.universe()).allclose([[0.5, 0], [0, 0.5]], atol=1e-12)

    def test_singleton_is_projector(self, cards):
        rho = rho_delta(cards.singleton("heart"))
        expected = np.zeros((4, 4))
        expected[2, 2] = 1
        np.testing.assert_array_equal(rho.entries, expected)

    def test_three_cards(self, cards):
        rho = rho_delta(cards.event(["club", "diamond", "spade"]))
        np.testing.assert_allclose(rho.entries, np.diag([1 / 3, 1 / 3, 0, 1 / 3]), atol=1e-12)
        assert np.count_nonzero(rho.entries - np.diag(np.diag(rho.entries))) == 0


class TestRhoSigma:
    def test_red_suits(self, cards):
        expected = [[0, 0, 0, 0], [0, 0.5, 0.5, 0], [0, 0.5, 0.5, 0], [0, 0, 0, 0]]
        assert rho_sigma(cards.event(["diamond", "heart"])).allclose(expected, atol=1e-12)

    def test_three_cards(self, cards):
        t = 1 / 3
        expected = [[t, t, 0, t], [t, t, 0, t], [0, 0, 0, 0], [t, t, 0, t]]
        assert rho_sigma(cards.event(["club", "diamond", "spade"])).allclose(expected, atol=1e-12)

    def test_singleton_equals_delta(self, cards):
        S = cards.singleton("diamond")
        np.testing.assert_array_equal(rho_sigma(S).entries, rho_delta(S).entries)

    def test_read_only(self, cards):
        rho = rho_sigma(cards.universe())
        with pytest.raises(ValueError):
            rho.entries[0, 0] = 2.0


class TestRhoPartition:
    def test_discrete_is_delta(self, cards):
        assert rho_partition(cards.discrete_partition()).allclose(rho_delta(cards.universe()), atol=1e-12)

    def test_indiscrete_is_sigma(self, cards):
        assert rho_partition(cards.indiscrete_partition()).allclose(rho_sigma(cards.universe()), atol=1e-12)

    def test_suit_colour(self, cards, colour_partition):
        q = 0.25
        expected = [[q, 0, 0, q], [0, q, q, 0], [0, q, q, 0], [q, 0, 0, q]]
        assert rho_partition(colour_partition).allclose(expected, atol=1e-12)


class TestMix:
    def test_half_half_colours(self, cards, colour_partition):
        b1, b2 = colour_partition.blocks
        m = mix([0.5, 0.5], [rho_sigma(b1), rho_sigma(b2)])
        assert m.allclose(rho_partition(colour_partition), atol=1e-12)

    def test_point_mass(self, cards):
        rho = rho_sigma(cards.event(["club", "heart"]))
        other = rho_delta(cards.universe())
        assert mix([1, 0], [rho, other]).allclose(rho, atol=0)

    def test_coin_singletons(self, coin):
        m = mix([0.5, 0.5], [rho_sigma(coin.singleton("H")), rho_sigma(coin.singleton("T"))])
        assert m.allclose(rho_delta(coin.universe()), atol=1e-12)

    def test_weight_normalization(self, coin):
        with pytest.raises(NormalizationError):
            mix([0.5, 0.6], [rho_delta(coin.universe())] * 2)

    def test_space_mismatch(self, coin, cards):
        with pytest.raises(SpaceMismatchError):
            mix([0.5, 0.5], [rho_delta(coin.universe()), rho_delta(cards.universe())])


class TestPurity:
    def test_superposition_is_pure(self, cards):
        assert is_pure(rho_sigma(cards.event(["diamond", "heart"])))

    def test_half_half_is_mixed(self, colour_partition):
        assert not is_pure(rho_partition(colour_partition))

    def test_singleton_delta_is_pure(self, cards):
        assert is_pure(rho_delta(cards.singleton("spade")))

    def test_disagreement_is_reported(self, coin):
        eps = 6e-10
        rho = DensityMatrix(coin, [[1 - eps, 0], [0, eps]])
        with pytest.raises(InternalConsistencyError):
            is_pure(rho)


class TestValidation:
    def test_rejects_asymmetric(self, coin):
        with pytest.raises(DensityMatrixError):
            DensityMatrix(coin, [[0.5, 0.1], [0.0, 0.5]])

    def test_rejects_bad_trace(self, coin):
        with pytest.raises(DensityMatrixError):
            DensityMatrix.from_array(coin, [[0.5, 0], [0, 0.6]])

    def test_rejects_negative_eigenvalue(self, coin):
        with pytest.raises(DensityMatrixError):
            DensityMatrix.from_array(coin, [[0.5, 0.7], [0.7, 0.5]])

    def test_rejects_wrong_shape(self, coin):
        with pytest.raises(DensityMatrixError):
            DensityMatrix(coin, np.eye(3) / 3)

    def test_accepts_valid(self, coin):
        DensityMatrix.from_array(coin, [[0.5, 0.5], [0.5, 0.5]])


def _check_invariants(rho):
    a = rho.entries
    assert np.array_equal(a, a.T)
    assert abs(rho.trace - 1) <= 1e-9
    assert np.linalg.eigvalsh(a)[0] >= -1e-9
    assert rho.purity() == pytest.approx(np.trace(a @ a), abs=1e-9)


class TestProperties:
    @given(st.data())
    def test_constructed_matrices_are_valid(self, data):
        space = data.draw(spaces(allow_zero=True))
        S = Event(space, data.draw(masks(space)))
        if S.probability <= 0:
            return
        for rho in (rho_delta(S), rho_sigma(S)):
            _check_invariants(rho)

    @given(st.data())
    def test_sigma_idempotent_and_equals_outer_product(self, data):
        space = data.draw(spaces())
        S = Event(space, data.draw(masks(space)))
        rho = rho_sigma(S)
        a = rho.entries
        assert np.max(np.abs(a @ a - a)) <= 1e-9
        np.testing.assert_allclose(a, sigma_by_loops(space.probs, S.members), atol=1e-12)
        np.testing.assert_allclose(a, ket_of_event(S).density().entries, atol=1e-12)

    @given(st.data())
    def test_delta_idempotent_iff_singleton(self, data):
        space = data.draw(spaces())
        S = Event(space, data.draw(masks(space)))
        a = rho_delta(S).entries
        assert (np.max(np.abs(a @ a - a)) <= 1e-9) == (len(S) == 1)

    def test_delta_idempotent_with_null_outcome(self):
        # a zero-probability member contributes nothing, so |S| = 2 can still be pure
        space = make_outcome_space(["a", "b"], [1.0, 0.0])
        assert is_pure(rho_delta(space.universe()))

    @given(st.data())
    def test_same_diagonal(self, data):
        space = data.draw(spaces(allow_zero=True))
        S = Event(space, data.draw(masks(space)))
        if S.probability <= 0:
            return
        np.testing.assert_array_equal(np.diag(rho_delta(S).entries), np.diag(rho_sigma(S).entries))

    @given(st.data())
    def test_delta_decomposes_into_singletons(self, data):
        space = data.draw(spaces())
        S = Event(space, data.draw(masks(space)))
        p_s = S.probability
        parts = [Event(space, 1 << i) for i in S.indices]
        weights = [space.probs[i] / p_s for i in S.indices]
        total = sum(w * rho_delta(e).entries for w, e in zip(weights, parts))
        np.testing.assert_allclose(rho_delta(S).entries, total, atol=1e-12)

    @given(st.data())
    @settings(max_examples=50)
    def test_partition_matrix_is_valid(self, data):
        space = data.draw(spaces())
        assign = data.draw(st.lists(st.integers(0, 3), min_size=space.n, max_size=space.n))
        f = space.variable(dict(zip(space.labels, assign)))
        _check_invariants(rho_partition(partition_of(f)))
