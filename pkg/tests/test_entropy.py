import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from superprob import (
    Event,
    is_pure,
    logical_entropy_density,
    logical_entropy_distribution,
    logical_entropy_partition,
    luders,
    measurement_entropy_report,
    mix,
    partition_of,
    restrict_partition,
    rho_partition,
    rho_sigma,
)
from superprob.errors import NormalizationError

from oracles import pair_draw_distinct
from strategies import masks, spaces


class TestDistribution:
    def test_third_two_thirds(self):
        assert logical_entropy_distribution([1 / 3, 2 / 3]) == pytest.approx(4 / 9, abs=1e-12)

    def test_point_mass(self):
        assert logical_entropy_distribution([1]) == 0.0

    def test_uniform_four(self):
        assert logical_entropy_distribution([0.25] * 4) == pytest.approx(0.75, abs=1e-12)

    def test_normalization(self):
        with pytest.raises(NormalizationError):
            logical_entropy_distribution([0.5, 0.4])

    @given(st.lists(st.floats(0.01, 1), min_size=1, max_size=8))
    def test_range(self, w):
        q = [x / sum(w) for x in w]
        q[0] += 1 - sum(q)
        h = logical_entropy_distribution(q)
        assert -1e-12 <= h <= 1 - 1 / len(q) + 1e-12
        assert h == pytest.approx(sum(a * b for i, a in enumerate(q) for j, b in enumerate(q) if i != j), abs=1e-12)


class TestPartition:
    def test_restricted_colour(self, cards, colour_partition):
        r = restrict_partition(colour_partition, cards.event(["club", "diamond", "spade"]))
        assert logical_entropy_partition(r) == pytest.approx(4 / 9, abs=1e-12)

    def test_indiscrete(self, cards):
        assert logical_entropy_partition(cards.indiscrete_partition()) == 0.0

    def test_discrete_uniform(self, cards):
        assert logical_entropy_partition(cards.discrete_partition()) == pytest.approx(0.75, abs=1e-12)

    @given(st.data())
    @settings(max_examples=200)
    def test_pair_draw_semantics(self, data):
        space = data.draw(spaces(max_n=6, allow_zero=True))
        assign = data.draw(st.lists(st.integers(0, 3), min_size=space.n, max_size=space.n))
        pi = partition_of(space.variable(dict(zip(space.labels, assign))))
        assert logical_entropy_partition(pi) == pytest.approx(pair_draw_distinct(space.probs, assign), abs=1e-9)


class TestDensity:
    def test_after_colour_measurement(self, cards, colour_partition):
        rho = luders(rho_sigma(cards.event(["club", "diamond", "spade"])), colour_partition)
        assert logical_entropy_density(rho) == pytest.approx(4 / 9, abs=1e-12)

    def test_pure_is_zero(self, cards):
        assert logical_entropy_density(rho_sigma(cards.event(["club", "heart", "spade"]))) == pytest.approx(0, abs=1e-12)

    def test_partition_matrix(self, cards, colour_partition):
        assert logical_entropy_density(rho_partition(colour_partition)) == pytest.approx(
            logical_entropy_partition(colour_partition), abs=1e-12
        )

    @given(st.data())
    def test_zero_iff_pure(self, data):
        space = data.draw(spaces())
        S = Event(space, data.draw(masks(space)))
        T = Event(space, data.draw(masks(space)))
        w = data.draw(st.sampled_from([0.0, 0.25, 0.5, 1.0]))
        rho = mix([w, 1 - w], [rho_sigma(S), rho_sigma(T)])
        h = logical_entropy_density(rho)
        assert h == pytest.approx(1 - np.trace(rho.entries @ rho.entries), abs=1e-9)
        assert (h <= 1e-9) == is_pure(rho)


class TestReport:
    def test_colour_measurement(self, cards, colour_partition):
        rep = measurement_entropy_report(rho_sigma(cards.event(["club", "diamond", "spade"])), colour_partition)
        assert rep.before == pytest.approx(0, abs=1e-9)
        assert rep.after == pytest.approx(4 / 9, abs=1e-9)
        assert rep.created == pytest.approx(4 / 9, abs=1e-9)
        assert rep.zeroed_square_sum == pytest.approx(4 * (1 / 3) ** 2, abs=1e-9)

    def test_indiscrete(self, cards):
        rep = measurement_entropy_report(rho_sigma(cards.universe()), cards.indiscrete_partition())
        assert rep.created == 0 and rep.zeroed_square_sum == 0

    def test_coin(self, coin):
        rep = measurement_entropy_report(rho_sigma(coin.universe()), coin.discrete_partition())
        assert rep.created == pytest.approx(0.5, abs=1e-12)
        assert rep.zeroed_square_sum == pytest.approx(2 * 0.5**2, abs=1e-12)

    def test_as_dict_has_all_fields(self, coin):
        rep = measurement_entropy_report(rho_sigma(coin.universe()), coin.discrete_partition())
        assert set(rep.as_dict()) == {"before", "after", "created", "zeroed_square_sum"}

    @given(st.data())
    @settings(max_examples=200)
    def test_created_equals_zeroed_on_random_instances(self, data):
        space = data.draw(spaces())
        S = Event(space, data.draw(masks(space)))
        assign = data.draw(st.lists(st.integers(0, 3), min_size=space.n, max_size=space.n))
        pi = partition_of(space.variable(dict(zip(space.labels, assign))))
        before = rho_sigma(S)
        rep = measurement_entropy_report(before, pi)
        after = luders(before, pi)
        # independent route: sum squares of exactly the entries the projections removed
        zeroed = before.entries[(after.entries == 0) & (before.entries != 0)]
        assert rep.created == pytest.approx(float(np.sum(zeroed**2)), abs=1e-9)
        assert rep.created == pytest.approx(rep.after - rep.before, abs=1e-12)
        assert rep.after >= rep.before - 1e-12
