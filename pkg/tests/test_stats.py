import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqrules.errors import SeqRulesError
from seqrules.stats import (KaplanMeierEstimate, StatAccumulator,
                            hypergeometric_tail, kaplan_meier, log_rank)

from oracles import (exact_hypergeom_tail, naive_km, naive_log_rank,
                     two_pass_stats)


class TestHypergeometric:
    def test_small_tail_exact(self):
        # population 4, successes 2, draws 2, tail at 2: C(2,2)C(2,0)/C(4,2)
        assert hypergeometric_tail(4, 2, 2, 2) == pytest.approx(1 / 6, abs=1e-12)

    def test_draw_everything(self):
        assert hypergeometric_tail(8, 5, 8, 5) == 1.0

    def test_tail_at_zero(self):
        assert hypergeometric_tail(10, 5, 3, 0) == 1.0

    def test_against_exact_enumeration(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            population = int(rng.integers(2, 31))
            successes = int(rng.integers(1, population + 1))
            draws = int(rng.integers(1, population + 1))
            k = int(rng.integers(0, min(draws, successes) + 1))
            got = hypergeometric_tail(population, successes, draws, k)
            want = exact_hypergeom_tail(population, successes, draws, k)
            assert got == pytest.approx(want, abs=1e-12)

    def test_log_space_survives_large_counts(self):
        value = hypergeometric_tail(200000, 100000, 100000, 60000)
        assert 0.0 <= value <= 1.0
        assert math.isfinite(value)


class TestKaplanMeier:
    def test_no_events(self):
        est = kaplan_meier([5, 10, 15], [0, 0, 0])
        assert est.times == ()
        assert est.at(100.0) == 1.0

    def test_all_events(self):
        est = kaplan_meier([1, 2, 3], [1, 1, 1])
        assert est.times == (1.0, 2.0, 3.0)
        assert est.probabilities == pytest.approx((2 / 3, 1 / 3, 0.0))

    def test_censoring_mid(self):
        est = kaplan_meier([1, 2, 3], [1, 0, 1])
        assert est.times == (1.0, 3.0)
        assert est.probabilities == pytest.approx((2 / 3, 0.0))

    def test_tie_events_before_censorings(self):
        # censored at t=2 still at risk for the event at t=2
        est = kaplan_meier([1, 2, 2, 3], [1, 1, 0, 0])
        assert est.probabilities == pytest.approx((3 / 4, (3 / 4) * (2 / 3)))

    def test_empty_error(self):
        with pytest.raises(SeqRulesError):
            kaplan_meier([], [])

    def test_against_naive_recomputation(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            k = int(rng.integers(1, 201))
            times = np.round(rng.exponential(5.0, k), 2)
            events = (rng.uniform(size=k) < 0.7).astype(float)
            est = kaplan_meier(times, events)
            ot, os_ = naive_km(times, events)
            assert list(est.times) == pytest.approx(ot, abs=0)
            assert list(est.probabilities) == pytest.approx(os_, abs=1e-12)

    def test_lookup_right_continuous(self):
        est = KaplanMeierEstimate((1.0,), (2 / 3,))
        assert est.at(0.5) == 1.0
        assert est.at(1.0) == 2 / 3
        assert est.at(5.0) == 2 / 3
        assert est.before(1.0) == 1.0


class TestLogRank:
    def test_identical_groups(self):
        t = [1, 2, 3, 4]
        e = [1, 1, 0, 1]
        res = log_rank(t, e, t, e)
        assert res.statistic == pytest.approx(0.0, abs=1e-12)
        assert res.p_value == pytest.approx(1.0)

    def test_clearly_separated_vs_oracle(self):
        res = log_rank([1, 2, 3], [1, 1, 1], [10, 20, 30], [1, 1, 1])
        stat, p = naive_log_rank([1, 2, 3], [1, 1, 1], [10, 20, 30], [1, 1, 1])
        assert res.statistic == pytest.approx(stat, abs=1e-9)
        assert res.p_value == pytest.approx(p, abs=1e-9)

    def test_random_vs_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(40):
            na, nb = int(rng.integers(2, 40)), int(rng.integers(2, 40))
            ta = np.round(rng.exponential(3, na), 1)
            tb = np.round(rng.exponential(5, nb), 1)
            ea = (rng.uniform(size=na) < 0.8).astype(float)
            eb = (rng.uniform(size=nb) < 0.8).astype(float)
            res = log_rank(ta, ea, tb, eb)
            stat, p = naive_log_rank(list(ta), list(ea), list(tb), list(eb))
            assert res.statistic == pytest.approx(stat, abs=1e-9)
            assert res.p_value == pytest.approx(p, abs=1e-9)

    def test_symmetry(self):
        rng = np.random.default_rng(14)
        ta = rng.exponential(3, 20)
        tb = rng.exponential(5, 25)
        ea = (rng.uniform(size=20) < 0.7).astype(float)
        eb = (rng.uniform(size=25) < 0.7).astype(float)
        r1 = log_rank(ta, ea, tb, eb)
        r2 = log_rank(tb, eb, ta, ea)
        assert r1.statistic == pytest.approx(r2.statistic, abs=1e-9)

    def test_empty_group_error(self):
        with pytest.raises(SeqRulesError):
            log_rank([1, 2], [1, 1], [], [])

    def test_no_events_at_all(self):
        res = log_rank([1, 2], [0, 0], [3, 4], [0, 0])
        assert (res.statistic, res.p_value) == (0.0, 1.0)


class TestAccumulator:
    def test_push_basic(self):
        acc = StatAccumulator()
        for v in (1.0, 2.0, 3.0):
            acc.push(v)
        assert acc.count == 3
        assert acc.mean == pytest.approx(2.0)
        assert acc.variance == pytest.approx(2 / 3)

    def test_push_then_remove_restores(self):
        acc = StatAccumulator()
        for v in (4.0, 7.5, -2.0):
            acc.push(v)
        before = acc.copy()
        acc.push(11.25)
        acc.remove(11.25)
        assert acc.count == before.count
        assert acc.mean == pytest.approx(before.mean, abs=1e-9)
        assert acc.m2 == pytest.approx(before.m2, abs=1e-9)

    def test_remove_empty_error(self):
        with pytest.raises(SeqRulesError):
            StatAccumulator().remove(1.0)

    def test_random_interleaving_vs_two_pass(self):
        rng = np.random.default_rng(15)
        acc = StatAccumulator()
        bag = []
        for _ in range(10_000):
            if bag and rng.uniform() < 0.4:
                value = bag.pop(int(rng.integers(len(bag))))
                acc.remove(value)
            else:
                value = float(np.round(rng.normal(0, 50), 3))
                bag.append(value)
                acc.push(value)
            if len(bag) % 500 == 0 and bag:
                n, mean, var = two_pass_stats(bag)
                assert acc.count == n
                assert acc.mean == pytest.approx(mean, abs=1e-9)
                assert acc.variance == pytest.approx(var, abs=1e-9)
        n, mean, var = two_pass_stats(bag)
        assert acc.count == n
        assert acc.mean == pytest.approx(mean, abs=1e-9)
        assert acc.variance == pytest.approx(var, abs=1e-9)

    @given(st.lists(st.floats(min_value=-100, max_value=100,
                              allow_nan=False), min_size=1, max_size=50))
    @settings(max_examples=60, deadline=None)
    def test_matches_two_pass_property(self, values):
        acc = StatAccumulator()
        for v in values:
            acc.push(v)
        n, mean, var = two_pass_stats(values)
        assert acc.count == n
        assert acc.mean == pytest.approx(mean, abs=1e-9)
        assert acc.variance == pytest.approx(var, abs=1e-9)
