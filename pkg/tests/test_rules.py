import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seqrules.dataset import set_role
from seqrules.errors import SchemaError
from seqrules.rules import (ClassConsequence, Covering, IntervalCondition,
                            NominalCondition, Rule, ValueConsequence,
                            covering_stats, covers, format_rule,
                            merge_condition, premise_mask)

from conftest import make_ds, nominal, numeric


class TestCovers:
    def test_nominal_equal(self):
        premise = (NominalCondition(0, 0),)
        assert covers(premise, [0.0])
        assert not covers(premise, [1.0])

    def test_open_upper_bound(self):
        premise = (IntervalCondition(0, lower=2, upper=5, lower_closed=True),)
        assert covers(premise, [2.0])
        assert covers(premise, [4.999])
        assert not covers(premise, [5.0])

    def test_missing_cell_is_false(self):
        assert not covers((NominalCondition(0, 0),), [math.nan])
        assert not covers((IntervalCondition(0, upper=5, upper_closed=True),),
                          [math.nan])

    def test_empty_premise_covers_all(self):
        assert covers((), [1.0, math.nan])

    def test_out_of_range_attribute(self):
        with pytest.raises(SchemaError):
            covers((NominalCondition(3, 0),), [1.0])


class TestMerge:
    def test_interval_intersection(self):
        premise = (IntervalCondition(0, lower=1, upper=8, upper_closed=True),)
        merged = merge_condition(premise, IntervalCondition(0, lower=3, upper=10))
        assert merged == (IntervalCondition(0, lower=3, upper=8,
                                            upper_closed=True),)

    def test_merge_covers_intersection(self):
        rng = np.random.default_rng(5)
        values = rng.uniform(0, 10, (200, 1))
        a = IntervalCondition(0, lower=2, upper=7, upper_closed=True)
        b = IntervalCondition(0, lower=4, lower_closed=True)
        both = premise_mask((a, b), values)
        merged = premise_mask(merge_condition((a,), b), values)
        assert np.array_equal(both, merged)

    def test_monotone_coverage_shrinks(self):
        rng = np.random.default_rng(6)
        values = np.column_stack([rng.integers(0, 3, 100).astype(float),
                                  rng.uniform(0, 10, 100)])
        premise = (NominalCondition(0, 1),)
        extended = merge_condition(premise, IntervalCondition(1, upper=5,
                                                              upper_closed=True))
        before = premise_mask(premise, values)
        after = premise_mask(extended, values)
        assert not (after & ~before).any()

    @given(st.lists(st.floats(min_value=0, max_value=10, allow_nan=False),
                    min_size=1, max_size=60),
           st.floats(min_value=0, max_value=10, allow_nan=False),
           st.floats(min_value=0, max_value=10, allow_nan=False))
    @settings(max_examples=60, deadline=None)
    def test_adding_condition_never_grows_coverage(self, xs, lo, hi):
        values = np.array(xs).reshape(-1, 1)
        base = (IntervalCondition(0, lower=min(lo, hi) - 1),)
        cond = IntervalCondition(0, upper=max(lo, hi), upper_closed=True)
        before = premise_mask(base, values)
        after = premise_mask(merge_condition(base, cond), values)
        assert not (after & ~before).any()


class TestCoveringStats:
    def test_classification_hand_count(self):
        ds = make_ds([nominal("a", "x", "y"),
                      nominal("cls", "c", "d", role="label")],
                     [[0, 0], [0, 0], [1, 1], [1, 1]])
        rule = Rule((NominalCondition(0, 0),), ClassConsequence(0))
        cov = covering_stats(rule, ds)
        assert (cov.p, cov.n, cov.P, cov.N) == (2, 0, 2, 2)

    def test_classification_counts_partition(self):
        rng = np.random.default_rng(7)
        ds = make_ds([numeric("v"), nominal("cls", "c", "d", role="label")],
                     np.column_stack([rng.uniform(0, 10, 40),
                                      rng.integers(0, 2, 40)]))
        rule = Rule((IntervalCondition(0, upper=5, upper_closed=True),),
                    ClassConsequence(0))
        cov = covering_stats(rule, ds)
        mask = premise_mask(rule.premise, ds.values)
        assert cov.p + cov.n == int(mask.sum())
        assert cov.P + cov.N == ds.n_examples

    def test_survival_convention(self):
        ds = make_ds([numeric("x"), numeric("t", role="survival_time"),
                      nominal("e", "0", "1", role="label")],
                     [[i, i + 1.0, 1] for i in range(10)])
        rule = Rule((IntervalCondition(0, upper=6.5, upper_closed=True),),
                    ClassConsequence(0))
        cov = covering_stats(rule, ds)
        assert (cov.p, cov.n, cov.P, cov.N) == (7, 0, 10, 0)
        assert cov.survival

    def test_regression_zero_sigma(self):
        ds = make_ds([numeric("v"), numeric("y", role="label")],
                     [[1, 5], [2, 5], [3, 5], [9, 7]])
        rule = Rule((IntervalCondition(0, upper=4, upper_closed=True),),
                    ValueConsequence(0, 0))
        cov = covering_stats(rule, ds)
        assert cov.p == 3 and cov.n == 0

    def test_regression_sigma_window(self):
        # covered labels {0, 0, 10}: mean 10/3, sigma = sqrt(200/9)
        ds = make_ds([numeric("v"), numeric("y", role="label")],
                     [[1, 0], [2, 0], [3, 10], [9, 100]])
        rule = Rule((IntervalCondition(0, upper=4, upper_closed=True),),
                    ValueConsequence(0, 0))
        cov = covering_stats(rule, ds)
        mean, sigma = 10 / 3, math.sqrt(200 / 9)
        inside = [abs(y - mean) <= sigma for y in [0, 0, 10, 100]]
        assert cov.P == sum(inside)
        assert cov.p == sum(inside[:3])
        assert cov.n == 3 - cov.p


class TestCoveringInvariants:
    def test_rejects_inconsistent(self):
        with pytest.raises(ValueError):
            Covering(p=3, n=0, P=2, N=2)
        with pytest.raises(ValueError):
            Covering(p=0, n=0, P=0, N=2)


class TestFormatRule:
    schema = (numeric("v"), nominal("a", "x", "y"),
              nominal("cls", "c1", "c2", role="label"))

    def test_empty_premise(self):
        rule = Rule((), ClassConsequence(0))
        assert format_rule(rule, self.schema).startswith("IF TRUE THEN cls = c1")

    def test_nominal_fragment(self):
        rule = Rule((NominalCondition(1, 1),), ClassConsequence(0))
        assert "a = y" in format_rule(rule, self.schema)

    def test_one_sided_interval(self):
        rule = Rule((IntervalCondition(0, upper=3.5, upper_closed=True),),
                    ClassConsequence(0))
        assert "v ≤ 3.5" in format_rule(rule, self.schema)

    def test_two_sided_interval_and_stats(self):
        rule = Rule((IntervalCondition(0, lower=2, upper=5,
                                       upper_closed=True),),
                    ClassConsequence(1),
                    covering=Covering(3, 1, 10, 10), p_value=0.25)
        text = format_rule(rule, self.schema)
        assert "v in (2, 5]" in text
        assert "(p=3, n=1, P=10, N=10, pval=0.25)" in text

    def test_six_significant_digits(self):
        rule = Rule((IntervalCondition(0, upper=1.23456789,
                                       upper_closed=True),),
                    ClassConsequence(0))
        assert "1.23457" in format_rule(rule, self.schema)

    def test_deterministic(self):
        rule = Rule((IntervalCondition(0, lower=1.5),), ClassConsequence(0))
        texts = {format_rule(rule, self.schema) for _ in range(5)}
        assert len(texts) == 1
