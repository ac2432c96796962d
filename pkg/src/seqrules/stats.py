"""Statistical primitives: survival estimation, significance tests, and
constant-time mean/variance accumulators.

Survival notation: for each distinct event time t_i, d_i is the number of
events at t_i and n_i the number of subjects still at risk (subjects
censored exactly at t_i count as at risk for that time).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import SeqRulesError


@dataclass(frozen=True)
class KaplanMeierEstimate:
    """Product-limit survival function as a right-continuous step function.

    ``times`` holds the distinct event times (strictly increasing) and
    ``probabilities`` the value of S just after each of them.  S(t) = 1
    before the first event time.
    """

    times: tuple[float, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) != len(self.probabilities):
            raise ValueError("times and probabilities must have equal length")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError("event times must be strictly increasing")
        if any(b > a + 1e-12 for a, b in zip(self.probabilities, self.probabilities[1:])):
            raise ValueError("probabilities must be non-increasing")
        if self.probabilities and self.probabilities[0] > 1.0:
            raise ValueError("survival probability above 1")

    def at(self, t: float) -> float:
        """S(t): right-continuous lookup, 1 before the first event time."""
        idx = np.searchsorted(self.times, t, side="right")
        return 1.0 if idx == 0 else self.probabilities[idx - 1]

    def before(self, t: float) -> float:
        """Left limit S(t-)."""
        idx = np.searchsorted(self.times, t, side="left")
        return 1.0 if idx == 0 else self.probabilities[idx - 1]


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float


def kaplan_meier(times, events) -> KaplanMeierEstimate:
    """Product-limit estimate from observation times and 0/1 event flags.

    Ties between events and censorings at the same time are resolved by
    processing events first.  O(k log k) in the sample size.
    """
    times = np.asarray(times, dtype=float)
    events = np.asarray(events, dtype=float)
    if times.size == 0:
        raise SeqRulesError("kaplan_meier requires at least one observation")
    if times.shape != events.shape:
        raise SeqRulesError("times and events must have equal length")
    order = np.argsort(times, kind="stable")
    ts = times[order]
    ev = events[order]
    distinct, start = np.unique(ts, return_index=True)
    n_total = ts.size
    out_t, out_s = [], []
    surv = 1.0
    bounds = np.append(start, n_total)
    for i, t in enumerate(distinct):
        at_risk = n_total - bounds[i]
        d = ev[bounds[i]:bounds[i + 1]].sum()
        if d > 0:
            surv *= 1.0 - d / at_risk
            out_t.append(float(t))
            out_s.append(surv)
    return KaplanMeierEstimate(tuple(out_t), tuple(out_s))


def log_rank(times_a, events_a, times_b, events_b) -> TestResult:
    """Two-group log-rank test.

    Sums observed-minus-expected events of group A over the pooled distinct
    event times with the hypergeometric variance at each time; the statistic
    is chi-square with one degree of freedom.  Zero total variance (no
    events) yields statistic 0, p-value 1.
    """
    ta = np.asarray(times_a, dtype=float)
    ea = np.asarray(events_a, dtype=float)
    tb = np.asarray(times_b, dtype=float)
    eb = np.asarray(events_b, dtype=float)
    if ta.size == 0 or tb.size == 0:
        raise SeqRulesError("log_rank requires two non-empty groups")

    event_times = np.unique(np.concatenate([ta[ea == 1], tb[eb == 1]]))
    if event_times.size == 0:
        return TestResult(0.0, 1.0)

    # at-risk counts per event time via sorted positions
    sa = np.sort(ta)
    sb = np.sort(tb)
    n1 = ta.size - np.searchsorted(sa, event_times, side="left")
    n2 = tb.size - np.searchsorted(sb, event_times, side="left")

    ea_sorted = ta[ea == 1]
    eb_sorted = tb[eb == 1]
    d1 = np.array([(ea_sorted == t).sum() for t in event_times], dtype=float)
    d2 = np.array([(eb_sorted == t).sum() for t in event_times], dtype=float)

    n = n1 + n2
    d = d1 + d2
    expected = d * n1 / n
    with np.errstate(invalid="ignore", divide="ignore"):
        var = np.where(n > 1, d * (n1 / n) * (n2 / n) * (n - d) / (n - 1), 0.0)
    observed_minus_expected = float((d1 - expected).sum())
    total_var = float(var.sum())
    if total_var <= 0.0:
        return TestResult(0.0, 1.0)
    statistic = observed_minus_expected ** 2 / total_var
    return TestResult(statistic, chi_square_1df_pvalue(statistic))


def chi_square_1df_pvalue(x: float) -> float:
    """Survival function of the chi-square distribution with 1 df."""
    return math.erfc(math.sqrt(max(x, 0.0) / 2.0))


def hypergeometric_tail(population: int, successes: int, draws: int, k: int) -> float:
    """P(X >= k) for X ~ Hypergeometric(population, successes, draws).

    Summed in log-space over the upper support for numerical stability.
    """
    support_min = max(0, draws - (population - successes))
    if k <= support_min:
        return 1.0
    lo = k
    hi = min(draws, successes)
    if lo > hi:
        return 0.0
    ks = np.arange(lo, hi + 1)
    log_terms = (
        _log_choose(successes, ks)
        + _log_choose(population - successes, draws - ks)
        - _log_choose(population, draws)
    )
    return float(min(1.0, math.exp(logsumexp(log_terms))))


def _log_choose(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


class StatAccumulator:
    """Running count/mean/variance with O(1) push and remove (Welford form).

    Variance is the population variance m2/count.  An empty accumulator has
    mean 0 and m2 0; removing from an empty accumulator is an error.
    """

    __slots__ = ("count", "mean", "m2")

    def __init__(self, count=0, mean=0.0, m2=0.0):
        self.count = count
        self.mean = mean
        self.m2 = m2

    def push(self, y: float):
        self.count += 1
        delta = y - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (y - self.mean)
        return self

    def remove(self, y: float):
        if self.count == 0:
            raise SeqRulesError("remove from empty accumulator")
        if self.count == 1:
            self.count, self.mean, self.m2 = 0, 0.0, 0.0
            return self
        old_mean = (self.count * self.mean - y) / (self.count - 1)
        self.m2 -= (y - self.mean) * (y - old_mean)
        self.m2 = max(self.m2, 0.0)
        self.count -= 1
        self.mean = old_mean
        return self

    @property
    def variance(self) -> float:
        return self.m2 / self.count if self.count else 0.0

    @property
    def stddev(self) -> float:
        return math.sqrt(self.variance)

    def copy(self):
        return StatAccumulator(self.count, self.mean, self.m2)

    def __eq__(self, other):
        return (self.count, self.mean, self.m2) == (other.count, other.mean, other.m2)

    def __repr__(self):
        return f"StatAccumulator(count={self.count}, mean={self.mean}, m2={self.m2})"
