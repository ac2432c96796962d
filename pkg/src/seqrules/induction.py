"""Separate-and-conquer rule induction.

Rules are grown greedily from an empty premise by repeatedly adding the
elementary condition that maximizes the induction measure, subject to the
rule still covering at least ``minsupp_new`` previously uncovered
positives; grown rules are then pruned by greedy condition removal.  The
covering loop removes newly covered positives and repeats until the
uncovered fraction drops below the configured threshold (or an expert
demands a specific rule count).

Regression growing avoids re-scanning covered labels per candidate: each
attribute is swept once while constant-time accumulators and a rank index
maintain the mean/sigma window statistics incrementally.
"""

from __future__ import annotations

import concurrent.futures
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .dataset import CLASSIFICATION, REGRESSION, SURVIVAL, DataSet
from .measures import Measures, measure_value
from .rules import (ClassConsequence, Condition, Covering, DefaultModel,
                    IntervalCondition, NominalCondition, Rule, RuleSet,
                    SurvivalConsequence, ValueConsequence, condition_mask,
                    covering_stats, merge_condition, premise_mask,
                    sigma_window_bounds)
from .stats import StatAccumulator, hypergeometric_tail, kaplan_meier, log_rank


@dataclass(frozen=True)
class InductionParams:
    minsupp_new: int = 5
    max_uncovered_fraction: float = 0.0
    induction_measure: Measures = Measures.C2
    pruning_measure: Measures = Measures.C2
    voting_measure: Measures = Measures.Correlation
    pruning_enabled: bool = True
    max_growing_conditions: Optional[int] = None
    significance_level: float = 0.05
    significance_filter: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.minsupp_new < 1:
            raise ValueError("minsupp_new must be >= 1")
        if not 0.0 <= self.max_uncovered_fraction <= 1.0:
            raise ValueError("max_uncovered_fraction must be in [0, 1]")
        if not 0.0 < self.significance_level <= 1.0:
            raise ValueError("significance_level must be in (0, 1]")

    def to_dict(self):
        return {
            "minsupp_new": self.minsupp_new,
            "max_uncovered_fraction": self.max_uncovered_fraction,
            "induction_measure": self.induction_measure.value,
            "pruning_measure": self.pruning_measure.value,
            "voting_measure": self.voting_measure.value,
            "pruning_enabled": self.pruning_enabled,
            "max_growing_conditions": self.max_growing_conditions,
            "significance_level": self.significance_level,
            "significance_filter": self.significance_filter,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ("induction_measure", "pruning_measure", "voting_measure"):
            if key in d and isinstance(d[key], str):
                d[key] = Measures(d[key])
        return cls(**d)


# Preferred / forbidden entries are either a concrete condition or an
# attribute index acting as a wildcard for any condition on that attribute.
ExpertEntry = Union[int, Condition]


@dataclass(frozen=True)
class ExpertKnowledge:
    initial_rules: tuple[tuple[tuple[Condition, ...], Optional[int]], ...] = ()
    preferred_conditions: tuple[tuple[ExpertEntry, int], ...] = ()
    forbidden: tuple[ExpertEntry, ...] = ()
    desired_rule_count: Union[int, dict, None] = None

    def __post_init__(self):
        if any(budget < 1 for _, budget in self.preferred_conditions):
            raise ValueError("preferred-condition budgets must be >= 1")
        preferred = {e for e, _ in self.preferred_conditions}
        if preferred & set(self.forbidden):
            raise ValueError("preferred and forbidden sets must be disjoint")

    def desired_for(self, class_symbol: Optional[str]):
        if self.desired_rule_count is None:
            return None
        if isinstance(self.desired_rule_count, dict):
            return self.desired_rule_count.get(class_symbol)
        return self.desired_rule_count


def _forbidden_attrs(expert):
    if expert is None:
        return set()
    return {e for e in expert.forbidden if isinstance(e, int)}


def _forbidden_conds(expert):
    if expert is None:
        return set()
    return {e for e in expert.forbidden if not isinstance(e, int)}


def candidate_conditions(ds: DataSet, covered_idx, expert: Optional[ExpertKnowledge] = None):
    """Enumerate elementary conditions supported by the covered examples.

    Nominal attributes contribute one equals-condition per symbol present;
    numeric attributes contribute a (<= m] and a (m, +inf) condition per
    midpoint between consecutive distinct covered values.  Forbidden
    attributes and conditions are removed.  Order: attribute index, then
    value, with <= before > at each threshold.
    """
    covered_idx = np.asarray(covered_idx, dtype=int)
    bad_attrs = _forbidden_attrs(expert)
    bad_conds = _forbidden_conds(expert)
    out = []
    for j, attr in enumerate(ds.attributes):
        if attr.role != "regular" or j in bad_attrs:
            continue
        col = ds.values[covered_idx, j]
        col = col[~np.isnan(col)]
        if col.size == 0:
            continue
        if attr.is_nominal:
            for sym in np.unique(col).astype(int):
                cond = NominalCondition(j, int(sym))
                if cond not in bad_conds:
                    out.append(cond)
        else:
            distinct = np.unique(col)
            for lo, hi in zip(distinct, distinct[1:]):
                m = (lo + hi) / 2.0
                below = IntervalCondition(j, upper=m, upper_closed=True)
                above = IntervalCondition(j, lower=m)
                if below not in bad_conds:
                    out.append(below)
                if above not in bad_conds:
                    out.append(above)
    return out


# ---------------------------------------------------------------------------
# Growth-time quality

def _survival_quality(ds, mask):
    """1 - p-value of the log-rank test between covered and uncovered."""
    if mask.all():
        return 0.0
    times = ds.survival_times()
    events = ds.survival_events()
    res = log_rank(times[mask], events[mask], times[~mask], events[~mask])
    return 1.0 - res.p_value


class _Candidate:
    __slots__ = ("quality", "p", "index", "condition")

    def __init__(self, quality, p, index, condition):
        self.quality = quality
        self.p = p
        self.index = index
        self.condition = condition

    def beats(self, other):
        if other is None:
            return True
        if self.quality != other.quality:
            return self.quality > other.quality
        if self.p != other.p:
            return self.p > other.p
        return self.index < other.index


def _eval_range(ds, task, cands, lo, hi, cur_mask, pos_mask, uncovered_mask,
                minsupp, measure, P, N):
    best = None
    for idx in range(lo, hi):
        cond = cands[idx]
        mask = cur_mask & condition_mask(cond, ds.values)
        new_uncov = int(np.count_nonzero(mask & uncovered_mask))
        if new_uncov < minsupp:
            continue
        if task == SURVIVAL:
            p = int(np.count_nonzero(mask))
            quality = _survival_quality(ds, mask)
        else:
            p = int(np.count_nonzero(mask & pos_mask))
            n = int(np.count_nonzero(mask)) - p
            quality = measure_value(measure, Covering(p, n, P, N))
        cand = _Candidate(quality, p, idx, cond)
        if cand.beats(best):
            best = cand
    return best


def _pick_condition(ds, task, cands, cur_mask, pos_mask, uncovered_mask,
                    minsupp, measure, P, N, threads):
    if not cands:
        return None
    if threads <= 1 or len(cands) < 8:
        return _eval_range(ds, task, cands, 0, len(cands), cur_mask, pos_mask,
                           uncovered_mask, minsupp, measure, P, N)
    chunk = (len(cands) + threads - 1) // threads
    bounds = [(i, min(i + chunk, len(cands))) for i in range(0, len(cands), chunk)]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(
            lambda b: _eval_range(ds, task, cands, b[0], b[1], cur_mask, pos_mask,
                                  uncovered_mask, minsupp, measure, P, N),
            bounds))
    best = None
    for cand in results:  # chunk order keeps the reduction deterministic
        if cand is not None and cand.beats(best):
            best = cand
    return best


# ---------------------------------------------------------------------------
# Regression sweep machinery

class _Fenwick:
    """Binary indexed tree counting inserted label ranks."""

    __slots__ = ("size", "tree")

    def __init__(self, size):
        self.size = size
        self.tree = [0] * (size + 1)

    def add(self, i):
        i += 1
        while i <= self.size:
            self.tree[i] += 1
            i += i & (-i)

    def prefix(self, i):
        # count of inserted ranks < i
        total = 0
        while i > 0:
            total += self.tree[i]
            i -= i & (-i)
        return total

    def range_count(self, lo, hi):
        return self.prefix(hi) - self.prefix(lo)


def _window_counts(sorted_labels, mean, sigma):
    bound_lo, bound_hi = sigma_window_bounds(mean, sigma)
    lo = bisect_left(sorted_labels, bound_lo)
    hi = bisect_right(sorted_labels, bound_hi)
    return lo, hi


def _regression_quality(acc, p, covered, total, y_all_sorted, measure):
    lo, hi = _window_counts(y_all_sorted, acc.mean, acc.stddev)
    P = hi - lo
    if P < 1:
        return None, None
    cov = Covering(p=min(p, P), n=covered - min(p, P), P=P, N=total - P)
    return measure_value(measure, cov), cov


def _eval_regression_candidates(ds, cands_meta, cur_idx, uncovered_mask,
                                minsupp, measure, y_all_sorted, counters,
                                bad_conds=frozenset()):
    """Sweep every attribute once, scoring all candidates incrementally.

    Returns the best _Candidate (index refers to the global candidate
    order produced by :func:`candidate_conditions`).
    """
    labels = ds.labels()
    total = ds.n_examples
    y_cur = labels[cur_idx]
    uncov_cur = uncovered_mask[cur_idx]
    best = None
    idx = 0
    reads = 0
    for j, attr in cands_meta:
        col = ds.values[cur_idx, j]
        valid = ~np.isnan(col)
        v = col[valid]
        yv = y_cur[valid]
        uv = uncov_cur[valid]
        if v.size == 0:
            continue
        if attr.is_nominal:
            for sym in np.unique(v).astype(int):
                if NominalCondition(j, int(sym)) in bad_conds:
                    continue
                sel = v == sym
                ys = yv[sel]
                acc = StatAccumulator()
                for y in ys:
                    acc.push(float(y))
                reads += ys.size
                ys_sorted = np.sort(ys)
                reads += ys.size
                lo, hi = _window_counts(ys_sorted, acc.mean, acc.stddev)
                quality, _ = _regression_quality(
                    acc, hi - lo, int(sel.sum()), total, y_all_sorted, measure)
                new_uncov = int(uv[sel].sum())
                if quality is not None and new_uncov >= minsupp:
                    cand = _Candidate(quality, hi - lo, idx, NominalCondition(j, int(sym)))
                    if cand.beats(best):
                        best = cand
                idx += 1
        else:
            order = np.argsort(v, kind="stable")
            vs = v[order]
            ys = yv[order]
            us = uv[order]
            ys_sorted = sorted(float(y) for y in ys)
            reads += ys.size
            ranks = np.empty(ys.size, dtype=int)
            ranks[np.argsort(ys, kind="stable")] = np.arange(ys.size)
            reads += ys.size
            left = StatAccumulator()
            right = StatAccumulator()
            for y in ys:
                right.push(float(y))
            reads += ys.size
            fen = _Fenwick(ys.size)
            total_uncov = int(us.sum())
            prefix_uncov = 0
            # group boundaries of equal attribute values
            change = np.nonzero(np.diff(vs))[0] + 1
            starts = np.concatenate([[0], change])
            ends = np.concatenate([change, [vs.size]])
            n_groups = starts.size
            for g in range(n_groups):
                for i in range(starts[g], ends[g]):
                    y = float(ys[i])
                    left.push(y)
                    right.remove(y)
                    fen.add(int(ranks[i]))
                    prefix_uncov += int(us[i])
                    reads += 1
                if g == n_groups - 1:
                    break
                m = (vs[ends[g] - 1] + vs[ends[g]]) / 2.0
                prefix_size = ends[g]
                below = IntervalCondition(j, upper=float(m), upper_closed=True)
                if below not in bad_conds:
                    lo, hi = _window_counts(ys_sorted, left.mean, left.stddev)
                    p_left = fen.range_count(lo, hi)
                    quality, _ = _regression_quality(
                        left, p_left, prefix_size, total, y_all_sorted, measure)
                    if quality is not None and prefix_uncov >= minsupp:
                        cand = _Candidate(quality, p_left, idx, below)
                        if cand.beats(best):
                            best = cand
                    idx += 1
                above = IntervalCondition(j, lower=float(m))
                if above not in bad_conds:
                    lo, hi = _window_counts(ys_sorted, right.mean, right.stddev)
                    p_right = (hi - lo) - fen.range_count(lo, hi)
                    quality, _ = _regression_quality(
                        right, p_right, vs.size - prefix_size, total,
                        y_all_sorted, measure)
                    if quality is not None and total_uncov - prefix_uncov >= minsupp:
                        cand = _Candidate(quality, p_right, idx, above)
                        if cand.beats(best):
                            best = cand
                    idx += 1
    if counters is not None:
        counters["label_reads"] = counters.get("label_reads", 0) + reads
        counters["candidates"] = counters.get("candidates", 0) + idx
    return best


# ---------------------------------------------------------------------------
# Growing and pruning

def _rule_quality(ds, premise, target, measure):
    mask = premise_mask(premise, ds.values)
    if ds.task == SURVIVAL:
        p = int(mask.sum())
        return _survival_quality(ds, mask), p
    cov = covering_stats(Rule(premise, _consequence_stub(ds, target)), ds)
    return measure_value(measure, cov), cov.p


def _consequence_stub(ds, target):
    if ds.task == CLASSIFICATION:
        return ClassConsequence(target)
    if ds.task == REGRESSION:
        return ValueConsequence(0.0, 0.0)
    return SurvivalConsequence(kaplan_meier([0.0], [0.0]))


def _finalize_rule(ds, premise, target, params):
    """Build the rule with consequence, covering, p-value, voting weight."""
    mask = premise_mask(premise, ds.values)
    task = ds.task
    if task == CLASSIFICATION:
        consequence = ClassConsequence(target)
    elif task == REGRESSION:
        covered = ds.labels()[mask]
        consequence = ValueConsequence(float(covered.mean()), float(covered.std()))
    else:
        times = ds.survival_times()
        events = ds.survival_events()
        consequence = SurvivalConsequence(kaplan_meier(times[mask], events[mask]))
    rule = Rule(premise, consequence)
    cov = covering_stats(rule, ds)
    if task == SURVIVAL:
        if mask.all():
            p_value = 1.0
        else:
            times = ds.survival_times()
            events = ds.survival_events()
            p_value = log_rank(times[mask], events[mask],
                               times[~mask], events[~mask]).p_value
        weight = 1.0
    else:
        p_value = hypergeometric_tail(cov.P + cov.N, cov.P, cov.p + cov.n, cov.p)
        try:
            weight = measure_value(params.voting_measure, cov)
        except Exception:
            weight = 0.0
    return replace(rule, covering=cov, p_value=p_value, voting_weight=weight)


class _PreferredPool:
    """Mutable budgets for expert preferred conditions during one induction."""

    def __init__(self, expert):
        self.entries = [[entry, budget] for entry, budget in
                        (expert.preferred_conditions if expert else ())]

    def candidates_for(self, pool_cands, premise):
        """(condition, entry) pairs currently payable from some budget."""
        used_attrs = set()
        out = []
        for item in self.entries:
            entry, budget = item
            if budget <= 0:
                continue
            if isinstance(entry, int):
                for cond in pool_cands:
                    if cond.attribute == entry:
                        out.append((cond, item))
            else:
                out.append((entry, item))
        seen = set()
        uniq = []
        for cond, item in out:
            if cond not in seen:
                seen.add(cond)
                uniq.append((cond, item))
        return uniq


def grow_rule(ds: DataSet, target, uncovered_mask, params: InductionParams,
              expert: Optional[ExpertKnowledge] = None, threads=1,
              start_premise=(), preferred: Optional[_PreferredPool] = None,
              counters=None) -> Optional[Rule]:
    """Grow a single rule; returns None when minsupp_new is unsatisfiable.

    ``target`` is the class index for classification, None otherwise.
    ``uncovered_mask`` flags positives not yet covered by earlier rules.
    """
    task = ds.task
    minsupp = params.minsupp_new
    values = ds.values
    total = ds.n_examples
    premise = tuple(start_premise)
    cur_mask = premise_mask(premise, values)
    if int(np.count_nonzero(cur_mask & uncovered_mask)) < minsupp:
        return None

    if task == CLASSIFICATION:
        labels = ds.labels()
        pos_mask = labels == target
        P, N = int(pos_mask.sum()), int((~pos_mask).sum())
    else:
        pos_mask = None
        P, N = total, 0
    y_all_sorted = sorted(float(y) for y in ds.labels()) if task == REGRESSION else None

    if premise:
        cur_quality, _ = _rule_quality(ds, premise, target, params.induction_measure)
    elif task == SURVIVAL:
        cur_quality = _survival_quality(ds, np.ones(total, dtype=bool))
    else:
        stub = Rule((), _consequence_stub(ds, target))
        cur_quality = measure_value(params.induction_measure, covering_stats(stub, ds))
    if preferred is None:
        preferred = _PreferredPool(expert)

    while True:
        if (params.max_growing_conditions is not None
                and len(premise) >= params.max_growing_conditions):
            break
        covered_idx = np.nonzero(cur_mask)[0]
        cands = candidate_conditions(ds, covered_idx, expert)
        chosen = None
        pref_pairs = preferred.candidates_for(cands, premise)
        if pref_pairs:
            pref_conds = [c for c, _ in pref_pairs]
            best = _pick_condition(ds, task, pref_conds, cur_mask, pos_mask,
                                   uncovered_mask, minsupp,
                                   params.induction_measure, P, N,
                                   threads=1) if task != REGRESSION else None
            if task == REGRESSION:
                best = _eval_explicit_regression(
                    ds, pref_conds, cur_mask, uncovered_mask, minsupp,
                    params.induction_measure, y_all_sorted)
            if best is not None and best.quality > cur_quality:
                chosen = best
                pref_pairs[best.index][1][1] -= 1
        if chosen is None:
            if task == REGRESSION:
                cands_meta = [(j, ds.attributes[j]) for j in
                              sorted({c.attribute for c in cands})]
                best = _eval_regression_candidates(
                    ds, cands_meta, covered_idx, uncovered_mask, minsupp,
                    params.induction_measure, y_all_sorted, counters,
                    bad_conds=frozenset(_forbidden_conds(expert)))
            else:
                best = _pick_condition(ds, task, cands, cur_mask, pos_mask,
                                       uncovered_mask, minsupp,
                                       params.induction_measure, P, N, threads)
            if best is None or best.quality <= cur_quality:
                break
            chosen = best
        premise = merge_condition(premise, chosen.condition)
        cur_mask &= condition_mask(chosen.condition, values)
        cur_quality = chosen.quality

    if int(np.count_nonzero(cur_mask & uncovered_mask)) < minsupp:
        return None
    return _finalize_rule(ds, premise, target, params)


def _eval_explicit_regression(ds, conds, cur_mask, uncovered_mask, minsupp,
                              measure, y_all_sorted):
    """Score an explicit condition list for regression (preferred pass)."""
    labels = ds.labels()
    total = ds.n_examples
    best = None
    for idx, cond in enumerate(conds):
        mask = cur_mask & condition_mask(cond, ds.values)
        new_uncov = int(np.count_nonzero(mask & uncovered_mask))
        if new_uncov < minsupp or not mask.any():
            continue
        covered = labels[mask]
        acc = StatAccumulator()
        for y in covered:
            acc.push(float(y))
        bound_lo, bound_hi = sigma_window_bounds(acc.mean, acc.stddev)
        window = (labels >= bound_lo) & (labels <= bound_hi)
        p = int(np.count_nonzero(window & mask))
        quality, _ = _regression_quality(acc, p, int(mask.sum()), total,
                                         y_all_sorted, measure)
        if quality is None:
            continue
        cand = _Candidate(quality, p, idx, cond)
        if cand.beats(best):
            best = cand
    return best


def prune_rule(rule: Rule, ds: DataSet, params: InductionParams,
               uncovered_at_creation=None) -> Rule:
    """Greedily drop conditions while the pruning measure does not decrease.

    Keeps at least one condition and re-finalizes the consequence from the
    final coverage.
    """
    if not params.pruning_enabled or len(rule.premise) <= 1:
        return rule
    target = rule.consequence.value if ds.task == CLASSIFICATION else None
    premise = rule.premise
    cur_value, _ = _rule_quality(ds, premise, target, params.pruning_measure)
    minsupp = params.minsupp_new
    while len(premise) > 1:
        best = None
        for i in range(len(premise)):
            trial = premise[:i] + premise[i + 1:]
            if uncovered_at_creation is not None:
                mask = premise_mask(trial, ds.values)
                if int(np.count_nonzero(mask & uncovered_at_creation)) < minsupp:
                    continue
            quality, p = _rule_quality(ds, trial, target, params.pruning_measure)
            if quality >= cur_value:
                cand = _Candidate(quality, p if isinstance(p, int) else 0, i, None)
                if cand.beats(best):
                    best = cand
        if best is None:
            break
        premise = premise[:best.index] + premise[best.index + 1:]
        cur_value = best.quality
    return _finalize_rule(ds, premise, target, params)


# ---------------------------------------------------------------------------
# Covering loop

def _default_model(ds: DataSet) -> DefaultModel:
    task = ds.task
    if task == CLASSIFICATION:
        labels = ds.labels().astype(int)
        counts = np.bincount(labels, minlength=len(ds.class_symbols()))
        return DefaultModel("majority_class", class_index=int(np.argmax(counts)),
                            class_counts=tuple(int(c) for c in counts))
    if task == REGRESSION:
        return DefaultModel("global_mean", mean=float(ds.labels().mean()))
    return DefaultModel("global_km",
                        km=kaplan_meier(ds.survival_times(), ds.survival_events()))


def induce_ruleset(ds: DataSet, params: InductionParams,
                   expert: Optional[ExpertKnowledge] = None, threads=1,
                   counters=None) -> RuleSet:
    """Run separate-and-conquer induction over the whole dataset."""
    task = ds.task
    if task is None:
        raise ValueError("dataset has no label role assigned")
    rules: list[Rule] = []
    warnings: list[str] = []
    preferred = _PreferredPool(expert)

    if task == CLASSIFICATION:
        labels = ds.labels()
        symbols = ds.class_symbols()
        targets = [(c, symbols[c], labels == c) for c in range(len(symbols))]
    else:
        targets = [(None, None, np.ones(ds.n_examples, dtype=bool))]

    initial = list(expert.initial_rules) if expert else []

    for target, symbol, pos_mask in targets:
        P = int(pos_mask.sum())
        if P < params.minsupp_new:
            warnings.append(
                f"class {symbol!r}: only {P} positives, below minsupp_new="
                f"{params.minsupp_new}; no rules induced")
            continue
        uncovered = pos_mask.copy()
        desired = expert.desired_for(symbol) if expert else None
        n_rules = 0

        # expert-provided starting premises for this target come first
        for premise0, rule_target in initial:
            if rule_target != target:
                continue
            rule = grow_rule(ds, target, uncovered, params, expert,
                             threads=threads, start_premise=premise0,
                             preferred=preferred, counters=counters)
            if rule is None:
                warnings.append(
                    f"initial rule for class {symbol!r} cannot satisfy "
                    "minsupp_new; skipped")
                continue
            rule = prune_rule(rule, ds, params, uncovered_at_creation=uncovered)
            mask = premise_mask(rule.premise, ds.values)
            uncovered &= ~mask
            rules.append(rule)
            n_rules += 1

        while True:
            remaining = int(uncovered.sum())
            if desired is not None:
                if n_rules >= desired or remaining == 0:
                    break
            elif remaining <= params.max_uncovered_fraction * P:
                break
            rule = grow_rule(ds, target, uncovered, params, expert,
                             threads=threads, preferred=preferred,
                             counters=counters)
            if rule is None:
                warnings.append(
                    f"growth failure for class {symbol!r} with {remaining} "
                    "uncovered positives remaining")
                break
            rule = prune_rule(rule, ds, params, uncovered_at_creation=uncovered)
            mask = premise_mask(rule.premise, ds.values)
            newly = int(np.count_nonzero(mask & uncovered))
            if newly == 0:
                break
            uncovered &= ~mask
            rules.append(rule)
            n_rules += 1

    if params.significance_filter:
        rules = [r for r in rules if r.p_value <= params.significance_level]

    return RuleSet(tuple(rules), task, ds.attributes, _default_model(ds),
                   params, tuple(warnings))
