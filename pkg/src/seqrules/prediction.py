"""Model application and evaluation: voting, task metrics, cross-validation."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dataset import CLASSIFICATION, REGRESSION, SURVIVAL, DataSet, subset
from .errors import SchemaError, UndefinedMetricError
from .rules import RuleSet, format_rule, premise_mask
from .stats import KaplanMeierEstimate, kaplan_meier


def _check_schema(rs: RuleSet, ds: DataSet):
    if rs.schema != ds.attributes:
        raise SchemaError("rule set schema does not match the dataset")


def predict(rs: RuleSet, ds: DataSet):
    """Apply a rule set to every example.

    Returns class indices (classification), floats (regression), or a list
    of survival step functions.  Each covering rule votes with its training
    weight; uncovered examples fall back to the default model.
    """
    _check_schema(rs, ds)
    masks = [premise_mask(r.premise, ds.values) for r in rs.rules]
    n = ds.n_examples
    default = rs.default_model
    if rs.task == CLASSIFICATION:
        n_classes = len(default.class_counts)
        votes = np.zeros((n, n_classes))
        covered = np.zeros(n, dtype=bool)
        for rule, mask in zip(rs.rules, masks):
            votes[mask, rule.consequence.value] += rule.voting_weight
            covered |= mask
        priors = np.asarray(default.class_counts, dtype=float)
        out = np.empty(n, dtype=int)
        for i in range(n):
            if not covered[i]:
                out[i] = default.class_index
                continue
            # tie-break: vote weight, then training prior, then domain order
            out[i] = max(range(n_classes),
                         key=lambda c: (votes[i, c], priors[c], -c))
        return out
    if rs.task == REGRESSION:
        out = np.full(n, default.mean, dtype=float)
        weight_sum = np.zeros(n)
        value_sum = np.zeros(n)
        covered = np.zeros(n, dtype=bool)
        count = np.zeros(n)
        mean_sum = np.zeros(n)
        for rule, mask in zip(rs.rules, masks):
            weight_sum[mask] += rule.voting_weight
            value_sum[mask] += rule.voting_weight * rule.consequence.mean
            mean_sum[mask] += rule.consequence.mean
            count[mask] += 1
            covered |= mask
        ok = covered & (weight_sum > 0)
        out[ok] = value_sum[ok] / weight_sum[ok]
        fallback = covered & ~ok  # non-positive total weight: plain average
        out[fallback] = mean_sum[fallback] / count[fallback]
        return out
    # survival: pointwise mean of covering rules' estimates
    out_surv = []
    for i in range(n):
        estimates = [r.consequence.estimate
                     for r, mask in zip(rs.rules, masks) if mask[i]]
        if not estimates:
            out_surv.append(default.km)
            continue
        grid = sorted({t for e in estimates for t in e.times})
        probs = [float(np.mean([e.at(t) for e in estimates])) for t in grid]
        out_surv.append(KaplanMeierEstimate(tuple(grid), tuple(probs)))
    return out_surv


def predicted_symbols(rs: RuleSet, ds: DataSet):
    """Classification predictions as label symbols."""
    label = next(a for a in rs.schema if a.role == "label")
    return [label.domain[i] for i in predict(rs, ds)]


# ---------------------------------------------------------------------------
# Metrics

def balanced_accuracy(true_idx, pred_idx, n_classes) -> float:
    """Mean per-class recall over classes present in the test set."""
    true_idx = np.asarray(true_idx, dtype=int)
    pred_idx = np.asarray(pred_idx, dtype=int)
    recalls = []
    for c in range(n_classes):
        sel = true_idx == c
        if sel.any():
            recalls.append(float((pred_idx[sel] == c).mean()))
    return float(np.mean(recalls))


def confusion_matrix(true_idx, pred_idx, n_classes):
    mat = np.zeros((n_classes, n_classes), dtype=int)
    for t, p in zip(true_idx, pred_idx):
        mat[int(t), int(p)] += 1
    return tuple(tuple(int(v) for v in row) for row in mat)


def rrse(true_values, predictions) -> float:
    """Root relative squared error against the test-mean predictor."""
    y = np.asarray(true_values, dtype=float)
    yhat = np.asarray(predictions, dtype=float)
    denom = float(((y - y.mean()) ** 2).sum())
    if denom == 0.0:
        raise UndefinedMetricError("RRSE undefined: constant test labels")
    return float(np.sqrt(((yhat - y) ** 2).sum() / denom))


def brier_score_at(t, times, events, predictions, censor_km) -> float:
    """IPCW Brier score at time t (Graf weighting)."""
    total = 0.0
    n = len(times)
    for ti, ei, pred in zip(times, events, predictions):
        s = pred.at(t)
        if ti <= t and ei == 1:
            g = censor_km.before(ti)
            if g > 0:
                total += s * s / g
        elif ti > t:
            g = censor_km.at(t)
            if g > 0:
                total += (1.0 - s) * (1.0 - s) / g
    return total / n


def integrated_brier_score(times, events, predictions) -> float:
    """Exact piecewise integration of the IPCW Brier score up to the
    largest event time, normalized by that horizon.

    The censoring distribution is the product-limit estimate with event
    and censoring roles reversed.
    """
    times = np.asarray(times, dtype=float)
    events = np.asarray(events, dtype=float)
    event_times = times[events == 1]
    if event_times.size == 0:
        raise UndefinedMetricError("IBS undefined: no events in the test set")
    t_max = float(event_times.max())
    if t_max == 0.0:
        raise UndefinedMetricError("IBS undefined: zero evaluation horizon")
    censor_km = kaplan_meier(times, 1.0 - events)
    knots = {0.0}
    knots.update(float(t) for t in times if t < t_max)
    knots.update(float(t) for t in censor_km.times if t < t_max)
    for pred in predictions:
        knots.update(float(t) for t in pred.times if 0.0 < t < t_max)
    grid = sorted(knots) + [t_max]
    total = 0.0
    for left, right in zip(grid, grid[1:]):
        total += brier_score_at(left, times, events, predictions, censor_km) \
            * (right - left)
    return total / t_max


# ---------------------------------------------------------------------------
# Reports

@dataclass(frozen=True)
class RuleRecord:
    text: str
    covering: tuple  # (p, n, P, N)
    p_value: float
    survival_table: tuple = ()  # (time, probability) pairs for survival rules


@dataclass(frozen=True)
class EvaluationReport:
    task: str
    rule_count: int
    rules: tuple[RuleRecord, ...]
    bacc: Optional[float] = None
    confusion: Optional[tuple] = None
    rrse: Optional[float] = None
    ibs: Optional[float] = None
    undefined_metrics: tuple[str, ...] = ()

    def metrics(self) -> dict:
        out = {}
        if self.bacc is not None:
            out["bacc"] = self.bacc
        if self.rrse is not None:
            out["rrse"] = self.rrse
        if self.ibs is not None:
            out["ibs"] = self.ibs
        return out


def rule_records(rs: RuleSet):
    records = []
    for rule in rs.rules:
        table = ()
        if rs.task == SURVIVAL:
            est = rule.consequence.estimate
            table = tuple(zip(est.times, est.probabilities))
        c = rule.covering
        records.append(RuleRecord(format_rule(rule, rs.schema),
                                  (c.p, c.n, c.P, c.N), rule.p_value, table))
    return tuple(records)


def evaluate(rs: RuleSet, ds_test: DataSet) -> EvaluationReport:
    """Score a rule set on a held-out set with the task's standard metric."""
    _check_schema(rs, ds_test)
    if ds_test.n_examples == 0:
        raise ValueError("empty test set")
    records = rule_records(rs)
    undefined = []
    if rs.task == CLASSIFICATION:
        pred = predict(rs, ds_test)
        true = ds_test.labels().astype(int)
        n_classes = len(ds_test.class_symbols())
        return EvaluationReport(
            task=rs.task, rule_count=len(rs.rules), rules=records,
            bacc=balanced_accuracy(true, pred, n_classes),
            confusion=confusion_matrix(true, pred, n_classes))
    if rs.task == REGRESSION:
        pred = predict(rs, ds_test)
        try:
            value = rrse(ds_test.labels(), pred)
        except UndefinedMetricError:
            value = None
            undefined.append("rrse")
        return EvaluationReport(task=rs.task, rule_count=len(rs.rules),
                                rules=records, rrse=value,
                                undefined_metrics=tuple(undefined))
    pred = predict(rs, ds_test)
    try:
        value = integrated_brier_score(ds_test.survival_times(),
                                       ds_test.survival_events(), pred)
    except UndefinedMetricError:
        value = None
        undefined.append("ibs")
    return EvaluationReport(task=rs.task, rule_count=len(rs.rules),
                            rules=records, ibs=value,
                            undefined_metrics=tuple(undefined))


@dataclass(frozen=True)
class CVReport:
    k: int
    folds: tuple[EvaluationReport, ...]
    fold_indices: tuple[tuple[int, ...], ...]
    aggregate: dict
    total_induction_seconds: float


def make_folds(ds: DataSet, k: int, seed: int):
    """Seeded fold assignment, stratified by class for classification.

    Fold sizes differ by at most one.
    """
    n = ds.n_examples
    if k < 2 or k > n:
        raise ValueError(f"fold count {k} must be in [2, {n}]")
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    if ds.task == CLASSIFICATION:
        labels = ds.labels().astype(int)
        order = np.concatenate(
            [perm[labels[perm] == c] for c in range(len(ds.class_symbols()))])
    else:
        order = perm
    folds = [[] for _ in range(k)]
    for pos, idx in enumerate(order):
        folds[pos % k].append(int(idx))
    return tuple(tuple(sorted(f)) for f in folds)


def cross_validate(ds: DataSet, k: int, params, seed: int,
                   threads=1) -> CVReport:
    """k-fold cross validation: induce on k-1 folds, evaluate on the rest."""
    from .induction import induce_ruleset

    folds = make_folds(ds, k, seed)
    reports = []
    total_time = 0.0
    all_idx = np.arange(ds.n_examples)
    for fold in folds:
        test_idx = np.asarray(fold, dtype=int)
        train_idx = np.setdiff1d(all_idx, test_idx)
        train = subset(ds, train_idx)
        test = subset(ds, test_idx)
        t0 = time.perf_counter()
        rs = induce_ruleset(train, params, threads=threads)
        total_time += time.perf_counter() - t0
        reports.append(evaluate(rs, test))
    keys = sorted({k_ for r in reports for k_ in r.metrics()})
    aggregate = {}
    for key in keys:
        vals = [r.metrics()[key] for r in reports if key in r.metrics()]
        aggregate[key] = float(np.mean(vals))
    aggregate["rule_count"] = float(np.mean([r.rule_count for r in reports]))
    return CVReport(k, tuple(reports), folds, aggregate, total_time)
