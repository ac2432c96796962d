"""Elementary conditions, rules, rule sets, and coverage computation.

A premise is a conjunction with at most one condition per attribute;
conditions added on an attribute already constrained are merged by
interval intersection (numeric) or must agree (nominal).  A condition
evaluated on a missing cell is false, so the example is not covered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .dataset import CLASSIFICATION, REGRESSION, SURVIVAL, AttributeMeta, DataSet
from .errors import SchemaError
from .stats import KaplanMeierEstimate


@dataclass(frozen=True)
class NominalCondition:
    attribute: int
    value: int  # index into the attribute's domain


@dataclass(frozen=True)
class IntervalCondition:
    attribute: int
    lower: float = -math.inf
    upper: float = math.inf
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval: lower > upper")
        if self.lower == self.upper and not (self.lower_closed and self.upper_closed):
            raise ValueError("degenerate interval must be closed on both sides")


Condition = Union[NominalCondition, IntervalCondition]


@dataclass(frozen=True)
class Covering:
    """The (p, n, P, N) tuple every quality measure is a function of."""

    p: int
    n: int
    P: int
    N: int
    survival: bool = False

    def __post_init__(self):
        if not (0 <= self.p <= self.P and 0 <= self.n <= self.N and self.P >= 1):
            raise ValueError(f"inconsistent covering {self}")


@dataclass(frozen=True)
class ClassConsequence:
    value: int  # class symbol index


@dataclass(frozen=True)
class ValueConsequence:
    mean: float
    sigma: float


@dataclass(frozen=True)
class SurvivalConsequence:
    estimate: KaplanMeierEstimate


Consequence = Union[ClassConsequence, ValueConsequence, SurvivalConsequence]


@dataclass(frozen=True)
class Rule:
    premise: tuple[Condition, ...]
    consequence: Consequence
    covering: Optional[Covering] = None
    voting_weight: float = 1.0
    p_value: float = 1.0


@dataclass(frozen=True)
class DefaultModel:
    kind: str  # "majority_class" | "global_mean" | "global_km"
    class_index: Optional[int] = None
    class_counts: tuple[int, ...] = ()
    mean: Optional[float] = None
    km: Optional[KaplanMeierEstimate] = None


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]
    task: str
    schema: tuple[AttributeMeta, ...]
    default_model: DefaultModel
    params: "InductionParams" = None  # type: ignore[assignment]
    warnings: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# Coverage

def condition_mask(cond: Condition, values: np.ndarray) -> np.ndarray:
    """Boolean coverage of one condition over a value matrix; NaN -> False."""
    if cond.attribute >= values.shape[1]:
        raise SchemaError(f"attribute index {cond.attribute} out of range")
    col = values[:, cond.attribute]
    if isinstance(cond, NominalCondition):
        return col == cond.value
    with np.errstate(invalid="ignore"):
        lo = col >= cond.lower if cond.lower_closed else col > cond.lower
        hi = col <= cond.upper if cond.upper_closed else col < cond.upper
    return lo & hi & ~np.isnan(col)


def premise_mask(premise, values: np.ndarray) -> np.ndarray:
    mask = np.ones(values.shape[0], dtype=bool)
    for cond in premise:
        mask &= condition_mask(cond, values)
    return mask


def covers(premise, example) -> bool:
    """True iff every condition holds on the single example row."""
    row = np.asarray(example, dtype=float).reshape(1, -1)
    return bool(premise_mask(premise, row)[0])


def merge_condition(premise: tuple[Condition, ...], cond: Condition) -> tuple[Condition, ...]:
    """Add a condition, intersecting with any existing one on the attribute."""
    out = []
    merged = cond
    for existing in premise:
        if existing.attribute != cond.attribute:
            out.append(existing)
            continue
        if isinstance(existing, NominalCondition) or isinstance(cond, NominalCondition):
            if existing != cond:
                raise ValueError("conflicting nominal conditions on one attribute")
            merged = cond
            continue
        if existing.lower > merged.lower or (
                existing.lower == merged.lower and not existing.lower_closed):
            lo, lo_c = existing.lower, existing.lower_closed
        else:
            lo, lo_c = merged.lower, merged.lower_closed
        if existing.upper < merged.upper or (
                existing.upper == merged.upper and not existing.upper_closed):
            hi, hi_c = existing.upper, existing.upper_closed
        else:
            hi, hi_c = merged.upper, merged.upper_closed
        merged = IntervalCondition(cond.attribute, lo, hi, lo_c, hi_c)
    out.append(merged)
    out.sort(key=lambda c: c.attribute)
    return tuple(out)


def sigma_window_bounds(mean: float, sigma: float) -> tuple[float, float]:
    """Closed bounds of the regression positive window around ``mean``.

    The bounds carry a small relative slack so that labels lying exactly on
    mean +/- sigma stay inside regardless of whether the moments came from a
    two-pass or an incremental computation (their last-ulp drift would
    otherwise flip boundary membership).
    """
    eps = 1e-9 * (abs(mean) + sigma + 1.0)
    return mean - sigma - eps, mean + sigma + eps


def covering_stats(rule: Rule, ds: DataSet, scope=None) -> Covering:
    """Compute the (p, n, P, N) tuple of a rule on a dataset.

    ``scope`` optionally restricts the statistics to a subset of example
    indices.  Positives depend on the task: label equality for
    classification, the sigma window around the covered-label mean for
    regression, and all examples for survival.
    """
    values = ds.values if scope is None else ds.values[np.asarray(scope, dtype=int)]
    mask = premise_mask(rule.premise, values)
    task = ds.task
    if task == CLASSIFICATION:
        labels = values[:, ds.label_index]
        target = rule.consequence.value
        pos = labels == target
        return Covering(
            p=int((mask & pos).sum()), n=int((mask & ~pos).sum()),
            P=int(pos.sum()), N=int((~pos).sum()))
    if task == REGRESSION:
        labels = values[:, ds.label_index]
        covered = labels[mask]
        if covered.size:
            mean = float(covered.mean())
            sigma = float(covered.std())
        else:
            mean, sigma = 0.0, 0.0
        lo, hi = sigma_window_bounds(mean, sigma)
        window = (labels >= lo) & (labels <= hi)
        total = values.shape[0]
        P = int(window.sum())
        p = int((window & mask).sum())
        return Covering(p=p, n=int(mask.sum()) - p, P=P, N=total - P)
    if task == SURVIVAL:
        return Covering(p=int(mask.sum()), n=0, P=values.shape[0], N=0, survival=True)
    raise SchemaError("dataset has no task; assign a label role first")


# ---------------------------------------------------------------------------
# Formatting

def _num(x: float) -> str:
    """Render a bound with 6 significant digits."""
    if x == math.floor(x) and abs(x) < 1e15:
        return f"{x:g}"
    return f"{x:.6g}"


def format_condition(cond: Condition, schema) -> str:
    attr = schema[cond.attribute]
    if isinstance(cond, NominalCondition):
        return f"{attr.name} = {attr.domain[cond.value]}"
    lo, hi = cond.lower, cond.upper
    if lo == -math.inf and hi == math.inf:
        return f"{attr.name} = any"
    if lo == -math.inf:
        op = "≤" if cond.upper_closed else "<"
        return f"{attr.name} {op} {_num(hi)}"
    if hi == math.inf:
        op = "≥" if cond.lower_closed else ">"
        return f"{attr.name} {op} {_num(lo)}"
    lb = "[" if cond.lower_closed else "("
    rb = "]" if cond.upper_closed else ")"
    return f"{attr.name} in {lb}{_num(lo)}, {_num(hi)}{rb}"


def format_rule(rule: Rule, schema) -> str:
    """Canonical deterministic one-line rendering of a rule."""
    if rule.premise:
        premise = " AND ".join(format_condition(c, schema) for c in rule.premise)
    else:
        premise = "TRUE"
    label = next((a for a in schema if a.role == "label"), None)
    cons = rule.consequence
    if isinstance(cons, ClassConsequence):
        head = f"{label.name} = {label.domain[cons.value]}"
    elif isinstance(cons, ValueConsequence):
        head = f"{label.name} = {_num(cons.mean)} [σ = {_num(cons.sigma)}]"
    else:
        head = "survival estimate"
    stats = ""
    if rule.covering is not None:
        c = rule.covering
        stats = (f" (p={c.p}, n={c.n}, P={c.P}, N={c.N}, "
                 f"pval={rule.p_value:.6g})")
    return f"IF {premise} THEN {head}{stats}"
