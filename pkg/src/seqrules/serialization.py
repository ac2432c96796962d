"""Versioned, self-describing rule-set serialization (JSON)."""

from __future__ import annotations

import json
import math

from .dataset import AttributeMeta
from .errors import SeqRulesError
from .induction import InductionParams
from .rules import (ClassConsequence, Covering, DefaultModel,
                    IntervalCondition, NominalCondition, Rule, RuleSet,
                    SurvivalConsequence, ValueConsequence)
from .stats import KaplanMeierEstimate

FORMAT_VERSION = 1


def _num(x):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return x


def _denum(x):
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    return float(x)


def _condition_to_dict(cond):
    if isinstance(cond, NominalCondition):
        return {"type": "equals", "attribute": cond.attribute, "value": cond.value}
    return {"type": "interval", "attribute": cond.attribute,
            "lower": _num(cond.lower), "upper": _num(cond.upper),
            "lower_closed": cond.lower_closed, "upper_closed": cond.upper_closed}


def _condition_from_dict(d):
    if d["type"] == "equals":
        return NominalCondition(d["attribute"], d["value"])
    return IntervalCondition(d["attribute"], _denum(d["lower"]), _denum(d["upper"]),
                             d["lower_closed"], d["upper_closed"])


def _km_to_dict(km):
    return {"times": list(km.times), "probabilities": list(km.probabilities)}


def _km_from_dict(d):
    return KaplanMeierEstimate(tuple(d["times"]), tuple(d["probabilities"]))


def _consequence_to_dict(cons):
    if isinstance(cons, ClassConsequence):
        return {"type": "class", "value": cons.value}
    if isinstance(cons, ValueConsequence):
        return {"type": "value", "mean": cons.mean, "sigma": cons.sigma}
    return {"type": "survival", "estimate": _km_to_dict(cons.estimate)}


def _consequence_from_dict(d):
    if d["type"] == "class":
        return ClassConsequence(d["value"])
    if d["type"] == "value":
        return ValueConsequence(d["mean"], d["sigma"])
    return SurvivalConsequence(_km_from_dict(d["estimate"]))


def ruleset_to_dict(rs: RuleSet) -> dict:
    dm = rs.default_model
    return {
        "format_version": FORMAT_VERSION,
        "task": rs.task,
        "schema": [{"name": a.name, "kind": a.kind, "domain": list(a.domain),
                    "role": a.role} for a in rs.schema],
        "params": rs.params.to_dict() if rs.params else None,
        "default_model": {
            "kind": dm.kind,
            "class_index": dm.class_index,
            "class_counts": list(dm.class_counts),
            "mean": dm.mean,
            "km": _km_to_dict(dm.km) if dm.km else None,
        },
        "rules": [{
            "premise": [_condition_to_dict(c) for c in r.premise],
            "consequence": _consequence_to_dict(r.consequence),
            "covering": {"p": r.covering.p, "n": r.covering.n,
                         "P": r.covering.P, "N": r.covering.N,
                         "survival": r.covering.survival},
            "voting_weight": r.voting_weight,
            "p_value": r.p_value,
        } for r in rs.rules],
        "warnings": list(rs.warnings),
    }


def ruleset_from_dict(d: dict) -> RuleSet:
    if d.get("format_version") != FORMAT_VERSION:
        raise SeqRulesError(
            f"unsupported model format version {d.get('format_version')!r}")
    schema = tuple(AttributeMeta(a["name"], a["kind"], tuple(a["domain"]), a["role"])
                   for a in d["schema"])
    dm = d["default_model"]
    default = DefaultModel(dm["kind"], class_index=dm["class_index"],
                           class_counts=tuple(dm["class_counts"]),
                           mean=dm["mean"],
                           km=_km_from_dict(dm["km"]) if dm["km"] else None)
    rules = tuple(
        Rule(premise=tuple(_condition_from_dict(c) for c in r["premise"]),
             consequence=_consequence_from_dict(r["consequence"]),
             covering=Covering(**r["covering"]),
             voting_weight=r["voting_weight"],
             p_value=r["p_value"])
        for r in d["rules"])
    params = InductionParams.from_dict(d["params"]) if d["params"] else None
    return RuleSet(rules, d["task"], schema, default, params,
                   tuple(d["warnings"]))


def save_ruleset(rs: RuleSet, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(ruleset_to_dict(rs), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_ruleset(path) -> RuleSet:
    with open(path, encoding="utf-8") as fh:
        return ruleset_from_dict(json.load(fh))
