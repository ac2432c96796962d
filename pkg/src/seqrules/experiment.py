"""Batch experiment runner: datasets x parameter sets -> report files.

The experiment configuration is a versioned YAML document; see README for
the schema.  Each (dataset, parameter set) entry produces a rules report,
a metrics report, and a machine-readable JSON summary.  Entries may run
concurrently; report content is deterministic for a given config.
"""

from __future__ import annotations

import concurrent.futures
import json
import os
from dataclasses import dataclass, field
from typing import Optional

import yaml

from .dataset import SURVIVAL, load_arff, load_csv, set_role
from .errors import SeqRulesError
from .induction import ExpertKnowledge, InductionParams, induce_ruleset
from .measures import Measures
from .prediction import cross_validate, evaluate, rule_records
from .rules import IntervalCondition, NominalCondition

CONFIG_VERSION = 1


class ConfigError(SeqRulesError):
    pass


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    path: str
    label: str
    format: Optional[str] = None
    test_path: Optional[str] = None
    survival_time: Optional[str] = None
    delimiter: str = ","
    header: bool = True


@dataclass(frozen=True)
class ParameterSetEntry:
    name: str
    params: InductionParams
    expert_spec: Optional[dict] = None


@dataclass(frozen=True)
class ExperimentConfig:
    datasets: tuple[DatasetEntry, ...]
    parameter_sets: tuple[ParameterSetEntry, ...]
    evaluation: dict
    report_directory: str


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML in {path!r}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a mapping")
    if doc.get("version") != CONFIG_VERSION:
        raise ConfigError(
            f"config version must be {CONFIG_VERSION}, got {doc.get('version')!r}")
    try:
        datasets = tuple(DatasetEntry(**d) for d in doc["datasets"])
        psets = []
        for ps in doc["parameter_sets"]:
            params = InductionParams.from_dict(ps.get("params", {}))
            psets.append(ParameterSetEntry(ps["name"], params, ps.get("expert")))
        evaluation = doc.get("evaluation", {"type": "train_test"})
        report_dir = doc["report_directory"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc
    if not datasets or not psets:
        raise ConfigError("config needs at least one dataset and one parameter set")
    ev_type = evaluation.get("type")
    if ev_type not in ("train_test", "cv"):
        raise ConfigError(f"evaluation.type must be train_test or cv, got {ev_type!r}")
    return ExperimentConfig(datasets, tuple(psets), evaluation, report_dir)


def load_entry_dataset(entry: DatasetEntry, path=None):
    path = path or entry.path
    fmt = entry.format or os.path.splitext(path)[1].lstrip(".").lower()
    if fmt == "arff":
        ds = load_arff(path)
    elif fmt == "csv":
        ds = load_csv(path, delimiter=entry.delimiter, header=entry.header)
    else:
        raise ConfigError(f"unknown dataset format {fmt!r} for {path!r}")
    ds = set_role(ds, entry.label, "label")
    if entry.survival_time:
        ds = set_role(ds, entry.survival_time, "survival_time")
    return ds


# ---------------------------------------------------------------------------
# Expert specification parsing (shared with the CLI --expert-file flag)

def _parse_condition(d, ds):
    idx = ds.attribute_index(d["attribute"])
    attr = ds.attributes[idx]
    op = d.get("op")
    if op == "=":
        if not attr.is_nominal:
            raise ConfigError(f"'=' condition on numeric attribute {attr.name!r}")
        return NominalCondition(idx, attr.domain.index(str(d["value"])))
    value = float(d["value"])
    if op == "<=":
        return IntervalCondition(idx, upper=value, upper_closed=True)
    if op == "<":
        return IntervalCondition(idx, upper=value)
    if op == ">":
        return IntervalCondition(idx, lower=value)
    if op == ">=":
        return IntervalCondition(idx, lower=value, lower_closed=True)
    raise ConfigError(f"unknown condition operator {op!r}")


def _parse_entry(d, ds):
    if set(d) <= {"attribute", "budget"}:
        return ds.attribute_index(d["attribute"])
    return _parse_condition(d, ds)


def parse_expert(spec: Optional[dict], ds) -> Optional[ExpertKnowledge]:
    if not spec:
        return None
    preferred = tuple((_parse_entry(d, ds), int(d.get("budget", 1)))
                      for d in spec.get("preferred", []))
    forbidden = tuple(_parse_entry(d, ds) for d in spec.get("forbidden", []))
    initial = []
    for r in spec.get("initial_rules", []):
        conds = tuple(_parse_condition(c, ds) for c in r["conditions"])
        target = None
        if "class" in r:
            label = ds.attributes[ds.label_index]
            target = label.domain.index(str(r["class"]))
        initial.append((conds, target))
    desired = spec.get("desired_rule_count")
    if isinstance(desired, dict):
        desired = {str(k): int(v) for k, v in desired.items()}
    elif desired is not None:
        desired = int(desired)
    return ExpertKnowledge(tuple(initial), preferred, forbidden, desired)


# ---------------------------------------------------------------------------
# Report rendering

def _write_rules_report(path, rs):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"task: {rs.task}\n")
        fh.write(f"rules: {len(rs.rules)}\n\n")
        records = rule_records(rs)
        for i, rec in enumerate(records, start=1):
            fh.write(f"r{i}: {rec.text}\n")
            if rec.survival_table:
                fh.write("    time,probability\n")
                for t, s in rec.survival_table:
                    fh.write(f"    {t:.10g},{s:.10g}\n")
        if rs.warnings:
            fh.write("\nwarnings:\n")
            for w in rs.warnings:
                fh.write(f"  - {w}\n")


def _metric_lines(report):
    lines = []
    for key, value in sorted(report.metrics().items()):
        lines.append(f"{key}: {value:.10g}")
    for key in report.undefined_metrics:
        lines.append(f"{key}: undefined")
    lines.append(f"rule_count: {report.rule_count}")
    return lines


def _report_to_dict(report):
    out = {"task": report.task, "rule_count": report.rule_count,
           "metrics": report.metrics(),
           "undefined_metrics": list(report.undefined_metrics)}
    if report.confusion is not None:
        out["confusion"] = [list(row) for row in report.confusion]
    return out


def run_entry(entry: DatasetEntry, pset: ParameterSetEntry, evaluation,
              report_dir, threads=1):
    """Run one (dataset, parameter set) pair; returns the summary dict."""
    ds = load_entry_dataset(entry)
    expert = parse_expert(pset.expert_spec, ds)
    stem = os.path.join(report_dir, f"{entry.name}__{pset.name}")
    rs = induce_ruleset(ds, pset.params, expert, threads=threads)
    _write_rules_report(stem + "_rules.txt", rs)

    summary = {"dataset": entry.name, "parameter_set": pset.name,
               "params": pset.params.to_dict(),
               "rules": [{"text": rec.text,
                          "covering": list(rec.covering),
                          "p_value": rec.p_value,
                          "survival_table": [list(pair) for pair in rec.survival_table]}
                         for rec in rule_records(rs)],
               "warnings": list(rs.warnings)}

    metric_lines = []
    if evaluation.get("type") == "cv":
        cv = cross_validate(ds, int(evaluation.get("folds", 10)), pset.params,
                            int(evaluation.get("seed", 0)), threads=threads)
        for i, rep in enumerate(cv.folds, start=1):
            metric_lines.append(f"fold {i}:")
            metric_lines.extend("  " + line for line in _metric_lines(rep))
        metric_lines.append("aggregate:")
        metric_lines.extend(f"  {k}: {v:.10g}" for k, v in sorted(cv.aggregate.items()))
        summary["evaluation"] = {"type": "cv", "folds": cv.k,
                                 "per_fold": [_report_to_dict(r) for r in cv.folds],
                                 "aggregate": cv.aggregate}
    else:
        if entry.test_path:
            test = load_entry_dataset(entry, entry.test_path)
        else:
            test = ds
        rep = evaluate(rs, test)
        metric_lines.extend(_metric_lines(rep))
        summary["evaluation"] = {"type": "train_test",
                                 "report": _report_to_dict(rep)}

    with open(stem + "_metrics.txt", "w", encoding="utf-8") as fh:
        fh.write("\n".join(metric_lines) + "\n")
    with open(stem + "_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return summary


def run_experiment(config_path, jobs=1, threads=1) -> int:
    """Execute every (dataset x parameter set) entry; returns the exit code
    (0 full success, 1 some entries failed)."""
    config = load_config(config_path)
    os.makedirs(config.report_directory, exist_ok=True)
    work = [(d, p) for d in config.datasets for p in config.parameter_sets]
    failures = []
    results = {}

    def run_one(pair):
        entry, pset = pair
        return run_entry(entry, pset, config.evaluation,
                         config.report_directory, threads=threads)

    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(run_one, pair): pair for pair in work}
            for fut, pair in futures.items():
                entry, pset = pair
                key = f"{entry.name}__{pset.name}"
                try:
                    results[key] = fut.result()
                except Exception as exc:
                    failures.append({"entry": key, "path": entry.path,
                                     "error": str(exc)})
    else:
        for pair in work:
            entry, pset = pair
            key = f"{entry.name}__{pset.name}"
            try:
                results[key] = run_one(pair)
            except Exception as exc:
                failures.append({"entry": key, "path": entry.path,
                                 "error": str(exc)})

    global_summary = {
        "entries": sorted(results),
        "failures": sorted(failures, key=lambda f: f["entry"]),
    }
    with open(os.path.join(config.report_directory, "experiment_summary.json"),
              "w", encoding="utf-8") as fh:
        json.dump(global_summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 1 if failures else 0
