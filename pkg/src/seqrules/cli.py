"""Command-line interface.

Subcommands: train, predict, evaluate, cv, experiment, defaults.
Exit codes: 0 success, 1 run failure, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys

import yaml

from . import __version__
from .dataset import SURVIVAL, load_arff, load_csv, set_role
from .errors import SeqRulesError
from .experiment import ConfigError, parse_expert, run_experiment
from .induction import InductionParams, induce_ruleset
from .measures import Measures
from .prediction import cross_validate, evaluate, predict
from .serialization import load_ruleset, save_ruleset


class UsageError(Exception):
    pass


def _add_data_flags(sub):
    sub.add_argument("--data", required=True, help="input dataset path")
    sub.add_argument("--format", choices=["arff", "csv"],
                     help="input format (default: from file extension)")
    sub.add_argument("--delimiter", default=",", help="CSV delimiter")
    sub.add_argument("--no-header", action="store_true",
                     help="CSV file has no header row")


def _add_role_flags(sub):
    sub.add_argument("--label", required=True, help="label attribute name")
    sub.add_argument("--survival-time", help="survival-time attribute name")
    sub.add_argument("--task", choices=["classification", "regression", "survival"],
                     help="expected task; checked against the inferred task")


def _add_param_flags(sub):
    defaults = InductionParams()
    sub.add_argument("--minsupp-new", type=int, default=defaults.minsupp_new)
    sub.add_argument("--max-uncovered", type=float,
                     default=defaults.max_uncovered_fraction)
    measure_names = [m.value for m in Measures]
    sub.add_argument("--measure-induction", choices=measure_names,
                     default=defaults.induction_measure.value)
    sub.add_argument("--measure-pruning", choices=measure_names,
                     default=defaults.pruning_measure.value)
    sub.add_argument("--measure-voting", choices=measure_names,
                     default=defaults.voting_measure.value)
    sub.add_argument("--no-pruning", action="store_true")
    sub.add_argument("--significance-level", type=float,
                     default=defaults.significance_level)
    sub.add_argument("--filter-significant", action="store_true")
    sub.add_argument("--expert-file", help="expert knowledge file (YAML/JSON)")
    sub.add_argument("--seed", type=int, default=defaults.seed)
    sub.add_argument("--threads", type=int, default=1)


def _load_data(args):
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.data.lower().endswith(".csv") else "arff"
    if fmt == "csv":
        ds = load_csv(args.data, delimiter=args.delimiter,
                      header=not args.no_header)
    else:
        ds = load_arff(args.data)
    if getattr(args, "label", None):
        ds = set_role(ds, args.label, "label")
    if getattr(args, "survival_time", None):
        ds = set_role(ds, args.survival_time, "survival_time")
    task = getattr(args, "task", None)
    if task == "survival" and not getattr(args, "survival_time", None):
        raise UsageError("--task survival requires --survival-time")
    if task and ds.task != task:
        raise UsageError(f"dataset task is {ds.task}, but --task {task} was given")
    return ds


def _params(args):
    return InductionParams(
        minsupp_new=args.minsupp_new,
        max_uncovered_fraction=args.max_uncovered,
        induction_measure=Measures(args.measure_induction),
        pruning_measure=Measures(args.measure_pruning),
        voting_measure=Measures(args.measure_voting),
        pruning_enabled=not args.no_pruning,
        significance_level=args.significance_level,
        significance_filter=args.filter_significant,
        seed=args.seed)


def _expert(args, ds):
    if not args.expert_file:
        return None
    with open(args.expert_file, encoding="utf-8") as fh:
        spec = yaml.safe_load(fh)
    return parse_expert(spec, ds)


def _cmd_train(args):
    ds = _load_data(args)
    rs = induce_ruleset(ds, _params(args), _expert(args, ds),
                        threads=args.threads)
    save_ruleset(rs, args.model_out)
    return 0


def _cmd_predict(args):
    rs = load_ruleset(args.model_in)
    ds = _load_data_for_model(args, rs)
    preds = predict(rs, ds)
    with open(args.report, "w", encoding="utf-8") as fh:
        if rs.task == "classification":
            label = next(a for a in rs.schema if a.role == "label")
            for i in preds:
                fh.write(label.domain[int(i)] + "\n")
        elif rs.task == "regression":
            for v in preds:
                fh.write(f"{float(v):.10g}\n")
        else:
            for est in preds:
                pairs = [[float(t), float(s)]
                         for t, s in zip(est.times, est.probabilities)]
                fh.write(json.dumps(pairs) + "\n")
    return 0


def _load_data_for_model(args, rs):
    """Load a prediction/evaluation dataset using the model's role names."""
    label = next((a.name for a in rs.schema if a.role == "label"), None)
    stime = next((a.name for a in rs.schema if a.role == "survival_time"), None)
    args.label = getattr(args, "label", None) or label
    args.survival_time = getattr(args, "survival_time", None) or stime
    return _load_data(args)


def _metric_text(report):
    lines = [f"{k}: {v:.10g}" for k, v in sorted(report.metrics().items())]
    lines += [f"{k}: undefined" for k in report.undefined_metrics]
    lines.append(f"rule_count: {report.rule_count}")
    return "\n".join(lines) + "\n"


def _cmd_evaluate(args):
    rs = load_ruleset(args.model_in)
    ds = _load_data_for_model(args, rs)
    report = evaluate(rs, ds)
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(_metric_text(report))
    return 0


def _cmd_cv(args):
    ds = _load_data(args)
    cv = cross_validate(ds, args.folds, _params(args), args.seed,
                        threads=args.threads)
    lines = []
    for i, rep in enumerate(cv.folds, start=1):
        lines.append(f"fold {i}:")
        lines.extend("  " + ln for ln in _metric_text(rep).splitlines())
    lines.append("aggregate:")
    lines.extend(f"  {k}: {v:.10g}" for k, v in sorted(cv.aggregate.items()))
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    return 0


def _cmd_experiment(args):
    return run_experiment(args.config, jobs=args.jobs, threads=args.threads)


def _cmd_defaults(args):
    print(json.dumps(InductionParams().to_dict(), indent=2, sort_keys=True))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="seqrules",
        description="Separate-and-conquer decision rule induction")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("train", help="induce a rule set and save it")
    _add_data_flags(p)
    _add_role_flags(p)
    _add_param_flags(p)
    p.add_argument("--model-out", required=True)
    p.set_defaults(func=_cmd_train)

    p = subs.add_parser("predict", help="apply a saved model")
    _add_data_flags(p)
    p.add_argument("--model-in", required=True)
    p.add_argument("--report", required=True, help="predictions output path")
    p.set_defaults(func=_cmd_predict)

    p = subs.add_parser("evaluate", help="score a saved model on a dataset")
    _add_data_flags(p)
    p.add_argument("--model-in", required=True)
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = subs.add_parser("cv", help="k-fold cross validation")
    _add_data_flags(p)
    _add_role_flags(p)
    _add_param_flags(p)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--report", required=True)
    p.set_defaults(func=_cmd_cv)

    p = subs.add_parser("experiment", help="run a batch experiment config")
    p.add_argument("config")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=_cmd_experiment)

    p = subs.add_parser("defaults", help="print default induction parameters")
    p.set_defaults(func=_cmd_defaults)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SeqRulesError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
