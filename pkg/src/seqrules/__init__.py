"""seqrules: separate-and-conquer decision rule induction for
classification, regression, and survival data."""

from .dataset import (AttributeMeta, DataSet, load_arff, load_csv, set_role,
                      subset, write_arff)
from .errors import (GrowthFailure, ParseError, RoleError, SchemaError,
                     SeqRulesError, UndefinedCoverageError,
                     UndefinedMetricError, UnsupportedMeasureError)
from .induction import (ExpertKnowledge, InductionParams, candidate_conditions,
                        grow_rule, induce_ruleset, prune_rule)
from .measures import Measures, measure_value
from .prediction import (CVReport, EvaluationReport, balanced_accuracy,
                         cross_validate, evaluate, integrated_brier_score,
                         predict, predicted_symbols, rrse)
from .rules import (ClassConsequence, Covering, IntervalCondition,
                    NominalCondition, Rule, RuleSet, SurvivalConsequence,
                    ValueConsequence, covering_stats, covers, format_rule)
from .serialization import load_ruleset, save_ruleset
from .stats import (KaplanMeierEstimate, StatAccumulator, TestResult,
                    hypergeometric_tail, kaplan_meier, log_rank)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
