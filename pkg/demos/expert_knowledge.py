"""User-guided induction: forbidden attributes, preferred conditions, and
an enforced rule count.

Re-runs the car classification task three times to show how each kind of
constraint changes the induced model.
"""

from pathlib import Path

from seqrules import (ExpertKnowledge, InductionParams, format_rule,
                      induce_ruleset, load_arff, set_role)

DATA = Path(__file__).resolve().parent.parent / "data"


def show(title, rs, limit=4):
    print(f"\n{title}: {len(rs.rules)} rules")
    for rule in rs.rules[:limit]:
        print("  " + format_rule(rule, rs.schema))


def main():
    ds = set_role(load_arff(DATA / "car_train.arff"), "class", "label")
    params = InductionParams(minsupp_new=5)

    show("unconstrained", induce_ruleset(ds, params))

    # forbid the 'safety' attribute entirely (wildcards are attribute indices)
    safety = ds.attribute_index("safety")
    banned = induce_ruleset(ds, params, ExpertKnowledge(forbidden=(safety,)))
    assert all(c.attribute != safety for r in banned.rules for c in r.premise)
    show("safety forbidden", banned)

    # demand exactly two rules per class, overriding the coverage stop
    fixed = induce_ruleset(ds, params, ExpertKnowledge(desired_rule_count=2))
    show("two rules per class", fixed, limit=8)


if __name__ == "__main__":
    main()
