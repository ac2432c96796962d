"""Generate the bundled example datasets under data/.

Both datasets are deterministic.  The car acceptability data is produced
by a hierarchical scoring model over the classic six nominal attributes
and split into stratified train/test parts; the transplant survival data
is drawn from a seeded two-risk-group model with administrative
censoring.
"""

import itertools
import os

import numpy as np

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "..", "data")

BUYING = ["vhigh", "high", "med", "low"]
MAINT = ["vhigh", "high", "med", "low"]
DOORS = ["2", "3", "4", "5more"]
PERSONS = ["2", "4", "more"]
LUG = ["small", "med", "big"]
SAFETY = ["low", "med", "high"]
CLASSES = ["unacc", "acc", "good", "vgood"]


def car_class(buying, maint, doors, persons, lug_boot, safety):
    if safety == "low" or persons == "2":
        return "unacc"
    price = BUYING.index(buying) + MAINT.index(maint)  # 0 (worst) .. 6 (best)
    comfort = (min(DOORS.index(doors), 2)
               + {"4": 1, "more": 2}[persons]
               + LUG.index(lug_boot))  # 0 .. 6
    tech = comfort + {"med": 1, "high": 3}[safety]  # 1 .. 9
    if price >= 5 and tech >= 7:
        return "vgood"
    if price >= 4 and tech >= 5:
        return "good"
    if price + tech >= 8:
        return "acc"
    return "unacc"


def write_arff(path, relation, attrs, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"@relation {relation}\n\n")
        for name, spec in attrs:
            fh.write(f"@attribute {name} {spec}\n")
        fh.write("\n@data\n")
        for row in rows:
            fh.write(",".join(str(c) for c in row) + "\n")


def make_car():
    rows = []
    for combo in itertools.product(BUYING, MAINT, DOORS, PERSONS, LUG, SAFETY):
        rows.append(list(combo) + [car_class(*combo)])
    counts = {c: sum(1 for r in rows if r[-1] == c) for c in CLASSES}
    print("car class counts:", counts)

    rng = np.random.default_rng(20240817)
    train, test = [], []
    for c in CLASSES:
        members = [r for r in rows if r[-1] == c]
        perm = rng.permutation(len(members))
        cut = int(round(0.7 * len(members)))
        train.extend(members[i] for i in perm[:cut])
        test.extend(members[i] for i in perm[cut:])
    # deterministic file order within each part
    train.sort()
    test.sort()
    attrs = [("buying", "{%s}" % ",".join(BUYING)),
             ("maint", "{%s}" % ",".join(MAINT)),
             ("doors", "{%s}" % ",".join(DOORS)),
             ("persons", "{%s}" % ",".join(PERSONS)),
             ("lug_boot", "{%s}" % ",".join(LUG)),
             ("safety", "{%s}" % ",".join(SAFETY)),
             ("class", "{%s}" % ",".join(CLASSES))]
    write_arff(os.path.join(DATA, "car_train.arff"), "car-train", attrs, train)
    write_arff(os.path.join(DATA, "car_test.arff"), "car-test", attrs, test)
    print(f"car: {len(train)} train, {len(test)} test")


def make_transplant():
    rng = np.random.default_rng(20240818)
    n = 187
    recipient_age = np.round(rng.uniform(1.0, 20.0, n), 1)
    donor_age = np.round(rng.uniform(18.0, 55.0, n), 1)
    hla = rng.integers(0, 2, n)  # 0 matched, 1 mismatched
    cd34 = np.round(rng.lognormal(1.5, 0.6, n), 2)

    # hazard rises with mismatch and low cell dose
    base = 0.010
    hazard = base * np.exp(0.9 * hla + 0.8 * (cd34 < 4.0) + 0.02 * recipient_age)
    event_time = rng.exponential(1.0 / hazard)
    censor_time = rng.uniform(10.0, 350.0, n)
    time = np.round(np.minimum(event_time, censor_time), 1)
    event = (event_time <= censor_time).astype(int)
    print(f"transplant: {n} subjects, {event.sum()} events")

    attrs = [("recipient_age", "numeric"),
             ("donor_age", "numeric"),
             ("hla_match", "{matched,mismatched}"),
             ("cd34_dose", "numeric"),
             ("survival_time", "numeric"),
             ("event", "{0,1}")]
    rows = [[recipient_age[i], donor_age[i],
             "mismatched" if hla[i] else "matched",
             cd34[i], time[i], event[i]] for i in range(n)]
    write_arff(os.path.join(DATA, "transplant_survival.arff"),
               "transplant-survival", attrs, rows)


if __name__ == "__main__":
    os.makedirs(DATA, exist_ok=True)
    make_car()
    make_transplant()
