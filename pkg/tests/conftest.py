import numpy as np
import pytest

from seqrules.dataset import AttributeMeta, DataSet


def nominal(name, *symbols, role="regular"):
    return AttributeMeta(name, "nominal", tuple(symbols), role)


def numeric(name, role="regular"):
    return AttributeMeta(name, "numeric", role=role)


def make_ds(attrs, rows):
    return DataSet(tuple(attrs), np.array(rows, dtype=float))


@pytest.fixture
def four_row_classification():
    # a=x -> c1, a=y -> c2
    attrs = [nominal("a", "x", "y"), nominal("cls", "c1", "c2", role="label")]
    rows = [[0, 0], [0, 0], [1, 1], [1, 1]]
    return make_ds(attrs, rows)


def random_classification(rng, n_examples=None, n_attrs=None):
    n = n_examples or int(rng.integers(8, 31))
    m = n_attrs or int(rng.integers(1, 5))
    attrs = []
    cols = []
    for j in range(m):
        if rng.uniform() < 0.5:
            k = int(rng.integers(2, 4))
            attrs.append(nominal(f"a{j}", *[f"s{v}" for v in range(k)]))
            cols.append(rng.integers(0, k, n).astype(float))
        else:
            attrs.append(numeric(f"v{j}"))
            cols.append(np.round(rng.uniform(0, 10, n), 2))
    n_classes = int(rng.integers(2, 4))
    attrs.append(nominal("cls", *[f"c{v}" for v in range(n_classes)], role="label"))
    cols.append(rng.integers(0, n_classes, n).astype(float))
    return make_ds(attrs, np.column_stack(cols))


def random_regression(rng, n_examples=None, n_attrs=None):
    n = n_examples or int(rng.integers(10, 31))
    m = n_attrs or int(rng.integers(1, 4))
    attrs = []
    cols = []
    for j in range(m):
        if rng.uniform() < 0.3:
            k = int(rng.integers(2, 4))
            attrs.append(nominal(f"a{j}", *[f"s{v}" for v in range(k)]))
            cols.append(rng.integers(0, k, n).astype(float))
        else:
            attrs.append(numeric(f"v{j}"))
            cols.append(rng.uniform(0, 10, n))
    attrs.append(numeric("y", role="label"))
    cols.append(rng.normal(5.0, 2.0, n) + np.where(cols[0] > np.median(cols[0]), 4.0, 0.0))
    return make_ds(attrs, np.column_stack(cols))


def random_survival(rng, n_examples=None):
    n = n_examples or int(rng.integers(12, 31))
    grp = rng.integers(0, 2, n).astype(float)
    x = rng.uniform(0, 10, n)
    times = rng.exponential(np.where(grp > 0, 2.0, 6.0))
    events = (rng.uniform(size=n) < 0.8).astype(float)
    attrs = [nominal("grp", "g0", "g1"), numeric("x"),
             numeric("time", role="survival_time"),
             nominal("event", "0", "1", role="label")]
    return make_ds(attrs, np.column_stack([grp, x, times, events]))
