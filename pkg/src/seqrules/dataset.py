"""Typed columnar datasets with attribute roles and ARFF/CSV ingestion.

Cells are stored in a single float matrix: numeric attributes hold their
value, nominal attributes hold the index of the symbol in the attribute's
domain, and missing cells are NaN.  Datasets are immutable after
construction; role changes return a new instance.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParseError, RoleError

REGULAR = "regular"
LABEL = "label"
SURVIVAL_TIME = "survival_time"

CLASSIFICATION = "classification"
REGRESSION = "regression"
SURVIVAL = "survival"


@dataclass(frozen=True)
class AttributeMeta:
    name: str
    kind: str  # "numeric" | "nominal"
    domain: tuple[str, ...] = ()
    role: str = REGULAR

    def __post_init__(self):
        if self.kind not in ("numeric", "nominal"):
            raise ValueError(f"unknown attribute kind {self.kind!r}")
        if self.role not in (REGULAR, LABEL, SURVIVAL_TIME):
            raise ValueError(f"unknown role {self.role!r}")
        if self.kind == "nominal":
            if len(set(self.domain)) != len(self.domain):
                raise ValueError(f"duplicate symbols in domain of {self.name!r}")
            if any(s == "" for s in self.domain):
                raise ValueError(f"empty symbol in domain of {self.name!r}")

    @property
    def is_nominal(self):
        return self.kind == "nominal"


@dataclass(frozen=True)
class DataSet:
    attributes: tuple[AttributeMeta, ...]
    values: np.ndarray = field(compare=False)  # (n_examples, n_attributes), NaN = missing
    relation: str = "data"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2 or values.shape[1] != len(self.attributes):
            raise ValueError("value matrix shape does not match attribute list")
        values.setflags(write=False)
        labels = [i for i, a in enumerate(self.attributes) if a.role == LABEL]
        times = [i for i, a in enumerate(self.attributes) if a.role == SURVIVAL_TIME]
        if len(labels) > 1:
            raise RoleError("more than one label attribute")
        if len(times) > 1:
            raise RoleError("more than one survival-time attribute")
        for j, attr in enumerate(self.attributes):
            if attr.is_nominal:
                col = values[:, j]
                ok = np.isnan(col) | ((col >= 0) & (col < len(attr.domain)) & (col == np.floor(col)))
                if not ok.all():
                    raise ValueError(f"nominal index out of domain in attribute {attr.name!r}")
        if labels and times:
            self._check_survival(labels[0], times[0])
        elif times:
            raise RoleError("survival_time role requires a label attribute")
        elif labels:
            col = values[:, labels[0]]
            if np.isnan(col).any():
                raise RoleError("label attribute must not contain missing values")

    def _check_survival(self, label_idx, time_idx):
        time_attr = self.attributes[time_idx]
        if time_attr.is_nominal:
            raise RoleError("survival_time must be a numeric attribute")
        tcol = self.values[:, time_idx]
        if np.isnan(tcol).any():
            raise RoleError("survival_time must not contain missing values")
        if (tcol < 0).any():
            raise RoleError("survival_time values must be >= 0")
        label = self.attributes[label_idx]
        col = self.values[:, label_idx]
        if np.isnan(col).any():
            raise RoleError("event indicator must not contain missing values")
        if label.is_nominal:
            if not set(label.domain) <= {"0", "1"}:
                raise RoleError("event indicator domain must be within {0, 1}")
            events = np.array([float(label.domain[int(v)]) for v in col])
        else:
            events = col
        if not np.isin(events, (0.0, 1.0)).all():
            raise RoleError("event indicator values must be 0 or 1")

    # -- schema helpers -------------------------------------------------

    @property
    def n_examples(self):
        return self.values.shape[0]

    @property
    def label_index(self):
        for i, a in enumerate(self.attributes):
            if a.role == LABEL:
                return i
        return None

    @property
    def survival_time_index(self):
        for i, a in enumerate(self.attributes):
            if a.role == SURVIVAL_TIME:
                return i
        return None

    @property
    def task(self):
        """Task kind implied by the current roles, or None if no label is set."""
        li = self.label_index
        if li is None:
            return None
        if self.survival_time_index is not None:
            return SURVIVAL
        return CLASSIFICATION if self.attributes[li].is_nominal else REGRESSION

    def attribute_index(self, name):
        for i, a in enumerate(self.attributes):
            if a.name == name:
                return i
        raise KeyError(f"no attribute named {name!r}")

    def column(self, index):
        return self.values[:, index]

    def labels(self):
        li = self.label_index
        if li is None:
            raise RoleError("dataset has no label attribute")
        return self.values[:, li]

    def class_symbols(self):
        li = self.label_index
        return self.attributes[li].domain

    def survival_times(self):
        ti = self.survival_time_index
        if ti is None:
            raise RoleError("dataset has no survival_time attribute")
        return self.values[:, ti]

    def survival_events(self):
        """Event indicator as a 0/1 float array."""
        li = self.label_index
        attr = self.attributes[li]
        col = self.values[:, li]
        if attr.is_nominal:
            return np.array([float(attr.domain[int(v)]) for v in col])
        return col.copy()


def set_role(ds: DataSet, name: str, role: str) -> DataSet:
    """Return a copy of ``ds`` with the named attribute assigned ``role``.

    Setting LABEL clears any previous label; other role conflicts raise
    RoleError via the DataSet invariant checks.
    """
    idx = ds.attribute_index(name)
    attrs = list(ds.attributes)
    if role == LABEL:
        attrs = [replace(a, role=REGULAR) if a.role == LABEL else a for a in attrs]
    if role == SURVIVAL_TIME:
        attrs = [replace(a, role=REGULAR) if a.role == SURVIVAL_TIME else a for a in attrs]
    attrs[idx] = replace(attrs[idx], role=role)
    return DataSet(tuple(attrs), ds.values.copy(), ds.relation)


def subset(ds: DataSet, indices) -> DataSet:
    """Row subset preserving schema and order of ``indices``."""
    return DataSet(ds.attributes, ds.values[np.asarray(indices, dtype=int)], ds.relation)


# ---------------------------------------------------------------------------
# ARFF

_ATTR_RE = re.compile(r"@attribute\s+(?:'([^']+)'|\"([^\"]+)\"|(\S+))\s+(.+)", re.IGNORECASE)


def _unquote(tok):
    tok = tok.strip()
    if len(tok) >= 2 and tok[0] == tok[-1] and tok[0] in "'\"":
        return tok[1:-1]
    return tok


def load_arff(path) -> DataSet:
    """Read the ARFF subset: @relation, numeric/nominal @attribute, @data.

    '?' marks a missing cell, '%' starts a comment.  Errors carry the
    1-based line number of the offending declaration or row.
    """
    relation = None
    attributes: list[AttributeMeta] = []
    rows: list[list[float]] = []
    in_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            low = line.lower()
            if not in_data:
                if low.startswith("@relation"):
                    relation = _unquote(line[len("@relation"):])
                elif low.startswith("@attribute"):
                    m = _ATTR_RE.match(line)
                    if not m:
                        raise ParseError("malformed @attribute declaration", lineno)
                    name = next(g for g in m.groups()[:3] if g is not None)
                    spec = m.group(4).strip()
                    if spec.lower() in ("numeric", "real", "integer"):
                        attributes.append(AttributeMeta(name, "numeric"))
                    elif spec.startswith("{") and spec.endswith("}"):
                        symbols = tuple(_unquote(s) for s in spec[1:-1].split(","))
                        attributes.append(AttributeMeta(name, "nominal", symbols))
                    else:
                        raise ParseError(f"unknown attribute type {spec!r}", lineno)
                elif low.startswith("@data"):
                    if relation is None:
                        raise ParseError("@data before @relation", lineno)
                    if not attributes:
                        raise ParseError("@data with no attributes declared", lineno)
                    in_data = True
                else:
                    raise ParseError(f"unexpected declaration {line.split()[0]!r}", lineno)
            else:
                cells = [_unquote(c) for c in line.split(",")]
                if len(cells) != len(attributes):
                    raise ParseError(
                        f"row has {len(cells)} values, expected {len(attributes)}", lineno)
                row = []
                for attr, cell in zip(attributes, cells):
                    if cell == "?":
                        row.append(math.nan)
                    elif attr.is_nominal:
                        try:
                            row.append(float(attr.domain.index(cell)))
                        except ValueError:
                            raise ParseError(
                                f"symbol {cell!r} not in domain of {attr.name!r}", lineno) from None
                    else:
                        try:
                            row.append(float(cell))
                        except ValueError:
                            raise ParseError(
                                f"cannot parse {cell!r} as a number for {attr.name!r}", lineno) from None
                rows.append(row)
    if not in_data:
        raise ParseError("no @data section found")
    matrix = np.array(rows, dtype=float) if rows else np.empty((0, len(attributes)))
    return DataSet(tuple(attributes), matrix, relation)


def write_arff(ds: DataSet, path):
    """Write a DataSet in the ARFF subset read by :func:`load_arff`."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"@relation {ds.relation}\n\n")
        for attr in ds.attributes:
            if attr.is_nominal:
                fh.write(f"@attribute {attr.name} {{{','.join(attr.domain)}}}\n")
            else:
                fh.write(f"@attribute {attr.name} numeric\n")
        fh.write("\n@data\n")
        for row in ds.values:
            cells = []
            for attr, v in zip(ds.attributes, row):
                if math.isnan(v):
                    cells.append("?")
                elif attr.is_nominal:
                    cells.append(attr.domain[int(v)])
                else:
                    cells.append(repr(float(v)))
            fh.write(",".join(cells) + "\n")


# ---------------------------------------------------------------------------
# CSV

def load_csv(path, delimiter=",", header=True) -> DataSet:
    """Read a rectangular CSV table with all-or-nothing numeric inference.

    A column is numeric iff every non-missing cell parses as a real number;
    otherwise it is nominal with the domain in order of first appearance.
    Empty cells and '?' are missing.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        raw = [row for row in reader if row]
    if not raw:
        raise ParseError("empty file")
    if header:
        names = [c.strip() for c in raw[0]]
        if len(set(names)) != len(names):
            raise ParseError("duplicate header names", 1)
        body = raw[1:]
        first_data_line = 2
    else:
        names = [f"c{i}" for i in range(len(raw[0]))]
        body = raw
        first_data_line = 1
    width = len(names)
    for off, row in enumerate(body):
        if len(row) != width:
            raise ParseError(
                f"row has {len(row)} values, expected {width}", first_data_line + off)
    cols = [[row[j].strip() for row in body] for j in range(width)]
    attributes = []
    matrix = np.empty((len(body), width))
    for j, (name, col) in enumerate(zip(names, cols)):
        present = [c for c in col if c not in ("", "?")]
        numeric = bool(present)
        for c in present:
            try:
                float(c)
            except ValueError:
                numeric = False
                break
        if numeric:
            attributes.append(AttributeMeta(name, "numeric"))
            matrix[:, j] = [math.nan if c in ("", "?") else float(c) for c in col]
        else:
            domain = []
            for c in present:
                if c not in domain:
                    domain.append(c)
            attributes.append(AttributeMeta(name, "nominal", tuple(domain)))
            matrix[:, j] = [math.nan if c in ("", "?") else float(domain.index(c)) for c in col]
    return DataSet(tuple(attributes), matrix)
