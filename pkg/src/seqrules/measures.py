"""Rule quality measures over the (p, n, P, N) covering tuple."""

from __future__ import annotations

import enum
import math

from .errors import UndefinedCoverageError, UnsupportedMeasureError
from .rules import Covering


class Measures(enum.Enum):
    Precision = "Precision"
    Coverage = "Coverage"
    C2 = "C2"
    Correlation = "Correlation"
    RSS = "RSS"
    Lift = "Lift"


def measure_value(measure: Measures, c: Covering) -> float:
    """Evaluate a quality measure on a covering.

    Raises UndefinedCoverageError on empty coverage and
    UnsupportedMeasureError on survival coverings, whose quality is tied to
    the log-rank test instead.
    """
    if c.survival:
        raise UnsupportedMeasureError(
            "survival rules are scored by the log-rank test, not by "
            f"{measure.value}")
    p, n, P, N = float(c.p), float(c.n), float(c.P), float(c.N)
    if p + n == 0:
        raise UndefinedCoverageError("measure of a rule covering no examples")
    if measure is Measures.Precision:
        return p / (p + n)
    if measure is Measures.Coverage:
        return (p + n) / (P + N)
    if measure is Measures.Correlation:
        denom = P * N * (p + n) * (P - p + N - n)
        if denom == 0:
            return 0.0
        return (p * N - n * P) / math.sqrt(denom)
    if measure is Measures.C2:
        if N == 0:
            # degenerate single-class data: precision factor saturates
            return (1.0 + p / P) / 2.0 if n == 0 else 0.0
        return (((P + N) / N) * (p / (p + n)) - P / N) * ((1.0 + p / P) / 2.0)
    if measure is Measures.RSS:
        return p / P - (n / N if N > 0 else 0.0)
    if measure is Measures.Lift:
        return (p / (p + n)) * ((P + N) / P)
    raise ValueError(f"unknown measure {measure!r}")
