"""Partial sums and optimal truncation of divergent power series.

Everything is exact; decimals appear only in rendered output.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

# Reference counts of diagrams behind the QED magnetic-moment series, kept as
# documentation fixtures (third term: "about" 70, fourth: "over" 900).
DIAGRAM_COUNTS = {3: ("about", 70), 4: ("over", 900)}

FINE_STRUCTURE = Fraction(1) / Fraction("137.03597")


def parse_fraction(text: str) -> Fraction:
    """``"1/137.03597"`` -> exact Fraction; both sides may be decimals."""
    num, _, den = str(text).partition("/")
    value = Fraction(num.strip())
    if den:
        value /= Fraction(den.strip())
    return value


@dataclass(frozen=True)
class AsymptoticSeries:
    coefficient: Callable[[int], Fraction]
    alpha: Fraction
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        if self.alpha <= 0:
            raise ValueError("coupling must be positive")


def factorial_rule(alpha, k=1) -> AsymptoticSeries:
    """|c_n| = n! * k^n."""
    k = Fraction(k)
    name = "factorial" if k == 1 else f"factorial*{k}^n"
    return AsymptoticSeries(lambda n: factorial(n) * k ** n, alpha, name)


def geometric_rule(alpha) -> AsymptoticSeries:
    return AsymptoticSeries(lambda n: Fraction(1), alpha, "unit")


def table_rule(values: Sequence, alpha) -> AsymptoticSeries:
    table = tuple(Fraction(v) for v in values)
    if any(v < 0 for v in table):
        raise ValueError("coefficients must be non-negative")

    def coeff(n):
        if n >= len(table):
            raise IndexError(f"no coefficient for n={n}")
        return table[n]
    return AsymptoticSeries(coeff, alpha, "table")


def term(series: AsymptoticSeries, n: int) -> Fraction:
    c = Fraction(series.coefficient(n))
    if c < 0:
        raise ValueError("coefficients must be non-negative")
    return c * series.alpha ** n


def partial_sums(series: AsymptoticSeries, count: int) -> list[Fraction]:
    if count < 1:
        raise ValueError("need at least one partial sum")
    out, acc = [], Fraction(0)
    for n in range(count):
        acc += term(series, n)
        out.append(acc)
    return out


@dataclass(frozen=True)
class MinimalTerm:
    index: int
    term: Fraction
    ratios: tuple  # t_{n+1} / t_n for n = 0 .. index (None where t_n = 0)


@dataclass(frozen=True)
class NotYetDivergent:
    n_max: int
    ratios: tuple


def minimal_term_index(series: AsymptoticSeries, n_max: int):
    """First n with t_{n+1} / t_n >= 1, the usual optimal-truncation point.

    Returns :class:`NotYetDivergent` if the ratio stays below 1 up to ``n_max``.
    """
    ratios = []
    prev = term(series, 0)
    for n in range(n_max):
        nxt = term(series, n + 1)
        r = None if prev == 0 else nxt / prev
        ratios.append(r)
        if r is not None and r >= 1:
            return MinimalTerm(n, prev, tuple(ratios))
        prev = nxt
    return NotYetDivergent(n_max, tuple(ratios))


def truncation_csv(series: AsymptoticSeries, n_max: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "numerator", "denominator", "decimal", "ratio"])
    prev = None
    for n in range(n_max + 1):
        t = term(series, n)
        ratio = "" if prev in (None, 0) else f"{float(t / prev):.17g}"
        w.writerow([n, t.numerator, t.denominator, f"{float(t):.17g}", ratio])
        prev = t
    return buf.getvalue()
