"""Pattern avoidance in integer compositions and the Savage-Wilf series for 123-avoiders."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import BudgetExceeded, InvalidInput
from .perm import contains, identity

MAX_TOTAL = 22
MAX_SERIES_ORDER = 40
CONTAINMENT_NOTE = ("strict reading: equal parts never realize a strict inequality of the pattern, "
                    "so a subsequence must be order isomorphic with distinct values where the pattern has them")


class Composition(tuple):
    """An ordered tuple of positive parts."""

    __slots__ = ()

    def __new__(cls, parts: Sequence[int]):
        parts = tuple(int(a) for a in parts)
        if not parts:
            raise InvalidInput("a composition needs at least one part")
        for i, a in enumerate(parts, start=1):
            if a < 1:
                raise InvalidInput(f"part {i} is {a}; parts must be positive")
        return super().__new__(cls, parts)

    @property
    def total(self) -> int:
        return sum(self)


def comp_contains(a: Sequence[int], beta: Sequence[int]) -> bool:
    return contains(tuple(a), beta)


def compositions(n: int) -> Iterator[tuple]:
    """Compositions of n, first part descending, recursing on the remainder."""
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in compositions(n - first):
            yield (first,) + rest


def compositions_by_cuts(n: int) -> Iterator[tuple]:
    """Compositions of n from the 2^(n-1) subsets of cut points, in bitmask order."""
    if n == 0:
        yield ()
        return
    for mask in range(1 << (n - 1)):
        parts = []
        run = 1
        for i in range(n - 1):
            if mask >> i & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def _has_123(parts: Sequence[int]) -> bool:
    # a strictly increasing triple exists iff some middle part has a smaller part
    # before it and a larger part after it
    n = len(parts)
    if n < 3:
        return False
    suffix_max = [0] * n
    m = 0
    for i in range(n - 1, -1, -1):
        suffix_max[i] = m
        m = max(m, parts[i])
    prefix_min = parts[0]
    for j in range(1, n - 1):
        if prefix_min < parts[j] < suffix_max[j]:
            return True
        prefix_min = min(prefix_min, parts[j])
    return False


def count_123_avoiding_compositions(N: int) -> list[int]:
    """Entry n-1 counts compositions of n with no strictly increasing subsequence of length 3."""
    if N > MAX_TOTAL:
        raise BudgetExceeded(f"N = {N} is beyond the brute-force bound {MAX_TOTAL}")
    pattern = identity(3)
    out = []
    for n in range(1, N + 1):
        total = 0
        good = 0
        for c in compositions(n):
            total += 1
            if not comp_contains(c, pattern):
                good += 1
        assert total == 2 ** (n - 1), f"generated {total} compositions of {n}"
        out.append(good)
    return out


def count_123_avoiding_by_cuts(N: int) -> list[int]:
    """Independent route: cut-point generation and a prefix-min/suffix-max test."""
    if N > MAX_TOTAL:
        raise BudgetExceeded(f"N = {N} is beyond the brute-force bound {MAX_TOTAL}")
    return [sum(1 for c in compositions_by_cuts(n) if not _has_123(c)) for n in range(1, N + 1)]


# ---------------------------------------------------------------- truncated series


@dataclass
class TruncatedSeries:
    """Coefficients of x^0..x^N, all arithmetic mod x^(N+1)."""

    coeffs: list
    interpretation: str = ""
    applicable: bool = True
    reason: str = ""
    trace: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def to_dict(self) -> dict:
        return {"interpretation": self.interpretation, "order": self.N, "applicable": self.applicable,
                "reason": self.reason,
                "coefficients": [str(c) for c in self.coeffs] if self.applicable else None,
                "trace": self.trace}


def _one(N):
    return [Fraction(1)] + [Fraction(0)] * N


def _mul(a, b):
    N = len(a) - 1
    out = [Fraction(0)] * (N + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(N + 1 - i):
                if b[j]:
                    out[i + j] += x * b[j]
    return out


def _inv(a):
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    N = len(a) - 1
    out = [Fraction(0)] * (N + 1)
    out[0] = 1 / a[0]
    for k in range(1, N + 1):
        acc = sum(a[i] * out[k - i] for i in range(1, k + 1))
        out[k] = -acc / a[0]
    return out


def _poly(N, terms):
    """1 + sum of c*x^e for (c, e) in terms, truncated."""
    out = [Fraction(0)] * (N + 1)
    out[0] = Fraction(1)
    for c, e in terms:
        if e <= N:
            out[e] += c
    return out


def _one_minus(N, e):
    return _poly(N, [(-1, e)])


def _laurent_geometric(N, m):
    # 1 / (1 - x^(-m)) = -x^m / (1 - x^m) for m >= 1, expanded as a power series
    out = [Fraction(0)] * (N + 1)
    e = m
    while e <= N:
        out[e] = Fraction(-1)
        e += m
    return out


def _factor(N, i, j, policy):
    num = _one_minus(N, i)
    den2 = _poly(N, [(-1, i), (-1, j)])
    if j > i:
        geo = _inv(_one_minus(N, j - i))
    elif policy == "laurent":
        geo = _laurent_geometric(N, i - j)
    else:
        raise ValueError("negative exponent")
    return _mul(_mul(num, geo), _inv(den2))


def _term(N, i, policy):
    t = _inv(_one_minus(N, i))
    js = range(1, i + N + 1) if policy == "laurent" else range(i + 1, i + N + 1)
    for j in js:
        if j == i:
            continue
        t = _mul(t, _factor(N, i, j, policy))
        if not any(t):
            break
    return t


INTERPRETATIONS = ("laurent", "j_greater", "literal")


def savage_wilf_series(N: int, interpretation: str = "laurent") -> TruncatedSeries:
    """Expand sum_i 1/(1-x^i) prod_{j != i} (1-x^i)/((1-x^(j-i))(1-x^i-x^j)) mod x^(N+1).

    interpretation:
      laurent    every j != i; for j < i the factor 1/(1-x^(j-i)) is read as the formal
                 Laurent expansion -x^(i-j)/(1-x^(i-j)), so term i starts at x^(i(i-1)/2)
      j_greater  only j > i
      literal    every j != i with 1 - x^(j-i) taken as printed; inapplicable for j < i
    """
    if not 0 <= N <= MAX_SERIES_ORDER:
        raise InvalidInput(f"truncation order must lie in 0..{MAX_SERIES_ORDER}, got {N}")
    if interpretation not in INTERPRETATIONS:
        raise InvalidInput(f"unknown interpretation {interpretation!r}; expected one of {INTERPRETATIONS}")
    if interpretation == "literal":
        return TruncatedSeries([], interpretation, False,
                               "for j < i the factor 1 - x^(j-i) has a negative exponent and "
                               "is not a power series")
    total = [Fraction(0)] * (N + 1)
    trace = []
    i = 1
    while True:
        if interpretation == "laurent" and i * (i - 1) // 2 > N:
            break
        if interpretation == "j_greater" and i > N:
            tail = _term(N, i, interpretation)
            if any(tail):
                return TruncatedSeries([], interpretation, False,
                                       f"the sum over i does not converge: the i = {i} term is "
                                       f"{tail[0]} + O(x) although i exceeds the truncation order",
                                       trace)
            break
        t = _term(N, i, interpretation)
        trace.append({"i": i, "x^0": str(t[0])})
        total = [a + b for a, b in zip(total, t)]
        i += 1
    return TruncatedSeries(total, interpretation, True, "", trace)


@dataclass
class CompositionReport:
    N: int
    brute: list
    series: dict  # interpretation -> TruncatedSeries

    def rows(self) -> list[dict]:
        out = []
        for n in range(1, self.N + 1):
            row = {"n": n, "brute_force": str(self.brute[n - 1])}
            for name, s in self.series.items():
                if s.applicable:
                    c = s.coeffs[n]
                    row[name] = str(c)
                    row[f"{name}_match"] = c == self.brute[n - 1]
                else:
                    row[name] = None
                    row[f"{name}_match"] = None
            out.append(row)
        return out

    def to_dict(self) -> dict:
        return {"N": self.N, "containment": CONTAINMENT_NOTE, "rows": self.rows(),
                "series": {k: v.to_dict() for k, v in self.series.items()}}


def composition_report(N: int, interpretations=INTERPRETATIONS) -> CompositionReport:
    brute = count_123_avoiding_compositions(N)
    series = {name: savage_wilf_series(N, name) for name in interpretations}
    return CompositionReport(N, brute, series)
