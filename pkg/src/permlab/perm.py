"""Permutations in one-line notation, pattern containment and symmetries.

Permutations are stored 1-indexed, exactly as written: ``Permutation([5, 3, 4, 1, 6, 2])``
is the permutation 534162.
"""
from __future__ import annotations

import re
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidInput

MAX_LENGTH = 64


class Permutation(tuple):
    """An immutable permutation of 1..n in one-line notation."""

    __slots__ = ()

    def __new__(cls, values: Iterable[int] = ()):
        values = tuple(int(v) for v in values)
        n = len(values)
        if n > MAX_LENGTH:
            raise InvalidInput(f"permutation of length {n} exceeds the length cap {MAX_LENGTH}")
        seen = [False] * (n + 1)
        for pos, v in enumerate(values, start=1):
            if not 1 <= v <= n:
                raise InvalidInput(f"entry {v} at position {pos} is outside 1..{n}")
            if seen[v]:
                raise InvalidInput(f"duplicate value {v} at position {pos}")
            seen[v] = True
        return super().__new__(cls, values)

    @classmethod
    def _trusted(cls, values: Iterable[int]) -> "Permutation":
        return tuple.__new__(cls, values)

    def __str__(self) -> str:
        return ",".join(map(str, self))

    def __repr__(self) -> str:
        return f"Permutation({self.compact()})"

    def compact(self) -> str:
        """Digit-string form when every entry is a single digit, comma form otherwise."""
        if len(self) < 10:
            return "".join(map(str, self)) if self else "()"
        return str(self)

    @property
    def n(self) -> int:
        return len(self)


def from_word(values: Sequence[int]) -> Permutation:
    return Permutation(values)


def parse_perm(text: str) -> Permutation:
    """Parse ``534162``, ``5,3,4,1,6,2`` or ``5 3 4 1 6 2``.

    Digit strings are only accepted when every value is a single digit.
    ``()`` or an empty string denote the empty permutation.
    """
    s = text.strip()
    if s in ("", "()", "e"):
        return Permutation()
    if re.fullmatch(r"\d+", s):
        return Permutation(int(c) for c in s)
    parts = re.split(r"[,\s]+", s)
    if len(parts) == 1:
        bad = next(i for i, c in enumerate(s, start=1) if not c.isdigit())
        raise InvalidInput(f"cannot parse character {bad} ({s[bad - 1]!r}) of permutation {text!r}")
    values = []
    for i, p in enumerate(parts, start=1):
        if not p.isdigit():
            raise InvalidInput(f"cannot parse entry {i} ({p!r}) of permutation {text!r}")
        values.append(int(p))
    return Permutation(values)


def pattern_of(values: Sequence) -> Permutation:
    """Standardize pairwise-distinct comparables to the order-isomorphic permutation."""
    values = list(values)
    order = sorted(range(len(values)), key=values.__getitem__)
    out = [0] * len(values)
    for rank, idx in enumerate(order, start=1):
        if rank > 1 and values[order[rank - 2]] == values[idx]:
            raise InvalidInput(f"duplicate entry {values[idx]!r}; cannot standardize")
        out[idx] = rank
    return Permutation._trusted(out)


def _match_plan(pattern: Sequence[int]) -> list[tuple[int, int]]:
    # For position j, the earlier positions holding the nearest smaller / larger pattern value.
    plan = []
    for j, v in enumerate(pattern):
        lo = hi = -1
        for i in range(j):
            w = pattern[i]
            if w < v and (lo < 0 or w > pattern[lo]):
                lo = i
            if w > v and (hi < 0 or w < pattern[hi]):
                hi = i
        plan.append((lo, hi))
    return plan


def contains(host: Sequence, pattern: Sequence[int]) -> bool:
    """True iff some subsequence of ``host`` is order isomorphic to ``pattern``.

    Depth-first over pattern positions; each position is confined to the open
    value window left by the already-matched neighbours in value order. Works
    for any host sequence of comparables, equal entries never satisfy a strict
    inequality.
    """
    k = len(pattern)
    n = len(host)
    if k == 0:
        return True
    if k > n:
        return False
    plan = _match_plan(pattern)
    vals = [None] * k

    def search(j: int, start: int) -> bool:
        if j == k:
            return True
        lo, hi = plan[j]
        lov = vals[lo] if lo >= 0 else None
        hiv = vals[hi] if hi >= 0 else None
        for i in range(start, n - (k - j) + 1):
            x = host[i]
            if lov is not None and not x > lov:
                continue
            if hiv is not None and not x < hiv:
                continue
            vals[j] = x
            if search(j + 1, i + 1):
                return True
        return False

    return search(0, 0)


def avoids(host: Sequence, pattern: Sequence[int]) -> bool:
    return not contains(host, pattern)


def avoids_all(host: Sequence, basis: Iterable[Sequence[int]]) -> bool:
    return not any(contains(host, b) for b in basis)


def count_occurrences(host: Sequence, pattern: Sequence[int]) -> int:
    """Number of index subsets of ``host`` whose entries are order isomorphic to ``pattern``."""
    k = len(pattern)
    n = len(host)
    if k == 0:
        return 1
    if k > n:
        return 0
    plan = _match_plan(pattern)
    vals = [None] * k

    def search(j: int, start: int) -> int:
        if j == k:
            return 1
        lo, hi = plan[j]
        lov = vals[lo] if lo >= 0 else None
        hiv = vals[hi] if hi >= 0 else None
        total = 0
        for i in range(start, n - (k - j) + 1):
            x = host[i]
            if lov is not None and not x > lov:
                continue
            if hiv is not None and not x < hiv:
                continue
            vals[j] = x
            total += search(j + 1, i + 1)
        return total

    return search(0, 0)


def occurrences(host: Sequence, pattern: Sequence[int]):
    """Yield every occurrence as a tuple of 1-based host positions."""
    k = len(pattern)
    for idx in combinations(range(len(host)), k):
        sub = [host[i] for i in idx]
        if len(set(sub)) == k and tuple(pattern_of(sub)) == tuple(pattern):
            yield tuple(i + 1 for i in idx)


def contains_naive(host: Sequence, pattern: Sequence[int]) -> bool:
    """Reference check that standardizes every index subset. Test oracle only."""
    pattern = tuple(pattern)
    k = len(pattern)
    for idx in combinations(range(len(host)), k):
        sub = [host[i] for i in idx]
        if len(set(sub)) == k and tuple(pattern_of(sub)) == pattern:
            return True
    return False


def reverse(p: Sequence[int]) -> Permutation:
    return Permutation._trusted(reversed(tuple(p)))


def complement(p: Sequence[int]) -> Permutation:
    n = len(p)
    return Permutation._trusted(n + 1 - v for v in p)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p, start=1):
        out[v - 1] = i
    return Permutation._trusted(out)


_SYMMETRIES = {"reverse": reverse, "complement": complement, "inverse": inverse}


def symmetry(p: Sequence[int], which: str) -> Permutation:
    try:
        return _SYMMETRIES[which](p)
    except KeyError:
        raise InvalidInput(f"unknown symmetry {which!r}; expected one of {sorted(_SYMMETRIES)}") from None


def symmetry_class(p: Sequence[int]) -> set[Permutation]:
    """All images of ``p`` under the 8-element group generated by the three maps."""
    seen = {Permutation._trusted(p)}
    frontier = list(seen)
    while frontier:
        q = frontier.pop()
        for f in _SYMMETRIES.values():
            r = f(q)
            if r not in seen:
                seen.add(r)
                frontier.append(r)
    return seen


def identity(n: int) -> Permutation:
    return Permutation._trusted(range(1, n + 1))


def decreasing(n: int) -> Permutation:
    return Permutation._trusted(range(n, 0, -1))
