"""Guessing and checking polynomial-coefficient (P-) recurrences with exact arithmetic.

A recurrence of order r and degree d is

    p_r(n) s_(n+r) + ... + p_1(n) s_(n+1) + p_0(n) s_n = 0,

where each p_i has degree <= d. ``offset`` records the index of the first term
(1 for s_1, s_2, ...); the relation is claimed for every n with all terms present.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from pathlib import Path
from typing import Sequence

from .errors import InvalidInput

DEFAULT_MARGIN = 3


class InsufficientTerms(InvalidInput):
    """Too few terms for the requested order/degree."""


def _poly_eval(coeffs: Sequence[int], n: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * n + c
    return acc


def _poly_str(coeffs: Sequence[int], var: str = "n") -> str:
    terms = []
    for e in range(len(coeffs) - 1, -1, -1):
        c = coeffs[e]
        if c == 0:
            continue
        mono = "" if e == 0 else var if e == 1 else f"{var}^{e}"
        if e == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}{mono}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


@dataclass(frozen=True)
class Recurrence:
    """``coeffs[i][e]`` is the coefficient of n^e in p_i."""

    coeffs: tuple
    offset: int = 1

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        return max((len(p) - 1 for p in self.coeffs), default=0)

    def poly(self, i: int, n: int) -> int:
        return _poly_eval(self.coeffs[i], n)

    def __str__(self) -> str:
        text = ""
        for i in range(self.order, -1, -1):
            p = list(self.coeffs[i])
            if not any(p):
                continue
            shift = f"s_(n+{i})" if i else "s_n"
            negative = all(c <= 0 for c in p)
            if negative:
                p = [-c for c in p]
            if not any(p[1:]):
                body = shift if p[0] == 1 else f"{p[0]}*{shift}"
            else:
                body = f"({_poly_str(p)})*{shift}"
            if not text:
                text = ("-" if negative else "") + body
            else:
                text += (" - " if negative else " + ") + body
        return f"{text} = 0   [terms indexed from n = {self.offset}]"

    def to_dict(self) -> dict:
        return {"order": self.order, "degree": self.degree, "offset": self.offset,
                "coefficients": [[str(c) for c in p] for p in self.coeffs], "text": str(self)}

    def shifted(self, new_offset: int) -> "Recurrence":
        """Same relation rewritten for terms indexed from ``new_offset`` (substitute n -> n + delta)."""
        delta = self.offset - new_offset
        new = []
        for p in self.coeffs:
            # p(n + delta) expanded
            out = [0] * len(p)
            for e, c in enumerate(p):
                binom = 1
                for k in range(e + 1):
                    # coefficient of n^k in (n + delta)^e is C(e,k) delta^(e-k)
                    out[k] += c * binom * delta ** (e - k)
                    binom = binom * (e - k) // (k + 1)
            new.append(tuple(out))
        return Recurrence(tuple(new), new_offset)

    def extend(self, terms: Sequence[int], count: int) -> list:
        """Continue ``terms`` by ``count`` values; None where the leading polynomial vanishes."""
        out = list(terms)
        r = self.order
        for _ in range(count):
            n = self.offset + len(out) - r
            lead = self.poly(r, n)
            if lead == 0:
                out.append(None)
                continue
            acc = sum(self.poly(i, n) * out[len(out) - r + i] for i in range(r))
            val = Fraction(-acc, lead)
            out.append(int(val) if val.denominator == 1 else val)
        return out[len(terms):]


def _normalize(vec: Sequence[Fraction], r: int, d: int) -> tuple:
    den = reduce(lcm, (v.denominator for v in vec), 1)
    ints = [int(v * den) for v in vec]
    g = reduce(gcd, ints, 0) or 1
    ints = [x // g for x in ints]
    polys = [ints[i * (d + 1):(i + 1) * (d + 1)] for i in range(r + 1)]
    while len(polys) > 1 and not any(polys[-1]):
        polys.pop()
    lead = polys[-1]
    top = max(e for e, c in enumerate(lead) if c)
    if lead[top] < 0:
        polys = [[-c for c in p] for p in polys]
    return tuple(tuple(p) for p in polys)


def _rref(rows: list[list[Fraction]], ncols: int):
    rows = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][col]
        rows[rank] = [x / pv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows[:rank], pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right nullspace, one vector per free column, read off the reduced echelon form."""
    reduced, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -reduced[i][f]
        basis.append(v)
    return basis


def _system(terms: Sequence[int], r: int, d: int, offset: int) -> list[list[Fraction]]:
    rows = []
    for k in range(len(terms) - r):
        n = offset + k
        row = []
        for i in range(r + 1):
            s = terms[k + i]
            row.extend(Fraction(s * n**e) for e in range(d + 1))
        rows.append(row)
    return rows


@dataclass
class FitResult:
    recurrence: Recurrence | None
    nullity: int
    N: int
    order: int
    degree: int
    margin: int

    def __bool__(self) -> bool:
        return self.recurrence is not None

    def to_dict(self) -> dict:
        return {"N": self.N, "order": self.order, "degree": self.degree, "margin": self.margin,
                "nullity": self.nullity,
                "recurrence": None if self.recurrence is None else self.recurrence.to_dict()}


def fit_recurrence(terms: Sequence[int], r: int, d: int, *, margin: int = DEFAULT_MARGIN,
                   offset: int = 1) -> FitResult:
    """Solve for p_0..p_r of degree <= d annihilating ``terms``; exact rational nullspace.

    If the nullspace has dimension above one, the basis vector with the
    lexicographically smallest support is chosen and the dimension is reported.
    """
    terms = [int(t) for t in terms]
    if r < 0 or d < 0:
        raise InvalidInput(f"order and degree must be nonnegative, got r={r}, d={d}")
    N = len(terms)
    unknowns = (r + 1) * (d + 1)
    if N - r < unknowns + margin:
        raise InsufficientTerms(
            f"{N} terms give {max(N - r, 0)} equations; order {r}, degree {d} needs "
            f"{unknowns} + margin {margin}")
    if not any(terms):
        raise InvalidInput("all-zero sequence: every recurrence fits")
    basis = nullspace(_system(terms, r, d, offset), unknowns)
    if not basis:
        return FitResult(None, 0, N, r, d, margin)
    chosen = min(basis, key=lambda v: [i for i, x in enumerate(v) if x != 0])
    rec = Recurrence(_normalize(chosen, r, d), offset)
    ok, bad = verify_recurrence(rec, terms)
    assert ok, f"fitted recurrence fails at index {bad}"
    return FitResult(rec, len(basis), N, r, d, margin)


def verify_recurrence(rec: Recurrence, terms: Sequence[int]) -> tuple[bool, int | None]:
    """Exact check at every n where all terms are present; returns (ok, first failing n)."""
    r = rec.order
    if len(terms) <= r:
        raise InsufficientTerms(f"need more than {r} terms to check an order-{r} recurrence")
    for k in range(len(terms) - r):
        n = rec.offset + k
        if sum(rec.poly(i, n) * terms[k + i] for i in range(r + 1)) != 0:
            return False, n
    return True, None


@dataclass
class SearchResult:
    recurrence: Recurrence | None
    tried: list  # (r, d, outcome)
    N: int
    max_order: int
    max_degree: int
    margin: int

    def __bool__(self) -> bool:
        return self.recurrence is not None

    @property
    def message(self) -> str:
        if self.recurrence is not None:
            return f"found order {self.recurrence.order}, degree {self.recurrence.degree}"
        return (f"none found within (order <= {self.max_order}, degree <= {self.max_degree}) "
                f"given N = {self.N} terms and margin {self.margin}; this is not a proof that "
                f"the sequence is not P-recursive")

    def to_dict(self) -> dict:
        return {"N": self.N, "max_order": self.max_order, "max_degree": self.max_degree,
                "margin": self.margin, "message": self.message,
                "tried": [{"order": r, "degree": d, "outcome": o} for r, d, o in self.tried],
                "recurrence": None if self.recurrence is None else self.recurrence.to_dict()}


def search_recurrence(terms: Sequence[int], max_r: int, max_d: int, *,
                      margin: int = DEFAULT_MARGIN, offset: int = 1) -> SearchResult:
    """Smallest (r+1)(d+1), then smallest r, among candidates that fit and verify."""
    cands = sorted(((r, d) for r in range(1, max_r + 1) for d in range(max_d + 1)),
                   key=lambda rd: ((rd[0] + 1) * (rd[1] + 1), rd[0]))
    tried = []
    for r, d in cands:
        try:
            res = fit_recurrence(terms, r, d, margin=margin, offset=offset)
        except InsufficientTerms:
            tried.append((r, d, "insufficient terms"))
            continue
        if res.recurrence is not None and verify_recurrence(res.recurrence, terms)[0]:
            tried.append((r, d, "fit"))
            return SearchResult(res.recurrence, tried, len(terms), max_r, max_d, margin)
        tried.append((r, d, "none"))
    return SearchResult(None, tried, len(terms), max_r, max_d, margin)


_LINE = re.compile(r"^\s*(?:(\d+)\s*:)?\s*(-?\d+)\s*$")


def read_terms(path, basis: str | None = None) -> list[int]:
    """Read a sequence file: one integer per line (optionally ``n: value``), or count-cache records."""
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if lines and lines[0].lstrip().startswith("{"):
        recs = {}
        for i, ln in enumerate(lines, start=1):
            try:
                rec = json.loads(ln)
            except ValueError:
                raise InvalidInput(f"{path}:{i}: not a JSON record") from None
            if basis is None or rec.get("basis") == basis:
                recs.setdefault(rec["basis"], {})[int(rec["n"])] = int(rec["count"])
        if len(recs) != 1:
            raise InvalidInput(f"{path}: cache holds {len(recs)} bases; select one with a basis")
        (seq,) = recs.values()
        ns = sorted(seq)
        if ns != list(range(1, len(ns) + 1)):
            raise InvalidInput(f"{path}: cached lengths are not contiguous from 1")
        return [seq[n] for n in ns]
    out = []
    prev = None
    for i, ln in enumerate(lines, start=1):
        m = _LINE.match(ln)
        if not m:
            raise InvalidInput(f"{path}:{i}: cannot parse {ln.strip()!r}")
        if m.group(1) is not None:
            label = int(m.group(1))
            if out and label != prev + 1:
                raise InvalidInput(f"{path}:{i}: label {label} out of sequence")
            prev = label
        out.append(int(m.group(2)))
    return out
