"""Finite-n growth-rate proxies, supermultiplicativity and antichain checks."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import direct_sum, is_sum_indecomposable, skew_sum
from .classes import Basis, CountSequence, as_basis, count_avoiders, list_avoiders
from .errors import InvalidInput
from .perm import Permutation, contains

LIMIT_NOTE = ("upper/lower growth rates are a limsup/liminf; only finite-n proxies are computed "
              "here and none of them determines the limit")

# Growth rates quoted in reports; never asserted as numerical results.
REFERENCE_VALUES = {
    "1,2,3": "4", "1,3,2": "4", "2,1,3": "4", "2,3,1": "4", "3,1,2": "4", "3,2,1": "4",
    "1,2,3,4": "9", "1,3,4,2": "8", "1,2,4,5,3": "9+4*sqrt(2)", "1,3,2,4": ">= 9.35 (lower bound)",
}


def _sig12(x: float) -> float:
    return float(f"{x:.12g}")


def nth_root(count: int, n: int) -> float:
    if count == 0:
        return 0.0
    # exact integer -> float; counts stay far below float overflow at desk-scale n
    return _sig12(count ** (1.0 / n))


@dataclass(frozen=True)
class GrowthEstimate:
    basis: Basis
    n_used: int
    lower_bound: float
    ratio: Fraction | None
    counts: tuple
    guaranteed: bool

    @property
    def label(self) -> str:
        return "guaranteed-lower-bound" if self.guaranteed else "heuristic"

    def rows(self) -> list[dict]:
        out = []
        for n, s in enumerate(self.counts, start=1):
            prev = self.counts[n - 2] if n > 1 else None
            ratio = f"{float(Fraction(s, prev)):.12g}" if prev else None
            out.append({"basis": str(self.basis), "n": n, "count": str(s),
                        "root": f"{nth_root(s, n):.12g}", "ratio": ratio, "label": self.label})
        return out

    def to_dict(self) -> dict:
        return {
            "basis": str(self.basis),
            "n_used": self.n_used,
            "lower_bound": f"{self.lower_bound:.12g}",
            "ratio": None if self.ratio is None else f"{self.ratio.numerator}/{self.ratio.denominator}",
            "ratio_decimal": None if self.ratio is None else f"{float(self.ratio):.12g}",
            "label": self.label,
            "reference": REFERENCE_VALUES.get(str(self.basis)),
            "rows": self.rows(),
            "note": LIMIT_NOTE,
        }


def estimate_from_counts(seq: CountSequence) -> GrowthEstimate:
    counts = seq.terms
    N = len(counts)
    best = max((nth_root(s, n) for n, s in enumerate(counts, start=1)), default=0.0)
    ratio = Fraction(counts[-1], counts[-2]) if N >= 2 and counts[-2] else None
    return GrowthEstimate(seq.basis, N, best, ratio, tuple(counts), len(seq.basis) == 1)


def gr_lower_bound(B, N: int, *, workers: int = 1, cache=None) -> GrowthEstimate:
    """max over m <= N of s_m^(1/m), plus the last ratio s_N / s_(N-1).

    For a single pattern the counts are supermultiplicative, so the running maximum
    is a true lower bound on the growth rate. For larger bases the same numbers are
    returned but labelled heuristic.
    """
    if N < 2:
        raise InvalidInput(f"need N >= 2, got {N}")
    seq = count_avoiders(as_basis(B), N, workers=workers, cache=cache)
    return estimate_from_counts(seq)


@dataclass
class SupermultiplicativeReport:
    pattern: Permutation
    M: int
    counts: tuple
    failures: list
    construction: str
    witness_samples: int
    witness_failures: list

    @property
    def holds(self) -> bool:
        return not self.failures and not self.witness_failures

    def to_dict(self) -> dict:
        return {
            "pattern": str(self.pattern),
            "M": self.M,
            "counts": [str(c) for c in self.counts],
            "holds": self.holds,
            "failures": [list(map(str, f)) for f in self.failures],
            "construction": self.construction,
            "witness_samples": self.witness_samples,
            "witness_failures": [[str(a), str(b)] for a, b in self.witness_failures],
        }


def check_supermultiplicative(pattern: Sequence[int], M: int, *, samples: int = 200,
                              sample_len: int = 6, seed: int = 0, workers: int = 1,
                              cache=None) -> SupermultiplicativeReport:
    """Check s_(m+n) >= s_m * s_n for m + n <= M, and sample the gluing construction.

    A sum-indecomposable pattern cannot occur across a direct sum of two avoiders,
    so avoiders glue by ⊕; otherwise the pattern is skew-indecomposable and ⊖ works.
    """
    pattern = pattern if isinstance(pattern, Permutation) else Permutation(pattern)
    if M < 2:
        raise InvalidInput(f"need M >= 2, got {M}")
    counts = count_avoiders(Basis([pattern]), M, workers=workers, cache=cache).terms
    s = {n: c for n, c in enumerate(counts, start=1)}
    failures = [(m, n, s[m + n], s[m] * s[n])
                for m in range(1, M) for n in range(1, M - m + 1) if s[m + n] < s[m] * s[n]]

    glue, name = (direct_sum, "direct sum") if is_sum_indecomposable(pattern) else (skew_sum, "skew sum")
    rng = random.Random(seed)
    pools = {n: list_avoiders([pattern], n) for n in range(1, min(sample_len, M) + 1)}
    lengths = [n for n, pool in pools.items() if pool]
    bad = []
    done = 0
    if lengths:
        for _ in range(samples):
            a = rng.choice(pools[rng.choice(lengths)])
            b = rng.choice(pools[rng.choice(lengths)])
            done += 1
            if contains(glue(a, b), pattern):
                bad.append((a, b))
    return SupermultiplicativeReport(pattern, M, tuple(counts), failures, name, done, bad)


@dataclass(frozen=True)
class AntichainResult:
    is_antichain: bool
    pair: tuple | None  # (container, contained)

    def __bool__(self) -> bool:
        return self.is_antichain


def is_antichain(perms: Iterable[Sequence[int]]) -> AntichainResult:
    """No member contains a different member. The scan order is canonical."""
    items = sorted({tuple(p) for p in perms}, key=lambda q: (len(q), q))
    for i, small in enumerate(items):
        for big in items[i + 1:]:
            if len(big) > len(small) and contains(big, small):
                return AntichainResult(False, (Permutation(big), Permutation(small)))
    return AntichainResult(True, None)


def antichain_profile(perms: Iterable[Sequence[int]]) -> dict[int, int]:
    """Number of members of each length."""
    out: dict[int, int] = {}
    for p in perms:
        out[len(p)] = out.get(len(p), 0) + 1
    return dict(sorted(out.items()))
