"""Enumeration of permutation classes Av(B) and occurrence-constrained sets."""
from __future__ import annotations

import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from multiprocessing import get_context
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import _kernels as K
from .errors import BudgetExceeded, InvalidInput
from .perm import Permutation, avoids_all, contains, count_occurrences, parse_perm

log = logging.getLogger(__name__)

# Counts are accumulated in int64 inside the kernels; 20! < 2**63.
MAX_COUNT_LENGTH = 20
DEFAULT_NODE_LIMIT = 2 * 10**9
SPLIT_LEVEL = 7
CHUNK_SIZE = 2048


class Basis(tuple):
    """A finite set of patterns kept in canonical order (by length, then lexicographically)."""

    __slots__ = ()

    def __new__(cls, patterns: Iterable = ()):
        perms = set()
        for p in patterns:
            perms.add(p if isinstance(p, Permutation) else Permutation(p))
        return super().__new__(cls, sorted(perms, key=lambda q: (len(q), tuple(q))))

    @classmethod
    def parse(cls, text: str) -> "Basis":
        """Semicolon-separated patterns, each a digit string or comma list."""
        parts = [t for t in text.split(";")]
        if not text.strip():
            return cls()
        out = []
        for i, t in enumerate(parts, start=1):
            try:
                out.append(parse_perm(t))
            except InvalidInput as e:
                raise InvalidInput(f"basis element {i} ({t.strip()!r}): {e}") from None
        return cls(out)

    def __str__(self) -> str:
        return ";".join(str(p) for p in self)

    def compact(self) -> str:
        return ";".join(p.compact() for p in self)

    @property
    def is_antichain(self) -> bool:
        return not any(a != b and contains(b, a) for a in self for b in self)

    def map(self, f) -> "Basis":
        return Basis(f(p) for p in self)


def as_basis(B) -> Basis:
    if isinstance(B, Basis):
        return B
    if isinstance(B, str):
        return Basis.parse(B)
    if isinstance(B, Permutation):
        return Basis([B])
    return Basis(B)


@dataclass(frozen=True)
class CountSequence:
    basis: Basis
    terms: tuple  # terms[i] = s_{i+1}(B)

    def __getitem__(self, n: int) -> int:
        """s_n for n >= 1."""
        if n < 1:
            raise IndexError(n)
        return self.terms[n - 1]

    @property
    def N(self) -> int:
        return len(self.terms)

    def to_dict(self) -> dict:
        return {"basis": str(self.basis), "terms": [str(t) for t in self.terms]}


# ---------------------------------------------------------------- engine


def _trivial_terms(basis: Basis, N: int):
    """Handle bases the tree search does not need; None means "run the tree"."""
    if not basis:
        return [math.factorial(n) for n in range(1, N + 1)]
    if any(len(p) <= 1 for p in basis):
        return [0] * N
    return None


def _root(basis: Basis):
    tables = K.pattern_tables(list(basis))
    perms = np.zeros((1, 1), np.int8)
    cands = np.array([3], np.uint64)  # both slots of 1 are candidates
    return tables, perms, cands


def _dfs_chunk(args):
    perms, cands, n0, N, tables, limit = args
    return K.dfs_count(perms, cands, n0, N, *tables, limit)


def _pool(workers: int):
    return ProcessPoolExecutor(max_workers=workers, mp_context=get_context("fork"))


def count_avoiders(B, N: int, *, workers: int = 1, node_limit: int = DEFAULT_NODE_LIMIT,
                   cache: "CountCache | None" = None) -> CountSequence:
    """s_1(B)..s_N(B) by one-point extension down the generating tree.

    The frontier at a fixed split level is cut into fixed-size chunks that are
    counted independently, so the result does not depend on ``workers``.
    """
    basis = as_basis(B)
    if N < 1:
        raise InvalidInput(f"length bound must be at least 1, got {N}")
    if N > MAX_COUNT_LENGTH:
        raise BudgetExceeded(f"N = {N} exceeds the supported length bound {MAX_COUNT_LENGTH}")
    if cache is not None:
        hit = cache.get_sequence(basis, N)
        if hit is not None:
            return CountSequence(basis, tuple(hit))

    terms = _trivial_terms(basis, N)
    if terms is None:
        terms = _tree_count(basis, N, workers, node_limit)
    seq = CountSequence(basis, tuple(int(t) for t in terms))
    if cache is not None:
        cache.put_sequence(seq)
    return seq


def _tree_count(basis: Basis, N: int, workers: int, node_limit: int) -> list[int]:
    level = min(SPLIT_LEVEL, N)
    tables, perms, cands = _root(basis)
    terms = [1]
    n = 1
    while n < level:
        perms, cands = K.expand_level(perms, cands, n, *tables)
        n += 1
        terms.append(len(perms))
        if len(perms) > node_limit:
            raise BudgetExceeded(f"frontier at n = {n} exceeds node limit {node_limit}",
                                 partial=terms[:-1])
    if N == level:
        return terms
    chunks = [(perms[i:i + CHUNK_SIZE], cands[i:i + CHUNK_SIZE], level, N, tables, node_limit)
              for i in range(0, len(perms), CHUNK_SIZE)]
    if workers > 1 and len(chunks) > 1:
        with _pool(workers) as ex:
            parts = list(ex.map(_dfs_chunk, chunks))
    else:
        parts = [_dfs_chunk(c) for c in chunks]
    total = np.zeros(N + 1, dtype=object)
    for part in parts:
        if part[0] < 0:
            raise BudgetExceeded(f"node limit {node_limit} exceeded below n = {level}",
                                 partial=terms)
        total += part.astype(object)
    expanded = sum(total[level + 1:N])
    if expanded > node_limit:
        raise BudgetExceeded(f"node limit {node_limit} exceeded", partial=terms)
    return terms + [int(x) for x in total[level + 1:]]


def list_avoiders(B, n: int, *, node_limit: int = 5 * 10**7) -> list[Permutation]:
    """All length-n members of Av(B) in lexicographic order."""
    basis = as_basis(B)
    if n < 0:
        raise InvalidInput(f"length must be nonnegative, got {n}")
    if n == 0:
        return [] if any(len(p) == 0 for p in basis) else [Permutation()]
    if not basis:
        if math.factorial(n) > node_limit:
            raise BudgetExceeded(f"{n}! permutations exceed node limit {node_limit}")
        return [Permutation._trusted(p) for p in permutations(range(1, n + 1))]
    if any(len(p) <= 1 for p in basis):
        return []
    tables, perms, cands = _root(basis)
    m = 1
    while m < n:
        perms, cands = K.expand_level(perms, cands, m, *tables)
        m += 1
        if len(perms) > node_limit:
            raise BudgetExceeded(f"frontier at n = {m} exceeds node limit {node_limit}")
    rows = sorted(tuple(int(x) + 1 for x in row) for row in perms)
    return [Permutation._trusted(r) for r in rows]


def count_brute(B, n: int) -> int:
    """Filter all n! permutations with the pure-Python containment test. Oracle only."""
    basis = as_basis(B)
    return sum(1 for p in permutations(range(1, n + 1)) if avoids_all(p, basis))


# ---------------------------------------------------------------- exact occurrence counts


def _blocks(n: int):
    return [(a, b) for a in range(n) for b in range(n) if a != b]


def _occ_block(args):
    n, a, b, pats, lens, targets = args
    return K.count_occurrence_block(n, a, b, pats, lens, targets)


def count_with_occurrences(n: int, constraints: Sequence[tuple], *, max_n: int = 10,
                           workers: int = 1) -> int:
    """Number of permutations of length n with exactly r copies of each given pattern."""
    if n < 0:
        raise InvalidInput(f"length must be nonnegative, got {n}")
    if n > max_n:
        raise BudgetExceeded(f"n = {n} is beyond the brute-force bound {max_n}")
    cons = []
    for pat, r in constraints:
        pat = pat if isinstance(pat, Permutation) else parse_perm(pat) if isinstance(pat, str) else Permutation(pat)
        if int(r) < 0:
            raise InvalidInput(f"occurrence count must be nonnegative, got {r}")
        cons.append((pat, int(r)))
    if n < 2:
        return sum(1 for p in permutations(range(1, n + 1))
                   if all(count_occurrences(p, q) == r for q, r in cons))
    kmax = max((len(q) for q, _ in cons), default=1)
    pats = np.zeros((len(cons), max(kmax, 1)), np.int64)
    lens = np.zeros(len(cons), np.int64)
    targets = np.zeros(len(cons), np.int64)
    for i, (q, r) in enumerate(cons):
        pats[i, :len(q)] = [v - 1 for v in q]
        lens[i] = len(q)
        targets[i] = r
    jobs = [(n, a, b, pats, lens, targets) for a, b in _blocks(n)]
    if workers > 1:
        with _pool(workers) as ex:
            return int(sum(ex.map(_occ_block, jobs)))
    return int(sum(_occ_block(j) for j in jobs))


# ---------------------------------------------------------------- Wilf classes


@dataclass
class WilfPartition:
    N: int
    classes: list  # list of (terms, [bases...])

    def to_dict(self) -> dict:
        return {
            "up_to_n": self.N,
            "note": f"equal counting sequences for n <= {self.N}; a finite check only evidences equality",
            "classes": [{"terms": [str(t) for t in terms], "members": [str(b) for b in members]}
                        for terms, members in self.classes],
        }

    def __len__(self) -> int:
        return len(self.classes)


def wilf_classes(patterns: Sequence, N: int, *, workers: int = 1,
                 cache: "CountCache | None" = None) -> WilfPartition:
    """Group patterns (or bases) by their counting sequences up to length N."""
    groups: dict[tuple, list] = {}
    for p in patterns:
        if isinstance(p, (list, tuple)) and not isinstance(p, (Permutation, Basis)):
            p = Permutation(p)
        basis = as_basis(p)
        seq = count_avoiders(basis, N, workers=workers, cache=cache)
        groups.setdefault(seq.terms, []).append(basis)
    classes = sorted(((t, sorted(m)) for t, m in groups.items()), key=lambda c: c[1][0])
    return WilfPartition(N, classes)


# ---------------------------------------------------------------- cache


class CountCache:
    """Append-only JSON-lines cache of (basis, n, count) records."""

    def __init__(self, path):
        self.path = Path(path)
        self._data: dict[tuple[str, int], int] = {}
        if self.path.exists():
            with open(self.path) as fh:
                for lineno, line in enumerate(fh, start=1):
                    line = line.strip()
                    if not line:
                        continue
                    try:
                        rec = json.loads(line)
                        self._data[(rec["basis"], int(rec["n"]))] = int(rec["count"])
                    except (ValueError, KeyError) as e:
                        log.warning("skipping malformed cache record %s:%d (%s)", self.path, lineno, e)
        self.hits = 0
        self.misses = 0

    def get(self, basis: Basis, n: int):
        return self._data.get((str(basis), n))

    def get_sequence(self, basis: Basis, N: int):
        key = str(basis)
        terms = [self._data.get((key, n)) for n in range(1, N + 1)]
        if any(t is None for t in terms):
            self.misses += 1
            return None
        self.hits += 1
        return terms

    def put_sequence(self, seq: CountSequence) -> None:
        key = str(seq.basis)
        new = [(n, t) for n, t in enumerate(seq.terms, start=1) if (key, n) not in self._data]
        if not new:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            for n, t in new:
                self._data[(key, n)] = t
                fh.write(json.dumps({"basis": key, "n": n, "count": str(t)}, sort_keys=True) + "\n")

    def records(self):
        return sorted(self._data.items())

    def __len__(self) -> int:
        return len(self._data)


def default_cache_path() -> Path:
    return Path(os.environ.get("PERMLAB_CACHE", Path.home() / ".cache" / "permlab" / "counts.jsonl"))
