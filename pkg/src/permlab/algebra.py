"""Sums, inflations, layered permutations and the permutation poset with its convex hull."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from .errors import InvalidInput
from .perm import Permutation, decreasing


def direct_sum(*perms: Sequence[int]) -> Permutation:
    """pi ⊕ sigma ⊕ ...: each block placed after and above the previous ones."""
    out = []
    for p in perms:
        shift = len(out)
        out.extend(v + shift for v in p)
    return Permutation._trusted(out)


def skew_sum(*perms: Sequence[int]) -> Permutation:
    """pi ⊖ sigma ⊖ ...: each block placed after and below the previous ones."""
    total = sum(len(p) for p in perms)
    out = []
    for p in perms:
        total -= len(p)
        out.extend(v + total for v in p)
    return Permutation._trusted(out)


def inflate(skeleton: Sequence[int], blocks: Sequence[Sequence[int]]) -> Permutation:
    """skeleton[blocks[0], ..., blocks[k-1]].

    Empty blocks are rejected: deleting a point would change the skeleton's pattern.
    """
    k = len(skeleton)
    if len(blocks) != k:
        raise InvalidInput(f"inflation of a length-{k} skeleton needs {k} blocks, got {len(blocks)}")
    for i, b in enumerate(blocks, start=1):
        if len(b) == 0:
            raise InvalidInput(f"block {i} is empty; inflation blocks must be nonempty")
    # value offset of the block sitting at skeleton value v
    offset = [0] * (k + 1)
    by_value = sorted(range(k), key=lambda i: skeleton[i])
    acc = 0
    for i in by_value:
        offset[i] = acc
        acc += len(blocks[i])
    out = []
    for i, b in enumerate(blocks):
        out.extend(v + offset[i] for v in b)
    return Permutation(out)


def layers(p: Sequence[int]) -> list[int] | None:
    """Layer lengths if p is a direct sum of decreasing runs, else None."""
    out = []
    start = 0
    n = len(p)
    while start < n:
        # the layer starting here must be the decreasing run ending at value start+1
        top = p[start]
        length = top - start
        if length < 1 or start + length > n:
            return None
        for j in range(length):
            if p[start + j] != top - j:
                return None
        out.append(length)
        start += length
    return out


def is_layered(p: Sequence[int]) -> bool:
    return layers(p) is not None


def layered(sizes: Sequence[int]) -> Permutation:
    return direct_sum(*(decreasing(s) for s in sizes))


def lis_ending_at(p: Sequence[int]) -> list[int]:
    """Length of the longest increasing subsequence ending at each position."""
    ends = []
    for i, v in enumerate(p):
        ends.append(1 + max((ends[j] for j in range(i) if p[j] < v), default=0))
    return ends


@dataclass(frozen=True)
class RankedPoset:
    """The poset on values 1..n with i ⪯ j iff i <= j and i precedes j.

    ``below[i]`` is the set of values strictly below i (transitively closed);
    ``rank[i]`` is the length of the longest chain ending at i. Index 0 is unused.
    """

    n: int
    below: tuple
    rank: tuple

    def leq(self, i: int, j: int) -> bool:
        return i == j or i in self.below[j]

    def covers(self) -> list[tuple[int, int]]:
        """Cover relations (lower, upper), sorted."""
        out = []
        for j in range(1, self.n + 1):
            for i in self.below[j]:
                if not any(i in self.below[m] for m in self.below[j] if m != i):
                    out.append((i, j))
        return sorted(out)

    def rank_profile(self) -> list[int]:
        """Multiplicity of each rank value 1..max."""
        top = max(self.rank[1:], default=0)
        return [sum(1 for r in self.rank[1:] if r == k) for k in range(1, top + 1)]

    def chain_rank(self, i: int) -> int:
        """Rank of i recomputed from the order relation alone (longest chain ending at i)."""
        return 1 + max((self.chain_rank(m) for m in self.below[i]), default=0)

    def export(self) -> str:
        """Plain text: one ``cover a b`` line per cover relation, then ``rank i r`` lines."""
        lines = [f"cover {a} {b}" for a, b in self.covers()]
        lines += [f"rank {i} {self.rank[i]}" for i in range(1, self.n + 1)]
        return "\n".join(lines)


def perm_poset(p: Sequence[int]) -> RankedPoset:
    n = len(p)
    pos = [0] * (n + 1)
    for i, v in enumerate(p):
        pos[v] = i
    below = [frozenset()]
    for j in range(1, n + 1):
        below.append(frozenset(i for i in range(1, j) if pos[i] < pos[j]))
    ranks_at = lis_ending_at(p)
    rank = [0] * (n + 1)
    for i, v in enumerate(p):
        rank[v] = ranks_at[i]
    return RankedPoset(n, tuple(below), tuple(rank))


def conv(p: Sequence[int]) -> Permutation:
    """The layered permutation whose layers have the sizes of the rank classes of P_p."""
    poset = perm_poset(p)
    return layered(poset.rank_profile())


def is_sum_indecomposable(p: Sequence[int]) -> bool:
    n = len(p)
    running = 0
    for i, v in enumerate(p[:-1], start=1):
        running = max(running, v)
        if running == i:
            return False
    return n > 0


def sum_components(p: Sequence[int]) -> list[Permutation]:
    out = []
    start = 0
    running = 0
    for i, v in enumerate(p, start=1):
        running = max(running, v)
        if running == i:
            out.append(Permutation._trusted(x - start for x in p[start:i]))
            start = i
    return out


def direct_sum_all(perms: Sequence[Sequence[int]]) -> Permutation:
    return reduce(lambda a, b: direct_sum(a, b), perms, Permutation())
