"""Greedy stack sorting, West t-stack sortability and general sorting with t stacks in series."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from . import _kernels as K
from .classes import _pool
from .errors import BudgetExceeded, InvalidInput
from .perm import Permutation

MACHINE_NOTE = "general t-stack machine = t stacks in series (input -> stack 1 -> ... -> stack t -> output)"


def greedy_stack_sort(p: Sequence[int]) -> Permutation:
    """One pass of the greedy stack: push while smaller than the top, otherwise pop first."""
    stack: list[int] = []
    out: list[int] = []
    for x in p:
        while stack and stack[-1] < x:
            out.append(stack.pop())
        stack.append(x)
    while stack:
        out.append(stack.pop())
    return Permutation._trusted(out)


def west_sortable(p: Sequence[int], t: int) -> bool:
    if t < 1:
        raise InvalidInput(f"number of stacks must be positive, got {t}")
    q = tuple(p)
    ident = tuple(range(1, len(q) + 1))
    for _ in range(t):
        if q == ident:
            return True
        q = tuple(greedy_stack_sort(q))
    return q == ident


def _west_block(args):
    n, t, a, b = args
    return K.count_west_block(n, t, a, b)


def count_west_sortable(n: int, t: int, *, max_n: int | None = None, workers: int = 1) -> int:
    """|{p in S_n : s^t(p) = identity}| by running every permutation through the machine."""
    if t < 1:
        raise InvalidInput(f"number of stacks must be positive, got {t}")
    if n < 0:
        raise InvalidInput(f"length must be nonnegative, got {n}")
    bound = max_n if max_n is not None else (12 if t == 1 else 10)
    if n > bound:
        raise BudgetExceeded(f"n = {n} is beyond the brute-force bound {bound} for t = {t}")
    if n < 3:
        return sum(1 for p in permutations(range(1, n + 1)) if west_sortable(p, t))
    jobs = [(n, t, a, b) for a in range(n) for b in range(n) if a != b]
    if workers > 1:
        with _pool(workers) as ex:
            return int(sum(ex.map(_west_block, jobs)))
    return int(sum(_west_block(j) for j in jobs))


# ---------------------------------------------------------------- parity


def predicted_parity(n: int, t: int) -> str | None:
    """Parity of the West t-stack sortable count predicted by the known rules (t = 1, 2)."""
    if t == 1:
        return "odd" if (n + 1) & n == 0 else "even"
    if t == 2:
        return "odd" if two_stack_rule(n) else "even"
    return None


def two_stack_rule(n: int) -> bool:
    """Binary expansion of n ends in 1 and has no two adjacent 1s."""
    return n & 1 == 1 and n & (n >> 1) == 0


@dataclass
class ParityRow:
    n: int
    count: int
    parity: str
    predicted: str | None

    @property
    def mismatch(self) -> bool:
        return self.predicted is not None and self.predicted != self.parity

    def to_dict(self) -> dict:
        return {"n": self.n, "count": str(self.count), "parity": self.parity,
                "predicted": self.predicted, "mismatch": self.mismatch}


def parity_report(t: int, N: int, *, workers: int = 1) -> list[ParityRow]:
    rows = []
    for n in range(1, N + 1):
        c = count_west_sortable(n, t, workers=workers)
        rows.append(ParityRow(n, c, "odd" if c % 2 else "even", predicted_parity(n, t)))
    return rows


def fibonacci(m: int) -> int:
    a, b = 0, 1
    for _ in range(m):
        a, b = b, a + b
    return a


def fibonacci_parity_count(m: int) -> tuple[int, int]:
    """(number of n in [1, 2^m] obeying the two-stack odd-count rule, F_m)."""
    if not 1 <= m <= 20:
        raise InvalidInput(f"m must lie in 1..20, got {m}")
    count = sum(1 for n in range(1, 2**m + 1) if two_stack_rule(n))
    return count, fibonacci(m)


# ---------------------------------------------------------------- general t-stack machines


@dataclass
class StackMachineState:
    """A configuration of t stacks in series; stack tops are the list ends."""

    word: tuple
    t: int
    pos: int = 0
    stacks: list = field(default_factory=list)
    next_output: int = 1

    def __post_init__(self):
        if not self.stacks:
            self.stacks = [[] for _ in range(self.t)]

    def check(self) -> None:
        held = list(self.word[self.pos:])
        for s in self.stacks:
            held.extend(s)
        if sorted(held + list(range(1, self.next_output))) != list(range(1, len(self.word) + 1)):
            raise AssertionError(f"machine content not conserved: {self}")

    def apply(self, move) -> None:
        """Apply ("push",), ("move", i) with stacks 0-indexed, or ("pop",); illegal moves raise."""
        kind = move[0]
        if kind == "push":
            if self.pos >= len(self.word):
                raise InvalidInput("push from empty input")
            self.stacks[0].append(self.word[self.pos])
            self.pos += 1
        elif kind == "move":
            i = move[1]
            if not 0 <= i < self.t - 1 or not self.stacks[i]:
                raise InvalidInput(f"illegal move out of stack {i}")
            self.stacks[i + 1].append(self.stacks[i].pop())
        elif kind == "pop":
            last = self.stacks[-1]
            if not last:
                raise InvalidInput("pop from empty last stack")
            v = last.pop()
            if v != self.next_output:
                raise InvalidInput(f"popped {v} while {self.next_output} was due")
            self.next_output += 1
        else:
            raise InvalidInput(f"unknown move {move!r}")

    @property
    def done(self) -> bool:
        return self.next_output == len(self.word) + 1


@dataclass
class SortResult:
    sortable: bool | None  # None: node cap hit, answer unknown
    witness: list | None
    nodes: int

    def __bool__(self) -> bool:
        return bool(self.sortable)


def replay(p: Sequence[int], t: int, moves) -> bool:
    """Run a move sequence on a fresh machine; True iff it outputs the identity."""
    st = StackMachineState(tuple(p), t)
    try:
        for m in moves:
            st.apply(m)
            st.check()
    except InvalidInput:
        return False
    return st.done


def general_sortable(p: Sequence[int], t: int, *, node_cap: int = 10**8,
                     forced_moves: bool = True, debug: bool = False) -> SortResult:
    """Decide sortability by t stacks in series with a memoized depth-first search.

    Moves are tried as input-push first, then stack i -> i+1 from left to right.
    With ``forced_moves`` the last stack is popped whenever its top is the next
    value due; otherwise popping is tried as a last ordinary move. Any push onto
    the last stack above a smaller value is a dead end (that value could never
    leave in time) and is never made.
    """
    if t < 1:
        raise InvalidInput(f"number of stacks must be positive, got {t}")
    word = tuple(p)
    n = len(word)
    seen: set = set()
    moves: list = []
    nodes = 0

    def emit_forced(stacks, nxt):
        k = 0
        last = stacks[-1]
        while last and last[-1] == nxt:
            last.pop()
            nxt += 1
            k += 1
        return nxt, k

    def key(pos, stacks):
        return (pos, tuple(tuple(s) for s in stacks))

    def dfs(pos, stacks, nxt):
        nonlocal nodes
        if nxt == n + 1:
            return True
        k = key(pos, stacks)
        if k in seen:
            return False
        seen.add(k)
        nodes += 1
        if nodes > node_cap:
            raise BudgetExceeded(f"search exceeded {node_cap} nodes")
        if debug:
            StackMachineState(word, t, pos, [list(s) for s in stacks], nxt).check()
        options = []
        if pos < n:
            options.append(("push",))
        options.extend(("move", i) for i in range(t - 1) if stacks[i])
        if not forced_moves and stacks[-1] and stacks[-1][-1] == nxt:
            options.append(("pop",))
        for mv in options:
            ns = [list(s) for s in stacks]
            npos, nn = pos, nxt
            if mv[0] == "push":
                x = word[pos]
                npos += 1
                target = 0
            elif mv[0] == "move":
                x = ns[mv[1]].pop()
                target = mv[1] + 1
            else:
                ns[-1].pop()
                nn += 1
                target = None
            if target is not None:
                if target == t - 1 and ns[target] and ns[target][-1] < x:
                    continue
                ns[target].append(x)
            mark = len(moves)
            moves.append(mv)
            if forced_moves:
                nn, k_out = emit_forced(ns, nn)
                moves.extend([("pop",)] * k_out)
            if dfs(npos, ns, nn):
                return True
            del moves[mark:]
        return False

    stacks0 = [[] for _ in range(t)]
    try:
        ok = dfs(0, stacks0, 1)
    except BudgetExceeded:
        return SortResult(None, None, nodes)
    return SortResult(ok, list(moves) if ok else None, nodes)


@dataclass
class UnsortableSurvey:
    t: int
    max_len: int
    length: int | None
    perms: list
    verified_up_to: int
    sortable_checked: int
    note: str = MACHINE_NOTE

    def to_dict(self) -> dict:
        return {
            "stacks": self.t,
            "max_len": self.max_len,
            "length": self.length,
            "count": len(self.perms),
            "unsortable": [str(p) for p in self.perms],
            "verified_up_to": self.verified_up_to,
            "sortable_witnesses_replayed": self.sortable_checked,
            "machine": self.note,
        }


def _survey_block(args):
    # all permutations of length n starting with `first`, in lexicographic order
    n, first, t, node_cap = args
    rest = [v for v in range(1, n + 1) if v != first]
    unsortable = []
    replayed = 0
    for tail in permutations(rest):
        p = (first,) + tail
        res = general_sortable(p, t, node_cap=node_cap)
        if res.sortable is None:
            return n, None, replayed, p
        if res.sortable:
            if not replay(p, t, res.witness):
                raise AssertionError(f"witness for {p} does not replay")
            replayed += 1
        else:
            unsortable.append(Permutation._trusted(p))
    return n, unsortable, replayed, None


def shortest_unsortable(t: int, max_len: int, *, node_cap: int = 10**8,
                        workers: int = 1) -> UnsortableSurvey:
    """Scan lengths upward; stop at the first length with a permutation t stacks cannot sort.

    Every sortable permutation met on the way has its witness replayed.
    """
    if t < 1:
        raise InvalidInput(f"number of stacks must be positive, got {t}")
    checked = 0
    for n in range(1, max_len + 1):
        jobs = [(n, first, t, node_cap) for first in range(1, n + 1)]
        if workers > 1:
            with _pool(workers) as ex:
                parts = list(ex.map(_survey_block, jobs))
        else:
            parts = [_survey_block(j) for j in jobs]
        bad, stuck = [], None
        for _, part_bad, replayed, part_stuck in parts:
            checked += replayed
            if part_bad is None:
                stuck = stuck or part_stuck
            else:
                bad.extend(part_bad)
        if stuck is not None:
            raise BudgetExceeded(f"search for {Permutation._trusted(stuck)} exceeded {node_cap} nodes",
                                 partial={"verified_up_to": n - 1})
        if bad:
            return UnsortableSurvey(t, max_len, n, sorted(bad), n, checked)
    return UnsortableSurvey(t, max_len, None, [], max_len, checked)
