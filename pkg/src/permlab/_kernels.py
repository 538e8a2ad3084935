"""Compiled inner loops. Everything here works on 0-indexed int8/int64 arrays.

Nodes of the generating tree are permutations of 0..n-1 together with a bitmask of
candidate slots: bit w set means "appending a new last entry of rank w might avoid
the basis". Children inherit candidates from their parent (deleting the parent's
last point from a grandchild gives a child of the parent), so each node only tests
|active(parent)| + 1 slots, and each test only looks at occurrences that use the
new last point.
"""
import numpy as np
from numba import njit

BIG = 1 << 30


def pattern_tables(patterns):
    """Pack patterns (tuples of 1-based values) into the arrays the kernels expect.

    Matching order is: last pattern position first (pinned to the new point), then
    positions 0..k-2 left to right. ``lo[p, j]``/``hi[p, j]`` name the already
    matched position holding the nearest smaller/larger value, or -1.
    """
    kmax = max((len(q) for q in patterns), default=1)
    P = len(patterns)
    pats = np.zeros((P, max(kmax, 1)), dtype=np.int64)
    lens = np.zeros(P, dtype=np.int64)
    lo = np.full((P, max(kmax, 1)), -1, dtype=np.int64)
    hi = np.full((P, max(kmax, 1)), -1, dtype=np.int64)
    for p, q in enumerate(patterns):
        k = len(q)
        lens[p] = k
        for j, v in enumerate(q):
            pats[p, j] = v - 1
        for j in range(k - 1):
            v = q[j]
            known = [k - 1] + list(range(j))
            below = [i for i in known if q[i] < v]
            above = [i for i in known if q[i] > v]
            if below:
                lo[p, j] = max(below, key=lambda i: q[i])
            if above:
                hi[p, j] = min(above, key=lambda i: q[i])
    return pats, lens, lo, hi


@njit(cache=True)
def _ends_with(c, n, w, pat, k, lo, hi, val):
    # Host is c[0..n-1] with every entry >= w shifted up by one, followed by w.
    # True iff the host has an occurrence of pat whose last point is that w.
    if k <= 1:
        return True
    if n + 1 < k:
        return False
    val[k - 1] = w
    j = 0
    starts = np.empty(k, np.int64)
    starts[0] = 0
    while j >= 0:
        lov = -1 if lo[j] < 0 else val[lo[j]]
        hiv = BIG if hi[j] < 0 else val[hi[j]]
        limit = n - k + 1 + j
        i = starts[j]
        found = False
        while i <= limit:
            x = c[i]
            if x >= w:
                x += 1
            if x > lov and x < hiv:
                found = True
                break
            i += 1
        if found:
            val[j] = x
            starts[j] = i + 1
            if j == k - 2:
                return True
            j += 1
            starts[j] = i + 1
        else:
            j -= 1
    return False


@njit(cache=True)
def active_slots(c, n, cand, pats, lens, lo, hi):
    """Subset of ``cand`` whose one-point extensions of c[0..n-1] avoid every pattern."""
    P = pats.shape[0]
    val = np.empty(pats.shape[1] + 1, np.int64)
    out = np.uint64(0)
    for w in range(n + 1):
        bit = np.uint64(1) << np.uint64(w)
        if (cand & bit) == 0:
            continue
        ok = True
        for p in range(P):
            if _ends_with(c, n, w, pats[p], lens[p], lo[p], hi[p], val):
                ok = False
                break
        if ok:
            out |= bit
    return out


@njit(cache=True)
def inherit(active, v):
    """Candidate slots of the child made by appending rank v to a node with ``active`` slots."""
    one = np.uint64(1)
    vv = np.uint64(v)
    low = active & ((one << (vv + one)) - one)
    high = (active >> vv) << (vv + one)
    return low | high


@njit(cache=True)
def popcount(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit(cache=True)
def expand_level(perms, cands, n, pats, lens, lo, hi):
    """Materialize level n+1 from level n. Returns (children, child candidate masks)."""
    R = perms.shape[0]
    actives = np.empty(R, np.uint64)
    total = 0
    for r in range(R):
        a = active_slots(perms[r], n, cands[r], pats, lens, lo, hi)
        actives[r] = a
        total += popcount(a)
    out = np.empty((total, n + 1), np.int8)
    ocand = np.empty(total, np.uint64)
    t = 0
    for r in range(R):
        a = actives[r]
        for w in range(n + 1):
            if (a >> np.uint64(w)) & np.uint64(1):
                for i in range(n):
                    x = perms[r, i]
                    out[t, i] = x + 1 if x >= w else x
                out[t, n] = w
                ocand[t] = inherit(a, w)
                t += 1
    return out, ocand


@njit(cache=True)
def dfs_count(perms, cands, n0, N, pats, lens, lo, hi, node_limit):
    """Count avoiders at every level n0+1..N below the given level-n0 nodes.

    Returns an int64 array indexed by length; entries below n0+1 are zero.
    ``counts[0]`` is set to -1 if more than ``node_limit`` nodes were expanded.
    """
    counts = np.zeros(N + 1, np.int64)
    expanded = 0
    if n0 >= N:
        return counts
    buf = np.zeros((N + 1, N + 1), np.int8)
    act = np.zeros(N + 1, np.uint64)
    rem = np.zeros(N + 1, np.uint64)
    one = np.uint64(1)
    for r in range(perms.shape[0]):
        for i in range(n0):
            buf[n0, i] = perms[r, i]
        a = active_slots(buf[n0], n0, cands[r], pats, lens, lo, hi)
        counts[n0 + 1] += popcount(a)
        if n0 + 1 >= N or a == 0:
            continue
        n = n0
        act[n] = a
        rem[n] = a
        while n >= n0:
            if rem[n] == 0:
                n -= 1
                continue
            low = rem[n] & (~rem[n] + one)
            rem[n] ^= low
            v = 0
            while (low >> np.uint64(v)) != one:
                v += 1
            for i in range(n):
                x = buf[n, i]
                buf[n + 1, i] = x + 1 if x >= v else x
            buf[n + 1, n] = v
            expanded += 1
            if expanded > node_limit:
                counts[0] = -1
                return counts
            c = inherit(act[n], v)
            a = active_slots(buf[n + 1], n + 1, c, pats, lens, lo, hi)
            counts[n + 2] += popcount(a)
            if n + 2 < N and a != 0:
                n += 1
                act[n] = a
                rem[n] = a
    return counts


# ---------------------------------------------------------------- brute force over S_n


@njit(cache=True)
def next_permutation(a):
    n = a.shape[0]
    i = n - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = n - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    lo_, hi_ = i + 1, n - 1
    while lo_ < hi_:
        a[lo_], a[hi_] = a[hi_], a[lo_]
        lo_ += 1
        hi_ -= 1
    return True


@njit(cache=True)
def prefix_start(n, first, second):
    """Lexicographically smallest permutation of 0..n-1 starting with (first, second)."""
    a = np.empty(n, np.int64)
    a[0] = first
    a[1] = second
    t = 2
    for v in range(n):
        if v != first and v != second:
            a[t] = v
            t += 1
    return a


@njit(cache=True)
def stack_sort_into(src, dst, stack):
    """Greedy one-stack pass: push while the incoming entry is smaller than the top."""
    n = src.shape[0]
    top = 0
    out = 0
    for i in range(n):
        x = src[i]
        while top > 0 and stack[top - 1] < x:
            top -= 1
            dst[out] = stack[top]
            out += 1
        stack[top] = x
        top += 1
    while top > 0:
        top -= 1
        dst[out] = stack[top]
        out += 1


@njit(cache=True)
def _west_ok(a, t, b1, b2, stack):
    n = a.shape[0]
    src = a
    for rnd in range(t):
        dst = b1 if rnd % 2 == 0 else b2
        stack_sort_into(src, dst, stack)
        src = dst
        done = True
        for i in range(n):
            if src[i] != i:
                done = False
                break
        if done:
            return True
    return False


@njit(cache=True)
def count_west_block(n, t, first, second):
    """Number of West t-stack sortable permutations of 0..n-1 with the given two-entry prefix."""
    a = prefix_start(n, first, second)
    b1 = np.empty(n, np.int64)
    b2 = np.empty(n, np.int64)
    stack = np.empty(n, np.int64)
    total = 0
    while True:
        if _west_ok(a, t, b1, b2, stack):
            total += 1
        # advance only within the block sharing this prefix
        if not next_permutation(a[2:]):
            break
    return total


@njit(cache=True)
def _count_occ(a, pat, k):
    # occurrences of pat (0-based values) in a, by DFS over index positions
    n = a.shape[0]
    if k == 0:
        return 1
    if k > n:
        return 0
    idx = np.empty(k, np.int64)
    total = 0
    j = 0
    idx[0] = -1
    while j >= 0:
        i = idx[j] + 1
        found = False
        limit = n - k + j
        while i <= limit:
            ok = True
            x = a[i]
            for q in range(j):
                y = a[idx[q]]
                if (pat[q] < pat[j]) != (y < x):
                    ok = False
                    break
            if ok:
                found = True
                break
            i += 1
        if found:
            idx[j] = i
            if j == k - 1:
                total += 1
            else:
                j += 1
                idx[j] = i
        else:
            j -= 1
    return total


@njit(cache=True)
def count_occurrence_block(n, first, second, pats, lens, targets):
    """Permutations in the prefix block with exactly targets[i] copies of every pattern i."""
    a = prefix_start(n, first, second)
    P = pats.shape[0]
    total = 0
    while True:
        ok = True
        for p in range(P):
            if _count_occ(a, pats[p], lens[p]) != targets[p]:
                ok = False
                break
        if ok:
            total += 1
        if not next_permutation(a[2:]):
            break
    return total
