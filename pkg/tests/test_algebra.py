from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from permlab.algebra import (conv, direct_sum, inflate, is_layered, is_sum_indecomposable, layered,
                             layers, lis_ending_at, perm_poset, skew_sum, sum_components)
from permlab.errors import InvalidInput
from permlab.perm import Permutation, decreasing, identity, parse_perm


@st.composite
def perm_st(draw, max_len=5):
    n = draw(st.integers(0, max_len))
    return Permutation(draw(st.permutations(range(1, n + 1))))


def perms_of(n):
    return (Permutation(p) for p in permutations(range(1, n + 1)))


def test_direct_sum_examples():
    got = direct_sum(parse_perm("24681357"), parse_perm("315264"))
    assert got == (2, 4, 6, 8, 1, 3, 5, 7, 11, 9, 13, 10, 14, 12)
    assert direct_sum((2, 1), (3, 2, 1), (1,)) == parse_perm("215436")
    assert direct_sum((3, 1, 2), ()) == (3, 1, 2)


def test_skew_sum_examples():
    assert skew_sum((1,), (1,)) == (2, 1)
    assert skew_sum((1, 2), (2, 1)) == (3, 4, 2, 1)
    assert skew_sum((2, 3, 1), ()) == (2, 3, 1)


def test_inflate_examples():
    got = inflate((3, 1, 4, 2), [(1, 2), parse_perm("315264"), (2, 3, 1), (3, 2, 1)])
    assert str(got) == "10,11,3,1,5,2,6,4,13,14,12,9,8,7"
    assert inflate((1, 2, 3), [(1,), (1, 2), (1,)]) == (1, 2, 3, 4)
    assert inflate((2, 4, 1, 3), [(1,)] * 4) == (2, 4, 1, 3)


def test_inflate_rejects_bad_blocks():
    with pytest.raises(InvalidInput, match="block"):
        inflate((1, 2), [(1,), ()])
    with pytest.raises(InvalidInput):
        inflate((1, 2), [(1,)])


def test_layered_examples():
    assert is_layered((2, 1, 5, 4, 3, 6)) and layers((2, 1, 5, 4, 3, 6)) == [2, 3, 1]
    assert layers(decreasing(6)) == [6]
    assert not is_layered((2, 4, 1, 3))
    assert layered([2, 3, 1]) == (2, 1, 5, 4, 3, 6)


def test_poset_of_416352():
    poset = perm_poset(parse_perm("416352"))
    covers = set(poset.covers())
    # the expected covers 1<2, 1<3, 1<6, 4<6 and 3<5
    assert {(1, 2), (1, 3), (1, 6), (4, 6), (3, 5)} <= covers
    # 4 precedes 5 with nothing in between, so 4 is covered by 5 under the order definition
    assert covers == {(1, 2), (1, 3), (1, 6), (3, 5), (4, 5), (4, 6)}
    assert [poset.rank[v] for v in range(1, 7)] == [1, 2, 2, 1, 3, 2]


def test_poset_of_215436():
    poset = perm_poset(parse_perm("215436"))
    assert set(poset.covers()) == {(a, b) for a in (1, 2) for b in (3, 4, 5)} | {(b, 6) for b in (3, 4, 5)}
    assert poset.rank_profile() == [2, 3, 1]
    text = poset.export()
    assert "cover 1 3" in text and "rank 6 3" in text


def test_identity_poset_is_chain():
    poset = perm_poset(identity(6))
    assert poset.covers() == [(i, i + 1) for i in range(1, 6)]
    assert poset.rank[1:] == tuple(range(1, 7))


def test_conv_examples():
    assert conv(parse_perm("416352")) == parse_perm("215436")
    assert conv(parse_perm("215436")) == parse_perm("215436")
    assert conv(identity(5)) == identity(5)


def test_sum_components():
    assert sum_components(parse_perm("215436")) == [(2, 1), (3, 2, 1), (1,)]
    assert is_sum_indecomposable((2, 4, 1, 3))
    assert not is_sum_indecomposable((1, 2))


@given(perm_st(), perm_st(), perm_st())
def test_direct_sum_associative_with_identity(a, b, c):
    assert direct_sum(direct_sum(a, b), c) == direct_sum(a, direct_sum(b, c))
    assert direct_sum(a, ()) == a == direct_sum((), a)


def test_inflate_12_is_direct_sum():
    small = [p for k in range(1, 6) for p in perms_of(k)]
    for a in small[::7]:
        for b in small[::5]:
            assert inflate((1, 2), [a, b]) == direct_sum(a, b)


def test_conv_properties_exhaustive():
    for n in range(0, 8):
        for p in perms_of(n):
            c = conv(p)
            assert is_layered(p) == (c == p)
            assert conv(c) == c
            assert sorted(perm_poset(p).rank[1:]) == sorted(perm_poset(c).rank[1:])


def test_rank_matches_chain_definition():
    for n in range(1, 9):
        for p in perms_of(n):
            poset = perm_poset(p)
            lis = lis_ending_at(p)
            for i, v in enumerate(p):
                assert poset.chain_rank(v) == lis[i] == poset.rank[v]
