import json
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permlab.classes import (Basis, CountCache, count_avoiders, count_brute, count_with_occurrences,
                             list_avoiders, wilf_classes)
from permlab.errors import BudgetExceeded, InvalidInput
from permlab.perm import Permutation, avoids_all, symmetry

CATALAN = [1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786]


def filter_count(basis, n):
    return sum(1 for p in permutations(range(1, n + 1)) if avoids_all(p, basis))


def all_perms(k):
    return [Permutation(p) for p in permutations(range(1, k + 1))]


def test_catalan():
    assert count_avoiders(Basis([(1, 3, 2)]), 5).terms == (1, 2, 5, 14, 42)
    assert list(count_avoiders("231", 11).terms) == CATALAN


def test_singleton_pattern_kills_everything():
    assert count_avoiders("1", 3).terms == (0, 0, 0)


def test_1324_at_eight():
    seq = count_avoiders("1324", 8)
    assert seq[8] == 15793
    assert seq[8] == filter_count([(1, 3, 2, 4)], 8)


def test_empty_basis_is_factorial():
    assert count_avoiders(Basis(), 5).terms == (1, 2, 6, 24, 120)


def test_length_cap():
    with pytest.raises(BudgetExceeded):
        count_avoiders("1234", 21)


def test_basis_parse_diagnostics():
    b = Basis.parse("43251;53241")
    assert str(b) == "4,3,2,5,1;5,3,2,4,1"
    with pytest.raises(InvalidInput, match="element 2"):
        Basis.parse("123;1x2")


def test_list_avoiders_examples():
    assert list_avoiders("12", 3) == [(3, 2, 1)]
    assert list_avoiders("123;321", 5) == []
    got = list_avoiders("321", 3)
    assert len(got) == 5 and got == sorted(got)


@pytest.mark.parametrize("n, cons, expected", [
    (3, [("321", 1)], 1),
    (4, [("123", 0)], 14),
    (4, [("12", 6)], 1),
])
def test_count_with_occurrences_examples(n, cons, expected):
    assert count_with_occurrences(n, cons) == expected


def test_count_with_occurrences_zero_is_avoidance():
    for basis in (["132"], ["1234"], ["2413", "3142"], ["123", "4321"]):
        seq = count_avoiders(Basis.parse(";".join(basis)), 8)
        for n in range(1, 9):
            assert count_with_occurrences(n, [(b, 0) for b in basis]) == seq[n]


def test_count_with_occurrences_budget():
    with pytest.raises(BudgetExceeded):
        count_with_occurrences(11, [("123", 0)])


BASES = ["123", "132", "1342", "2413", "1324", "12345", "123;321", "132;4321", "2413;3142",
         "1234;3412", "54321;12", "21453", "231;4123"]


@pytest.mark.parametrize("text", BASES)
def test_oracle_equivalence(text):
    basis = Basis.parse(text)
    seq = count_avoiders(basis, 8)
    for n in range(1, 9):
        assert seq[n] == filter_count(basis, n), n


@settings(max_examples=25, deadline=None)
@given(st.lists(st.permutations(range(1, 5)), min_size=1, max_size=3),
       st.permutations(range(1, 5)))
def test_monotone_under_basis_growth(pats, extra):
    small = count_avoiders(Basis(pats), 7).terms
    big = count_avoiders(Basis(list(pats) + [extra]), 7).terms
    assert all(b <= a for a, b in zip(small, big))


def test_symmetry_of_counts():
    for k in range(1, 5):
        for p in all_perms(k):
            base = count_avoiders(Basis([p]), 9).terms
            for which in ("reverse", "complement", "inverse"):
                assert count_avoiders(Basis([symmetry(p, which)]), 9).terms == base


@pytest.mark.parametrize("text", ["132", "1324", "2413;3142", "4231"])
def test_closure_under_deletion(text):
    basis = Basis.parse(text)
    for n in range(2, 8):
        for p in list_avoiders(basis, n):
            for i in range(n):
                rest = [v - (v > p[i]) for j, v in enumerate(p) if j != i]
                assert avoids_all(rest, basis)


def test_list_avoiders_matches_count():
    for n in range(1, 8):
        assert len(list_avoiders("1342", n)) == count_avoiders("1342", n)[n]


def test_count_brute():
    assert count_brute("53241;43251", 6) == 672


def test_parallel_counts_match_serial():
    serial = count_avoiders("13254", 10, workers=1).terms
    assert count_avoiders("13254", 10, workers=4).terms == serial


def test_wilf_s3_one_class():
    part = wilf_classes(all_perms(3), 8)
    assert len(part) == 1
    assert list(part.classes[0][0]) == CATALAN[:8]


def test_wilf_s4_three_classes():
    part = wilf_classes(all_perms(4), 10)
    assert len(part) == 3
    at10 = sorted(terms[9] for terms, _ in part.classes)
    assert at10 == [555662, 586590, 591950]  # 1342, 1234, 1324 classes


def test_wilf_12_21():
    part = wilf_classes([(1, 2), (2, 1)], 6)
    assert len(part) == 1 and part.classes[0][0] == (1,) * 6


def test_cache_roundtrip(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = CountCache(path)
    first = count_avoiders("1342", 9, cache=cache)
    lines = path.read_text().splitlines()
    assert len(lines) == 9
    rec = json.loads(lines[-1])
    assert rec == {"basis": "1,3,4,2", "n": 9, "count": str(first[9])}
    again = CountCache(path)
    second = count_avoiders("1342", 9, cache=again)
    assert second.terms == first.terms
    assert again.hits == 1
    assert path.read_text().splitlines() == lines
