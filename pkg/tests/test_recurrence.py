from fractions import Fraction
from math import comb, factorial

import pytest

from permlab.classes import count_avoiders
from permlab.errors import InvalidInput
from permlab.recurrence import (InsufficientTerms, Recurrence, _system, fit_recurrence, nullspace,
                                read_terms, search_recurrence, verify_recurrence)

FACT = [factorial(n) for n in range(1, 13)]
CATALAN = [comb(2 * n, n) // (n + 1) for n in range(1, 13)]


def test_factorial_fit():
    res = fit_recurrence(FACT[:10], 1, 1)
    rec = res.recurrence
    assert rec.coeffs == ((-1, -1), (1, 0))
    assert str(rec).startswith("s_(n+1) - (n + 1)*s_n = 0")
    assert res.nullity == 1


def test_catalan_fit_reproduces_terms():
    rec = fit_recurrence(CATALAN, 1, 1).recurrence
    # proportional to (n + 2) C_(n+1) - (4n + 2) C_n
    assert rec.coeffs == ((-2, -4), (2, 1))
    assert rec.extend(CATALAN[:1], 11) == CATALAN[1:]


def test_ones():
    rec = fit_recurrence([1] * 10, 1, 0).recurrence
    assert rec.coeffs == ((-1,), (1,))


def test_verify_examples():
    fact_rec = fit_recurrence(FACT[:10], 1, 1).recurrence
    assert verify_recurrence(fact_rec, FACT) == (True, None)
    # C_2 = 2 C_1 satisfies the factorial relation at n = 1; the first failure is n = 2
    assert verify_recurrence(fact_rec, CATALAN) == (False, 2)
    with pytest.raises(InsufficientTerms):
        verify_recurrence(fact_rec, [1])


def test_too_few_terms():
    with pytest.raises(InsufficientTerms, match="margin 3"):
        fit_recurrence(FACT[:5], 1, 1)
    with pytest.raises(InvalidInput):
        fit_recurrence([0] * 10, 1, 1)


def test_search():
    assert search_recurrence(CATALAN, 2, 2).recurrence.coeffs[:2] == ((-2, -4), (2, 1))
    res = search_recurrence(FACT, 2, 2)
    assert (res.recurrence.order, res.recurrence.degree) == (1, 1)


def test_search_1324_reports_none():
    terms = count_avoiders("1324", 11).terms
    res = search_recurrence(terms, 2, 1)
    assert not res
    assert "not a proof" in res.message and "N = 11" in res.message


def test_homogeneity():
    base = fit_recurrence(FACT[:10], 1, 1).recurrence
    assert fit_recurrence([7 * x for x in FACT[:10]], 1, 1).recurrence == base


def test_nullspace_is_exact():
    rows = _system(CATALAN, 1, 2, 1)
    basis = nullspace(rows, 6)
    assert basis
    for v in basis:
        for row in rows:
            assert sum(a * b for a, b in zip(row, v)) == Fraction(0)


def test_index_shift_consistency():
    one = fit_recurrence(CATALAN, 1, 1, offset=1).recurrence
    zero = fit_recurrence(CATALAN, 1, 1, offset=0).recurrence
    assert one.shifted(0) == zero
    assert zero.shifted(1) == one
    assert verify_recurrence(one.shifted(0), CATALAN)[0]
    assert verify_recurrence(zero.shifted(1), CATALAN)[0]


def test_fit_implies_verify_across_windows():
    seqs = [FACT, CATALAN, [2**n + n for n in range(1, 15)], [n * n for n in range(1, 15)]]
    for terms in seqs:
        for r in (1, 2):
            for d in (0, 1, 2):
                try:
                    res = fit_recurrence(terms, r, d)
                except InsufficientTerms:
                    continue
                if res:
                    assert verify_recurrence(res.recurrence, terms)[0]


def test_recurrence_text_records_offset():
    rec = Recurrence(((-1,), (1,)), offset=0)
    assert str(rec) == "s_(n+1) - s_n = 0   [terms indexed from n = 0]"


def test_read_terms_formats(tmp_path):
    plain = tmp_path / "a.txt"
    plain.write_text("1\n2\n6\n24\n")
    assert read_terms(plain) == [1, 2, 6, 24]
    labelled = tmp_path / "b.txt"
    labelled.write_text("1: 1\n2: 2\n3: 6\n")
    assert read_terms(labelled) == [1, 2, 6]
    bad = tmp_path / "c.txt"
    bad.write_text("1: 1\n3: 6\n")
    with pytest.raises(InvalidInput, match="out of sequence"):
        read_terms(bad)
    cache = tmp_path / "d.jsonl"
    cache.write_text('{"basis": "1,3,2", "count": "1", "n": 1}\n{"basis": "1,3,2", "count": "2", "n": 2}\n')
    assert read_terms(cache) == [1, 2]
