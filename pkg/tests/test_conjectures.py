import pytest

from permlab.classes import count_avoiders
from permlab.conjectures import (EQUALITY, HOLDS, VIOLATED, bona_sweep, burstein_patterns,
                                 check_bona, check_burstein, parity_conjectures,
                                 stankova_west_crossing)
from permlab.errors import BudgetExceeded, InvalidInput
from permlab.perm import parse_perm


def strict_range(rep, lo, hi, left, right):
    a, b = rep.counts[left], rep.counts[right]
    return all(a[n - 1] < b[n - 1] for n in range(lo, hi + 1))


def test_burstein_variant3_unit_blocks():
    left, right = burstein_patterns("3", ["1", "1"], t=2)
    assert (left, right) == (parse_perm("1234"), parse_perm("1324"))
    rep = check_burstein("3", ["1", "1"], 10, t=2)
    assert strict_range(rep, 7, 10, "1,2,3,4", "1,3,2,4")
    assert rep.verdict == EQUALITY and rep.details["equal_at"] == [4, 5, 6]
    assert not rep.witnesses


def test_burstein_variant1_collapses_to_one_wilf_class():
    rep = check_burstein("1", ["1", "1", "1"], 8)
    assert rep.verdict == EQUALITY
    assert rep.details["equal_at"] == list(range(3, 9))


def test_burstein_nonlayered():
    rep = check_burstein("nonlayered", [], 9, skeleton="2413")
    assert set(rep.counts) == {"2,4,1,3", "1,2,3,4"}
    assert rep.counts["2,4,1,3"][8] == 91245 and rep.counts["1,2,3,4"][8] == 94359
    with pytest.raises(InvalidInput, match="layered"):
        check_burstein("nonlayered", [], 6, skeleton="213")


def test_burstein_bad_parameters():
    with pytest.raises(InvalidInput):
        check_burstein("1", ["1"], 6)
    with pytest.raises(InvalidInput):
        check_burstein("7", [], 6)


def test_bona_416352():
    rep = check_bona("416352", 8)
    assert rep.details["conv"] == "2,1,5,4,3,6"
    assert rep.verdict in (HOLDS, VIOLATED)
    a, b = rep.counts["4,1,6,3,5,2"], rep.counts["2,1,5,4,3,6"]
    assert (rep.verdict == HOLDS) == all(x <= y for x, y in zip(a, b))


def test_bona_layered_is_trivial():
    rep = check_bona("215436", 7)
    assert rep.verdict == HOLDS and len(rep.counts) == 1


def test_bona_sweep_s4_witness_reverifies():
    rep = bona_sweep(4, 9)
    for w in rep.witnesses:
        n = w["n"]
        assert count_avoiders(w["left"], n)[n] > count_avoiders(w["right"], n)[n]
    assert (rep.verdict == VIOLATED) == bool(rep.witnesses)


def test_stankova_west_small_range():
    rep = stankova_west_crossing(10)
    a, b = rep.counts["5,3,2,4,1"], rep.counts["4,3,2,5,1"]
    assert all(a[n - 1] == b[n - 1] for n in range(1, 5))
    assert all(a[n - 1] < b[n - 1] for n in range(7, 11))
    # both classes have 119 and 694 members at n = 5 and 6
    assert (a[4], a[5]) == (b[4], b[5]) == (119, 694)
    assert rep.verdict == EQUALITY and rep.details["equal_at"] == [5, 6]


def test_stankova_west_gating():
    with pytest.raises(BudgetExceeded, match="opt-in"):
        stankova_west_crossing(12)
    with pytest.raises(InvalidInput):
        stankova_west_crossing(14, opt_in_long=True)


def test_parity_conjectures():
    rep = parity_conjectures(N1=9, N2=9, N3=9, fib_m=10)
    t1, t2, t3 = (rep.counts[f"west-{t}"] for t in (1, 2, 3))
    assert t2[2] == 6
    assert t1[6] % 2 == 1
    assert t3[8] % 2 == 1
    assert rep.verdict == HOLDS and not rep.witnesses


def test_report_fields_are_fixed():
    d = check_burstein("1", ["1", "1", "1"], 5).to_dict()
    assert {"id", "range", "verdict", "witnesses", "counts", "interpretation_notes"} <= set(d)
    assert "runtime_seconds" not in d
