from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectradim.cfcore import lambda0_exact_bounds
from spectradim.errors import InvalidInputError
from spectradim.forbid import ForbidResult, forbidden_words, soundness_check, window_hull
from spectradim.words import ForbiddenSet, Word

WORKED = ["1121112*111212", "2121112*111211", "2121112*11121", "121112*111212",
          "112*12", "212*11", "212*1", "12*12"]

side = st.lists(st.sampled_from([1, 2]), max_size=7).map(tuple)


@settings(max_examples=150)
@given(side, st.sampled_from([1, 2]), side)
def test_window_hull_encloses_exact_bounds(left, c, right):
    lo, hi = lambda0_exact_bounds(left, c, right)
    iv = window_hull(left, c, right)
    assert lo in iv and hi in iv


def test_worked_example():
    r = forbidden_words("3.2658", 6)
    # saved windows come with their reversals, which here are already in the list
    assert [str(w) for w in r.forbidden] == WORKED
    assert set(r.reduced.texts) == {"1212", "2121"}
    assert r.s_prime_truncated() == "3.2660"
    assert r.lmax == 13


def test_json_roundtrip():
    r = forbidden_words("3.2658", 6)
    back = ForbidResult.from_json(r.to_json())
    assert back.to_json() == r.to_json()
    assert back.digest() == r.digest()


def test_higher_threshold_forbids_less():
    low = forbidden_words("3.10", 8).reduced
    high = forbidden_words("3.30", 8).reduced
    # every word forbidden at the higher threshold is forbidden at the lower one
    lang_low = {"".join(t) for t in product("12", repeat=10) if low.avoids("".join(t))}
    lang_high = {"".join(t) for t in product("12", repeat=10) if high.avoids("".join(t))}
    assert lang_low <= lang_high


def test_threshold_outside_range_warns(caplog):
    forbidden_words("3.5", 2)
    assert any("outside" in rec.message for rec in caplog.records)


def test_bad_n():
    with pytest.raises(InvalidInputError):
        forbidden_words("3.2", 0)


@pytest.mark.parametrize("s", ["3.0015", "3.2658", "3.3326"])
def test_soundness_at_L8(s):
    ok, why = soundness_check(forbidden_words(s, 12), s, 8)
    assert ok, why


def test_soundness_detects_bad_window():
    bogus = ForbidResult("3.2658", 6, ForbiddenSet((Word.parse("11*11"),)), 0.0, 0, 0)
    ok, why = soundness_check(bogus, "3.2658", 4)
    assert not ok and "11*11" in why


def test_s_prime_bounds_surviving_windows():
    # every full window not containing a forbidden factor has hull top <= s'
    r = forbidden_words("3.2658", 6)
    red = r.reduced
    for t in product((1, 2), repeat=7):
        text = "".join(map(str, t))
        if not red.avoids(text):
            continue
        iv = window_hull(tuple(reversed(t[:3])), t[3], t[4:])
        if iv.lo < 3.2658:
            assert iv.lo <= r.s_prime
