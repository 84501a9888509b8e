"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines inline; they are
also repeated in the terminal summary.
"""

import random
import time
from fractions import Fraction
from itertools import product

import pytest

from spectradim.cfcore import lambda0_bounds, lambda0_periodic, surd_decimal
from spectradim.dimension import dim_enclosure, dimension_drop
from spectradim.dimfun import (APPENDIX_CHECKPOINTS, all_gaps, checkpoint_window, gap_interval,
                               sweep)
from spectradim.forbid import forbidden_words, soundness_check
from spectradim.plateau import (appendix_contains, plateau, plateau_table,
                                verify_endpoint_identities, verify_inequalities, verify_order)
from spectradim.words import ForbiddenSet, reduce

RESULTS: dict[int, str] = {}

# printed gap intervals, in occurrence order
PRINTED_GAPS = {
    (0, 11): ("2.9999", "3.0066"),
    (11, 7): ("3.0117", "3.0171"),
    (7, 12): ("3.0265", "3.0451"),
    (12, 3): ("3.0490", "3.0509"),
    (3, 4): ("3.0832", "3.0915"),
    (4, 2): ("3.1160", "3.1299"),
    (2, 5): ("3.1664", "3.1743"),
    (5, 10): ("3.1934", "3.2170"),
    (10, 8): ("3.2248", "3.2531"),
    (8, 6): ("3.2600", "3.2660"),
    (6, 13): ("3.2811", "3.3021"),
    (13, 9): ("3.3059", "3.3085"),
    (9, 1): ("3.3150", "3.3344"),
}
PRINTED_GAP_COUNT = 14


def report(k: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    RESULTS[k] = line
    print(line)
    assert ok, line


def test_criterion_1_endpoint_identities():
    t0 = time.perf_counter()
    rep = verify_endpoint_identities()
    spot = (surd_decimal(plateau(2).a, 6), surd_decimal(plateau(2).b, 6))
    dt = time.perf_counter() - t0
    ok = rep.ok and rep.total == 24 and spot == ("3.129843", "3.166578") and dt < 5
    report(1, ok, f"{rep.passed}/{rep.total} endpoints exact, spot {spot}, {dt:.2f}s")


def test_criterion_2_inequality_manifest():
    t0 = time.perf_counter()
    rep = verify_inequalities()
    dt = time.perf_counter() - t0
    ok = rep.ok and rep.total >= 55 and dt < 10
    report(2, ok, f"{rep.passed}/{rep.total} inequality claims exact, {dt:.2f}s")


def test_criterion_3_worked_example():
    t0 = time.perf_counter()
    r = forbidden_words("3.2658", 6)
    enc = dim_enclosure(r.reduced, 10)
    dt = time.perf_counter() - t0
    ok = (len(r.forbidden) == 8 and set(r.reduced.texts) == {"1212", "2121"}
          and r.s_prime_truncated() == "3.2660" and enc.hi <= 0.46938
          and 2 * enc.hi <= 0.93876 and dt < 60)
    report(3, ok, f"{len(r.forbidden)} words, reduced {sorted(r.reduced.texts)}, "
                  f"s' {r.s_prime_truncated()}, dim K <= {enc.hi:.6f}, {dt:.1f}s")


def test_criterion_4_plateau_values():
    bad = []
    widest = 0.0
    for rec in plateau_table():
        enc = dim_enclosure(rec.forbidden, 12)
        lo, hi = 2 * enc.lo, 2 * enc.hi
        widest = max(widest, hi - lo)
        if not (appendix_contains(rec.appendix_value, lo, hi) and hi - lo <= 0.02):
            bad.append(f"P{rec.index} [{lo:.6f},{hi:.6f}] vs {rec.appendix_value}")
    report(4, not bad, f"12 plateaux, widest {widest:.5f}" + (f"; {bad}" if bad else ""))


def test_criterion_5_checkpoints():
    rows = [(s, lo, hi) for k in APPENDIX_CHECKPOINTS for s, lo, hi in APPENDIX_CHECKPOINTS[k]]
    assert any(s == "3.0015" for s, _, _ in rows) and any(s == "3.3326" for s, _, _ in rows)
    bad = []
    widest = 0.0
    for s, lo, hi in rows:
        w = checkpoint_window(s, 12, 12)
        widest = max(widest, w.width)
        # published bounds are truncated to 6 places: the value lies in [lo, hi + 1e-6)
        if not (w.d_lower <= float(hi) + 1e-6 and w.d_upper >= float(lo)) or w.width > 0.05:
            bad.append(f"{s}: [{w.d_lower:.6f},{w.d_upper:.6f}] vs {lo}/{hi}")
    report(5, len(rows) >= 10 and not bad,
           f"{len(rows) - len(bad)}/{len(rows)} checkpoints contained, widest {widest:.5f}"
           + (f"; {bad}" if bad else ""))


@pytest.mark.xfail(strict=True, reason="five printed gap endpoints and the pair count disagree "
                                       "with the plateau endpoints; see the decisions ledger")
def test_criterion_6_gap_intervals():
    mismatches = []
    for (i, j), printed in PRINTED_GAPS.items():
        got = gap_interval(i, j).text()
        if got != printed:
            mismatches.append(f"I_{i},{j} {list(got)} vs printed {list(printed)}")
    matched = len(PRINTED_GAPS) - len(mismatches)
    narrow = [g.text() for g in all_gaps() if not g.needs_estimate]
    count = len(all_gaps())
    if count != PRINTED_GAP_COUNT:
        mismatches.append(f"{count} adjacent pairs vs {PRINTED_GAP_COUNT}")
    ok = not mismatches and narrow == [("3.0490", "3.0509"), ("3.3059", "3.3085")]
    report(6, ok, f"{matched}/{len(PRINTED_GAPS)} intervals match"
                  + (f"; {mismatches}" if mismatches else ""))


def _property_a() -> bool:
    rng = random.Random(2024)
    for _ in range(1000):
        left = tuple(rng.choice((1, 2)) for _ in range(rng.randint(0, 8)))
        right = tuple(rng.choice((1, 2)) for _ in range(rng.randint(0, 8)))
        c = rng.choice((1, 2))
        iv = lambda0_bounds(left, c, right)
        for _ in range(3):
            lp = tuple(rng.choice((1, 2)) for _ in range(rng.randint(1, 4)))
            rp = tuple(rng.choice((1, 2)) for _ in range(rng.randint(1, 4)))
            if lambda0_periodic(left, lp, c, right, rp) not in iv:
                return False
    return True


def _property_b() -> bool:
    cases = [(["121"], "2212" * 3, 14), ([], "1", 6), (["121", "212"], "221112" * 2, 14)]
    return all(dimension_drop(fw, extra, m, 1e-6).separated for fw, extra, m in cases)


def _property_c() -> bool:
    for g in all_gaps():
        if not g.needs_estimate:
            continue
        r = sweep(g.lo, g.hi, Fraction(24, 10000), workers=4)
        if r.lower != sorted(r.lower) or r.upper != sorted(r.upper):
            return False
        if any(lo > hi for lo, hi in zip(r.lower, r.upper)):
            return False
    return True


def _property_d() -> bool:
    return all(soundness_check(forbidden_words(s, 12), s, 8)[0]
               for s in ("3.0015", "3.2658", "3.3326"))


def _property_e() -> bool:
    words = ("1121112*111212", "2121112*111211", "2121112*11121", "121112*111212",
             "112*12", "212*11", "212*1", "12*12", "111222", "222111", "21112")
    fs = ForbiddenSet.of(words)
    red = reduce(fs)
    if reduce(red).sorted_texts() != red.sorted_texts():
        return False
    for t in product("12", repeat=12):
        s = "".join(t)
        if fs.avoids(s) != red.avoids(s):
            return False
    return True


def test_criterion_7_property_suites():
    parts = {"a": _property_a(), "b": _property_b(), "c": _property_c(),
             "d": _property_d(), "e": _property_e()}
    report(7, all(parts.values()), " ".join(f"({k}) {'ok' if v else 'FAILED'}"
                                           for k, v in parts.items()))


def test_criterion_8_ordering():
    rep = verify_order()
    report(8, rep.ok, f"{rep.passed}/{rep.total} order and length checks exact"
                      + (f"; {[f.label for f in rep.failures()]}" if not rep.ok else ""))
