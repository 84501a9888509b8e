import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

from spectradim.dimension import DimEnclosure
from spectradim.dimfun import (GAP_PAIRS, CheckpointRecord, all_gaps, checkpoint_window, d_bounds,
                               envelopes, gap_interval, lambert_asymptotic, lambert_w, parse_csv,
                               sweep, sweep_grid)
from spectradim.errors import InvalidInputError
from spectradim.plateau import endpoints

mpmath.mp.dps = 40


def test_d_bounds_worked_threshold():
    r = d_bounds("3.2658")
    assert r.s_prime >= 3.2658
    assert r.d_lower_at_s_prime <= r.d_upper
    assert r.d_upper - r.d_lower_at_s_prime < 1e-3
    back = CheckpointRecord.from_dict(r.to_dict())
    assert back == r


def test_d_upper_clamps_at_one():
    r = d_bounds("3.34")
    assert r.d_upper == 1.0


def test_d_bounds_monotone_in_threshold():
    vals = [d_bounds(s, 10, 10).d_upper for s in ("3.05", "3.15", "3.25", "3.30")]
    assert vals == sorted(vals)


def test_checkpoint_window_two_sided():
    w = checkpoint_window("3.0150")
    assert Fraction(w.support.s_prime) <= Fraction("3.0150")
    assert 0 < w.d_lower <= w.d_upper
    assert w.width < 1e-3
    assert w.contains(0.551178)


def test_gap_endpoints_from_plateau_ends():
    # independent route: floor the float endpoints in high precision
    for i, j in GAP_PAIRS:
        g = gap_interval(i, j)
        b, a = endpoints(i)[1], endpoints(j)[0]
        fb = mpmath.floor(mpmath.mpf(b.p) / b.r * 10 ** 4 + mpmath.mpf(b.q) / b.r * mpmath.sqrt(b.d) * 10 ** 4)
        fa = mpmath.floor(mpmath.mpf(a.p) / a.r * 10 ** 4 + mpmath.mpf(a.q) / a.r * mpmath.sqrt(a.d) * 10 ** 4)
        assert g.lo == Fraction(int(fb) - 1, 10 ** 4)
        assert g.hi == Fraction(int(fa) + 1, 10 ** 4)


def test_gap_pairs_follow_occurrence_order():
    assert len(GAP_PAIRS) == 13
    assert GAP_PAIRS[0] == (0, 11) and GAP_PAIRS[-1] == (9, 1)
    with pytest.raises(InvalidInputError):
        gap_interval(1, 2)


def test_only_narrow_gaps_skip_estimates():
    skip = [g.name for g in all_gaps() if not g.needs_estimate]
    assert skip == ["I_12_3", "I_13_9"]
    assert gap_interval(13, 9).text() == ("3.3059", "3.3085")


def test_grid_start_and_center():
    assert sweep_grid("3.0007", "3.0067", "0.0024") == [Fraction("3.0031"), Fraction("3.0055")]
    assert sweep_grid("3.0007", "3.0067", "0.0024", "center") == \
        [Fraction("3.0013"), Fraction("3.0037"), Fraction("3.0061")]
    assert sweep_grid("3.1", "3.1", "0.001") == [Fraction("3.1")]
    with pytest.raises(InvalidInputError):
        sweep_grid("3.1", "3.0", "0.001")
    with pytest.raises(InvalidInputError):
        sweep_grid("3.0", "3.1", "0.001", "middle")


@settings(max_examples=60)
@given(st.integers(0, 400), st.integers(1, 400), st.integers(1, 60))
def test_grid_points_inside(a, w, step):
    lo, hi, h = Fraction(3) + Fraction(a, 10 ** 4), Fraction(3) + Fraction(a + w, 10 ** 4), Fraction(step, 10 ** 4)
    for align in ("start", "center"):
        pts = sweep_grid(lo, hi, h, align)
        assert all(lo <= p <= hi for p in pts)
        assert all(q - p == h for p, q in zip(pts, pts[1:]))


def _rec(s, sp, lo, hi):
    enc = DimEnclosure(lo / 2, hi / 2, 1, 1)
    return CheckpointRecord(s, 1, hi, sp, lo, enc, "x")


records = st.lists(
    st.tuples(st.integers(0, 300), st.integers(0, 5), st.floats(0, 1), st.floats(0, 1)),
    min_size=1, max_size=8)


@settings(max_examples=100)
@given(records)
def test_envelopes_monotone(raw):
    recs = [_rec(f"3.{1000 + k:04d}", 3.1 + (k + e) / 10 ** 4, min(x, y), max(x, y))
            for k, e, x, y in raw]
    pts = [Fraction(3) + Fraction(1000 + k, 10 ** 4) for k in range(0, 320, 7)]
    lo, hi = envelopes(pts, recs)
    assert lo == sorted(lo) and hi == sorted(hi)


def test_sweep_csv_roundtrip():
    res = sweep("3.0490", "3.0509", "0.0005", n=8, m=8)
    rows = parse_csv(res.to_csv())
    assert [r[0] for r in rows] == ["3.0495", "3.05", "3.0505"]
    for (_, lo, hi), a, b in zip(rows, res.lower, res.upper):
        assert (lo, hi) == (a, b)
    with pytest.raises(InvalidInputError):
        parse_csv("x,y\n1,2\n")


def test_lambert_w_fixed_point():
    assert lambert_w(math.e) == pytest.approx(1.0, abs=1e-14)
    assert lambert_w(0.0) == 0.0
    with pytest.raises(InvalidInputError):
        lambert_w(-0.1)


@settings(max_examples=100)
@given(st.floats(1e-8, 1e8))
def test_lambert_w_against_scipy(x):
    assert lambert_w(x) == pytest.approx(lambertw(x).real, rel=1e-12, abs=1e-15)


def test_lambert_asymptotic_goldens():
    assert lambert_asymptotic(1e-3) == pytest.approx(0.44572872437637007, rel=1e-12)
    assert lambert_asymptotic(1e-6) == pytest.approx(0.28673012722094765, rel=1e-12)
    with pytest.raises(InvalidInputError):
        lambert_asymptotic(0.7)
