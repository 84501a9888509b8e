"""The dimension function d(t) = dim(M intersect (-inf, t)).

A threshold ``s`` yields a forbidden set; the Gauss-Cantor set ``K`` of
sequences avoiding it gives ``d(s) <= min(1, 2 dim K)`` and, at the largest
surviving window value ``s'``, ``d(s') >= min(1, 2 dim K)``.  Since d is
non-decreasing, lower bounds transfer to every ``t >= s'``.
"""

from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Optional, Sequence

from .cfcore import surd_decimal
from .dimension import DimEnclosure, dim_enclosure
from .errors import InvalidInputError
from .forbid import forbidden_words
from .plateau import OCCURRENCE_ORDER, endpoints

log = logging.getLogger(__name__)

NO_ESTIMATE_WIDTH = Fraction(5, 1000)
GOLDEN = (3 + math.sqrt(5)) / 2


def _label(s) -> str:
    if isinstance(s, str):
        return s.strip()
    if isinstance(s, Fraction):
        return _fraction_text(s)
    return repr(float(s))


def _fraction_text(x: Fraction, places: int = 10) -> str:
    d = (Decimal(x.numerator) / Decimal(x.denominator)).quantize(Decimal(10) ** -places)
    return format(d.normalize(), "f")


@dataclass
class CheckpointRecord:
    s: str
    n: int
    d_upper: float
    s_prime: float
    d_lower_at_s_prime: float
    dim_enclosure: DimEnclosure
    forbidden_digest: str
    forbidden_count: int = 0

    @property
    def s_value(self) -> float:
        return float(self.s)

    def to_dict(self) -> dict:
        return {
            "s": self.s, "n": self.n, "d_upper": repr(self.d_upper),
            "s_prime": repr(self.s_prime), "d_lower_at_s_prime": repr(self.d_lower_at_s_prime),
            "dim": json.loads(self.dim_enclosure.to_json()),
            "forbidden_digest": self.forbidden_digest, "forbidden_count": self.forbidden_count,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CheckpointRecord":
        return cls(doc["s"], int(doc["n"]), float(doc["d_upper"]), float(doc["s_prime"]),
                   float(doc["d_lower_at_s_prime"]),
                   DimEnclosure.from_json(json.dumps(doc["dim"])),
                   doc["forbidden_digest"], int(doc.get("forbidden_count", 0)))


def d_bounds(s, n: int = 12, m: int = 12, tol: float = 1e-4) -> CheckpointRecord:
    """Certified ``d(s) <= d_upper`` and ``d(s_prime) >= d_lower``."""
    fr = forbidden_words(s, n)
    red = fr.reduced
    enc = dim_enclosure(red, m, tol)
    return CheckpointRecord(
        s=_label(s), n=n,
        d_upper=min(1.0, 2 * enc.hi),
        s_prime=fr.s_prime,
        d_lower_at_s_prime=min(1.0, 2 * enc.lo),
        dim_enclosure=enc,
        forbidden_digest=fr.digest(),
        forbidden_count=len(red),
    )


def _d_bounds_args(args):
    return d_bounds(*args)


def compute_records(thresholds: Sequence, n: int, m: int, tol: float,
                    workers: int = 1) -> list[CheckpointRecord]:
    """``d_bounds`` over many thresholds; independent, so farmed out to processes."""
    jobs = [(s, n, m, tol) for s in thresholds]
    if workers <= 1 or len(jobs) <= 1:
        return [d_bounds(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_d_bounds_args, jobs))


@dataclass
class CheckpointWindow:
    s: str
    d_lower: float
    d_upper: float
    record: CheckpointRecord
    support: Optional[CheckpointRecord]    # record whose s' <= s carries d_lower

    @property
    def width(self) -> float:
        return self.d_upper - self.d_lower

    def contains(self, value: float) -> bool:
        return self.d_lower <= value <= self.d_upper


def checkpoint_window(s, n: int = 12, m: int = 12, tol: float = 1e-4,
                      delta: Fraction = Fraction(2, 10000), tries: int = 8) -> CheckpointWindow:
    """Two-sided certified bracket of d(s).

    The upper bound comes from threshold ``s`` itself.  The lower bound needs
    a record whose ``s'`` does not exceed ``s``: thresholds ``s - delta * 2^j``
    are tried in turn.
    """
    s_exact = Fraction(_label(s))
    rec = d_bounds(_label(s), n, m, tol)
    if rec.s_prime <= float(s_exact) and Fraction(rec.s_prime) <= s_exact:
        return CheckpointWindow(rec.s, rec.d_lower_at_s_prime, rec.d_upper, rec, rec)
    for j in range(tries):
        t = s_exact - delta * 2 ** j
        aux = d_bounds(_fraction_text(t), n, m, tol)
        if Fraction(aux.s_prime) <= s_exact:
            return CheckpointWindow(rec.s, aux.d_lower_at_s_prime, rec.d_upper, rec, aux)
    return CheckpointWindow(rec.s, 0.0, rec.d_upper, rec, None)


# ---------------------------------------------------------------------------
# sweeps


def sweep_grid(a, b, step, align: str = "start") -> list[Fraction]:
    """Grid points strictly inside ``[a, b]``.

    ``start``: ``a + k*step`` for ``k >= 1``.  ``center``: the largest number
    of points ``step`` apart that fit, centred in the interval.  A degenerate
    interval yields its single point.
    """
    a, b, step = Fraction(str(a)), Fraction(str(b)), Fraction(str(step))
    if step <= 0:
        raise InvalidInputError("step must be positive")
    if b < a:
        raise InvalidInputError("interval is empty")
    if a == b:
        return [a]
    if align == "start":
        pts = []
        k = 1
        while a + k * step < b:
            pts.append(a + k * step)
            k += 1
        return pts
    if align == "center":
        count = math.floor((b - a) / step) + 1
        span = (count - 1) * step
        if span >= b - a:
            count -= 1
            span = (count - 1) * step
        first = a + ((b - a) - span) / 2
        return [first + k * step for k in range(count)]
    raise InvalidInputError(f"unknown alignment {align!r}")


@dataclass
class SweepResult:
    points: list[Fraction]
    records: list[CheckpointRecord]
    lower: list[float]
    upper: list[float]

    def rows(self) -> list[tuple[str, float, float]]:
        return [(_fraction_text(p), lo, hi) for p, lo, hi in zip(self.points, self.lower, self.upper)]

    def to_csv(self) -> str:
        lines = ["s,d_lower,d_upper"]
        for s, lo, hi in self.rows():
            lines.append(f"{s},{lo!r},{hi!r}")
        return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[tuple[str, float, float]]:
    rows = text.strip().splitlines()
    if not rows or rows[0].strip() != "s,d_lower,d_upper":
        raise InvalidInputError("missing header s,d_lower,d_upper")
    out = []
    for r in rows[1:]:
        s, lo, hi = r.split(",")
        out.append((s, float(lo), float(hi)))
    return out


def envelopes(points: Sequence[Fraction], records: Sequence[CheckpointRecord]
              ) -> tuple[list[float], list[float]]:
    """Monotone staircases at ``points`` from all available records.

    Lower: the best ``d_lower`` over records with ``s' <= t``.  Upper: the best
    ``d_upper`` over records with ``s >= t``; both are non-decreasing in t.
    """
    by_sp = sorted(records, key=lambda r: r.s_prime)
    by_s = sorted(records, key=lambda r: Fraction(r.s))
    lower, upper = [], []
    for t in points:
        lo = 0.0
        for r in by_sp:
            if Fraction(r.s_prime) > t:
                break
            lo = max(lo, r.d_lower_at_s_prime)
        hi = 1.0
        for r in by_s:
            if Fraction(r.s) >= t:
                hi = min(hi, r.d_upper)
        lower.append(lo)
        upper.append(hi)
    return lower, upper


def sweep(a, b, step=Fraction(24, 10000), n: int = 12, m: int = 12, tol: float = 1e-4,
          workers: int = 1, align: str = "start",
          extra: Sequence[CheckpointRecord] = ()) -> SweepResult:
    points = sweep_grid(a, b, step, align)
    records = compute_records([_fraction_text(p) for p in points], n, m, tol, workers)
    lower, upper = envelopes(points, list(records) + list(extra))
    return SweepResult(points, records, lower, upper)


# ---------------------------------------------------------------------------
# gaps between plateaux


@dataclass(frozen=True)
class GapInterval:
    i: int
    j: int
    lo: Fraction
    hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def needs_estimate(self) -> bool:
        return self.width >= NO_ESTIMATE_WIDTH

    @property
    def name(self) -> str:
        return f"I_{self.i}_{self.j}"

    def text(self) -> tuple[str, str]:
        return f"{float(self.lo):.4f}", f"{float(self.hi):.4f}"

    def __str__(self):
        lo, hi = self.text()
        return f"I_{{{self.i},{self.j}}} = [{lo}, {hi}]"


GAP_PAIRS = tuple(zip(OCCURRENCE_ORDER, OCCURRENCE_ORDER[1:]))


def gap_interval(i: int, j: int) -> GapInterval:
    """Interval between consecutive plateaux, widened to 4-decimal grid points."""
    if (i, j) not in GAP_PAIRS:
        raise InvalidInputError(f"P_{i} and P_{j} are not adjacent in the occurrence order")
    b_i = endpoints(i)[1]
    a_j = endpoints(j)[0]
    lo = Fraction(surd_decimal(b_i, 4)) - Fraction(1, 10 ** 4)
    hi = Fraction(surd_decimal(a_j, 4)) + Fraction(1, 10 ** 4)
    return GapInterval(i, j, lo, hi)


def all_gaps() -> list[GapInterval]:
    return [gap_interval(i, j) for i, j in GAP_PAIRS]


# ---------------------------------------------------------------------------
# behaviour near t = 3


def lambert_w(x: float, tol: float = 1e-12, max_iter: int = 100) -> float:
    """Principal branch of W for ``x >= 0`` by Newton iteration on ``w e^w = x``."""
    if x < 0:
        raise InvalidInputError("lambert_w is implemented for x >= 0 only")
    if x == 0:
        return 0.0
    w = math.log1p(x) if x < math.e else math.log(x) - math.log(math.log(x))
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        w_new = w - f / (ew * (w + 1))
        if abs(w_new - w) <= 1e-16 * max(1.0, abs(w_new)):
            w = w_new
            break
        w = w_new
    if abs(w * math.exp(w) - x) > tol * max(1.0, x):
        raise InvalidInputError(f"lambert_w did not converge at x={x}")
    return w


def lambert_asymptotic(eps: float) -> float:
    """``2 W(c |log eps|) / |log eps|`` with ``c = 1 / log((3 + sqrt 5) / 2)``."""
    if not 0 < eps < 0.5:
        raise InvalidInputError("eps must lie in (0, 0.5)")
    c = 1 / math.log(GOLDEN)
    L = abs(math.log(eps))
    return 2 * lambert_w(c * L) / L


# ---------------------------------------------------------------------------
# published checkpoint table: gap -> [(s, lower, upper)]


def _rows(text: str) -> tuple[tuple[str, str, str], ...]:
    out = []
    for item in text.split(";"):
        parts = item.split()
        if not parts:
            continue
        s, vals = parts[0], parts[1].split("/")
        out.append((s, vals[0], vals[-1]))
    return tuple(out)


APPENDIX_CHECKPOINTS: dict[tuple[int, int], tuple[tuple[str, str, str], ...]] = {
    (0, 11): _rows("3.0015 0.432861; 3.0031 0.455261; 3.0055 0.510071"),
    (11, 7): _rows("3.0126 0.545441; 3.0150 0.551178"),
    (7, 12): _rows("3.0273 0.577393; 3.0297 0.589935; 3.0321 0.617218/0.620728; "
                   "3.0345 0.659302; 3.0369 0.662750/0.665924; 3.0393 0.686493; "
                   "3.0417 0.692932; 3.0441 0.700073"),
    (3, 4): _rows("3.0856 0.730499; 3.0880 0.739929; 3.0904 0.742004"),
    (4, 2): _rows("3.1184 0.765778/0.766235; 3.1208 0.775299; 3.1232 0.783356/0.784485; "
                  "3.1256 0.796478; 3.1280 0.807770"),
    (2, 5): _rows("3.1672 0.812927/0.813019; 3.1696 0.815735; 3.1720 0.818542"),
    (5, 10): _rows("3.1950 0.830841; 3.1974 0.830841/0.831421; 3.1998 0.843140/0.846527; "
                   "3.2022 0.851990; 3.2046 0.859192/0.861786; 3.2070 0.868286/0.869415; "
                   "3.2094 0.869629; 3.2118 0.876587/0.877350; 3.2142 0.878082; "
                   "3.2166 0.882294/0.883118; 3.2190 0.888153/0.888794"),
    (10, 8): _rows("3.2265 0.890961/0.891022; 3.2289 0.892151; 3.2313 0.895325/0.897522; "
                   "3.2337 0.901459/0.901825; 3.2361 0.903961/0.905518; "
                   "3.2385 0.907532/0.909607; 3.2409 0.910797; 3.2433 0.912079/0.913177; "
                   "3.2457 0.917023/0.917480; 3.2481 0.919891/0.921661; "
                   "3.2505 0.926117/0.928192; 3.2529 0.931702/0.932281"),
    (8, 6): _rows("3.2624 0.934113; 3.2648 0.937103"),
    (6, 13): _rows("3.2827 0.938995/0.939240; 3.2851 0.944000/0.945496; "
                   "3.2875 0.949036/0.950256; 3.2899 0.954529/0.956268; 3.2923 0.960846; "
                   "3.2947 0.965393/0.965973; 3.2971 0.966095; 3.2995 0.966187; "
                   "3.3019 0.967072/0.967834"),
    (9, 1): _rows("3.3158 0.971619/0.972382; 3.3182 0.976440/0.976929; "
                  "3.3206 0.979279/0.980682; 3.3230 0.985535/0.986542; "
                  "3.3254 0.990051/0.991913; 3.3278 0.994781/0.995270; "
                  "3.3302 0.995544/0.995575; 3.3326 0.995605"),
}
