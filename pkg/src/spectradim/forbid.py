"""Recursive construction of forbidden windows for a Markov-value threshold.

Windows grow around a center digit, alternately on the left (odd length)
and on the right (even length).  Each window is classified by the hull of
lambda_0 over all its {1,2}-extensions: hull above the threshold means the
window (and its reversal) is forbidden, hull below means every extension has
a smaller value and the hull top feeds ``s_prime``.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cfcore import Interval, QuadSurd, TAIL_HIGH, TAIL_LOW, as_interval, surd_decimal
from .errors import InvalidInputError
from .words import ForbiddenSet, Word, reverse

log = logging.getLogger(__name__)

# float evaluation of (P z + P')/(Q z + Q') with exact integer convergents
# costs a handful of roundings; 1e-14 relative is a generous outward margin
_REL = 1e-14
_Z_LOW = float(TAIL_LOW)     # [1;2,1,2,...]
_Z_HIGH = float(TAIL_HIGH)   # [2;1,2,1,...]


def _side(p: int, pp: int, q: int, qp: int, count: int) -> tuple[float, float]:
    """Float range of one side given its convergents and digit count."""
    a = (p * _Z_LOW + pp) / (q * _Z_LOW + qp)
    b = (p * _Z_HIGH + pp) / (q * _Z_HIGH + qp)
    # the value increases with the tail iff count + 1 is even
    return (a, b) if count % 2 == 1 else (b, a)


def window_hull(left: tuple[int, ...], center: int, right: tuple[int, ...]) -> Interval:
    """Outward float enclosure of lambda_0 over all extensions of a window."""
    rp, rpp, rq, rqp = center, 1, 1, 0
    for a in right:
        rp, rpp = a * rp + rpp, rp
        rq, rqp = a * rq + rqp, rq
    lp, lpp, lq, lqp = 0, 1, 1, 0
    for a in left:
        lp, lpp = a * lp + lpp, lp
        lq, lqp = a * lq + lqp, lq
    r_lo, r_hi = _side(rp, rpp, rq, rqp, len(right))
    l_lo, l_hi = _side(lp, lpp, lq, lqp, len(left))
    lo = r_lo + l_lo
    hi = r_hi + l_hi
    return Interval(lo - abs(lo) * _REL, hi + abs(hi) * _REL)


@dataclass
class ForbidResult:
    s: str
    n: int
    forbidden: ForbiddenSet
    s_prime: float
    lmax: int
    node_count: int
    straddle_count: int = 0
    threshold: Optional[Interval] = None

    @property
    def reduced(self) -> ForbiddenSet:
        from .words import reduce
        return reduce(self.forbidden)

    def s_prime_truncated(self, digits: int = 4) -> str:
        return surd_decimal(QuadSurd(Fraction(self.s_prime)), digits)

    def digest(self) -> str:
        texts = self.reduced.sorted_texts()
        return hashlib.sha256("\n".join(texts).encode()).hexdigest()[:16]

    def to_json(self) -> str:
        doc = {
            "s": self.s,
            "n": self.n,
            "forbidden": [str(w) for w in self.forbidden],
            "s_prime": repr(self.s_prime),
            "lmax": self.lmax,
            "node_count": self.node_count,
            "straddle_count": self.straddle_count,
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "ForbidResult":
        doc = json.loads(text)
        return cls(
            s=doc["s"],
            n=int(doc["n"]),
            forbidden=ForbiddenSet.of(doc["forbidden"]),
            s_prime=float(doc["s_prime"]),
            lmax=int(doc["lmax"]),
            node_count=int(doc.get("node_count", 0)),
            straddle_count=int(doc.get("straddle_count", 0)),
            threshold=as_interval(doc["s"]),
        )


def _threshold_label(s) -> str:
    if isinstance(s, str):
        return s.strip()
    if isinstance(s, Interval):
        return f"[{s.lo!r},{s.hi!r}]"
    return str(s)


def forbidden_words(s, n: int) -> ForbidResult:
    """Forbidden windows of half-length at most ``n`` for threshold ``s``.

    A window is saved when every extension has lambda_0 above ``s``; windows
    entirely below feed ``s_prime`` with their hull top, as do full-length
    windows whose hull still straddles ``s``.
    """
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    thr = as_interval(s)
    if not 2.9 < thr.mid < 3.4:
        log.warning("threshold %s outside (2.9, 3.4); proceeding anyway", s)
    s_lo, s_hi = thr.lo, thr.hi
    full = 2 * n + 1

    saved: list[Word] = []
    lmax = 0
    mmax = 0.0
    nodes = 0
    straddles = 0

    # node: (left digits nearest-first, center, right digits, left cvg, right cvg)
    stack = []
    for c in (2, 1):
        stack.append(((), c, (), (0, 1, 1, 0), (c, 1, 1, 0)))
    while stack:
        left, c, right, lc, rc = stack.pop()
        nodes += 1
        r_lo, r_hi = _side(*rc, len(right))
        l_lo, l_hi = _side(*lc, len(left))
        lo = r_lo + l_lo
        hi = r_hi + l_hi
        lo -= abs(lo) * _REL
        hi += abs(hi) * _REL
        length = len(left) + 1 + len(right)
        if lo > s_hi:
            w = Word(tuple(reversed(left)) + (c,) + right, len(left))
            saved.append(w)
            saved.append(reverse(w))
            if lmax < length:
                lmax = length
        elif hi < s_lo:
            if hi > mmax:
                mmax = hi
        elif length < full:
            if length % 2 == 0:
                p, pp, q, qp = rc
                for a in (2, 1):
                    stack.append((left, c, right + (a,), lc,
                                  (a * p + pp, p, a * q + qp, q)))
            else:
                p, pp, q, qp = lc
                for a in (2, 1):
                    stack.append((left + (a,), c, right,
                                  (a * p + pp, p, a * q + qp, q), rc))
        else:
            straddles += 1
            if hi > mmax:
                mmax = hi
    if straddles:
        log.info("s=%s n=%d: %d full-length windows straddle the threshold", s, n, straddles)
    return ForbidResult(
        s=_threshold_label(s), n=n, forbidden=ForbiddenSet(tuple(saved)),
        s_prime=mmax, lmax=lmax, node_count=nodes, straddle_count=straddles,
        threshold=thr)


def _float_side_min(head: int, near: tuple[int, ...], exts) -> float:
    best = math.inf
    for ext in exts:
        p, pp, q, qp = head, 1, 1, 0
        for a in near + ext:
            p, pp = a * p + pp, p
            q, qp = a * q + qp, q
        for z in (_Z_LOW, _Z_HIGH):
            v = (p * z + pp) / (q * z + qp)
            if v < best:
                best = v
    return best


def _exact_side_min(head: int, near: tuple[int, ...], exts):
    from .cfcore import PeriodicCF, eval_periodic
    best = None
    for ext in exts:
        for t in ((1, 2), (2, 1)):
            v = eval_periodic(PeriodicCF(head, near + ext, t))
            if best is None or v < best[0]:
                best = (v, ext, t)
    return best


def soundness_check(result: ForbidResult, s, L: int) -> tuple[bool, Optional[str]]:
    """Exhaustively confirm that saved windows force lambda_0 above ``s``.

    Every extension by ``L`` digits on each side, closed off by either
    alternating tail, is evaluated.  Both sides vary independently, so the
    minimum of the sum is the sum of the side minima.  A float pass settles
    windows clearly above ``s``; the rest are decided exactly.  Returns
    ``(True, None)`` or ``(False, description of a counterexample)``.
    """
    if L > 12:
        raise InvalidInputError("L must be at most 12 for exhaustive enumeration")
    target = _exact_threshold(s)
    from itertools import product
    from .cfcore import compare_sum
    exts = list(product((1, 2), repeat=L))
    seen = set()
    for w in result.forbidden:
        if w.center is None:
            raise InvalidInputError(f"saved word {w} has no center")
        if (w.digits, w.center) in seen:
            continue
        seen.add((w.digits, w.center))
        c = w.digits[w.center]
        screen = _float_side_min(c, w.right, exts) + _float_side_min(0, w.left, exts)
        if screen - float(target) > 1e-9:
            continue
        right_best = _exact_side_min(c, w.right, exts)
        left_best = _exact_side_min(0, w.left, exts)
        if compare_sum([right_best[0], left_best[0]], target) <= 0:
            return False, (f"window {w}: left ext {left_best[1]}+{left_best[2]}, "
                           f"right ext {right_best[1]}+{right_best[2]} gives lambda_0 <= {s}")
    return True, None


def _exact_threshold(s) -> Fraction:
    if isinstance(s, str):
        return Fraction(s.strip())
    if isinstance(s, Interval):
        return Fraction(s.hi)
    if isinstance(s, QuadSurd):
        raise InvalidInputError("use a rational threshold for soundness checks")
    return Fraction(s)
