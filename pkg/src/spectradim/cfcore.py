"""Continued fractions over the digits {1, 2}.

Exact values live in :class:`QuadSurd` (elements of a real quadratic field),
certified enclosures in :class:`Interval`.  Everything here is immutable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence, Union

from .errors import DeadEndError, InvalidInputError, UnsupportedOperationError

Rational = Union[int, Fraction]

DIGITS = (1, 2)


def _check_digits(digits: Iterable[int], what: str = "digit") -> tuple[int, ...]:
    out = tuple(int(d) for d in digits)
    for d in out:
        if d not in DIGITS:
            raise InvalidInputError(f"{what} {d!r} is not in {{1, 2}}")
    return out


# ---------------------------------------------------------------------------
# exact quadratic surds


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (k, f) with n == k*k*f and f squarefree."""
    if n < 0:
        raise ValueError("radicand must be nonnegative")
    if n < 2:
        return 1, n
    k = 1
    f = 1
    rest = n
    p = 2
    # trial division up to the cube root; what is left has at most two prime
    # factors, so it is squarefree unless it is a perfect square
    while p * p * p <= rest:
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            k *= p ** (e // 2)
            if e % 2:
                f *= p
        p += 1 if p == 2 else 2
    r = math.isqrt(rest)
    if r * r == rest:
        k *= r
    else:
        f *= rest
    return k, f


@total_ordering
class QuadSurd:
    """Exact real number ``a + b*sqrt(d)`` with rational ``a, b``.

    After normalization ``d`` is squarefree, and rational values carry
    ``b == 0, d == 0``.  The integer form ``(p + q*sqrt(d)) / r`` is exposed
    through :attr:`p`, :attr:`q`, :attr:`r`.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Rational = 0, b: Rational = 0, d: int = 0):
        a = Fraction(a)
        b = Fraction(b)
        d = int(d)
        if d < 0:
            raise InvalidInputError("negative radicand")
        k, f = _squarefree_split(d)
        b *= k
        if f == 1:
            a += b
            b = Fraction(0)
            f = 0
        if b == 0 or f == 0:
            b = Fraction(0)
            f = 0
        self.a = a
        self.b = b
        self.d = f

    @classmethod
    def from_pqdr(cls, p: int, q: int, d: int, r: int) -> "QuadSurd":
        if r <= 0:
            raise InvalidInputError("denominator must be positive")
        return cls(Fraction(p, r), Fraction(q, r), d)

    # integer presentation ------------------------------------------------
    @property
    def r(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    @property
    def p(self) -> int:
        return int(self.a * self.r)

    @property
    def q(self) -> int:
        return int(self.b * self.r)

    def is_rational(self) -> bool:
        return self.d == 0

    # arithmetic ----------------------------------------------------------
    def _coerce(self, other) -> "QuadSurd":
        if isinstance(other, QuadSurd):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadSurd(other)
        return NotImplemented

    def _common(self, other: "QuadSurd") -> int:
        if self.d == 0:
            return other.d
        if other.d == 0 or other.d == self.d:
            return self.d
        raise UnsupportedOperationError(
            f"radicands {self.d} and {other.d} are incompatible")

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._common(other)
        return QuadSurd(self.a + other.a, self.b + other.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        d = self._common(other)
        return QuadSurd(self.a * other.a + self.b * other.b * d,
                        self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self) -> "QuadSurd":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        return QuadSurd(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        self._common(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    # ordering ------------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        diff = self.a * self.a - self.b * self.b * self.d
        return sa if diff > 0 else sb

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return _sign_of_sum([self, -other]) < 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.d == 0:
            return f"QuadSurd({self.a})"
        return f"QuadSurd(({self.p}{self.q:+d}*sqrt({self.d}))/{self.r})"

    def __str__(self):
        if self.d == 0:
            return str(self.a)
        r, p, q = self.r, self.p, self.q
        root = {1: "", -1: "-"}.get(q, str(q)) + f"√{self.d}"
        if p:
            root = f"{p}+{root}" if q > 0 else f"{p}{root}"
        return f"({root})/{r}" if r != 1 else root

    def truncate(self, digits: int) -> str:
        return surd_decimal(self, digits)


def _sign_of_sum(terms: Sequence[QuadSurd]) -> int:
    """Exact sign of a sum of surds with at most two distinct radicands."""
    groups: dict[int, QuadSurd] = {}
    rational = Fraction(0)
    for t in terms:
        rational += t.a
        if t.d:
            prev = groups.get(t.d)
            part = QuadSurd(0, t.b, t.d)
            groups[t.d] = part if prev is None else prev + part
    parts = [g for g in groups.values() if g.b != 0]
    if not parts:
        return (rational > 0) - (rational < 0)
    if len(parts) == 1:
        return (parts[0] + rational).sign()
    if len(parts) > 2:
        return _sign_by_refinement(parts, rational)
    u = parts[0] + rational       # lives in Q(sqrt(d1))
    v = parts[1]                  # pure multiple of sqrt(d2)
    su, sv = u.sign(), v.sign()
    if su == 0:
        return sv
    if su == sv:
        return su
    # opposite signs: compare u^2 with v^2 (the latter is rational)
    c = (u * u - (v.b * v.b * v.d)).sign()
    return su if c > 0 else sv


def _sqrt_term_bounds(t: QuadSurd, scale: int) -> tuple[Fraction, Fraction]:
    """Rational bounds on ``t.b * sqrt(t.d)`` of width at most ``1/scale``."""
    n, m = t.b.numerator, t.b.denominator
    f = math.isqrt(n * n * t.d * scale * scale)    # floor(scale * |n| * sqrt(d))
    lo, hi = Fraction(f, scale * m), Fraction(f + 1, scale * m)
    return (lo, hi) if n > 0 else (-hi, -lo)


def sum_bounds(terms: Sequence[QuadSurd], digits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure of a sum of surds with arbitrary radicands."""
    scale = 10 ** digits
    lo = hi = Fraction(0)
    for t in terms:
        lo += t.a
        hi += t.a
        if t.d:
            a, b = _sqrt_term_bounds(t, scale)
            lo += a
            hi += b
    return lo, hi


def _sign_by_refinement(parts: Sequence[QuadSurd], rational: Fraction,
                        max_digits: int = 4000) -> int:
    # square roots of distinct squarefree integers are linearly independent
    # over Q, so a sum with nonzero coefficients never vanishes and refinement
    # terminates
    digits = 30
    while digits <= max_digits:
        lo, hi = sum_bounds(list(parts) + [QuadSurd(rational)], digits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        digits *= 2
    raise UnsupportedOperationError("sign undecided after refinement")


def sum_decimal(terms: Sequence[QuadSurd], digits: int) -> str:
    """Truncated decimal of a sum of surds with arbitrary radicands."""
    terms = list(terms)
    scale = 10 ** digits
    work = digits + 20
    while True:
        lo, hi = sum_bounds(terms, work)
        if lo >= 0 or hi < 0:
            a, b = math.floor(abs(lo) * scale), math.floor(abs(hi) * scale)
            if a == b:
                neg = hi < 0
                whole, frac = divmod(a, scale)
                sign = "-" if neg and a else ""
                return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"
        work *= 2
        if work > 8000:
            raise UnsupportedOperationError("truncation undecided after refinement")


def surd_add(a: QuadSurd, b: QuadSurd) -> QuadSurd:
    return a + b


def surd_cmp(a: QuadSurd, b: QuadSurd) -> int:
    """-1, 0 or 1 according to a < b, a == b, a > b (integer arithmetic only)."""
    return _sign_of_sum([a, -b])


def compare_sum(terms: Sequence[QuadSurd], value: Rational) -> int:
    """Exact sign of ``sum(terms) - value``; tolerates two radicands."""
    return _sign_of_sum(list(terms) + [QuadSurd(-Fraction(value))])


def _floor_surd(x: QuadSurd) -> int:
    if x.d == 0:
        return math.floor(x.a)
    r = x.r
    p, q = x.p, x.q
    # floor((p + q sqrt d) / r); q sqrt d is irrational
    n = q * q * x.d
    root = math.isqrt(n)
    t_floor = root if q > 0 else -root - 1
    return (p + t_floor) // r


def surd_decimal(x: QuadSurd, digits: int) -> str:
    """Decimal expansion truncated (toward zero) to ``digits`` places."""
    if digits < 0:
        raise InvalidInputError("digits must be nonnegative")
    scale = 10 ** digits
    neg = x.sign() < 0
    y = -x if neg else x
    n = _floor_surd(y * scale)
    whole, frac = divmod(n, scale)
    sign = "-" if neg and n else ""
    if digits == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:0{digits}d}"


def parse_decimal(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except ValueError:
        raise InvalidInputError(f"not a decimal number: {text!r}") from None


_SURD_RE = re.compile(
    r"^\(?(?P<p>[+-]?\d+)?(?:(?P<sign>[+-])?(?P<q>\d+)?√(?P<d>\d+))?\)?(?:/(?P<r>\d+))?$")


def parse_surd(text: str) -> QuadSurd:
    """Parse closed forms like ``(16351+720√30)/6409``, ``4√30/7`` or ``√10``."""
    t = text.strip().replace(" ", "").replace("\u2212", "-").replace("sqrt", "√")
    m = _SURD_RE.match(t)
    if not m or (m["p"] is None and m["d"] is None):
        raise InvalidInputError(f"malformed surd {text!r}")
    r = int(m["r"] or 1)
    if m["d"] is None:
        return QuadSurd(Fraction(int(m["p"]), r))
    q = int(m["q"] or 1)
    if m["sign"] == "-":
        q = -q
    if m["p"] is not None and m["sign"] is None:
        # "4√30": the leading integer is the coefficient
        q, p = int(m["p"]), 0
    else:
        p = int(m["p"] or 0)
    return QuadSurd.from_pqdr(p, q, int(m["d"]), r)


# ---------------------------------------------------------------------------
# intervals


def _down(x: float) -> float:
    return math.nextafter(x, -math.inf)


def _up(x: float) -> float:
    return math.nextafter(x, math.inf)


@dataclass(frozen=True)
class Interval:
    """Closed interval with outward-rounded arithmetic."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise InvalidInputError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(x, x)

    @classmethod
    def from_exact(cls, x: Union[QuadSurd, Rational]) -> "Interval":
        """Tightest float interval containing an exact value."""
        if not isinstance(x, QuadSurd):
            x = QuadSurd(x)
        f = float(x)
        lo = f
        while surd_cmp(x, QuadSurd(Fraction(lo))) < 0:
            lo = _down(lo)
        hi = f
        while surd_cmp(x, QuadSurd(Fraction(hi))) > 0:
            hi = _up(hi)
        return cls(lo, hi)

    @classmethod
    def hull(cls, a: "Interval", b: "Interval") -> "Interval":
        return cls(min(a.lo, b.lo), max(a.hi, b.hi))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        if isinstance(x, QuadSurd):
            x = SurdSum((x,))
        if isinstance(x, SurdSum):
            return x.sign_vs(Fraction(self.lo)) >= 0 and x.sign_vs(Fraction(self.hi)) <= 0
        return self.lo <= x <= self.hi

    def _as(self, other) -> "Interval":
        if isinstance(other, Interval):
            return other
        return Interval(float(other), float(other)) if float(other) == other \
            else Interval.from_exact(Fraction(other))

    def __add__(self, other):
        o = self._as(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._as(other))

    def __rsub__(self, other):
        return self._as(other) - self

    def __mul__(self, other):
        o = self._as(other)
        cands = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi]
        return Interval(_down(min(cands)), _up(max(cands)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._as(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        cands = [self.lo / o.lo, self.lo / o.hi, self.hi / o.lo, self.hi / o.hi]
        return Interval(_down(min(cands)), _up(max(cands)))

    def __rtruediv__(self, other):
        return self._as(other) / self

    def square(self) -> "Interval":
        if self.lo >= 0:
            return Interval(_down(self.lo * self.lo), _up(self.hi * self.hi))
        if self.hi <= 0:
            return Interval(_down(self.hi * self.hi), _up(self.lo * self.lo))
        return Interval(0.0, _up(max(self.lo * self.lo, self.hi * self.hi)))

    def above(self, other: "Interval") -> bool:
        return self.lo > other.hi

    def below(self, other: "Interval") -> bool:
        return self.hi < other.lo

    def __repr__(self):
        return f"Interval({self.lo!r}, {self.hi!r})"


def as_interval(value) -> Interval:
    """Coerce a threshold given as str/int/float/Fraction/QuadSurd/Interval."""
    if isinstance(value, Interval):
        return value
    if isinstance(value, str):
        return Interval.from_exact(parse_decimal(value))
    if isinstance(value, float):
        return Interval.from_exact(Fraction(value))
    if isinstance(value, (int, Fraction, QuadSurd)):
        return Interval.from_exact(value)
    raise InvalidInputError(f"cannot interpret {value!r} as a threshold")


# ---------------------------------------------------------------------------
# continued fractions


@dataclass(frozen=True)
class PeriodicCF:
    """``[head; preamble, (period)]`` with digits in {1, 2}."""

    head: int
    preamble: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preamble", tuple(self.preamble))
        object.__setattr__(self, "period", tuple(self.period))
        if self.head not in (0, 1, 2):
            raise InvalidInputError(f"head {self.head} not in {{0, 1, 2}}")
        _check_digits(self.preamble)
        _check_digits(self.period)
        if not self.period:
            raise InvalidInputError("period must be nonempty")

    def __str__(self):
        parts = [str(d) for d in self.preamble]
        parts.append("(" + ",".join(str(d) for d in self.period) + ")")
        return f"[{self.head};" + ",".join(parts) + "]"

    def digits(self, count: int) -> tuple[int, ...]:
        """First ``count`` digits after the head."""
        out = list(self.preamble[:count])
        i = 0
        while len(out) < count:
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)

    def value(self) -> QuadSurd:
        return eval_periodic(self)


def parse_cf(text: str) -> Union[PeriodicCF, Fraction]:
    """Parse ``[h;d1,d2,(p1,p2)]``; without a parenthesised period the value is finite."""
    t = text.strip().replace(" ", "")
    if not (t.startswith("[") and t.endswith("]")) or ";" not in t:
        raise InvalidInputError(f"malformed continued fraction {text!r}")
    head_s, body = t[1:-1].split(";", 1)
    period: tuple[int, ...] = ()
    if "(" in body:
        i = body.index("(")
        if not body.endswith(")"):
            raise InvalidInputError(f"period must close the expression: {text!r}")
        period = tuple(int(x) for x in body[i + 1:-1].split(",") if x)
        body = body[:i]
    pre = tuple(int(x) for x in body.split(",") if x)
    if period:
        return PeriodicCF(int(head_s), pre, period)
    return finite_cf(int(head_s), _check_digits(pre))


def finite_cf(head: int, digits: Sequence[int]) -> Fraction:
    x: Fraction | None = None
    for d in reversed(digits):
        x = Fraction(d) if x is None else d + 1 / x
    return Fraction(head) if x is None else head + 1 / x


def convergents(digits: Sequence[int], head: int = 0) -> tuple[int, int, int, int]:
    """(P_k, P_{k-1}, Q_k, Q_{k-1}) of ``[head; digits]``."""
    p, pp, q, qp = head, 1, 1, 0
    for a in digits:
        p, pp = a * p + pp, p
        q, qp = a * q + qp, q
    return p, pp, q, qp


def cf_with_tail(head: int, digits: Sequence[int], tail: QuadSurd) -> QuadSurd:
    """``[head; digits, tail]`` where ``tail >= 1`` is the next complete quotient."""
    p, pp, q, qp = convergents(digits, head)
    return (tail * p + pp) / (tail * q + qp)


def periodic_tail(period: Sequence[int]) -> QuadSurd:
    """The complete quotient ``z = [p1; p2, ..., pk, z]`` (the root > 1)."""
    p, pp, q, qp = convergents(period[1:], period[0])
    # q z^2 + (qp - p) z - pp = 0
    b = qp - p
    disc = b * b + 4 * q * pp
    return QuadSurd(Fraction(-b, 2 * q), Fraction(1, 2 * q), disc)


def eval_periodic(cf: PeriodicCF) -> QuadSurd:
    """Exact value of an eventually periodic continued fraction."""
    z = periodic_tail(cf.period)
    return cf_with_tail(cf.head, cf.preamble, z)


# tails [1;2,1,2,...] and [2;1,2,1,...] bound every complete quotient of a
# {1,2}-sequence
TAIL_LOW = periodic_tail((1, 2))
TAIL_HIGH = periodic_tail((2, 1))


def _extreme_tail(count: int, want_max: bool) -> QuadSurd:
    # [b0; b1..b_count, z] increases in z iff count+1 is even
    increasing = (count + 1) % 2 == 0
    return TAIL_HIGH if increasing == want_max else TAIL_LOW


def side_range(head: int, digits: Sequence[int]) -> tuple[QuadSurd, QuadSurd]:
    """Exact min and max of ``[head; digits, ...]`` over {1,2}-continuations."""
    lo = cf_with_tail(head, digits, _extreme_tail(len(digits), False))
    hi = cf_with_tail(head, digits, _extreme_tail(len(digits), True))
    return lo, hi


def lambda0_exact_bounds(left: Sequence[int], center: int,
                         right: Sequence[int]) -> tuple[QuadSurd, QuadSurd]:
    left = _check_digits(left)
    right = _check_digits(right)
    (center,) = _check_digits((center,), "center digit")
    rl, rh = side_range(center, right)
    ll, lh = side_range(0, left)
    return rl + ll, rh + lh


def lambda0_bounds(left: Sequence[int], center: int, right: Sequence[int]) -> Interval:
    """Enclosure of lambda_0 over every bi-infinite extension of a window.

    ``left`` lists the digits to the left of the center nearest-first,
    ``right`` those to the right.
    """
    lo, hi = lambda0_exact_bounds(left, center, right)
    return Interval(Interval.from_exact(lo).lo, Interval.from_exact(hi).hi)


def lambda0_periodic(left: Sequence[int], left_period: Sequence[int], center: int,
                     right: Sequence[int], right_period: Sequence[int]) -> "SurdSum":
    """Exact lambda_0 of ``...left_period^t left^t center right right_period...``."""
    a = eval_periodic(PeriodicCF(center, tuple(right), tuple(right_period)))
    b = eval_periodic(PeriodicCF(0, tuple(left), tuple(left_period)))
    return SurdSum((a, b))


@dataclass(frozen=True)
class SurdSum:
    """Sum of surds whose radicands may differ; compared exactly."""

    terms: tuple[QuadSurd, ...]

    def sign_vs(self, value: Rational) -> int:
        return compare_sum(self.terms, value)

    def reduce(self) -> QuadSurd:
        """The sum as one surd; fails when radicands differ."""
        total = QuadSurd(0)
        for t in self.terms:
            total = total + t
        return total

    def decimal(self, digits: int) -> str:
        return sum_decimal(self.terms, digits)

    def __float__(self):
        return float(sum(float(t) for t in self.terms))

    def __str__(self):
        return " + ".join(str(t) for t in self.terms)


# ---------------------------------------------------------------------------
# extremal continuations


class _Avoider:
    """Factor-avoidance bookkeeping for greedy continuations."""

    def __init__(self, forbidden: Iterable[str]):
        self.words = sorted({w for w in forbidden if w})
        self.maxlen = max((len(w) for w in self.words), default=0)
        self.block = max(self.maxlen - 1, 0)
        self._live: dict[str, bool] = {}

    def ends_badly(self, history: str) -> bool:
        return any(history.endswith(w) for w in self.words)

    def contains(self, text: str) -> bool:
        return any(w in text for w in self.words)

    def state(self, history: str) -> str:
        return history[-self.block:] if self.block else ""

    def viable(self, history: str) -> bool:
        """Whether ``history`` admits an infinite continuation."""
        key = self.state(history)
        if len(key) < self.block:
            return any(self.viable(history + str(d)) for d in DIGITS
                       if not self.ends_badly(history + str(d)))
        return self._live_block(key)

    def _live_block(self, block: str) -> bool:
        if not self._live:
            self._compute_live()
        return self._live.get(block, False)

    def _compute_live(self) -> None:
        from itertools import product
        b = self.block
        blocks = ["".join(t) for t in product("12", repeat=b)]
        ok = {x for x in blocks if not self.contains(x)}
        succ = {x: [(x + d)[1:] if b else "" for d in "12"
                    if not self.contains(x + d)] for x in ok}
        alive = set(ok)
        changed = True
        while changed:
            changed = False
            for x in list(alive):
                if not any(y in alive for y in succ[x]):
                    alive.discard(x)
                    changed = True
        self._live = {x: (x in alive) for x in blocks}


def extremal_continuation(prefix: Sequence[int], forbidden: Iterable, target: str = "max",
                          length_bound: int = 1000, head: int | None = None) -> PeriodicCF:
    """Greedy extremal continuation of ``prefix`` avoiding ``forbidden``.

    With ``head=None`` the first prefix digit is the integer part (and takes
    part in factor checks); otherwise ``head`` is the integer part and the
    prefix starts at the first partial quotient.  Larger digits raise the value
    at even depth and lower it at odd depth, so the greedy choice at each depth
    is the preferred digit whenever an infinite admissible continuation exists.
    """
    if target not in ("min", "max"):
        raise InvalidInputError("target must be 'min' or 'max'")
    prefix = _check_digits(prefix)
    words = [str(w) if not isinstance(w, str) else w for w in forbidden]
    av = _Avoider(words)
    history = "".join(str(d) for d in prefix)
    if av.contains(history):
        raise InvalidInputError(f"prefix {history} contains a forbidden factor")
    if head is None:
        if not prefix:
            raise InvalidInputError("empty prefix needs an explicit head")
        cf_head, depth0 = prefix[0], 0
    else:
        cf_head, depth0 = head, 1
    if history and not av.viable(history):
        raise DeadEndError(f"prefix {history} has no admissible continuation")

    seen: dict[tuple[str, int], int] = {}
    depth = depth0 + len(prefix)
    while len(history) - len(prefix) <= length_bound:
        key = (av.state(history) if len(history) >= av.block else history, depth % 2)
        if len(history) >= av.block and key in seen:
            start = seen[key]
            digits = tuple(int(c) for c in history)
            if head is None:
                digits = digits[1:]
                start -= 1
            return PeriodicCF(cf_head, digits[:start], digits[start:])
        if len(history) >= av.block:
            seen[key] = len(history)
        # at even depth a larger digit increases the value
        bigger_up = depth % 2 == 0
        prefer_big = bigger_up == (target == "max")
        order = (2, 1) if prefer_big else (1, 2)
        for d in order:
            cand = history + str(d)
            if not av.ends_badly(cand) and av.viable(cand):
                history = cand
                break
        else:
            raise DeadEndError(f"no admissible continuation after {history}")
        depth += 1
    raise DeadEndError(f"no period found within {length_bound} digits")
