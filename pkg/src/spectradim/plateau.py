"""Catalog of the twelve long plateaux of the dimension function.

Each plateau ``P_i = [a_i, b_i]`` has exact quadratic-surd endpoints, each
written both as a sum of two eventually periodic continued fractions and as a
closed form.  The checks here re-derive every endpoint from its continued
fraction, compare the listed inequality claims exactly, and corroborate right
endpoints by a branch-and-bound search over finite windows.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Optional, Sequence

from .cfcore import (Interval, PeriodicCF, QuadSurd, cf_with_tail, compare_sum,
                     eval_periodic, extremal_continuation, parse_cf, parse_decimal, parse_surd,
                     sum_decimal, surd_cmp, surd_decimal)
from .errors import InvalidInputError, VerificationError
from .forbid import window_hull
from .words import ForbiddenSet, Word, as_forbidden, as_word

log = logging.getLogger(__name__)

# d vanishes up to 3 and equals 1 from t_1 = 3.334384... on; only the first
# six digits of t_1 are used (floor(10^4 t_1) is all that matters)
B0 = QuadSurd(3)
T1_LOWER = QuadSurd(Fraction(3334384, 10 ** 6))

OCCURRENCE_ORDER = (0, 11, 7, 12, 3, 4, 2, 5, 10, 8, 6, 13, 9, 1)

FW = {
    2: ("121",),
    3: ("121", "212"),
    4: ("121", "21222", "22212"),
    5: ("1212", "2121", "12111", "11121"),
    6: ("1212", "2121"),
    7: ("121", "212", "111222", "222111"),
    8: ("1212", "2121", "211121112"),
    9: ("21212", "111212", "212111"),
    10: ("1212", "2121", "1112111"),
    11: ("121", "212", "111222", "222111", "21112"),
    12: ("121", "212", "12221112", "21112221"),
    13: ("21212", "111212", "212111", "12121122", "22112121"),
}


@dataclass(frozen=True)
class Endpoint:
    expr: str           # "[2;...]+[0;...]"
    closed: str         # closed form, e.g. "4√30/7"
    printed: str        # decimal digits as printed with the closed form
    short: str          # six-digit form from the plateau list

    def cf_terms(self) -> tuple[PeriodicCF, ...]:
        return tuple(parse_cf(t) for t in self.expr.split("+"))

    def value(self) -> QuadSurd:
        return parse_surd(self.closed)


@dataclass(frozen=True)
class PlateauRecord:
    index: int
    forbidden: ForbiddenSet
    left: Endpoint
    right: Endpoint
    appendix_value: str     # d on the plateau, six digits
    appendix_length: str    # printed (truncated) length

    @property
    def a(self) -> QuadSurd:
        return self.left.value()

    @property
    def b(self) -> QuadSurd:
        return self.right.value()

    @property
    def length_terms(self) -> tuple[QuadSurd, QuadSurd]:
        # endpoints of a plateau need not share a radicand (P_6: sqrt 6, sqrt 30)
        return self.b, -self.a

    def length_decimal(self, digits: int) -> str:
        return sum_decimal(self.length_terms, digits)


def _e(expr, closed, printed, short):
    return Endpoint(expr, closed, printed, short)


_ENDPOINTS = {
    2: (_e("[2;(1,2,2,2)]+[0;(2,2,1,2)]", "4√30/7", "3.1298431857", "3.129843"),
        _e("[2;1,(1,2,2,2)]+[0;1,1,2,1,(1,2,2,2)]", "(16351+720√30)/6409",
           "3.166578626", "3.166578")),
    3: (_e("[2;(1,1,1,2,2,2)]+[0;(2,2,1,1,1,2)]", "4√210/19", "3.050816157", "3.050816"),
        _e("[2;2,1,1,(1,2,2,2,1,1)]+[0;1,2,2,1,2,2,1,1,(1,2,2,2,1,1)]",
           "(74613+4096√210)/43449", "3.08337773", "3.083377")),
    4: (_e("[2;1,2,2,(1,1,2,2,2,1)]+[0;2,(1,1,2,2,2,1)]", "(58473−745√210)/15422",
           "3.09148776579", "3.091487"),
        _e("[2;2,2,2,1,2,2,1,2,2,(1,1,2,2,2,1)]+[0;1,2,2,1,2,2,(1,1,2,2,2,1)]",
           "(1341491634738+14336533√210)/430566005892", "3.1161294028759882", "3.116129")),
    5: (_e("[2;1,1,(2,2,1,2)]+[0;1,1,(2,2,1,2)]", "(15−√30)/3", "3.174258141649", "3.174258"),
        _e("[2;1,1,1,(1,2,2,2)]+[0;1,1,2,1,1,1,(1,2,2,2)]", "(332001+3760√30)/110409",
           "3.1935382818628", "3.193538")),
    6: (_e("[2;(1,1,1,2)]+[0;(1,1,1,2)]", "4√6/3", "3.26598632371", "3.265986"),
        _e("[2;1,(2,2,1,2)]+[0;1,1,2,1,(2,2,1,2)]", "(18879+800√30)/7089",
           "3.28124988856557", "3.281249")),
    7: (_e("[2;2,1,1,(2,2,2,1,1,2,2,1,1,1,2,2,1,1)]+[0;1,1,1,(2,2,1,1,2,2,2,1,1,2,2,1,1,1)]",
           "28√213378/4287", "3.017028188796", "3.017028"),
        _e("[2;(2,2,2,1,1,2,2,1,1,1,2,2,1,1)]+[0;1,1,1,1,2,(2,2,2,1,1,2,2,1,1,1,2,2,1,1)]",
           "(2497149255+2842763√213378)/1258910718", "3.026666336477", "3.026666")),
    8: (_e("[2;(1,1,1,1,1,2,1,1,1,2)]+[0;(1,1,1,2,1,1,1,1,1,2)]", "√66045/79",
           "3.25306604786", "3.253066"),
        _e("[2;1,1,1,2,(2,1,2,2)]+[0;1,1,1,2,(2,1,2,2)]", "(190+4√30)/65",
           "3.2601369584647", "3.260136")),
    9: (_e("[2;(1,1,2,2,1,2)]+[0;(1,2,1,1,2,2)]", "(11+35√87)/102", "3.30841438096", "3.308414"),
        _e("[2;(1,2,2,1,2,1)]+[0;1,1,1,1,2,(1,2,2,1,2,1)]", "(56508+2716√87)/24687",
           "3.3151521654", "3.315152")),
    10: (_e("[2;1,1,1,2,1,1,2,2,(1,2,2,2)]+[0;1,1,2,2,(1,2,2,2)]", "(14775−599√30)/3570",
            "3.21964758558657", "3.219647"),
         _e("[2;1,1,1,1,2,1,1,2,(2,1,2,2)]+[0;1,1,1,1,2,1,1,1,1,2,1,1,2,(2,1,2,2)]",
            "(9537392579+1230099√30)/2959418678", "3.22500164632", "3.225001")),
    11: (_e("[2;(1,1,1,1,1,2,2,1,1,2,2,2,1,1,2,2)]+[0;2,(1,1,2,2,2,1,1,2,2,1,1,1,1,1,2,2)]",
            "10√718341/2819", "3.006562605623", "3.006562"),
         _e("[2;2,(1,1,1,1,1,2,2,1,1,2,2,2,1,1,2,2)]"
            "+[0;1,1,1,2,2,1,1,1,2,2,(1,1,1,1,1,2,2,1,1,2,2,2,1,1,2,2)]",
            "(14264157401+16294182√718341)/9321104530", "3.011906071937", "3.011906")),
    12: (_e("[2;(1,1,1,2,2,2,2,2)]+[0;(2,2,2,2,1,1,1,2)]", "8√1785/111",
            "3.0449917368328", "3.044991"),
         _e("[2;1,1,1,2,2,(1,1,1,2,2,2,2,2)]+[0;2,2,1,1,2,2,2,1,1,1,2,2,(1,1,1,2,2,2,2,2)]",
            "(89042158285+148687392√1785)/31262231449", "3.049177432380786", "3.049177")),
    13: (_e("[2;(1,1,2,1,1,2,1,2)]+[0;(1,2,1,1,2,1,1,2)]", "24√35/43", "3.3019980184742", "3.301998"),
         _e("[2;1,2,1,1,2,1,2,1,1,2,2,(2,1,2,1,1,2)]+[0;1,1,2,2,(2,1,2,1,1,2)]",
            "(457878845−1713407√87)/133663998", "3.306030457347", "3.306030")),
}

_APPENDIX = {
    11: ("0.536334", "0.00534347"),
    7: ("0.569770", "0.00963815"),
    12: ("0.709914", "0.0041857"),
    3: ("0.728108", "0.03256158"),
    4: ("0.750628", "0.02464164"),
    2: ("0.812150", "0.03673544"),
    5: ("0.827194", "0.01928014"),
    10: ("0.889660", "0.00535406"),
    8: ("0.932262", "0.00707091"),
    6: ("0.938646", "0.01526356"),
    13: ("0.967812", "0.00403244"),
    9: ("0.971588", "0.00673778"),
}

# further identities: points bounding gaps inside the plateaux, and a second
# continued-fraction form of the right endpoint of P_13
EXTRA_IDENTITIES: tuple[tuple[str, str, str], ...] = (
    ("[2;(1,1,2)]+[0;(1,1,2)]", "√10", "3.16227766"),
    ("[2;(1,2,2)]+[0;(2,1,2)]", "√85/3", "3.07318148576"),
    ("[2;(1,2,2,1,2,2,2,2)]+[0;(2,2,2,1,2,2,1,2)]", "√233285/155", "3.11610231739"),
    ("[2;(1,1,1,1,2,1,1,2)]+[0;(1,1,2,1,1,1,1,2)]", "√9797/31", "3.19289664252"),
    ("[2;(1,2,2,1,2,1,1,2)]+[0;(1,1,2,1,2,2,1,2)]", "√689/8", "3.2811011871"),
    ("[2;(2,2,2,1,1,1,1,2)]+[0;(1,1,1,1,2,2,2,2)]", "√229/5", "3.02654919"),
    ("[2;(1,2,2,1,2,1,1,1,1,2)]+[0;(1,1,1,1,2,1,2,2,1,2)]", "√33245/55", "3.31512935564"),
    ("[2;(1,1,1,1,2)]+[0;(1,1,1,1,2)]", "2√65/5", "3.2249030993"),
    ("[2;(1,1,1,2,2)]+[0;(2,1,1,1,2)]", "√145/4", "3.010398644698"),
    ("[2;(2,2,1,1,2,2,2,1,1,1,2,2,1,1,1,2)]+[0;(1,1,1,2,2,1,1,1,2,2,2,1,1,2,2,2)]",
     "5√2059061/2353", "3.0491773395772939"),
    ("[2;1,1,2,2,(2,1,2,1,1,2)]+[0;1,2,1,1,2,1,2,1,1,2,2,(2,1,2,1,1,2)]",
     "(457878845−1713407√87)/133663998", "3.3060304573471179"),
)


def plateau_table() -> list[PlateauRecord]:
    """The twelve plateau records, indexed 2..13."""
    out = []
    for i in range(2, 14):
        left, right = _ENDPOINTS[i]
        fs = ForbiddenSet.of(FW[i])
        if not fs.reversal_closed:
            raise VerificationError(f"FW_{i} is not closed under reversal")
        val, length = _APPENDIX[i]
        out.append(PlateauRecord(i, fs, left, right, val, length))
    return out


def plateau(i: int) -> PlateauRecord:
    if i not in _ENDPOINTS:
        raise InvalidInputError(f"no plateau with index {i}; expected 2..13")
    return plateau_table()[i - 2]


def endpoints(i: int) -> tuple[QuadSurd, QuadSurd]:
    """Exact (a_i, b_i); P_0 ends at 3 and P_1 starts at (a lower bound of) t_1."""
    if i == 0:
        return B0, B0
    if i == 1:
        return T1_LOWER, T1_LOWER
    rec = plateau(i)
    return rec.a, rec.b


# ---------------------------------------------------------------------------
# endpoint identities


@dataclass
class CheckResult:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(r.ok for r in self.results)

    @property
    def total(self) -> int:
        return len(self.results)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]

    def lines(self) -> list[str]:
        return [f"{'PASS' if r.ok else 'FAIL'} {r.label}" + (f": {r.detail}" if r.detail else "")
                for r in self.results]


def _cf_sum(expr: str) -> QuadSurd:
    total = QuadSurd(0)
    for t in expr.split("+"):
        cf = parse_cf(t)
        total = total + (eval_periodic(cf) if isinstance(cf, PeriodicCF) else QuadSurd(cf))
    return total


def _check_identity(label: str, expr: str, closed: str, printed: Sequence[str]) -> CheckResult:
    got = _cf_sum(expr)
    want = parse_surd(closed)
    if got != want:
        return CheckResult(label, False, f"{expr} = {got}, stated {want}")
    for digits in printed:
        places = len(digits.split(".")[1])
        trunc = surd_decimal(got, places)
        if trunc != digits:
            return CheckResult(label, False, f"{got} truncates to {trunc}, printed {digits}")
    return CheckResult(label, True)


def verify_endpoint_identities(include_extra: bool = False) -> Report:
    """Evaluate each endpoint's continued fractions and compare exactly."""
    rep = Report()
    for rec in plateau_table():
        for side, ep in (("a", rec.left), ("b", rec.right)):
            rep.results.append(_check_identity(
                f"P{rec.index}.{side}", ep.expr, ep.closed, (ep.printed, ep.short)))
    if include_extra:
        for k, (expr, closed, printed) in enumerate(EXTRA_IDENTITIES):
            rep.results.append(_check_identity(f"extra{k + 1}", expr, closed, (printed,)))
    return rep


# ---------------------------------------------------------------------------
# inequality manifest


@dataclass(frozen=True)
class InequalityClaim:
    terms: tuple[PeriodicCF, ...]
    relation: str
    rhs: Fraction
    rhs_text: str
    source: str
    line: int = 0

    def lhs(self) -> list[QuadSurd]:
        return [eval_periodic(t) for t in self.terms]

    def check(self) -> bool:
        c = compare_sum(self.lhs(), self.rhs)
        return c > 0 if self.relation == ">" else c < 0

    def __str__(self):
        return "+".join(str(t) for t in self.terms) + f" {self.relation} {self.rhs_text}"


_CLAIM_RE = re.compile(r"^(?P<lhs>.+?)\s*(?P<rel>[<>])\s*(?P<rhs>[0-9.]+)\s*(?:#\s*(?P<tag>\S+))?\s*$")


def parse_manifest(text: str) -> list[InequalityClaim]:
    claims = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _CLAIM_RE.match(line)
        if not m:
            raise InvalidInputError(f"manifest line {n}: cannot parse {raw!r}")
        terms = []
        for t in m["lhs"].replace(" ", "").split("+"):
            cf = parse_cf(t)
            if not isinstance(cf, PeriodicCF):
                raise InvalidInputError(f"manifest line {n}: {t} has no period")
            terms.append(cf)
        claims.append(InequalityClaim(tuple(terms), m["rel"], parse_decimal(m["rhs"]),
                                      m["rhs"], m["tag"] or "", n))
    return claims


def load_manifest() -> list[InequalityClaim]:
    text = resources.files("spectradim").joinpath("data/inequalities.txt").read_text()
    return parse_manifest(text)


def verify_inequalities(manifest: Optional[Iterable[InequalityClaim]] = None) -> Report:
    claims = load_manifest() if manifest is None else list(manifest)
    rep = Report()
    for c in claims:
        ok = c.check()
        detail = "" if ok else f"{' + '.join(str(v) for v in c.lhs())} vs {c.rhs_text}"
        rep.results.append(CheckResult(f"{c.source}:{c.line} {c}", ok, detail))
    return rep


def appendix_contains(value: str, lo: float, hi: float) -> bool:
    """Whether ``[lo, hi]`` meets ``[v, v + 1e-6)``, the range a truncated ``v`` stands for."""
    v = float(value)
    return lo <= v + 1e-6 and hi >= v


def verify_plateau_dimensions(m: int = 12, tol: float = 1e-4, max_width: float = 0.02) -> Report:
    """``2 dim K_i`` at depth ``m`` against the published plateau values."""
    from .dimension import dim_enclosure
    rep = Report()
    for rec in plateau_table():
        enc = dim_enclosure(rec.forbidden, m, tol)
        lo, hi = 2 * enc.lo, 2 * enc.hi
        ok = appendix_contains(rec.appendix_value, lo, hi) and hi - lo <= max_width
        rep.results.append(CheckResult(
            f"P{rec.index}: 2 dim K in [{lo:.6f}, {hi:.6f}] vs {rec.appendix_value}", ok))
    return rep


# ---------------------------------------------------------------------------
# orderings


def length_matches(rec: PlateauRecord) -> bool:
    """Printed lengths are rounded to nearest: |length - printed| <= half a unit."""
    places = len(rec.appendix_length.split(".")[1])
    half = Fraction(1, 2 * 10 ** places)
    v = parse_decimal(rec.appendix_length)
    return (compare_sum(rec.length_terms, v - half) >= 0
            and compare_sum(rec.length_terms, v + half) < 0)


def verify_order() -> Report:
    """Occurrence order of plateaux and the ordering of their lengths."""
    rep = Report()
    for i, j in zip(OCCURRENCE_ORDER, OCCURRENCE_ORDER[1:]):
        bi = endpoints(i)[1]
        aj = endpoints(j)[0]
        ok = surd_cmp(bi, aj) < 0
        rep.results.append(CheckResult(f"b_{i} < a_{j}", ok, "" if ok else f"{bi} >= {aj}"))
    table = plateau_table()
    for r in table:
        ok = surd_cmp(r.a, r.b) < 0
        rep.results.append(CheckResult(f"a_{r.index} < b_{r.index}", ok))
    for r, s in zip(table, table[1:]):
        ok = compare_sum([*r.length_terms, s.a, -s.b], 0) > 0
        rep.results.append(CheckResult(f"|P{r.index}| > |P{s.index}|", ok))
    for r in table:
        long_ = compare_sum(r.length_terms, Fraction(5, 1000)) > 0
        want = r.index <= 11
        rep.results.append(CheckResult(
            f"|P{r.index}| {'>' if want else '<'} 0.005", long_ == want))
        ok = length_matches(r)
        rep.results.append(CheckResult(f"|P{r.index}| ~ {r.appendix_length}", ok,
                                       "" if ok else r.length_decimal(12)))
    return rep


# ---------------------------------------------------------------------------
# minimizer and branch-and-bound corroboration


def _digits(w) -> tuple[int, ...]:
    if isinstance(w, str):
        return as_word(w).digits if w else ()
    if isinstance(w, Word):
        return w.digits
    return tuple(w)


def _h(theta: Sequence[int], x: QuadSurd, y: QuadSurd) -> QuadSurd:
    """``2 + y + [0; theta, 2 + x]``: increasing in y, decreasing in x."""
    if theta:
        return 2 + y + cf_with_tail(0, theta, 2 + x)
    return 2 + y + 1 / (2 + x)


def _check_theta(theta: Sequence[int]) -> tuple[int, ...]:
    t = _digits(theta)
    if len(t) % 2 or t != t[::-1]:
        raise InvalidInputError(f"theta {''.join(map(str, t))} must be a palindrome of even length")
    return t


def plateaux_minimum(theta, beta, forbidden) -> QuadSurd:
    """Minimum of ``h(y, y)`` over ``y = [0; beta, omega]`` with admissible ``omega``."""
    t = _check_theta(theta)
    b = _digits(beta)
    fs = as_forbidden(forbidden)
    if not fs.avoids("".join(map(str, b))):
        raise InvalidInputError("beta contains a forbidden factor")
    cf = extremal_continuation(b, fs.texts, "min", head=0)
    y = eval_periodic(cf)
    return _h(t, y, y)


def h_monotonicity_check(theta, samples: Iterable[Fraction]) -> bool:
    t = _check_theta(theta)
    pts = sorted({Fraction(s) for s in samples})
    for x, x2 in itertools.combinations(pts, 2):
        for y in pts:
            # increasing in the second argument, decreasing in the first
            if not _h(t, y, x) < _h(t, y, x2):
                return False
            if not _h(t, x, y) > _h(t, x2, y):
                return False
    return True


def _window_lower(word: Sequence[int], k: int) -> float:
    left = tuple(reversed(word[:k]))
    return window_hull(left, word[k], tuple(word[k + 1:])).lo


def _node_bound(word: Sequence[int]) -> float:
    return max(_window_lower(word, k) for k in range(len(word)))


def min_markov_search(pattern, forbidden, depth: int) -> Interval:
    """Certified lower bound for the least Markov value of a sequence containing ``pattern``.

    Extensions grow one digit at a time, alternating right and left, up to
    ``depth`` digits per side.  A node's bound is the largest window lower
    bound over its positions; a leaf bound holds for every sequence through
    that leaf, so the minimum over leaves bounds the true minimum.  Nodes are
    dropped when they contain a forbidden factor or cannot beat the best leaf
    seen so far.  The result is corroboration only, not a proof of minimality.
    """
    base = _digits(pattern)
    fs = as_forbidden(forbidden)
    words = fs.texts
    text = "".join(map(str, base))
    if any(w in text for w in words):
        raise InvalidInputError("pattern contains a forbidden factor")
    span = max((len(w) for w in words), default=1)
    best = float("inf")
    # node: (digits, added_left, added_right)
    stack = [(base, 0, 0)]
    while stack:
        word, nl, nr = stack.pop()
        lb = _node_bound(word)
        if lb >= best:
            continue
        if nl == depth and nr == depth:
            best = lb
            continue
        grow_right = nr <= nl if nr < depth else False
        kids = []
        for d in (1, 2):
            if grow_right:
                kid = word + (d,)
                s = "".join(map(str, kid[-span:]))
                if any(s.endswith(w) for w in words):
                    continue
                kids.append((kid, nl, nr + 1))
            else:
                kid = (d,) + word
                s = "".join(map(str, kid[:span]))
                if any(s.startswith(w) for w in words):
                    continue
                kids.append((kid, nl + 1, nr))
        # explore the more promising child last pushed, first popped
        kids.sort(key=lambda k: _node_bound(k[0]), reverse=True)
        stack.extend(kids)
    if best == float("inf"):
        raise InvalidInputError("no admissible extension of the pattern")
    return Interval(best, best)
