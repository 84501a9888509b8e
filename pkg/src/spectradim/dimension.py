"""Certified Hausdorff dimension of Gauss-Cantor sets with forbidden factors.

The set of one-sided {1,2}-sequences avoiding a finite list of factors is a
subshift of finite type.  Its states carry the last ``m`` digits (plus any
longer context that is still a prefix of a forbidden word), and each edge
carries an enclosure of the one-digit inverse-branch contraction
``1/(a + y)^2`` with ``y`` ranging over the cylinder of the ``m`` digits that
follow.  The dimension is the zero of the pressure, bracketed by the Perron
roots of the edge-weight matrices raised to the power ``sigma``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
import scipy.sparse as sp
from scipy.optimize import brentq
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceededError, InvalidInputError
from .forbid import _Z_HIGH, _Z_LOW
from .words import ForbiddenSet, WordLike, as_forbidden, as_word, reduce

log = logging.getLogger(__name__)

_REL = 1e-14        # outward margin for float edge weights
_POW_REL = 1e-13    # outward margin for w**sigma and matrix-vector products


@dataclass
class TransitionGraph:
    m: int
    vertices: list[str]
    edges: list[tuple[int, int]]
    weight_lo: np.ndarray
    weight_hi: np.ndarray

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def out_degrees(self) -> np.ndarray:
        deg = np.zeros(len(self.vertices), dtype=int)
        for u, _ in self.edges:
            deg[u] += 1
        return deg

    def in_degrees(self) -> np.ndarray:
        deg = np.zeros(len(self.vertices), dtype=int)
        for _, v in self.edges:
            deg[v] += 1
        return deg

    def to_json(self) -> str:
        doc = {
            "m": self.m,
            "vertices": self.vertices,
            "edges": [
                {"from": self.vertices[u], "to": self.vertices[v],
                 "weight": [repr(float(lo)), repr(float(hi))]}
                for (u, v), lo, hi in zip(self.edges, self.weight_lo, self.weight_hi)
            ],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "TransitionGraph":
        doc = json.loads(text)
        verts = list(doc["vertices"])
        index = {v: i for i, v in enumerate(verts)}
        edges, lo, hi = [], [], []
        for e in doc["edges"]:
            edges.append((index[e["from"]], index[e["to"]]))
            lo.append(float(e["weight"][0]))
            hi.append(float(e["weight"][1]))
        return cls(int(doc["m"]), verts, edges, np.array(lo), np.array(hi))


@dataclass
class DimEnclosure:
    lo: float
    hi: float
    m: int
    component_count: int = 0

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def doubled(self) -> tuple[float, float]:
        return 2 * self.lo, 2 * self.hi

    def to_json(self) -> str:
        return json.dumps({"lo": repr(self.lo), "hi": repr(self.hi), "m": self.m,
                           "components": self.component_count})

    @classmethod
    def from_json(cls, text: str) -> "DimEnclosure":
        doc = json.loads(text)
        return cls(float(doc["lo"]), float(doc["hi"]), int(doc["m"]), int(doc["components"]))


class DimensionDrop(NamedTuple):
    base: DimEnclosure
    reduced: DimEnclosure

    @property
    def separated(self) -> bool:
        return self.reduced.hi < self.base.lo

    @property
    def margin(self) -> float:
        return self.base.lo - self.reduced.hi


# ---------------------------------------------------------------------------
# graph construction


def _contraction(a: int, block: str) -> tuple[float, float]:
    """Enclosure of 1/(a+y)^2 for y in the {1,2}-cylinder of ``block``."""
    p, pp, q, qp = 0, 1, 1, 0
    for ch in block:
        d = 1 if ch == "1" else 2
        p, pp = d * p + pp, p
        q, qp = d * q + qp, q
    y1 = (p * _Z_LOW + pp) / (q * _Z_LOW + qp)
    y2 = (p * _Z_HIGH + pp) / (q * _Z_HIGH + qp)
    y_lo = min(y1, y2) * (1 - _REL)
    y_hi = max(y1, y2) * (1 + _REL)
    w_lo = 1.0 / ((a + y_hi) ** 2) * (1 - _REL)
    w_hi = 1.0 / ((a + y_lo) ** 2) * (1 + _REL)
    return w_lo, w_hi


def build_graph(forbidden, m: int) -> TransitionGraph:
    """Transition graph of the {1,2}-subshift avoiding ``forbidden``.

    States are digit strings: the last ``m`` digits, extended further back
    while the extension is still a proper prefix of some forbidden word, so
    factor avoidance is exact for words of any length.  The graph is pruned
    to states lying on bi-infinite paths.
    """
    if m < 1:
        raise InvalidInputError("block length m must be at least 1")
    fs = reduce(as_forbidden(forbidden))
    words = sorted(fs.texts)
    prefixes = {w[:i] for w in words for i in range(1, len(w))}
    maxpre = max((len(x) for x in prefixes), default=0)

    def bad(text: str) -> bool:
        return any(text.endswith(w) for w in words)

    def state_of(text: str) -> str:
        depth = 0
        for i in range(min(len(text), maxpre), m, -1):
            if text[-i:] in prefixes:
                depth = i
                break
        return text[-max(m, depth):]

    from itertools import product
    seeds = []
    for t in product("12", repeat=m):
        x = "".join(t)
        if all(w not in x for w in words):
            seeds.append(x)

    index: dict[str, int] = {}
    verts: list[str] = []
    edges: list[tuple[int, int]] = []
    lo: list[float] = []
    hi: list[float] = []
    cache: dict[str, tuple[float, float]] = {}
    todo = []
    for x in seeds:
        if x not in index:
            index[x] = len(verts)
            verts.append(x)
            todo.append(x)
    while todo:
        u = todo.pop()
        for d in "12":
            ext = u + d
            if bad(ext):
                continue
            v = state_of(ext)
            if v not in index:
                index[v] = len(verts)
                verts.append(v)
                todo.append(v)
            key = ext[-(m + 1):]
            if key not in cache:
                cache[key] = _contraction(int(key[0]), key[1:])
            w = cache[key]
            edges.append((index[u], index[v]))
            lo.append(w[0])
            hi.append(w[1])

    graph = TransitionGraph(m, verts, edges, np.array(lo), np.array(hi))
    return _prune(graph)


def _prune(g: TransitionGraph) -> TransitionGraph:
    n = len(g.vertices)
    alive = np.ones(n, dtype=bool)
    e = np.array(g.edges, dtype=int).reshape(-1, 2)
    while True:
        if len(e):
            ok = alive[e[:, 0]] & alive[e[:, 1]]
            outd = np.bincount(e[ok, 0], minlength=n)
            ind = np.bincount(e[ok, 1], minlength=n)
        else:
            outd = ind = np.zeros(n, dtype=int)
        new = alive & (outd > 0) & (ind > 0)
        if (new == alive).all():
            break
        alive = new
    keep = np.flatnonzero(alive)
    remap = {int(old): i for i, old in enumerate(keep)}
    verts = [g.vertices[i] for i in keep]
    edges, lo, hi = [], [], []
    for k, (u, v) in enumerate(g.edges):
        if alive[u] and alive[v]:
            edges.append((remap[u], remap[v]))
            lo.append(g.weight_lo[k])
            hi.append(g.weight_hi[k])
    order = sorted(range(len(verts)), key=lambda i: verts[i])
    pos = {old: new for new, old in enumerate(order)}
    verts = [verts[i] for i in order]
    ed = sorted(((pos[u], pos[v]), a, b) for (u, v), a, b in zip(edges, lo, hi))
    return TransitionGraph(g.m, verts, [x[0] for x in ed],
                           np.array([x[1] for x in ed]), np.array([x[2] for x in ed]))


# ---------------------------------------------------------------------------
# Perron roots


def _matrix(rows, cols, weights, sigma, n, scale):
    vals = np.exp(sigma * np.log(weights)) * scale
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _perron_vector(a: sp.csr_matrix, v0: Optional[np.ndarray]) -> np.ndarray:
    n = a.shape[0]
    if n <= 300:
        w, vecs = np.linalg.eig(a.toarray() + np.eye(n))
        k = int(np.argmax(w.real))
        v = np.abs(vecs[:, k].real)
    else:
        from scipy.sparse.linalg import eigs
        shifted = a + sp.identity(n, format="csr")
        try:
            w, vecs = eigs(shifted, k=1, which="LR", v0=v0, tol=1e-13, maxiter=20000)
            v = np.abs(vecs[:, 0].real)
        except Exception:  # ARPACK non-convergence: fall back to iteration
            v = np.ones(n) if v0 is None else v0.copy()
    # polish with shifted power iteration (B + I is primitive)
    for _ in range(50):
        v = a @ v + v
        v /= v.max()
    v = np.maximum(v, 1e-300)
    return v


def perron_bracket(a: sp.csr_matrix, v0: Optional[np.ndarray] = None) -> tuple[float, float, np.ndarray]:
    """Collatz-Wielandt bracket ``min (Av)_i/v_i <= rho(A) <= max (Av)_i/v_i``.

    ``a`` must be nonnegative and irreducible; the vector is a numerical
    Perron vector, the bracket holds for any positive vector.
    """
    v = _perron_vector(a, v0)
    ratios = (a @ v) / v
    return float(ratios.min()) * (1 - _POW_REL), float(ratios.max()) * (1 + _POW_REL), v


@dataclass
class _Component:
    rows: np.ndarray
    cols: np.ndarray
    w_lo: np.ndarray
    w_hi: np.ndarray
    size: int
    vec_lo: Optional[np.ndarray] = None
    vec_hi: Optional[np.ndarray] = None

    def rho(self, sigma: float, which: str) -> tuple[float, float]:
        if which == "lo":
            mat = _matrix(self.rows, self.cols, self.w_lo, sigma, self.size, 1 - _POW_REL)
            lo, hi, self.vec_lo = perron_bracket(mat, self.vec_lo)
        else:
            mat = _matrix(self.rows, self.cols, self.w_hi, sigma, self.size, 1 + _POW_REL)
            lo, hi, self.vec_hi = perron_bracket(mat, self.vec_hi)
        return lo, hi


def _components(g: TransitionGraph) -> list[_Component]:
    n = len(g.vertices)
    if not n:
        return []
    e = np.array(g.edges, dtype=int)
    adj = sp.csr_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    count, labels = connected_components(adj, directed=True, connection="strong")
    comps = []
    for c in range(count):
        members = np.flatnonzero(labels == c)
        mask = (labels[e[:, 0]] == c) & (labels[e[:, 1]] == c)
        if not mask.any():
            continue
        local = {int(v): i for i, v in enumerate(members)}
        rows = np.array([local[int(u)] for u in e[mask, 0]])
        cols = np.array([local[int(v)] for v in e[mask, 1]])
        comps.append(_Component(rows, cols, g.weight_lo[mask], g.weight_hi[mask], len(members)))
    return comps


def _component_enclosure(c: _Component, tol: float, max_tries: int = 40) -> tuple[float, float]:
    if len(c.rows) == c.size:
        # a single cycle carries no entropy
        return 0.0, 0.0

    def f_lo(sigma):
        lo, hi = c.rho(sigma, "lo")
        return math.log(0.5 * (lo + hi))

    def f_hi(sigma):
        lo, hi = c.rho(sigma, "hi")
        return math.log(0.5 * (lo + hi))

    root_lo = brentq(f_lo, 0.0, 1.0, xtol=tol / 8)
    root_hi = brentq(f_hi, 0.0, 1.0, xtol=tol / 8)

    # certify: rho(min-weights^sigma) >= 1 gives sigma <= dim
    step = tol / 4
    sigma_lo = max(root_lo - step, 0.0)
    for _ in range(max_tries):
        if sigma_lo == 0.0 or c.rho(sigma_lo, "lo")[0] >= 1.0:
            break
        step *= 2
        sigma_lo = max(root_lo - step, 0.0)
    else:
        raise BudgetExceededError("lower bound not certified", partial=(0.0, None))
    step = tol / 4
    sigma_hi = root_hi + step
    for _ in range(max_tries):
        if c.rho(sigma_hi, "hi")[1] <= 1.0:
            break
        step *= 2
        sigma_hi = root_hi + step
        if sigma_hi >= 1.0:
            sigma_hi = 1.0
            break
    else:
        raise BudgetExceededError("upper bound not certified", partial=(sigma_lo, 1.0))
    return sigma_lo, sigma_hi


def dim_enclosure(forbidden, m: int = 12, tol: float = 1e-4) -> DimEnclosure:
    """Certified enclosure of the Hausdorff dimension of the Gauss-Cantor set."""
    g = build_graph(forbidden, m)
    return graph_enclosure(g, tol)


def graph_enclosure(g: TransitionGraph, tol: float = 1e-4) -> DimEnclosure:
    if g.is_empty:
        return DimEnclosure(0.0, 0.0, g.m, 0)
    comps = _components(g)
    lo = hi = 0.0
    for c in comps:
        a, b = _component_enclosure(c, tol)
        lo = max(lo, a)
        hi = max(hi, b)
    return DimEnclosure(lo, hi, g.m, len(comps))


def dimension_drop(forbidden, extra: WordLike, m: int = 12, tol: float = 1e-4) -> DimensionDrop:
    """Enclosures with and without one extra forbidden word."""
    fs = as_forbidden(forbidden)
    extra = as_word(extra)
    base = dim_enclosure(fs, m, tol)
    reduced = dim_enclosure(ForbiddenSet(fs.words + (extra,)), m, tol)
    return DimensionDrop(base, reduced)
