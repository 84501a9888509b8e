from itertools import product

import numpy as np
import pytest
import scipy.sparse as sp

from spectradim.dimension import (DimEnclosure, TransitionGraph, build_graph, dim_enclosure,
                                  dimension_drop, graph_enclosure, perron_bracket)
from spectradim.errors import InvalidInputError

# dim of {1,2}-continued fractions, known to many digits from the literature
DIM_E2 = 0.5312805062772051


def brute_graph(words, m):
    verts = ["".join(t) for t in product("12", repeat=m) if not any(w in "".join(t) for w in words)]
    edges = [(u, v) for u in verts for v in verts
             if u[1:] == v[:-1] and not any(w in u + v[-1] for w in words)]
    return verts, edges


def test_full_shift_m1():
    g = build_graph([], 1)
    assert g.vertices == ["1", "2"]
    assert len(g.edges) == 4


def test_121_m2_drops_one_edge():
    g = build_graph(["121"], 2)
    assert g.vertices == ["11", "12", "21", "22"]
    named = {(g.vertices[u], g.vertices[v]) for u, v in g.edges}
    assert ("12", "21") not in named
    assert len(named) == 7


def test_edge_count_matches_enumeration():
    g = build_graph(["1212", "2121"], 3)
    verts, edges = brute_graph(["1212", "2121"], 3)
    assert len(g.vertices) == len(verts) == 8
    assert len(g.edges) == len(edges) == 14


def test_graph_invariants_and_json():
    g = build_graph(["121", "21222", "22212"], 6)
    assert (g.in_degrees() > 0).all() and (g.out_degrees() > 0).all()
    assert (0 < g.weight_lo).all() and (g.weight_lo <= g.weight_hi).all() and (g.weight_hi < 1).all()
    for v in g.vertices:
        assert not any(w in v for w in ("121", "21222", "22212"))
    back = TransitionGraph.from_json(g.to_json())
    assert back.vertices == g.vertices and back.edges == g.edges
    assert np.array_equal(back.weight_lo, g.weight_lo)


def test_long_words_handled_below_max_length():
    # m smaller than the longest word: states carry extra context
    a = dim_enclosure(["121", "2212" * 3], 4)
    b = dim_enclosure(["121", "2212" * 3], 14)
    assert a.lo <= b.hi + 1e-4 and b.lo <= a.hi + 1e-4


def test_bad_m():
    with pytest.raises(InvalidInputError):
        build_graph([], 0)


def test_perron_bracket_simple():
    a = sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 0.0]]))
    lo, hi, _ = perron_bracket(a)
    phi = (1 + 5 ** 0.5) / 2
    assert lo <= phi <= hi and hi - lo < 1e-10


def test_full_shift_contains_known_value():
    e = dim_enclosure([], 12)
    assert e.contains(DIM_E2)
    assert e.width < 0.02


def test_nested_in_depth():
    prev = None
    encs = {m: dim_enclosure([], m) for m in (4, 6, 8, 10, 12)}
    ref = dim_enclosure([], 16)
    for m, e in encs.items():
        if prev is not None:
            assert prev.lo - 1e-4 <= e.lo and e.hi <= prev.hi + 1e-4
        prev = e
    mid = 0.5 * (ref.lo + ref.hi)
    assert encs[12].contains(mid)


@pytest.mark.parametrize("words", [["121"], ["121", "212"], []])
def test_refinement_containment(words):
    for m in (6, 8, 10):
        a = dim_enclosure(words, m)
        b = dim_enclosure(words, m + 1)
        assert a.lo - 1e-4 <= b.lo and b.hi <= a.hi + 1e-4


def test_worked_example_upper_bound():
    e = dim_enclosure(["1212", "2121"], 10, 1e-5)
    assert e.hi <= 0.46938


def test_p2_value():
    e = dim_enclosure(["121"], 12)
    lo, hi = e.doubled()
    assert lo <= 0.812150 + 1e-6 and hi >= 0.812150
    assert hi - lo <= 0.01


def test_anti_monotone():
    base = dim_enclosure(["1212", "2121"], 10)
    more = dim_enclosure(["1212", "2121", "1112111"], 10)
    assert more.hi <= base.hi


def test_empty_graph_is_zero():
    e = dim_enclosure(["1", "2"], 3)
    assert (e.lo, e.hi) == (0.0, 0.0)


def test_single_cycle_is_zero():
    e = dim_enclosure(["1"], 4)
    assert (e.lo, e.hi) == (0.0, 0.0)


def test_reversal_symmetry():
    a = dim_enclosure(["121", "21222", "22212"], 10)
    b = dim_enclosure(["22212", "121", "21222"], 10)
    assert (a.lo, a.hi) == (b.lo, b.hi)


def test_json_roundtrip():
    e = dim_enclosure(["121"], 8)
    back = DimEnclosure.from_json(e.to_json())
    assert (back.lo, back.hi, back.m, back.component_count) == (e.lo, e.hi, e.m, e.component_count)


def test_drop_121_2212_cubed():
    r = dimension_drop(["121"], "2212" * 3, 14, 1e-6)
    assert r.separated


def test_drop_to_single_point():
    r = dimension_drop([], "1", 6)
    assert r.separated
    assert (r.reduced.lo, r.reduced.hi) == (0.0, 0.0)


def test_drop_121_212_golden_margin():
    r = dimension_drop(["121", "212"], "221112" * 2, 14, 1e-6)
    assert r.separated
    # frozen from a run at tol 1e-6; the margin is insensitive to the tolerance at this scale
    assert r.margin == pytest.approx(0.0010796, abs=2e-6)


def test_graph_enclosure_empty():
    g = build_graph(["1", "2"], 2)
    assert g.is_empty
    assert graph_enclosure(g).hi == 0.0
