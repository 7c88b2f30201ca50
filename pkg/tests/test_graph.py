import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hardcopy.graph import InvalidParameter, MultiGraph, new_initial, read_edges


@pytest.mark.parametrize("m", [1, 2, 3])
def test_new_initial(m):
    g = new_initial(m)
    assert (g.t, g.e) == (2, 2 * m)
    assert g.degree(1) == g.degree(2) == 2 * m
    assert g.multiplicity(1, 2) == g.multiplicity(2, 1) == 2 * m
    assert g.is_original(1) and g.is_original(2)
    assert g.max_degree() == 2 * m
    assert sorted(g.endpoint_list().tolist()) == [1] * 2 * m + [2] * 2 * m
    assert g.invariant_violations() == []


@pytest.mark.parametrize("m", [0, -1, 1.5])
def test_new_initial_rejects_bad_m(m):
    with pytest.raises(InvalidParameter):
        new_initial(m)


def test_add_vertex():
    g = new_initial(1)
    v = g.add_vertex_with_edges([1])
    assert v == 3
    assert g.degrees().tolist() == [3, 2, 1]
    assert g.e == 3
    assert g.max_degree() == 3
    assert g.is_original(3) and g.family_root(3) == 3


def test_add_vertex_repeated_neighbor_accumulates():
    g = new_initial(2)
    g.add_vertex_with_edges([1, 1])
    assert g.multiplicity(3, 1) == 2
    assert g.neighbors(3) == {1: 2}


def test_add_vertex_errors():
    g = new_initial(1)
    with pytest.raises(IndexError):
        g.add_vertex_with_edges([9])
    with pytest.raises(InvalidParameter):
        g.add_vertex_with_edges([1, 2])


def test_copy_vertex():
    g = new_initial(1)
    v = g.copy_vertex(1)
    assert g.degrees().tolist() == [2, 4, 2]
    assert g.e == 4
    assert g.multiplicity(v, 2) == 2
    assert g.multiplicity(v, 1) == 0
    assert g.mother(v) == 1 and g.family_root(v) == 1
    assert g.descendant_count(1) == 2
    assert g.descendant_count(2) == 1
    with pytest.raises(IndexError):
        g.copy_vertex(7)


def test_copy_of_degree_m_vertex_adds_m_edges():
    g = new_initial(2)
    g.add_vertex_with_edges([1, 2])
    e = g.e
    g.copy_vertex(3)
    assert g.e == e + 2
    assert g.neighbors(4) == g.neighbors(3)


def test_copy_of_copy_keeps_family_root():
    g = new_initial(1)
    g.add_vertex_with_edges([2])      # 3, original
    d = g.copy_vertex(3)              # 4
    gd = g.copy_vertex(d)             # 5
    assert g.family_root(gd) == 3
    assert g.mother(gd) == d
    assert g.descendant_count(3) == 3
    with pytest.raises(InvalidParameter):
        g.descendant_count(d)


def test_multiplicity_self_is_zero():
    g = new_initial(2)
    assert g.multiplicity(1, 1) == 0


def test_multi_edge_vertex_count():
    g = new_initial(1)
    assert g.multi_edge_vertex_count() == 2
    g.copy_vertex(1)
    assert g.multi_edge_vertex_count() == 3


def test_multi_edge_vertex_count_zero_on_simple_part():
    # only the seed pair is parallel; vertices attached by single edges are not counted
    g = new_initial(1)
    for _ in range(5):
        g.add_vertex_with_edges([1])
    assert g.multi_edge_vertex_count() == 2


def test_max_degree_after_pa_step():
    g = new_initial(1)
    g.add_vertex_with_edges([2])
    assert g.max_degree() == 3


def test_growth_beyond_initial_capacity():
    g = MultiGraph(1, vertex_capacity=2, slot_capacity=8)
    for i in range(200):
        if i % 3:
            g.add_vertex_with_edges([1 + i % g.t])
        else:
            g.copy_vertex(1 + (7 * i) % g.t)
    assert g.t == 202
    assert g.invariant_violations() == []


def test_edge_export_roundtrip(tmp_path):
    g = new_initial(1)
    g.add_vertex_with_edges([1])
    g.copy_vertex(1)
    path = tmp_path / "edges.txt"
    g.write_edges(path)
    lines = path.read_text().splitlines()
    assert lines[0] == f"# t={g.t} e={g.e} m=1"
    header, rows = read_edges(path)
    assert header == {"t": g.t, "e": g.e, "m": 1}
    assert rows == sorted(rows)
    assert all(u < v for u, v, _ in rows)
    assert sum(c for *_, c in rows) == g.e
    assert rows == [(1, 2, 2), (1, 3, 1), (2, 4, 2), (3, 4, 1)]


def test_copy_is_independent():
    g = new_initial(1)
    h = g.copy()
    h.copy_vertex(1)
    assert g.t == 2 and h.t == 3


ops = st.lists(st.tuples(st.booleans(), st.lists(st.integers(0, 10**6), min_size=3, max_size=3)),
               max_size=60)


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 3), program=ops)
def test_invariants_under_arbitrary_mutations(m, program):
    g = new_initial(m)
    prev_max = g.max_degree()
    for is_copy, picks in program:
        if is_copy:
            g.copy_vertex(1 + picks[0] % g.t)
        else:
            g.add_vertex_with_edges([1 + p % g.t for p in (picks * m)[:m]])
        assert g.max_degree() <= prev_max + 2 * m
        prev_max = g.max_degree()
    assert g.invariant_violations() == []
    deg = g.degrees()
    # handshake and family identities
    assert deg.sum() == 2 * g.e
    origs = g.originals()
    assert sum(g.descendant_count(int(v)) for v in origs) == g.t
    roots = np.array([g.family_root(v) for v in range(1, g.t + 1)])
    assert sum(deg[roots == r].sum() for r in origs) == 2 * g.e
    # multiplicity symmetry on a sample of pairs
    for u in range(1, min(g.t, 6) + 1):
        for v, c in g.neighbors(u).items():
            assert g.multiplicity(v, u) == c <= 2 * m
