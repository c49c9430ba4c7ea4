import random

import pytest
from hypothesis import given, strategies as st

from surfcensus import (
    TriangleSet,
    edge_from_index,
    edge_index,
    edge_sum_vector,
    euler_characteristic,
    f_vector,
    is_closed,
    is_connected,
    link_is_single_circle,
    verify_surface,
    vertex_link,
)
from surfcensus.complexes import VertexLink


def test_edge_index_basics():
    assert edge_index(1, 2, 5) == 0
    assert edge_index(4, 5, 5) == 9
    # pairs before (2,4) in lex order: 12, 13, 14, 15, 23
    assert edge_index(2, 4, 5) == 5


def test_edge_index_rejects_bad_pairs():
    with pytest.raises(ValueError):
        edge_index(3, 3, 5)
    with pytest.raises(ValueError):
        edge_index(4, 2, 5)
    with pytest.raises(ValueError):
        edge_index(1, 6, 5)


@given(st.integers(2, 64), st.data())
def test_edge_index_roundtrip(n, data):
    u = data.draw(st.integers(1, n - 1))
    v = data.draw(st.integers(u + 1, n))
    assert edge_from_index(edge_index(u, v, n), n) == (u, v)


def test_edge_index_is_order_preserving():
    n = 9
    pairs = [(u, v) for u in range(1, n) for v in range(u + 1, n + 1)]
    indices = [edge_index(u, v, n) for u, v in pairs]
    assert indices == list(range(len(pairs)))


def test_triangle_set_validation():
    with pytest.raises(ValueError):
        TriangleSet(4, ((1, 2, 3), (1, 2, 3)))
    with pytest.raises(ValueError):
        TriangleSet(4, ((1, 3, 2),))
    with pytest.raises(ValueError):
        TriangleSet(4, ((2, 3, 5),))


def test_vertex_link_tetrahedron(tetra):
    lk = vertex_link(tetra, 1)
    assert lk.link_edges == frozenset({(2, 3), (2, 4), (3, 4)})
    assert link_is_single_circle(lk)


def test_vertex_link_moebius_vertex7(moebius):
    lk = vertex_link(moebius, 7)
    assert len(lk.link_edges) == 6
    assert link_is_single_circle(lk)
    assert {v for e in lk.link_edges for v in e} == {1, 2, 3, 4, 5, 6}


def test_vertex_link_empty():
    c = TriangleSet.from_triangles([(1, 2, 3)], n=4)
    assert vertex_link(c, 4).link_edges == frozenset()


def test_link_single_circle_rejects_disjoint_triangles():
    link = VertexLink(1, frozenset({(2, 3), (2, 4), (3, 4), (5, 6), (5, 7), (6, 7)}))
    assert not link_is_single_circle(link)


def test_link_single_circle_rejects_open_path():
    assert not link_is_single_circle(VertexLink(1, frozenset({(2, 3), (2, 4)})))


def test_is_closed():
    b3_plus_234 = TriangleSet.from_triangles(
        [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)], n=5
    )
    assert is_closed(edge_sum_vector(b3_plus_234))
    b3 = TriangleSet.from_triangles([(1, 2, 3), (1, 2, 4), (1, 3, 4)], n=5)
    assert not is_closed(edge_sum_vector(b3))
    assert not is_closed([0] * 10)


def test_is_connected(tetra, sphere5):
    assert is_connected(tetra)
    two_tetras = TriangleSet.from_triangles(
        [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
         (5, 6, 7), (5, 6, 8), (5, 7, 8), (6, 7, 8)], n=8
    )
    assert not is_connected(two_tetras)
    # all n ground-set labels must occur
    tetra_on_5 = TriangleSet.from_triangles(tetra.triangles, n=5)
    assert not is_connected(tetra_on_5)


def test_verify_surface(moebius, sphere5):
    assert verify_surface(moebius)
    assert verify_surface(sphere5)
    pinched = TriangleSet.from_triangles(
        [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4),
         (4, 5, 6), (4, 5, 7), (4, 6, 7), (5, 6, 7)], n=7
    )
    # vertex 4 is a pinch point: its link is two disjoint circles
    assert not verify_surface(pinched)


def test_f_vector_and_euler(tetra, moebius, rp26):
    assert f_vector(tetra) == (4, 6, 4)
    assert euler_characteristic(tetra) == 2
    assert f_vector(moebius) == (7, 21, 14)
    assert euler_characteristic(moebius) == 0
    assert f_vector(rp26) == (6, 15, 10)
    assert euler_characteristic(rp26) == 1


def test_two_f1_equals_three_f2_on_surfaces(moebius, sphere5, rp26, tetra):
    for c in (moebius, sphere5, rp26, tetra):
        _, f1, f2 = f_vector(c)
        assert 2 * f1 == 3 * f2


def test_verify_surface_invariant_under_relabeling(moebius):
    rng = random.Random(11)
    for _ in range(20):
        perm = dict(zip(range(1, 8), rng.sample(range(1, 8), 7)))
        assert verify_surface(moebius.relabeled(perm))


def test_vertex_link_degree_sum_even(moebius, sphere5):
    for c in (moebius, sphere5):
        for v in range(1, c.n + 1):
            degs = {}
            for a, b in vertex_link(c, v).link_edges:
                degs[a] = degs.get(a, 0) + 1
                degs[b] = degs.get(b, 0) + 1
            assert sum(degs.values()) % 2 == 0
