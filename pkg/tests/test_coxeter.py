from collections import deque

import pytest

from decomp.coxeter import RootHalf, build_coxeter, coxeter_matrix, y_dimension_probe
from decomp.homology import homology, is_spherical
from decomp.poset import BudgetExceeded

from conftest import cox


def chamber_graph_distances(W, start):
    """BFS on chambers, adjacent when they share a codimension-one face."""
    verts = [set(W.simplex_vertices[c]) for c in W.chamber_ids]
    dist = {start: 0}
    q = deque([start])
    while q:
        x = q.popleft()
        for y in range(W.order):
            if y not in dist and len(verts[x] & verts[y]) == W.rank - 1:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def bits(m):
    return [i for i in range(m.bit_length()) if m >> i & 1]


@pytest.mark.parametrize("name,order,nrefl", [
    ("A1", 2, 1), ("A2", 6, 3), ("A3", 24, 6), ("B3", 48, 9), ("I2(4)", 8, 4),
    ("I2(5)", 10, 5), ("H3", 120, 15), (((1, 2), (2, 1)), 4, 2)])
def test_orders_and_reflections(name, order, nrefl):
    W = build_coxeter([list(r) for r in name]) if isinstance(name, tuple) else cox(name)
    assert W.order == order
    assert len(W.reflections) == nrefl
    assert W.length[W.w0] == nrefl


def test_longest_element_unique_involution():
    W = cox("A3")
    top = max(W.length)
    assert [w for w in range(W.order) if W.length[w] == top] == [W.w0]
    assert W.mul(W.w0, W.w0) == W.identity


def test_bad_matrices():
    with pytest.raises(ValueError):
        build_coxeter("Q7")
    with pytest.raises(BudgetExceeded):
        build_coxeter([[1, 3, 3], [3, 1, 3], [3, 3, 1]], max_elements=500)  # affine A2


def test_coxeter_matrix_names():
    assert coxeter_matrix("B2") == [[1, 4], [4, 1]]
    assert coxeter_matrix("I2(6)") == [[1, 6], [6, 1]]


def test_hexagon():
    W = cox("A2")
    k = W.complex()
    assert len(W.vertex_ids) == 6
    assert k.f_vector()[:2] == [6, 6]
    assert homology(k).nonzero() == {1: 1}


def test_a3_complex():
    W = cox("A3")
    assert len(W.vertex_ids) == 14 and len(W.chamber_ids) == 24
    assert homology(W.complex()).nonzero() == {2: 1}


@pytest.mark.parametrize("name", ["A2", "A3", "B3", "I2(5)", "H3"])
def test_opposition_is_max_distance(name):
    W = cox(name)
    for k in range(W.nsimplices):
        assert W.opposite(W.opposite(k)) == k
        assert W.simplex_dim(W.opposite(k)) == W.simplex_dim(k)
    dist = chamber_graph_distances(W, 0)
    far = [w for w, d in dist.items() if d == max(dist.values())]
    assert max(dist.values()) == W.length[W.w0]
    assert [W.chamber_ids[w] for w in far] == [W.opposite(W.chamber_ids[0])]


def test_gallery_distance_matches_bfs():
    W = cox("B3")
    for u in (0, 7, 31):
        dist = chamber_graph_distances(W, u)
        assert all(W.gallery_distance(u, v) == d for v, d in dist.items())


def test_hexagon_opposite_vertices():
    W = cox("A2")
    edges = [set(sv) for sv in W.simplex_vertices if len(sv) == 2]
    for v in W.vertex_ids:
        src = W.vertex_pos[v]
        dist = {src: 0}
        q = deque([src])
        while q:
            x = q.popleft()
            for e in edges:
                if x in e:
                    (y,) = e - {x}
                    if y not in dist:
                        dist[y] = dist[x] + 1
                        q.append(y)
        assert dist[W.vertex_pos[W.opposite(v)]] == 3


def test_roots_half_the_chambers():
    W = cox("A3")
    for a in W.root_list:
        ch = W.root_chambers(a)
        assert len(bits(ch)) == W.order // 2
        assert ch & W.root_chambers(-a) == 0


def test_a2_roots_and_walls():
    W = cox("A2")
    for a in W.root_list:
        m = W.root_mask(a)
        assert len(W.mask_vertices(m)) == 4
        assert sum(1 for k in bits(m) if W.simplex_dim(k) == 1) == 3
    for t in range(3):
        wall = W.wall_mask(t)
        vs = list(bits(wall))
        assert len(vs) == 2 and W.opposite(vs[0]) == vs[1]


def test_a1_wall_is_empty():
    W = cox("A1")
    assert W.wall_mask(0) == 0
    assert W.levi_spheres == [W.full_mask]


def test_hull_examples():
    W = cox("A2")
    c = W.chamber_ids[0]
    assert W.convex_hull([c]) == W.closure([c])
    assert W.convex_hull([c, W.opposite(c)]) == W.full_mask
    v = W.vertex_ids[0]
    assert W.convex_hull([v, W.opposite(v)]) != W.full_mask
    assert W.convex_hull([]) == 0
    # adjacent chambers: hull is their union
    c1 = W.chamber_ids[W.rmul[0][0]]
    assert W.convex_hull([c, c1]) == W.closure([c, c1])


def test_projection_examples():
    W = cox("A2")
    c = W.chamber_ids[0]
    assert W.projection(c, W.opposite(c)) == c
    v = next(v for v in W.vertex_ids if W.is_face(v, c))
    p = W.projection(v, W.opposite(c))
    assert W.simplex_dim(p) == 1 and W.is_face(v, p)
    # projecting onto a chamber's face towards itself is the chamber
    assert W.projection(v, c) == c


@pytest.mark.parametrize("name,count", [("A1", 1), ("A2", 4), ("A3", 14), ("I2(5)", 6)])
def test_levi_sphere_counts(name, count):
    W = cox(name)
    assert len(W.levi_spheres) == count
    assert len(W.parabolic_subgroups()) == count + 1


@pytest.mark.parametrize("name", ["A2", "A3", "B3"])
def test_levi_spheres_are_spheres(name):
    W = cox(name)
    for m in W.levi_spheres:
        sub = W.complex().subcomplex(W.simplex_vertices[k] for k in bits(m))
        d = W.mask_dim(m)
        assert homology(sub).nonzero() == {d: 1}
        tops = [k for k in bits(m) if W.simplex_dim(k) == d]
        assert all(W.opposite(k) in tops for k in tops) or d < W.dim


def test_y_small():
    W = cox("A1")
    assert len(W.y_masks) == 3
    W = cox("A2")
    assert W.y_dimension() == 4
    assert W.y_poset().dim == 4


def test_y_above_wall():
    W = cox("A2")
    Y = W.y_poset()
    wall = W.wall_mask(0)
    above = set(Y.upper(wall))
    want = {W.root_mask(RootHalf(0, 1)), W.root_mask(RootHalf(0, -1)), W.full_mask}
    assert above == want
    below = Y.subposet(Y.lower(W.root_mask(RootHalf(0, 1))))
    assert homology(below).nonzero() == {1: 1}
    assert not is_spherical(below, 2)


def test_parabolic_counts():
    assert len(cox("A1").parabolic_poset()) == 2
    assert len(cox("A2").parabolic_poset()) == 5
    assert cox("A2").parabolic_poset().dim == 2


def test_y_dimension_table():
    rows = {r["type"]: r for r in (y_dimension_probe(t) for t in ("A1", "A2", "I2(4)"))}
    assert rows["A1"]["dim_Y"] == 1 and rows["A1"]["predicted"] == 1
    assert rows["A2"]["dim_Y"] == 4 and rows["A2"]["positive_roots"] == 3
    assert set(rows["I2(4)"]) >= {"dim_sigma", "dim_Y", "predicted", "equal"}


def test_pointwise_fixer_of_chamber_is_trivial():
    W = cox("A3")
    assert W.pointwise_fixer(W.closure([W.chamber_ids[0]])) == 1
    assert bin(W.pointwise_fixer(0)).count("1") == W.order
