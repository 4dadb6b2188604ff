from hypothesis import given, settings
from hypothesis import strategies as st

from decomp import gf
from decomp.coxeter import build_coxeter
from decomp.decompositions import transport
from decomp.groups import MatrixGroup
from decomp.homology import chain_complex, homology, join_betti
from decomp.poset import Poset, SimplicialComplex, barycentric_subdivision, poset_join

from conftest import cox, dec

SETTINGS = settings(max_examples=60, deadline=None)


@st.composite
def posets(draw, max_size=6):
    n = draw(st.integers(0, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    rel = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Poset(list(range(n)), rel)


@st.composite
def complexes(draw):
    n = draw(st.integers(1, 6))
    facets = draw(st.lists(st.lists(st.integers(0, n - 1), min_size=1, max_size=4, unique=True),
                           min_size=1, max_size=6))
    return SimplicialComplex(list(range(n)), facets=[tuple(sorted(f)) for f in facets])


@SETTINGS
@given(posets())
def test_op_is_involution(p):
    q = p.op().op()
    assert all(q.less(x, y) == p.less(x, y) for x in p.elements for y in p.elements)
    assert homology(p).same_as(homology(p.op()))


@SETTINGS
@given(complexes())
def test_boundary_squares_to_zero(k):
    assert chain_complex(k).check_square_zero()


@SETTINGS
@given(posets())
def test_subdivision_keeps_homology(p):
    assert homology(p).same_as(homology(barycentric_subdivision(p)))


@SETTINGS
@given(posets(4), posets(4))
def test_join_betti(p, q):
    want = {k: v for k, v in join_betti(homology(p).nonzero(), homology(q).nonzero()).items() if v}
    assert homology(poset_join(p, q)).nonzero() == want


@SETTINGS
@given(complexes(), st.randoms(use_true_random=False))
def test_homology_ignores_vertex_order(k, rnd):
    perm = list(range(len(k.vertices)))
    rnd.shuffle(perm)
    k2 = SimplicialComplex(list(range(len(perm))),
                           faces=[tuple(sorted(perm[v] for v in f)) for f in k.faces()])
    assert homology(k).same_as(homology(k2))


@SETTINGS
@given(st.sampled_from(["A2", "A3", "B3", "I2(5)"]), st.data())
def test_hull_is_a_closure(name, data):
    W = cox(name)
    idx = st.integers(0, W.nsimplices - 1)
    a = data.draw(st.lists(idx, min_size=1, max_size=3))
    b = a + data.draw(st.lists(idx, max_size=2))
    ha, hb = W.convex_hull(a), W.convex_hull(b)
    assert ha & W.closure(a) == W.closure(a)
    assert ha & hb == ha
    assert W.convex_hull([k for k in range(W.nsimplices) if ha >> k & 1]) == ha


@SETTINGS
@given(st.sampled_from(["A2", "A3", "B3"]), st.data())
def test_opposition_commutes_with_hull(name, data):
    W = cox(name)
    a = data.draw(st.lists(st.integers(0, W.nsimplices - 1), min_size=1, max_size=3))
    h = W.convex_hull(a)
    op_h = W.mask_of(W.opposite(k) for k in range(W.nsimplices) if h >> k & 1)
    assert W.convex_hull([W.opposite(k) for k in a]) == op_h


@SETTINGS
@given(st.data())
def test_transport_is_an_action(data):
    d = dec("A(p=3,n=2)")
    b = d.b
    gens = gf.general_linear_generators(3, 2)
    g = data.draw(st.sampled_from(gens))
    h = data.draw(st.sampled_from(gens))
    x = data.draw(st.sampled_from(d.OPD.elements))
    pg, ph = b.vertex_permutation(g), b.vertex_permutation(h)
    pgh = b.vertex_permutation(gf.mat_mul(g, h, 3))
    assert transport(x, pgh) == transport(transport(x, ph), pg)
    assert transport(x, pg) in set(d.OPD.elements)


@SETTINGS
@given(st.integers(0, 47), st.integers(0, 47))
def test_group_closed_under_products(i, j):
    els = MatrixGroup.full(3, 2).elements
    assert gf.mat_mul(els[i], els[j], 3) in set(els)


@SETTINGS
@given(st.integers(2, 6))
def test_dihedral_counts(m):
    W = build_coxeter(f"I2({m})")
    assert W.order == 2 * m and len(W.reflections) == m
    assert len(W.levi_spheres) == m + 1
