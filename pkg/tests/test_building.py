import itertools
import random

import pytest

from decomp import gf
from decomp.building import (are_opposite_linear, brute_force_common_basis, build_building,
                             common_basis_test, is_distributive_family)
from decomp.homology import homology

from conftest import bldg


@pytest.mark.parametrize("spec,verts,edges,apts", [
    ("A(p=2,n=2)", 3, 0, 3),
    ("A(p=3,n=2)", 4, 0, 6),
    ("A(p=2,n=3)", 14, 21, 28),
    ("thin:A2", 6, 6, 1),
])
def test_counts(spec, verts, edges, apts):
    b = bldg(spec)
    assert len(b.vertex_keys) == verts
    assert sum(1 for s in b.simplices if len(s) == 2) == edges
    assert len(b.apartments) == apts


def test_every_apartment_is_a_coxeter_complex():
    b = bldg("A(p=2,n=3)")
    for a in b.apartments:
        assert len(a.vertices) == 6
        sub = b.complex().subcomplex(tuple(sorted(s)) for s in b.simplices if s <= a.vertices)
        assert sub.f_vector()[:2] == [6, 6]


def _frames_through(b, vertices):
    """Frames whose spans include every given subspace."""
    p, n = b.field
    lines = [s for s in b.vertex_keys if s.dim == 1]
    out = 0
    for fr in itertools.combinations(lines, n):
        if not gf.is_direct(fr):
            continue
        spans = {gf.total_span(J, p, n) for r in range(1, n) for J in itertools.combinations(fr, r)}
        if all(b.vertex_keys[v] in spans for v in vertices):
            out += 1
    return out


def test_chamber_in_eight_apartments():
    b = bldg("A(p=2,n=3)")
    for c in b.chambers:
        assert len(b.apartments_containing([c])) == _frames_through(b, c) == 8


def test_opposite_chambers_in_one_apartment():
    b = bldg("A(p=2,n=3)")
    c = b.chambers[0]
    opp = [d for d in b.chambers if b.are_opposite(c, d)]
    assert len(opp) == 8  # q^3 chambers opposite a chamber in GL3(2)
    for d in opp:
        assert len(b.apartments_containing([c, d])) == 1


def test_empty_query_is_all_apartments():
    b = bldg("A(p=3,n=2)")
    assert b.apartments_containing([]) == list(range(6))


def test_opposition_linear_agrees():
    b = bldg("A(p=2,n=3)")
    simp = b.simplices
    for s, t in itertools.product(simp, repeat=2):
        if len(s) != len(t):
            continue
        assert are_opposite_linear(b, s, t) == b.are_opposite(s, t)


def test_hull_independent_of_apartment():
    b = bldg("A(p=2,n=3)")
    rng = random.Random(3)
    for _ in range(200):
        s, t = rng.sample(b.simplices, 2)
        if not b.apartments_of(s | t):
            continue
        assert len(b.hull_all_apartments([s, t])) == 1


def test_hull_of_opposite_vertices_is_levi_sphere():
    b = bldg("A(p=2,n=3)")
    L = next(v for v, k in enumerate(b.vertex_keys) if k.dim == 1)
    P = next(v for v, k in enumerate(b.vertex_keys) if k.dim == 2 and b.are_opposite({L}, {v}))
    assert b.hull([{L}, {P}]) == frozenset({L, P})


def test_projection():
    b = bldg("A(p=2,n=3)")
    c = b.chambers[0]
    v = frozenset([min(c)])
    d = next(d for d in b.chambers if b.are_opposite(c, d))
    p = b.projection(v, d)
    assert v < p and len(p) == 2
    assert b.projection(c, d) == c


def test_common_basis_oracles():
    b = bldg("A(p=2,n=3)")
    p, n = b.field
    rng = random.Random(11)
    subs = list(b.vertex_keys)
    for _ in range(60):
        fam = rng.sample(subs, rng.randint(1, 4))
        want = brute_force_common_basis(fam, p, n)
        assert common_basis_test(b, fam) == want
        assert is_distributive_family(fam, p, n) == want


def test_three_lines_in_a_plane():
    b = bldg("A(p=2,n=3)")
    e = [gf.Subspace.span([v], 2, 3) for v in ((1, 0, 0), (0, 1, 0), (1, 1, 0))]
    assert not common_basis_test(b, e)
    assert not is_distributive_family(e, 2, 3)
    assert common_basis_test(b, e[:2])


def test_links():
    b = bldg("A(p=2,n=3)")
    line = next(v for v, k in enumerate(b.vertex_keys) if k.dim == 1)
    lk = b.link({line})
    assert len(lk.vertex_keys) == 3 and lk.dim == 0
    assert all(b.vertex_keys[line] < k for k in lk.vertex_keys)
    assert len(lk.apartments) == 3
    assert lk.parent_vertex == sorted(b.vertex_index[k] for k in lk.vertex_keys)
    empty = b.link(b.chambers[0])
    assert len(empty.vertex_keys) == 0
    with pytest.raises(ValueError):
        b.link({line, line + 100})


def test_thin_link():
    b = bldg("thin:A3")
    v = b.chambers[0]
    edge = frozenset(sorted(v)[:2])
    lk = b.link(edge)
    assert len(lk.vertex_keys) == 2 and len(lk.apartments) == 1


def test_top_homology_of_buildings():
    assert homology(bldg("A(p=2,n=2)").complex()).nonzero() == {0: 2}
    assert homology(bldg("A(p=3,n=2)").complex()).nonzero() == {0: 3}
    h = homology(bldg("A(p=2,n=3)").complex())
    assert h.nonzero() == {1: 8} and not h.has_torsion()


def test_matrix_action_is_a_homomorphism():
    b = bldg("A(p=3,n=2)")
    gens = gf.general_linear_generators(3, 2)
    g, h = gens[0], gens[-1]
    pg, ph = b.vertex_permutation(g), b.vertex_permutation(h)
    pgh = b.vertex_permutation(gf.mat_mul(g, h, 3))
    assert pgh == [pg[ph[v]] for v in range(len(pg))]
    assert b.vertex_permutation(gf.identity(2)) == list(range(4))


@pytest.mark.parametrize("spec", ["A(p=4,n=2)", "A(p=2,n=1)", "B(p=2,n=2)", "thin:Z9"])
def test_bad_specs(spec):
    with pytest.raises(ValueError):
        build_building(spec)
