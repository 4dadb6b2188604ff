import json

import pytest

from decomp.homology import homology
from decomp.poset import (GroupAction, Poset, PosetMap, SimplicialComplex, barycentric_subdivision,
                          find_isomorphism, fixed_points, height_skeleton, order_complex, poset_join)


def chain(*xs):
    return Poset(list(xs), list(zip(xs, xs[1:])))


def antichain(*xs):
    return Poset(list(xs), [])


def hexagon():
    return SimplicialComplex(list(range(6)), facets=[(i, (i + 1) % 6) for i in range(6)])


def test_closure_and_queries():
    p = Poset("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    assert p.less("a", "c") and not p.less("c", "a") and not p.less("b", "d")
    assert p.leq("b", "b")
    assert sorted(p.upper("a")) == ["b", "c", "d"]
    assert p.interval("a", "c") == ["b"]
    assert p.height("c") == 2 and p.dim == 2
    assert sorted(p.minimal()) == ["a"] and sorted(p.maximal()) == ["c", "d"]


def test_cycle_rejected():
    with pytest.raises(ValueError):
        Poset("ab", [("a", "b"), ("b", "a")])
    with pytest.raises(ValueError):
        Poset.from_order("ab", lambda x, y: True)


def test_order_complex_small():
    k = order_complex(antichain(1, 2, 3))
    assert k.dim == 0 and len(k) == 3
    k = order_complex(chain("a", "b", "c"))
    assert k.dim == 2 and len(k.facets()) == 1


def test_hexagon_face_poset_subdivides_to_12_gon():
    k = order_complex(hexagon().face_poset())
    assert k.f_vector() == [12, 12]
    assert homology(k).nonzero() == {1: 1}


def test_join_examples():
    j = poset_join(antichain("a", "b"), antichain("c", "d"))
    assert order_complex(j).f_vector() == [4, 4]
    x = chain(1, 2)
    assert poset_join(x, Poset([], [])).same_order(x)
    k33 = poset_join(antichain(1, 2, 3), antichain(4, 5, 6))
    assert homology(k33).nonzero() == {1: 4}


def test_join_renames_clashing_keys():
    x = antichain("a", "b")
    j = poset_join(x, x)
    assert set(j.elements) == {("L", "a"), ("L", "b"), ("R", "a"), ("R", "b")}


def test_subdivision_examples():
    s = barycentric_subdivision(antichain("x"))
    assert s.elements == [("x",)]
    s = barycentric_subdivision(chain("a", "b"))
    assert sorted(s.elements) == [("a",), ("a", "b"), ("b",)]
    assert order_complex(s).f_vector() == [3, 2]
    p = Poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    assert find_isomorphism(barycentric_subdivision(p), barycentric_subdivision(p.op())) is not None


def test_height_skeleton():
    p = Poset("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    assert height_skeleton(p, 5).same_order(p)
    assert sorted(height_skeleton(p, 0).elements) == ["a"]
    assert sorted(height_skeleton(p, 1).elements) == ["a", "b", "d"]


def test_links():
    h = hexagon()
    assert h.link(()).f_vector() == h.f_vector()
    assert h.link((0,)).f_vector() == [2]
    with pytest.raises(ValueError):
        h.link((0, 3))


def test_fixed_points():
    p = antichain(0, 1, 2)
    assert fixed_points(p, GroupAction(p, [])).same_order(p)
    free = GroupAction(p, [[1, 2, 0]])
    assert len(fixed_points(p, free)) == 0
    assert free.orbits() == [[0, 1, 2]]


def test_fixed_points_commute_with_subdivision():
    # reflection of a square's face poset
    sq = SimplicialComplex([0, 1, 2, 3], facets=[(0, 1), (1, 2), (2, 3), (0, 3)])
    p = sq.face_poset()
    perm = {0: 0, 1: 3, 2: 2, 3: 1}
    g = lambda f: tuple(sorted(perm[v] for v in f))  # noqa: E731
    act = GroupAction.from_key_maps(p, [g])
    sd = barycentric_subdivision(p)
    gsd = lambda c: tuple(sorted((g(x) for x in c), key=p.index))  # noqa: E731
    left = fixed_points(sd, GroupAction.from_key_maps(sd, [gsd]))
    right = barycentric_subdivision(fixed_points(p, act))
    assert sorted(left.elements) == sorted(right.elements)
    assert left.same_order(right.subposet(left.elements))


def test_group_action_rejects_non_automorphism():
    p = chain(0, 1)
    with pytest.raises(ValueError):
        GroupAction(p, [[1, 0]])


def test_poset_map_checks_order():
    p, q = chain("a", "b"), chain("x", "y")
    assert PosetMap(p, q, {"a": "x", "b": "y"}).is_isomorphism()
    with pytest.raises(ValueError):
        PosetMap(p, q, {"a": "y", "b": "x"})
    assert not PosetMap(p, q, {"a": "x", "b": "x"}).is_isomorphism()


def test_json_roundtrip():
    p = Poset("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    text = p.to_json()
    q = Poset.from_json(text)
    assert q.to_json() == text and q.same_order(p)
    data = json.loads(text)
    assert set(data) == {"elements", "covers"}
    k = hexagon()
    assert SimplicialComplex.from_json(k.to_json(str)).to_json(str) == k.to_json(str)


def test_isomorphism_search():
    p = Poset("abc", [("a", "b"), ("a", "c")])
    q = Poset("xyz", [("y", "x"), ("y", "z")])
    f = find_isomorphism(p, q)
    assert f["a"] == "y"
    assert find_isomorphism(p, q.op()) is None
