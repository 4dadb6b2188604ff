import itertools

import pytest

from decomp import gf


def test_prime():
    assert [p for p in range(20) if gf.is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_subspace_counts():
    # Gaussian binomials
    assert len(gf.all_subspaces(2, 3, 1)) == 7
    assert len(gf.all_subspaces(2, 3, 2)) == 7
    assert len(gf.all_subspaces(3, 3, 1)) == 13
    assert len(gf.all_subspaces(3, 2, 1)) == 4
    assert len(gf.proper_subspaces(2, 4)) == 15 + 35 + 15


def test_canonical_key():
    a = gf.Subspace.span([(1, 1, 0), (0, 1, 1)], 2, 3)
    b = gf.Subspace.span([(1, 0, 1), (1, 1, 0)], 2, 3)
    assert a == b and a.key == b.key == "101011"


def test_lattice_ops():
    e = [gf.Subspace.span([v], 2, 3) for v in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    P = e[0] + e[1]
    assert P.dim == 2 and e[0] <= P and e[0] < P and not (e[2] <= P)
    assert gf.intersection(P, e[1] + e[2]) == e[1]
    assert gf.is_direct(e) and not gf.is_direct([P, e[1]])
    assert len(list(P.vectors())) == 4


def test_meet_dimension_formula():
    subs = gf.proper_subspaces(2, 3)
    for a, b in itertools.product(subs, repeat=2):
        assert (a + b).dim + gf.intersection(a, b).dim == a.dim + b.dim


def test_generators_generate():
    # closure under the generators reaches every nonzero vector
    for p, n in ((2, 2), (3, 2), (2, 3)):
        gens = gf.general_linear_generators(p, n)
        seen = {tuple(int(i == 0) for i in range(n))}
        todo = list(seen)
        while todo:
            v = todo.pop()
            for g in gens:
                w = gf.mat_vec(g, v, p)
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        assert len(seen) == p**n - 1
    assert gf.gl_order(2, 3) == 168 and gf.gl_order(3, 2) == 48


def test_rank():
    assert gf.rank([(1, 1), (1, 1)], 2) == 1
    assert gf.rank([(1, 2), (2, 1)], 3) == 1
    assert gf.rank([(1, 2), (2, 1)], 5) == 2


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_primitive_root(p):
    g = gf.primitive_root(p)
    assert len({pow(g, k, p) for k in range(1, p)}) == p - 1
