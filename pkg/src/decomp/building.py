"""Spherical buildings with their complete apartment systems.

A building is stored as a vertex list plus a list of apartments.  Each
apartment carries an explicit isomorphism from the Coxeter complex of its
model system, so convexity, opposition and projections are computed in the
model and carried back.  Convex subcomplexes are full, so a vertex set
determines them.

Two families are provided: thin buildings (a single Coxeter complex) and the
type-A buildings of proper nonzero subspaces of GF(p)^n.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

from . import gf
from .coxeter import CoxeterSystem, build_coxeter
from .poset import BudgetExceeded, Poset, SimplicialComplex, bits

MAX_FIELD_POINTS = 64
MAX_APARTMENTS = 100_000


@dataclass(frozen=True)
class Apartment:
    """One apartment: its vertex set and the model-vertex to building-vertex map."""

    vertices: frozenset[int]
    to_bldg: tuple[int, ...]

    @cached_property
    def from_bldg(self) -> dict[int, int]:
        return {b: m for m, b in enumerate(self.to_bldg)}


class Building:
    """A spherical building given by apartments modelled on one Coxeter system."""

    def __init__(self, name: str, model: CoxeterSystem, vertex_keys: list, labels: list[str],
                 apartments: list[Apartment], kind: str = "custom", field: tuple[int, int] | None = None):
        self.name = name
        self.model = model
        self.vertex_keys = vertex_keys
        self.labels = labels
        self.apartments = apartments
        self.kind = kind
        self.field = field
        self.vertex_index = {k: i for i, k in enumerate(vertex_keys)}
        simp: set[frozenset[int]] = set()
        for a in apartments:
            for sv in model.simplex_vertices:
                simp.add(frozenset(a.to_bldg[v] for v in sv))
        self.simplices: list[frozenset[int]] = sorted(simp, key=lambda s: (len(s), sorted(s)))
        self.simplex_index = {s: i for i, s in enumerate(self.simplices)}
        va = [0] * len(vertex_keys)
        for i, a in enumerate(apartments):
            for v in a.vertices:
                va[v] |= 1 << i
        self._vertex_apts = va
        self.all_apartments = (1 << len(apartments)) - 1

    def __repr__(self) -> str:
        return (f"Building({self.name}, vertices={len(self.vertex_keys)}, "
                f"apartments={len(self.apartments)}, dim={self.dim})")

    @property
    def dim(self) -> int:
        return self.model.dim

    @property
    def rank(self) -> int:
        return self.model.rank

    @cached_property
    def chambers(self) -> list[frozenset[int]]:
        return [s for s in self.simplices if len(s) == self.rank]

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(list(range(len(self.vertex_keys))),
                                 faces=[tuple(sorted(s)) for s in self.simplices])

    def face_key(self, s) -> str:
        return "{" + ",".join(sorted(self.labels[v] for v in s)) + "}"

    # apartments -------------------------------------------------------
    def apartments_of(self, vertices) -> int:
        """Bitmask of apartments containing every given vertex."""
        m = self.all_apartments
        for v in vertices:
            m &= self._vertex_apts[v]
        return m

    def apartments_containing(self, simplices) -> list[int]:
        vs = set().union(*simplices) if simplices else set()
        return list(bits(self.apartments_of(vs)))

    def _apartment_for(self, vertices) -> int:
        m = self.apartments_of(vertices)
        if not m:
            raise ValueError("no apartment contains the given simplices")
        return (m & -m).bit_length() - 1

    def to_model(self, a: int, simplex) -> int:
        ap = self.apartments[a]
        return self.model.by_vertices[frozenset(ap.from_bldg[v] for v in simplex)]

    def from_model(self, a: int, k: int) -> frozenset[int]:
        ap = self.apartments[a]
        return frozenset(ap.to_bldg[v] for v in self.model.simplex_vertices[k])

    def mask_to_vertices(self, a: int, mask: int) -> frozenset[int]:
        ap = self.apartments[a]
        return frozenset(ap.to_bldg[v] for v in self.model.mask_vertices(mask))

    # convexity --------------------------------------------------------
    def hull(self, simplices, apartment: int | None = None) -> frozenset[int]:
        """Vertex set of the convex hull of simplices lying in a common apartment."""
        simplices = [frozenset(s) for s in simplices]
        vs = set().union(*simplices) if simplices else set()
        a = self._apartment_for(vs) if apartment is None else apartment
        ks = [self.to_model(a, s) for s in simplices if s]
        return self.mask_to_vertices(a, self.model.convex_hull(ks))

    def hull_all_apartments(self, simplices) -> set[frozenset[int]]:
        """Hull computed separately in every containing apartment."""
        simplices = [frozenset(s) for s in simplices]
        vs = set().union(*simplices)
        return {self.hull(simplices, a) for a in bits(self.apartments_of(vs))}

    def are_opposite(self, s, t) -> bool:
        """Opposition via the Coxeter model of a common apartment."""
        s, t = frozenset(s), frozenset(t)
        m = self.apartments_of(s | t)
        if not m or not s or not t:
            return False
        a = (m & -m).bit_length() - 1
        return self.model.opposite(self.to_model(a, s)) == self.to_model(a, t)

    def opposite_in(self, a: int, s) -> frozenset[int]:
        return self.from_model(a, self.model.opposite(self.to_model(a, s)))

    def projection(self, s, t) -> frozenset[int]:
        s, t = frozenset(s), frozenset(t)
        a = self._apartment_for(s | t)
        return self.from_model(a, self.model.projection(self.to_model(a, s), self.to_model(a, t)))

    def is_simplex(self, vertices) -> bool:
        return frozenset(vertices) in self.simplex_index or not vertices

    # links ------------------------------------------------------------
    def link(self, sigma) -> "Building":
        """The link of a simplex, with apartments the links of apartments containing it."""
        sigma = frozenset(sigma)
        if not self.is_simplex(sigma):
            raise ValueError("not a simplex")
        apts = list(bits(self.apartments_of(sigma)))
        k0 = self.to_model(apts[0], sigma)
        I = sorted(self.model.types[k0])
        sub, embed = _parabolic_cached(self.model, tuple(I))
        full = frozenset(range(self.model.rank))
        seen: dict[frozenset[int], tuple[int, ...]] = {}
        for a in apts:
            ap = self.apartments[a]
            w = self.model.reps[self.to_model(a, sigma)]
            to_parent = []
            for kv in sub.vertex_ids:
                (missing,) = set(range(sub.rank)) - sub.types[kv]
                x = self.model.mul(w, embed[sub.reps[kv]])
                s = I[missing]
                pk = self.model.coset_of[full - {s}][x]
                to_parent.append(ap.to_bldg[self.model.vertex_pos[pk]])
            vs = frozenset(to_parent)
            seen.setdefault(vs, tuple(to_parent))
        verts = sorted(set().union(*seen)) if seen else []
        local = {v: i for i, v in enumerate(verts)}
        new_apts = [Apartment(frozenset(local[v] for v in vs), tuple(local[v] for v in tp))
                    for vs, tp in sorted(seen.items(), key=lambda kv: sorted(kv[0]))]
        b = Building(f"Lk({self.face_key(sigma)}) in {self.name}", sub,
                     [self.vertex_keys[v] for v in verts], [self.labels[v] for v in verts],
                     new_apts, kind="link", field=self.field)
        b.parent_vertex = verts
        return b

    # group actions ----------------------------------------------------
    def vertex_permutation(self, g) -> list[int]:
        """Permutation of vertex indices induced by a group element.

        For a type-A building ``g`` is an invertible matrix; for a thin building
        it is an element index of the Coxeter group acting on the left.
        """
        if self.kind == "typeA":
            p, n = self.field
            return [self.vertex_index[s.image(g)] for s in self.vertex_keys]
        if self.kind == "thin":
            return self.model.left_action_on_vertices(g)
        raise ValueError("no group action for this building")

    def automorphism_generators(self) -> list:
        if self.kind == "typeA":
            return gf.general_linear_generators(*self.field)
        if self.kind == "thin":
            return [self.model.word_element((s,)) for s in range(self.model.rank)]
        return []


_PARABOLIC_CACHE: dict = {}


def _parabolic_cached(model: CoxeterSystem, I: tuple[int, ...]):
    key = (id(model), I)
    if key not in _PARABOLIC_CACHE:
        _PARABOLIC_CACHE[key] = (model,) + model.parabolic(I)
    return _PARABOLIC_CACHE[key][1:]


def build_thin(spec) -> Building:
    """The Coxeter complex of a finite Coxeter system as a building with one apartment."""
    W = spec if isinstance(spec, CoxeterSystem) else build_coxeter(spec)
    nv = len(W.vertex_ids)
    ap = Apartment(frozenset(range(nv)), tuple(range(nv)))
    labels = [W.simplex_key(k) for k in W.vertex_ids]
    return Building(f"thin:{W.name}", W, list(range(nv)), labels, [ap], kind="thin")


def _word_permutation(word, n: int) -> list[int]:
    perm = list(range(n))
    for s in reversed(word):
        perm = [s + 1 if x == s else s if x == s + 1 else x for x in perm]
    return perm


def build_typeA(p: int, n: int, max_points: int = MAX_FIELD_POINTS,
                max_apartments: int = MAX_APARTMENTS) -> Building:
    """The building of proper nonzero subspaces of GF(p)^n with its apartments (frames)."""
    if not gf.is_prime(p):
        raise ValueError("p must be prime")
    if n < 2:
        raise ValueError("n must be at least 2")
    if p**n > max_points:
        raise BudgetExceeded(f"p^n = {p**n} exceeds the bound {max_points}")
    subs = gf.proper_subspaces(p, n)
    vindex = {s: i for i, s in enumerate(subs)}
    lines = [s for s in subs if s.dim == 1]
    model = build_coxeter(f"A{n - 1}")
    # model vertex -> subset of frame positions
    full = frozenset(range(n - 1))
    vsubsets = []
    for k in model.vertex_ids:
        (s,) = full - model.types[k]
        perm = _word_permutation(model.words[model.reps[k]], n)
        vsubsets.append(frozenset(perm[i] for i in range(s + 1)))
    apartments = []
    for frame in itertools.combinations(lines, n):
        if not gf.is_direct(frame):
            continue
        if len(apartments) >= max_apartments:
            raise BudgetExceeded(f"more than {max_apartments} apartments")
        to_b = tuple(vindex[gf.total_span([frame[i] for i in J], p, n)] for J in vsubsets)
        apartments.append(Apartment(frozenset(to_b), to_b))
    labels = [s.key for s in subs]
    b = Building(f"A(p={p},n={n})", model, subs, labels, apartments, kind="typeA", field=(p, n))
    b.frames = [tuple(vindex[l] for l in frame) for frame in itertools.combinations(lines, n)
                if gf.is_direct(frame)]
    return b


def build_building(spec: str) -> Building:
    """Parse ``A(p=2,n=3)`` or ``thin:B2``."""
    s = spec.strip()
    m = re.fullmatch(r"A\(\s*p\s*=\s*(-?\d+)\s*,\s*n\s*=\s*(\d+)\s*\)", s)
    if m:
        return build_typeA(int(m.group(1)), int(m.group(2)))
    if s.startswith("thin:"):
        return build_thin(s[5:])
    raise ValueError(f"unknown building {spec!r}; use A(p=..,n=..) or thin:<type>")


# type-A specific tests -----------------------------------------------------

def are_opposite_linear(b: Building, s, t) -> bool:
    """Opposition of flags: equal size and each member has a unique complement in the other."""
    s, t = list(s), list(t)
    if len(s) != len(t) or not s:
        return False
    p, n = b.field
    for x in s:
        S = b.vertex_keys[x]
        comps = [y for y in t if S.dim + b.vertex_keys[y].dim == n
                 and (S + b.vertex_keys[y]).dim == n]
        if len(comps) != 1:
            return False
    return True


def common_basis_test(b: Building, subspaces) -> bool:
    """Whether the subspaces have a common basis, via apartments (frames)."""
    vs = []
    for S in subspaces:
        if S.dim == 0 or S.dim == b.field[1]:
            continue
        vs.append(b.vertex_index[S])
    return bool(b.apartments_of(vs))


def generated_lattice(subspaces, p: int, n: int) -> set:
    """Closure of a family of subspaces under sum and intersection."""
    out = set(subspaces)
    frontier = list(out)
    while frontier:
        new = []
        for a in frontier:
            for c in list(out):
                for x in (a + c, gf.intersection(a, c)):
                    if x not in out:
                        out.add(x)
                        new.append(x)
        frontier = new
    return out


def is_distributive_family(subspaces, p: int, n: int) -> bool:
    """Distributivity of the generated sublattice; equivalent to having a common basis."""
    lat = list(generated_lattice(list(subspaces), p, n))
    for a, c, d in itertools.product(lat, repeat=3):
        if gf.intersection(a, c + d) != gf.intersection(a, c) + gf.intersection(a, d):
            return False
    return True


def brute_force_common_basis(subspaces, p: int, n: int) -> bool:
    """Search all bases (small cases only)."""
    vecs = [v for v in itertools.product(range(p), repeat=n) if any(v)]
    for basis in itertools.combinations(vecs, n):
        if gf.rank(basis, p) != n:
            continue
        spans = set()
        for r in range(0, n + 1):
            for J in itertools.combinations(basis, r):
                spans.add(gf.Subspace.span(J, p, n))
        if all(S in spans for S in subspaces):
            return True
    return False
