"""Posets of decompositions attached to a building, and the maps between them.

Element keys are tagged tuples over building vertex indices:

``("s", verts)``          a simplex (face poset part)
``("S", verts)``          a Levi sphere, by its vertex set
``("p", verts, verts)``   an ordered pair of opposite simplices
``("Y", verts)``          a convex subcomplex, by its vertex set
``("d", verts)``          an unordered decomposition of the vector space (type A)
``("o", verts)``          an ordered decomposition, parts in order

Vertex tuples are sorted except in ``("o", ...)``.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from typing import Callable

from .building import Building
from .homology import (HomologyResult, homology, induced_map, join_betti, poset_chain_map,
                       subdivision_chain_map)
from .poset import (Poset, PosetMap, SimplicialComplex, barycentric_subdivision, bits,
                    find_isomorphism, poset_join)


def _t(s) -> tuple[int, ...]:
    return tuple(sorted(s))


def transport(key, vperm):
    """Image of an element key under a permutation of building vertices."""
    tag = key[0]
    if tag in ("s", "S", "Y", "d"):
        return (tag, _t(vperm[v] for v in key[1]))
    if tag == "p":
        return ("p", _t(vperm[v] for v in key[1]), _t(vperm[v] for v in key[2]))
    if tag == "o":
        return ("o", tuple(vperm[v] for v in key[1]))
    if tag in ("1", "2"):
        return (tag, transport(key[1], vperm))
    raise ValueError(f"unknown key {key!r}")


def transport_chain(chain, vperm, poset: Poset) -> tuple:
    return tuple(sorted((transport(k, vperm) for k in chain), key=poset.index))


def key_str(b: Building, key) -> str:
    """Readable, deterministic string for an element key."""
    tag = key[0]
    if tag == "p":
        return f"p{b.face_key(key[1])}|{b.face_key(key[2])}"
    if tag == "o":
        return "o(" + ",".join(b.labels[v] for v in key[1]) + ")"
    if tag in ("1", "2"):
        return f"{tag}:{key_str(b, key[1])}"
    if isinstance(tag, tuple) or tag == "c":
        return "[" + ";".join(key_str(b, k) for k in key) + "]"
    return tag + b.face_key(key[1])


def _vertices_of(key) -> set[int]:
    tag = key[0]
    if tag == "p":
        return set(key[1]) | set(key[2])
    if tag in ("1", "2"):
        return _vertices_of(key[1])
    return set(key[1])


class Decompositions:
    """All decomposition posets of one building, built lazily and cached."""

    def __init__(self, b: Building):
        self.b = b

    # building-side posets ---------------------------------------------
    @cached_property
    def face_poset(self) -> Poset:
        elems = [("s", _t(s)) for s in self.b.simplices]
        rel = []
        for s in self.b.simplices:
            if len(s) > 1:
                for v in s:
                    rel.append((("s", _t(s - {v})), ("s", _t(s))))
        return Poset(elems, rel)

    @cached_property
    def levi_spheres(self) -> list[frozenset[int]]:
        """Levi spheres transported from the model of every apartment."""
        out = set()
        for a in range(len(self.b.apartments)):
            for m in self.b.model.levi_spheres:
                out.add(self.b.mask_to_vertices(a, m))
        return sorted(out, key=lambda s: (-len(s), _t(s)))

    @cached_property
    def opposite_pairs(self) -> list[tuple[frozenset[int], frozenset[int]]]:
        out = set()
        W = self.b.model
        for a in range(len(self.b.apartments)):
            for k in range(W.nsimplices):
                out.add((self.b.from_model(a, k), self.b.from_model(a, W.opposite(k))))
        return sorted(out, key=lambda pr: (-len(pr[0]), _t(pr[0]), _t(pr[1])))

    @cached_property
    def D(self) -> Poset:
        """Levi spheres under reverse inclusion."""
        elems = [("S", _t(s)) for s in self.levi_spheres]
        return Poset.from_order(elems, lambda x, y: x != y and set(y[1]) < set(x[1]))

    @cached_property
    def OD(self) -> Poset:
        """Opposite pairs; ``(s, s') <= (t, t')`` iff ``t <= s`` and ``t' <= s'``."""
        elems = [("p", _t(s), _t(t)) for s, t in self.opposite_pairs]
        return Poset.from_order(
            elems, lambda x, y: x != y and set(y[1]) <= set(x[1]) and set(y[2]) <= set(x[2]))

    @cached_property
    def Y(self) -> Poset:
        """Nonempty convex subcomplexes contained in some apartment, by inclusion."""
        out = set()
        for a in range(len(self.b.apartments)):
            for m in self.b.model.y_masks:
                out.add(self.b.mask_to_vertices(a, m))
        elems = [("Y", _t(s)) for s in sorted(out, key=lambda s: (len(s), _t(s)))]
        return Poset.from_order(elems, lambda x, y: x != y and set(x[1]) < set(y[1]), check=False)

    @cached_property
    def CB(self) -> SimplicialComplex:
        """Common-basis complex: vertex sets of apartments and their subsets."""
        return SimplicialComplex(list(range(len(self.b.vertex_keys))),
                                 facets=[_t(a.vertices) for a in self.b.apartments])

    def _crossed(self, lower: Poset, upper: Poset) -> Poset:
        """Disjoint union with every lower element below an upper one sharing an apartment."""
        apt = lambda k: self.b.apartments_of(_vertices_of(k))  # noqa: E731
        la = [apt(x) for x in lower.elements]
        ua = [apt(y) for y in upper.elements]
        n, m = len(lower), len(upper)
        up = []
        for i in range(n):
            mask = lower.up_mask(i)
            for j in range(m):
                if la[i] & ua[j]:
                    mask |= 1 << (n + j)
            up.append(mask)
        up += [upper.up_mask(j) << n for j in range(m)]
        p = Poset._from_bitsets(list(lower.elements) + list(upper.elements), up)
        _check_transitive(p)
        return p

    def _crossed_by(self, lower: Poset, upper: Poset, rel: Callable) -> Poset:
        n, m = len(lower), len(upper)
        up = []
        for i, x in enumerate(lower.elements):
            mask = lower.up_mask(i)
            for j, y in enumerate(upper.elements):
                if rel(x, y):
                    mask |= 1 << (n + j)
            up.append(mask)
        up += [upper.up_mask(j) << n for j in range(m)]
        p = Poset._from_bitsets(list(lower.elements) + list(upper.elements), up)
        _check_transitive(p)
        return p

    @cached_property
    def PD(self) -> Poset:
        return self._crossed(self.face_poset, self.D)

    @cached_property
    def OPD(self) -> Poset:
        # a simplex lies below (t, t') when one apartment holds the simplex, t and t'
        return self._crossed(self.face_poset, self.OD)

    @cached_property
    def join_model(self) -> Poset:
        """Face poset joined below its opposite."""
        return poset_join(self.face_poset, self.face_poset.op(), tags=("1", "2"))

    # maps -------------------------------------------------------------
    def map_F(self) -> PosetMap:
        """OPD -> PD: identity on simplices, a pair goes to its convex hull."""
        def f(k):
            if k[0] == "s":
                return k
            return ("S", _t(self.b.hull([k[1], k[2]])))
        return PosetMap(self.OPD, self.PD, f)

    def map_phi(self) -> PosetMap:
        """OPD -> join model: a simplex to the lower copy, a pair to its first entry in the upper copy."""
        def f(k):
            if k[0] == "s":
                return ("1", k)
            return ("2", ("s", k[1]))
        return PosetMap(self.OPD, self.join_model, f)

    def gamma_image(self, chain, sphere=None) -> tuple:
        """Convex hull of everything in a chain of PD, together with ``sphere``."""
        vs: set[int] = set(sphere or ())
        for k in chain:
            vs |= set(k[1])
        # spheres are convex, so hulling their vertices one at a time is enough
        return ("Y", _t(self.b.hull([{v} for v in vs])))

    def pd_below(self, sphere) -> Poset:
        """Simplices sharing an apartment with a Levi sphere (the whole PD if ``None``)."""
        if sphere is None:
            return self.PD
        am = self.b.apartments_of(sphere)
        keys = [x for x in self.face_poset.elements if self.b.apartments_of(x[1]) & am]
        return self.PD.subposet(keys)

    def y_above(self, sphere=None) -> Poset:
        if sphere is None:
            return self.Y
        s = set(sphere)
        return self.Y.subposet([y for y in self.Y.elements if s <= set(y[1])])

    def gamma_homology_map(self, sphere=None):
        """Induced map of ``c -> Conv(c, S)`` on homology, through the subdivision."""
        src = self.pd_below(sphere)
        tgt = self.y_above(sphere)
        f = subdivision_chain_map(src, tgt, lambda c: self.gamma_image(c, sphere))
        return induced_map(f, src, tgt)

    def gamma_poset_map(self, sphere=None) -> PosetMap:
        src = self.pd_below(sphere)
        sd = barycentric_subdivision(src)
        return PosetMap(sd, self.y_above(sphere), lambda c: self.gamma_image(c, sphere))

    def phi_homology_map(self):
        return induced_map(poset_chain_map(self.OPD, self.join_model, self.map_phi()),
                           self.OPD, self.join_model)

    # bookkeeping ------------------------------------------------------
    def max_simplex_of(self, sphere) -> frozenset[int]:
        """Lexicographically smallest maximal simplex of a Levi sphere."""
        s = set(sphere)
        inside = [t for t in self.b.simplices if t <= s]
        top = max(len(t) for t in inside)
        return min((t for t in inside if len(t) == top), key=self.b.face_key)

    def wedge_bookkeeping(self) -> dict:
        """Betti numbers predicted by the wedge decompositions of OD and OPD versus computed ones."""
        h_od, h_d = homology(self.OD).betti, homology(self.D).betti
        h_opd, h_pd = homology(self.OPD).betti, homology(self.PD).betti
        pred_od = {k: v for k, v in h_d.items() if v}
        pred_opd = {k: v for k, v in h_pd.items() if v}
        cache: dict = {}
        for S in self.levi_spheres:
            sig = self.max_simplex_of(S)
            d = len(sig) - 1
            if sig not in cache:
                lk = Decompositions(self.b.link(sig))
                cache[sig] = (homology(lk.D).betti, homology(lk.PD).betti)
            hdl, hpdl = cache[sig]
            for k, v in join_betti({d: 1}, hdl).items():
                pred_od[k] = pred_od.get(k, 0) + v
            for k, v in join_betti({2 * d + 1: 1}, hpdl).items():
                pred_opd[k] = pred_opd.get(k, 0) + v
        nz = lambda h: {k: v for k, v in h.items() if v}  # noqa: E731
        return {"OD": nz(h_od), "OD_predicted": nz(pred_od),
                "OPD": nz(h_opd), "OPD_predicted": nz(pred_opd),
                "ok": nz(h_od) == nz(pred_od) and nz(h_opd) == nz(pred_opd)}

    def lower_interval_check(self) -> dict:
        """Spheres strictly containing ``S`` against Levi spheres of the link of a maximal simplex of ``S``.

        ``T`` goes to the link of that simplex inside ``T``.
        """
        bad = []
        for S in self.levi_spheres:
            sig = self.max_simplex_of(S)
            lk = self.b.link(sig)
            local = {v: i for i, v in enumerate(lk.parent_vertex)}
            src = self.D.lower_subposet(("S", _t(S)))
            tgt = Decompositions(lk).D
            try:
                f = PosetMap(src, tgt, lambda T: ("S", _t(local[v] for v in T[1] if v in local)))
                ok = f.is_isomorphism()
            except (KeyError, ValueError):
                ok = False
            if not ok:
                bad.append(self.b.face_key(S))
        return {"spheres": len(self.levi_spheres), "failures": bad, "ok": not bad}

    def upper_interval_probe(self) -> list[dict]:
        """Homology of the upper intervals above each simplex in OPD and PD."""
        rows = []
        dd = self.b.dim
        for x in self.face_poset.elements:
            exp = 2 * dd - (len(x[1]) - 1)
            row = {"simplex": self.b.face_key(x[1]), "expected_dim": exp}
            for name, P in (("OPD", self.OPD), ("PD", self.PD)):
                up = P.upper_subposet(x)
                h = homology(up)
                row[name] = {str(k): v for k, v in h.nonzero().items()}
                row[name + "_spherical"] = (up.dim == exp and not h.has_torsion()
                                           and all(k >= exp for k in h.nonzero()))
            rows.append(row)
        return rows


def parabolic_iso_check(W) -> dict:
    """Levi spheres of a Coxeter complex plus the empty one, under reverse inclusion, versus parabolic subgroups.

    The explicit map sends a sphere to its pointwise fixer.  Isomorphism search is run
    against parabolics ordered by inclusion and by reverse inclusion.
    """
    masks = list(W.levi_spheres) + [0]
    dbar = Poset.from_order(masks, lambda a, b: a != b and a & b == b, check=False)
    inc = W.parabolic_poset(reverse=False)
    try:
        explicit = PosetMap(dbar, inc, W.pointwise_fixer).is_isomorphism()
    except (KeyError, ValueError):
        explicit = False
    return {"spheres": len(masks), "parabolics": len(inc), "explicit_map_iso": explicit,
            "iso_inclusion": find_isomorphism(dbar, inc) is not None,
            "iso_reverse_inclusion": find_isomorphism(dbar, W.parabolic_poset(reverse=True)) is not None}


def interval_sphere_probe(b: Building) -> list[dict]:
    """For each Levi sphere ``S`` of a thin building: ``K -> K meet Lk(sigma)`` on ``Y_{>S}``.

    Reports whether the map lands in Y of the link, whether it induces a homology
    isomorphism, and whether it is injective or surjective on elements.
    """
    dec = decompositions(b)
    rows = []
    for S in dec.levi_spheres:
        sig = dec.max_simplex_of(S)
        lk = b.link(sig)
        local = {v: i for i, v in enumerate(lk.parent_vertex)}
        src = dec.Y.subposet([y for y in dec.Y.elements if set(S) < set(y[1])])
        tgt = Decompositions(lk).Y
        row = {"sphere": b.face_key(S), "simplex": b.face_key(sig), "size": len(src),
               "link_size": len(tgt)}
        try:
            f = PosetMap(src, tgt, lambda K: ("Y", _t(local[v] for v in K[1] if v in local)))
        except (KeyError, ValueError):
            row.update(well_defined=False, homology_iso=False, injective=None, surjective=None)
            rows.append(row)
            continue
        imgs = f.images
        im = induced_map(poset_chain_map(src, tgt, f), src, tgt)
        row.update(well_defined=True, homology_iso=im.iso, injective=len(set(imgs)) == len(imgs),
                   surjective=len(set(imgs)) == len(tgt))
        rows.append(row)
    return rows


def _check_transitive(p: Poset) -> None:
    for i in range(len(p)):
        for j in bits(p.up_mask(i)):
            if p.up_mask(j) & ~p.up_mask(i):
                raise AssertionError("constructed relation is not transitive")


# ---------------------------------------------------------------------------
# vector-space posets (type A)

class VectorDecompositions:
    """Decomposition posets of GF(p)^n, keyed by vertex indices of its building."""

    def __init__(self, b: Building):
        if b.kind != "typeA":
            raise ValueError("vector-space posets need a type-A building")
        self.b = b
        self.dec = Decompositions(b)
        p, n = b.field
        self.n = n
        subs = b.vertex_keys
        self.leq = [0] * len(subs)
        for i, S in enumerate(subs):
            for j, T in enumerate(subs):
                if S <= T:
                    self.leq[i] |= 1 << j

    @cached_property
    def _independent(self) -> list[tuple[tuple[int, ...], int]]:
        subs = self.b.vertex_keys
        p, n = self.b.field
        zero = subs[0].__class__(p, n, ())
        out = []

        def rec(start, chosen, span):
            for i in range(start, len(subs)):
                new = span + subs[i]
                if new.dim == span.dim + subs[i].dim:
                    c = chosen + (i,)
                    out.append((c, new.dim))
                    if new.dim < n:
                        rec(i + 1, c, new)
        rec(0, (), zero)
        return out

    def span_dim(self, parts) -> int:
        return sum(self.b.vertex_keys[v].dim for v in parts)

    def span_vertex(self, parts) -> int | None:
        p, n = self.b.field
        from .gf import total_span
        S = total_span([self.b.vertex_keys[v] for v in parts], p, n)
        return None if S.dim == n else self.b.vertex_index[S]

    def _refines(self, a, b) -> bool:
        return all(any(self.leq[s] >> t & 1 for t in b) for s in a)

    def _ordered_leq(self, a, b) -> bool:
        kappa = []
        for s in a:
            k = next((k for k, t in enumerate(b) if self.leq[s] >> t & 1), None)
            if k is None:
                return False
            kappa.append(k)
        return all(x <= y for x, y in zip(kappa, kappa[1:]))

    @cached_property
    def PD(self) -> Poset:
        elems = [("d", c) for c, _ in self._independent]
        return Poset.from_order(elems, lambda x, y: x != y and self._refines(x[1], y[1]))

    @cached_property
    def D(self) -> Poset:
        return self.PD.subposet([x for x in self.PD.elements
                                 if len(x[1]) > 1 and self.span_dim(x[1]) == self.n])

    @cached_property
    def OPD(self) -> Poset:
        import itertools
        elems = [("o", perm) for c, _ in self._independent for perm in itertools.permutations(c)]
        return Poset.from_order(elems, lambda x, y: x != y and self._ordered_leq(x[1], y[1]))

    @cached_property
    def OD(self) -> Poset:
        return self.OPD.subposet([x for x in self.OPD.elements
                                  if len(x[1]) > 1 and self.span_dim(x[1]) == self.n])

    @cached_property
    def CB(self) -> SimplicialComplex:
        return self.dec.CB

    def _crossed(self, upper: Poset) -> Poset:
        return self.dec._crossed(self.dec.face_poset, upper)

    @cached_property
    def K2(self) -> Poset:
        return self._crossed(self.D)

    @cached_property
    def OK2(self) -> Poset:
        return self._crossed(self.OD)

    def phi_on_chain(self, chain) -> tuple:
        """``sigma_1`` empty gives the flag of spans, otherwise the largest full decomposition."""
        full = [x for x in chain if self.span_dim(x[1]) == self.n]
        if full:
            return full[-1] if len(full) == 1 else max(full, key=self._chain_rank(chain))
        verts = {self.span_vertex(x[1]) for x in chain}
        return ("s", _t(verts))

    @staticmethod
    def _chain_rank(chain):
        pos = {k: i for i, k in enumerate(chain)}
        return pos.__getitem__

    def phi_map(self, ordered: bool = True, sub: Poset | None = None, target: Poset | None = None):
        """Induced homology map of the crossed map, through the subdivision."""
        src = sub if sub is not None else (self.OPD if ordered else self.PD)
        tgt = target if target is not None else (self.OK2 if ordered else self.K2)
        f = subdivision_chain_map(src, tgt, self.phi_on_chain)
        return induced_map(f, src, tgt)

    def phi_poset_map(self, ordered: bool = True) -> PosetMap:
        src = self.OPD if ordered else self.PD
        tgt = self.OK2 if ordered else self.K2
        return PosetMap(barycentric_subdivision(src), tgt, self.phi_on_chain)

    def od_to_building(self, key) -> tuple:
        """``(S_1..S_r)`` goes to the pair of partial-sum flags from the left and from the right."""
        parts = key[1]
        left = [self.span_vertex(parts[:i]) for i in range(1, len(parts))]
        right = [self.span_vertex(parts[len(parts) - i:]) for i in range(1, len(parts))]
        return ("p", _t(left), _t(right))

    def d_to_building(self, key) -> tuple:
        """A decomposition goes to the vertex set of sums of proper nonempty sets of parts."""
        parts = key[1]
        vs = set()
        for r in range(1, len(parts)):
            for J in itertools.combinations(parts, r):
                vs.add(self.span_vertex(J))
        return ("S", _t(vs))


# ---------------------------------------------------------------------------
# functional interface, one cached Decompositions per building

def decompositions(b: Building) -> Decompositions:
    d = getattr(b, "_decompositions", None)
    if d is None:
        d = b._decompositions = Decompositions(b)
    return d


def vector_decompositions(b: Building) -> VectorDecompositions:
    d = getattr(b, "_vector_decompositions", None)
    if d is None:
        d = b._vector_decompositions = VectorDecompositions(b)
        d.dec = decompositions(b)
    return d


def build_CB(b): return decompositions(b).CB
def build_Y(b): return decompositions(b).Y
def build_D(b): return decompositions(b).D
def build_OD(b): return decompositions(b).OD
def build_PD(b): return decompositions(b).PD
def build_OPD(b): return decompositions(b).OPD
def map_F(b): return decompositions(b).map_F()
def map_phi(b): return decompositions(b).map_phi()
def map_Gamma(b, sphere=None): return decompositions(b).gamma_poset_map(sphere)
def wedge_bookkeeping(b): return decompositions(b).wedge_bookkeeping()
def conjecture_probe_upper_intervals(b): return decompositions(b).upper_interval_probe()


def build_vector_posets(b) -> dict:
    v = vector_decompositions(b)
    return {"PD": v.PD, "OPD": v.OPD, "D": v.D, "OD": v.OD, "CB": v.CB}


def crossed_posets_vector(b) -> dict:
    v = vector_decompositions(b)
    return {"K2": v.K2, "OK2": v.OK2}
