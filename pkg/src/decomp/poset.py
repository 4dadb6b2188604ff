"""Finite posets, simplicial complexes and the constructions between them.

A :class:`Poset` keeps its elements in a linear extension of the order, so an
increasing index tuple is the same thing as a chain.  Order relations are held
as Python-int bitsets, one up-set and one down-set per element.
"""
from __future__ import annotations

import heapq
import itertools
import json
from collections import deque
from typing import Callable, Hashable, Iterable, Iterator, Sequence

Key = Hashable


class BudgetExceeded(RuntimeError):
    """A construction would exceed its configured size bound."""


def bits(m: int) -> Iterator[int]:
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def popcount(m: int) -> int:
    return bin(m).count("1")


class Poset:
    """A finite poset.

    ``relations`` is any iterable of pairs ``(a, b)`` with ``a < b``; the order
    is their transitive closure.  A cycle raises ``ValueError``.
    """

    def __init__(self, elements: Iterable[Key], relations: Iterable[tuple[Key, Key]] = ()):
        elems = list(elements)
        idx = {x: i for i, x in enumerate(elems)}
        if len(idx) != len(elems):
            raise ValueError("duplicate poset elements")
        succ: list[set[int]] = [set() for _ in elems]
        for a, b in relations:
            i, j = idx[a], idx[b]
            if i == j:
                raise ValueError(f"reflexive strict relation on {a!r}")
            succ[i].add(j)
        indeg = [0] * len(elems)
        for s in succ:
            for j in s:
                indeg[j] += 1
        order: list[int] = []
        # smallest available index first: an input already in a linear extension keeps its order
        heap = [i for i in range(len(elems)) if indeg[i] == 0]
        heapq.heapify(heap)
        while heap:
            i = heapq.heappop(heap)
            order.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        if len(order) != len(elems):
            raise ValueError("relations contain a cycle")
        # indices follow the topological order found above
        pos = [0] * len(elems)
        for k, i in enumerate(order):
            pos[i] = k
        up = [0] * len(elems)
        for i in reversed(order):
            m = 0
            for j in succ[i]:
                m |= up[pos[j]] | (1 << pos[j])
            up[pos[i]] = m
        self._init([elems[i] for i in order], up)

    def _init(self, elements: list[Key], up: list[int]) -> None:
        self.elements: list[Key] = elements
        self._index = {x: i for i, x in enumerate(elements)}
        self._up = up
        down = [0] * len(elements)
        for i, m in enumerate(up):
            for j in bits(m):
                down[j] |= 1 << i
        self._down = down
        self._covers_down: list[int] | None = None
        self._heights: list[int] | None = None

    @classmethod
    def _from_bitsets(cls, elements: list[Key], up: list[int]) -> "Poset":
        """Trusted constructor: ``up`` must be a transitive strict order on a linear extension."""
        p = cls.__new__(cls)
        p._init(list(elements), list(up))
        if len(p._index) != len(p.elements):
            raise ValueError("duplicate poset elements")
        return p

    @classmethod
    def from_order(cls, elements: Iterable[Key], less: Callable[[Key, Key], bool],
                   check: bool = True) -> "Poset":
        """Build from a strict order predicate evaluated on all pairs."""
        elems = list(elements)
        n = len(elems)
        up = [0] * n
        for i, a in enumerate(elems):
            m = 0
            for j, b in enumerate(elems):
                if i != j and less(a, b):
                    m |= 1 << j
            up[i] = m
        if check:
            for i in range(n):
                if up[i] >> i & 1:
                    raise ValueError("order is not irreflexive")
                for j in bits(up[i]):
                    if up[j] >> i & 1:
                        raise ValueError(f"order is not antisymmetric on {elems[i]!r}, {elems[j]!r}")
                    if up[j] & ~up[i]:
                        raise ValueError(f"order is not transitive at {elems[i]!r} < {elems[j]!r}")
        return cls._sorted_from_up(elems, up)

    @classmethod
    def _sorted_from_up(cls, elems: list[Key], up: list[int]) -> "Poset":
        n = len(elems)
        down = [0] * n
        for i in range(n):
            for j in bits(up[i]):
                down[j] |= 1 << i
        order = sorted(range(n), key=lambda i: (popcount(down[i]), i))
        pos = [0] * n
        for k, i in enumerate(order):
            pos[i] = k
        new_up = []
        for i in order:
            m = 0
            for j in bits(up[i]):
                m |= 1 << pos[j]
            new_up.append(m)
        return cls._from_bitsets([elems[i] for i in order], new_up)

    # basic queries
    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Key]:
        return iter(self.elements)

    def __contains__(self, x: Key) -> bool:
        return x in self._index

    def __repr__(self) -> str:
        return f"Poset(n={len(self)}, dim={self.dim})"

    def index(self, x: Key) -> int:
        return self._index[x]

    def less(self, x: Key, y: Key) -> bool:
        return bool(self._up[self._index[x]] >> self._index[y] & 1)

    def leq(self, x: Key, y: Key) -> bool:
        return x == y or self.less(x, y)

    def up_mask(self, i: int) -> int:
        return self._up[i]

    def down_mask(self, i: int) -> int:
        return self._down[i]

    def upper(self, x: Key, strict: bool = True) -> list[Key]:
        i = self._index[x]
        m = self._up[i] | (0 if strict else 1 << i)
        return [self.elements[j] for j in bits(m)]

    def lower(self, x: Key, strict: bool = True) -> list[Key]:
        i = self._index[x]
        m = self._down[i] | (0 if strict else 1 << i)
        return [self.elements[j] for j in bits(m)]

    def interval(self, x: Key, y: Key) -> list[Key]:
        """Open interval (x, y)."""
        m = self._up[self._index[x]] & self._down[self._index[y]]
        return [self.elements[j] for j in bits(m)]

    def lower_covers(self, i: int) -> list[int]:
        if self._covers_down is None:
            cov = []
            for k in range(len(self)):
                d = self._down[k]
                below = 0
                for j in bits(d):
                    below |= self._down[j]
                cov.append(d & ~below)
            self._covers_down = cov
        return list(bits(self._covers_down[i]))

    def covers(self) -> list[tuple[Key, Key]]:
        """Hasse diagram as pairs ``(lower, upper)``, sorted by index."""
        out = []
        for i in range(len(self)):
            for j in self.lower_covers(i):
                out.append((j, i))
        out.sort()
        return [(self.elements[a], self.elements[b]) for a, b in out]

    def heights(self) -> list[int]:
        if self._heights is None:
            h = [0] * len(self)
            for i in range(len(self)):
                for j in self.lower_covers(i):
                    h[i] = max(h[i], h[j] + 1)
            self._heights = h
        return self._heights

    def height(self, x: Key) -> int:
        """Dimension of the order complex of the closed down-set of ``x``."""
        return self.heights()[self._index[x]]

    @property
    def dim(self) -> int:
        return max(self.heights(), default=-1)

    def minimal(self) -> list[Key]:
        return [x for i, x in enumerate(self.elements) if not self._down[i]]

    def maximal(self) -> list[Key]:
        return [x for i, x in enumerate(self.elements) if not self._up[i]]

    # derived posets
    def subposet(self, keys: Iterable[Key]) -> "Poset":
        """Induced subposet on ``keys`` (order of the parent kept)."""
        idx = sorted({self._index[k] for k in keys})
        mask = 0
        for i in idx:
            mask |= 1 << i
        pos = {i: k for k, i in enumerate(idx)}
        up = []
        for i in idx:
            m = 0
            for j in bits(self._up[i] & mask):
                m |= 1 << pos[j]
            up.append(m)
        return Poset._from_bitsets([self.elements[i] for i in idx], up)

    def subposet_mask(self, mask: int) -> "Poset":
        return self.subposet(self.elements[i] for i in bits(mask))

    def op(self) -> "Poset":
        n = len(self)
        rev = [self.elements[n - 1 - i] for i in range(n)]
        up = []
        for i in range(n):
            m = 0
            for j in bits(self._down[n - 1 - i]):
                m |= 1 << (n - 1 - j)
            up.append(m)
        return Poset._from_bitsets(rev, up)

    def relabel(self, f: Callable[[Key], Key]) -> "Poset":
        return Poset._from_bitsets([f(x) for x in self.elements], self._up)

    def lower_subposet(self, x: Key, strict: bool = True) -> "Poset":
        return self.subposet(self.lower(x, strict))

    def upper_subposet(self, x: Key, strict: bool = True) -> "Poset":
        return self.subposet(self.upper(x, strict))

    def chains(self, max_count: int | None = None) -> Iterator[tuple[int, ...]]:
        """Nonempty chains as increasing index tuples."""
        count = 0
        stack = [(i,) for i in reversed(range(len(self)))]
        while stack:
            c = stack.pop()
            count += 1
            if max_count is not None and count > max_count:
                raise BudgetExceeded(f"more than {max_count} chains")
            yield c
            for j in sorted(bits(self._up[c[-1]]), reverse=True):
                stack.append(c + (j,))

    def is_chain(self, keys: Sequence[Key]) -> bool:
        idx = sorted(self._index[k] for k in keys)
        return all(self._up[a] >> b & 1 for a, b in zip(idx, idx[1:]))

    def same_order(self, other: "Poset") -> bool:
        """Equal as labelled posets."""
        if set(self.elements) != set(other.elements):
            return False
        return all(
            {other.index(y) for y in self.upper(x)} == set(bits(other.up_mask(other.index(x))))
            for x in self.elements
        )

    # serialization
    def to_json(self, key_str: Callable[[Key], str] = str) -> str:
        elems = [key_str(x) for x in self.elements]
        covers = sorted((j, i) for i in range(len(self)) for j in self.lower_covers(i))
        return json.dumps({"elements": elems, "covers": [list(c) for c in covers]},
                          separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "Poset":
        data = json.loads(text)
        elems = data["elements"]
        return cls(elems, [(elems[a], elems[b]) for a, b in data["covers"]])


class SimplicialComplex:
    """A finite abstract simplicial complex.

    Faces are increasing tuples of vertex indices; the empty face is implicit.
    """

    def __init__(self, vertices: Sequence[Key], faces: Iterable[Sequence[int]] = (),
                 facets: Iterable[Sequence[int]] = (), max_faces: int | None = None):
        self.vertices = list(vertices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        allf: set[tuple[int, ...]] = set()
        for f in faces:
            allf.add(tuple(sorted(f)))
        for f in facets:
            f = tuple(sorted(f))
            for r in range(1, len(f) + 1):
                allf.update(itertools.combinations(f, r))
                if max_faces is not None and len(allf) > max_faces:
                    raise BudgetExceeded(f"more than {max_faces} faces")
        allf.discard(())
        self._set_faces(allf)

    def _set_faces(self, allf: set[tuple[int, ...]]) -> None:
        top = max((len(f) for f in allf), default=0)
        by_dim: list[list[tuple[int, ...]]] = [[] for _ in range(top)]
        for f in allf:
            by_dim[len(f) - 1].append(f)
        for lst in by_dim:
            lst.sort()
        self.faces_by_dim = by_dim
        self._faces = allf
        self._facets: list[tuple[int, ...]] | None = None
        self._vertex_facets: list[set[int]] | None = None

    @classmethod
    def from_faces_checked(cls, vertices, faces) -> "SimplicialComplex":
        k = cls(vertices, faces=faces)
        for f in k._faces:
            for r in range(1, len(f)):
                for g in itertools.combinations(f, r):
                    if g not in k._faces:
                        raise ValueError(f"face set not closed under subsets: {g} < {f}")
        return k

    @property
    def dim(self) -> int:
        return len(self.faces_by_dim) - 1

    def __len__(self) -> int:
        return len(self._faces)

    def __contains__(self, face) -> bool:
        return tuple(sorted(face)) in self._faces or len(face) == 0

    def __repr__(self) -> str:
        return f"SimplicialComplex(vertices={len(self.vertices)}, faces={len(self)}, dim={self.dim})"

    def faces(self) -> Iterator[tuple[int, ...]]:
        for lst in self.faces_by_dim:
            yield from lst

    def f_vector(self) -> list[int]:
        return [len(x) for x in self.faces_by_dim]

    def vertex_index(self, v: Key) -> int:
        return self._vindex[v]

    def face_of(self, keys: Iterable[Key]) -> tuple[int, ...]:
        return tuple(sorted(self._vindex[v] for v in keys))

    def facets(self) -> list[tuple[int, ...]]:
        if self._facets is None:
            covered: set[tuple[int, ...]] = set()
            for lst in self.faces_by_dim[1:]:
                for f in lst:
                    covered.update(itertools.combinations(f, len(f) - 1))
            self._facets = [f for f in self.faces() if f not in covered]
        return self._facets

    def _facets_containing(self, face: Sequence[int]) -> list[tuple[int, ...]]:
        if self._vertex_facets is None:
            inc: list[set[int]] = [set() for _ in self.vertices]
            for k, f in enumerate(self.facets()):
                for v in f:
                    inc[v].add(k)
            self._vertex_facets = inc
        fac = self.facets()
        if not face:
            return fac
        ks = set.intersection(*(self._vertex_facets[v] for v in face))
        return [fac[k] for k in sorted(ks)]

    def face_poset(self) -> Poset:
        """Nonempty faces ordered by inclusion; keys are tuples of vertex keys."""
        key = lambda f: tuple(self.vertices[i] for i in f)  # noqa: E731
        elems = [key(f) for f in self.faces()]
        faces = list(self.faces())
        idx = {f: k for k, f in enumerate(faces)}
        succ: list[int] = [0] * len(faces)
        for f in faces:
            if len(f) > 1:
                for g in itertools.combinations(f, len(f) - 1):
                    succ[idx[g]] |= 1 << idx[f]
        # faces are listed by dimension, which is a linear extension
        up = [0] * len(faces)
        for k in reversed(range(len(faces))):
            m = succ[k]
            for j in bits(succ[k]):
                m |= up[j]
            up[k] = m
        return Poset._from_bitsets(elems, up)

    def link(self, face: Sequence[int]) -> "SimplicialComplex":
        """Classical link, identifying a coface ``t`` with ``t`` minus ``face``."""
        face = tuple(sorted(face))
        if face and face not in self._faces:
            raise ValueError("not a face")
        s = set(face)
        rest = set()
        for f in self._facets_containing(face):
            other = tuple(v for v in f if v not in s)
            for r in range(1, len(other) + 1):
                rest.update(itertools.combinations(other, r))
        vset = sorted({v for f in rest for v in f})
        pos = {v: k for k, v in enumerate(vset)}
        return SimplicialComplex([self.vertices[v] for v in vset],
                                 faces=[tuple(pos[v] for v in f) for f in rest])

    def subcomplex(self, faces: Iterable[tuple[int, ...]]) -> "SimplicialComplex":
        """Subcomplex spanned by ``faces`` (closed under subsets), same vertex list."""
        fs = set()
        for f in faces:
            f = tuple(sorted(f))
            for r in range(1, len(f) + 1):
                fs.update(itertools.combinations(f, r))
        k = SimplicialComplex.__new__(SimplicialComplex)
        k.vertices = self.vertices
        k._vindex = self._vindex
        k._set_faces(fs)
        return k

    def to_json(self, key_str: Callable[[Key], str] = str) -> str:
        fac = sorted(self.facets())
        return json.dumps({"elements": [key_str(v) for v in self.vertices],
                           "facets": [list(f) for f in fac]}, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        data = json.loads(text)
        return cls(data["elements"], facets=data["facets"])


def order_complex(p: Poset, max_faces: int | None = None) -> SimplicialComplex:
    """Chains of ``p``; vertex ``i`` of the complex is element ``i`` of ``p``."""
    k = SimplicialComplex.__new__(SimplicialComplex)
    k.vertices = list(p.elements)
    k._vindex = dict(p._index)
    k._set_faces(set(p.chains(max_count=max_faces)))
    return k


def face_poset(k: SimplicialComplex) -> Poset:
    return k.face_poset()


def poset_join(x: Poset, y: Poset, tags: tuple[Key, Key] = ("L", "R")) -> Poset:
    """Every element of ``x`` below every element of ``y``.

    Keys are kept unless the two sides share a key, in which case every key is
    paired with its side tag.
    """
    clash = any(e in y for e in x.elements)
    kx = (lambda e: (tags[0], e)) if clash else (lambda e: e)
    ky = (lambda e: (tags[1], e)) if clash else (lambda e: e)
    n, m = len(x), len(y)
    top = ((1 << m) - 1) << n
    up = [x.up_mask(i) | top for i in range(n)] + [y.up_mask(j) << n for j in range(m)]
    return Poset._from_bitsets([kx(e) for e in x.elements] + [ky(e) for e in y.elements], up)


def barycentric_subdivision(p: Poset, max_count: int | None = None) -> Poset:
    """Poset of nonempty chains of ``p`` (as tuples of keys) ordered by inclusion."""
    chains = sorted(p.chains(max_count=max_count), key=lambda c: (len(c), c))
    idx = {c: k for k, c in enumerate(chains)}
    up = [0] * len(chains)
    for c in reversed(chains):
        if len(c) > 1:
            k = idx[c]
            for r in range(len(c)):
                sub = c[:r] + c[r + 1:]
                up[idx[sub]] |= (1 << k) | up[k]
    elems = [tuple(p.elements[i] for i in c) for c in chains]
    return Poset._from_bitsets(elems, up)


def height_skeleton(p: Poset, i: int) -> Poset:
    h = p.heights()
    return p.subposet(x for k, x in enumerate(p.elements) if h[k] <= i)


class PosetMap:
    """An order-preserving map, checked on the Hasse diagram at construction."""

    def __init__(self, source: Poset, target: Poset, mapping: dict | Callable[[Key], Key],
                 check: bool = True):
        self.source = source
        self.target = target
        f = mapping if callable(mapping) else mapping.__getitem__
        self.images = [f(x) for x in source.elements]
        self._timg = [target.index(y) for y in self.images]
        if check:
            for i in range(len(source)):
                for j in source.lower_covers(i):
                    a, b = self._timg[j], self._timg[i]
                    if a != b and not (target.up_mask(a) >> b & 1):
                        raise ValueError(
                            f"map is not order preserving: {source.elements[j]!r} < "
                            f"{source.elements[i]!r} but images are not comparable")

    def __call__(self, x: Key) -> Key:
        return self.images[self.source.index(x)]

    def image_index(self, i: int) -> int:
        return self._timg[i]

    def is_isomorphism(self) -> bool:
        if len(self.source) != len(self.target) or len(set(self._timg)) != len(self.source):
            return False
        inv = {t: s for s, t in enumerate(self._timg)}
        for b in range(len(self.target)):
            for a in self.target.lower_covers(b):
                if not (self.source.up_mask(inv[a]) >> inv[b] & 1):
                    return False
        return True


class GroupAction:
    """A group acting on a poset by automorphisms, given by generator permutations."""

    def __init__(self, structure: Poset, generators: Iterable[Sequence[int]], check: bool = True):
        self.structure = structure
        self.generators = [tuple(g) for g in generators]
        n = len(structure)
        for g in self.generators:
            if sorted(g) != list(range(n)):
                raise ValueError("generator is not a permutation")
            if check:
                for i in range(n):
                    img = 0
                    for j in bits(structure.up_mask(i)):
                        img |= 1 << g[j]
                    if img != structure.up_mask(g[i]):
                        raise ValueError("generator is not an order automorphism")

    @classmethod
    def from_key_maps(cls, structure: Poset, maps: Iterable[Callable[[Key], Key]],
                      check: bool = True) -> "GroupAction":
        gens = [[structure.index(f(x)) for x in structure.elements] for f in maps]
        return cls(structure, gens, check=check)

    def orbits(self) -> list[list[Key]]:
        n = len(self.structure)
        seen = [False] * n
        out = []
        for s in range(n):
            if seen[s]:
                continue
            orb = [s]
            seen[s] = True
            q = deque([s])
            while q:
                i = q.popleft()
                for g in self.generators:
                    j = g[i]
                    if not seen[j]:
                        seen[j] = True
                        orb.append(j)
                        q.append(j)
            out.append([self.structure.elements[i] for i in sorted(orb)])
        return out

    def fixed_keys(self) -> list[Key]:
        return [x for i, x in enumerate(self.structure.elements)
                if all(g[i] == i for g in self.generators)]


def fixed_points(p: Poset, action: GroupAction) -> Poset:
    if action.structure is not p and not action.structure.same_order(p):
        raise ValueError("action is on a different poset")
    return p.subposet(action.fixed_keys())


def find_isomorphism(p: Poset, q: Poset) -> dict | None:
    """An order isomorphism ``p -> q`` as a key dict, or ``None``."""
    if len(p) != len(q):
        return None
    n = len(p)

    def sig(P, i):
        return (P.heights()[i], popcount(P.down_mask(i)), popcount(P.up_mask(i)),
                len(P.lower_covers(i)))

    sp = [sig(p, i) for i in range(n)]
    sq = [sig(q, i) for i in range(n)]
    if sorted(sp) != sorted(sq):
        return None
    cand = [[j for j in range(n) if sq[j] == sp[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: (len(cand[i]), i))
    assign: dict[int, int] = {}
    used = set()

    def ok(i, j):
        for a, b in assign.items():
            if bool(p.up_mask(i) >> a & 1) != bool(q.up_mask(j) >> b & 1):
                return False
            if bool(p.up_mask(a) >> i & 1) != bool(q.up_mask(b) >> j & 1):
                return False
        return True

    def rec(k):
        if k == n:
            return True
        i = order[k]
        for j in cand[i]:
            if j not in used and ok(i, j):
                assign[i] = j
                used.add(j)
                if rec(k + 1):
                    return True
                del assign[i]
                used.discard(j)
        return False

    if not rec(0):
        return None
    return {p.elements[i]: q.elements[j] for i, j in assign.items()}
