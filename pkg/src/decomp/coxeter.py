"""Finite Coxeter systems and the combinatorics of their Coxeter complexes.

Elements are enumerated once through the geometric representation (floating
point, keyed by rounded matrices) and from then on handled as indices with
multiplication tables.  The shortlex-minimal reduced word of each element is
its canonical name.

Simplices of the Coxeter complex are left cosets ``w W_I`` for proper subsets
``I`` of the generators; ``w W_I`` has dimension ``rank - |I| - 1``, chambers
are the singletons ``I = {}`` and ``W`` itself is the empty simplex.
Subcomplexes are bitmasks over simplex indices.
"""
from __future__ import annotations

import itertools
import json
import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .poset import BudgetExceeded, Poset, SimplicialComplex, bits, popcount

MAX_ELEMENTS = 10_000
MAX_MASKS = 200_000


def coxeter_matrix(name: str) -> list[list[int]]:
    """Coxeter matrix of a named finite type: A_n, B_n/C_n, D_n, E_6-8, F_4, G_2, H_3, H_4, I2(m)."""
    s = name.strip().upper().replace("_", "")
    m = re.fullmatch(r"I2\((\d+)\)", s)
    if m:
        k = int(m.group(1))
        if k < 2:
            raise ValueError("I2(m) needs m >= 2")
        return [[1, k], [k, 1]]
    m = re.fullmatch(r"([A-HI])(\d+)", s)
    if not m:
        raise ValueError(f"unknown Coxeter type {name!r}")
    t, n = m.group(1), int(m.group(2))
    if n < 1:
        raise ValueError("rank must be positive")
    M = [[1 if i == j else 2 for j in range(n)] for i in range(n)]

    def link(i, j, v):
        M[i][j] = M[j][i] = v

    if t == "A":
        for i in range(n - 1):
            link(i, i + 1, 3)
    elif t in "BC":
        if n < 2:
            raise ValueError("B_n needs n >= 2")
        for i in range(n - 2):
            link(i, i + 1, 3)
        link(n - 2, n - 1, 4)
    elif t == "D":
        if n < 4:
            raise ValueError("D_n needs n >= 4")
        for i in range(n - 2):
            link(i, i + 1, 3)
        link(n - 3, n - 1, 3)
    elif t == "E":
        if n not in (6, 7, 8):
            raise ValueError("E_n needs n in 6..8")
        link(0, 2, 3)
        link(1, 3, 3)
        for i in range(2, n - 1):
            link(i, i + 1, 3)
    elif t == "F":
        if n != 4:
            raise ValueError("F_n needs n = 4")
        link(0, 1, 3)
        link(1, 2, 4)
        link(2, 3, 3)
    elif t == "G":
        if n != 2:
            raise ValueError("G_n needs n = 2")
        link(0, 1, 6)
    elif t == "H":
        if n not in (3, 4):
            raise ValueError("H_n needs n in 3, 4")
        link(0, 1, 5)
        for i in range(1, n - 1):
            link(i, i + 1, 3)
    else:
        raise ValueError(f"unknown Coxeter type {name!r}")
    return M


def parse_coxeter(spec) -> tuple[list[list[int]], str]:
    """Accept a type name, a JSON string ``{"matrix": ...}`` or a matrix."""
    if isinstance(spec, str):
        t = spec.strip()
        if t.startswith("{"):
            data = json.loads(t)
            return [list(map(int, r)) for r in data["matrix"]], "custom"
        return coxeter_matrix(t), t
    if isinstance(spec, dict):
        return [list(map(int, r)) for r in spec["matrix"]], "custom"
    return [list(map(int, r)) for r in spec], "custom"


@dataclass(frozen=True)
class RootHalf:
    """A root (half-apartment) given by a reflection index and a side."""

    reflection: int
    sign: int

    def __neg__(self) -> "RootHalf":
        return RootHalf(self.reflection, -self.sign)


class CoxeterSystem:
    """A finite Coxeter system with its Coxeter complex."""

    def __init__(self, matrix, name: str = "custom", max_elements: int = MAX_ELEMENTS,
                 max_masks: int = MAX_MASKS):
        M = [list(map(int, r)) for r in matrix]
        r = len(M)
        for i in range(r):
            if len(M[i]) != r or M[i][i] != 1:
                raise ValueError("Coxeter matrix must be square with ones on the diagonal")
            for j in range(r):
                if M[i][j] != M[j][i] or (i != j and M[i][j] < 2):
                    raise ValueError("Coxeter matrix must be symmetric with entries >= 2 off the diagonal")
        self.matrix = M
        self.rank = r
        self.name = name
        self.max_masks = max_masks
        self._enumerate(max_elements)
        self._build_cosets()

    # group ------------------------------------------------------------
    def _enumerate(self, max_elements: int) -> None:
        r = self.rank
        B = np.array([[-math.cos(math.pi / self.matrix[i][j]) for j in range(r)] for i in range(r)])
        gens = []
        for s in range(r):
            S = np.eye(r)
            for t in range(r):
                S[s, t] -= 2 * B[s, t]
            gens.append(S)

        def key(Mx):
            return tuple(np.rint(Mx * 1e6).astype(np.int64).ravel().tolist())

        mats = [np.eye(r)]
        words: list[tuple[int, ...]] = [()]
        index = {key(mats[0]): 0}
        rmul: list[list[int]] = [[] for _ in range(r)]
        queue = deque([0])
        pending: list[dict[int, int]] = [dict() for _ in range(r)]
        while queue:
            w = queue.popleft()
            for s in range(r):
                Mx = mats[w] @ gens[s]
                k = key(Mx)
                j = index.get(k)
                if j is None:
                    j = len(mats)
                    if j >= max_elements:
                        raise BudgetExceeded(
                            f"Coxeter group has more than {max_elements} elements (infinite or too large)")
                    index[k] = j
                    mats.append(Mx)
                    words.append(words[w] + (s,))
                    queue.append(j)
                pending[s][w] = j
        n = len(mats)
        for s in range(r):
            rmul[s] = [pending[s][w] for w in range(n)]
        lmul = [[index[key(gens[s] @ mats[w])] for w in range(n)] for s in range(r)]
        self.order = n
        self.words = words
        self.length = [len(w) for w in words]
        self.rmul = rmul
        self.lmul = lmul
        # relations checked on every element
        for s in range(r):
            for w in range(n):
                if rmul[s][rmul[s][w]] != w:
                    raise ValueError("generator is not an involution")
        for s, t in itertools.combinations(range(r), 2):
            m = self.matrix[s][t]
            for w in range(n):
                x = w
                for _ in range(m):
                    x = rmul[t][rmul[s][x]]
                if x != w:
                    raise ValueError("braid relation fails; matrix is not of finite type")
        self.w0 = max(range(n), key=lambda w: self.length[w])
        self.inverse = [self.word_element(tuple(reversed(words[w]))) for w in range(n)]

    @property
    def identity(self) -> int:
        return 0

    def word_element(self, word) -> int:
        x = 0
        for s in word:
            x = self.rmul[s][x]
        return x

    def mul(self, x: int, y: int) -> int:
        for s in self.words[y]:
            x = self.rmul[s][x]
        return x

    def element_key(self, w: int) -> str:
        return "".join(str(s + 1) for s in self.words[w]) or "e"

    @cached_property
    def reflections(self) -> list[int]:
        """Conjugates of the generators, sorted by element index."""
        refl = set()
        for w in range(self.order):
            for s in range(self.rank):
                refl.add(self.mul(self.mul(w, self.word_element((s,))), self.inverse[w]))
        return sorted(refl)

    # complex ----------------------------------------------------------
    def _build_cosets(self) -> None:
        r, n = self.rank, self.order
        subsets = [frozenset(c) for k in range(r - 1, -1, -1) for c in itertools.combinations(range(r), k)]
        self.types: list[frozenset[int]] = []
        self.reps: list[int] = []
        self.cham: list[int] = []
        self.coset_of: dict[frozenset[int], list[int]] = {}
        for I in subsets:
            owner = [-1] * n
            for w in sorted(range(n), key=lambda x: (self.length[x], x)):
                if owner[w] >= 0:
                    continue
                idx = len(self.reps)
                owner[w] = idx
                q = deque([w])
                m = 1 << w
                while q:
                    x = q.popleft()
                    for s in I:
                        y = self.rmul[s][x]
                        if owner[y] < 0:
                            owner[y] = idx
                            m |= 1 << y
                            q.append(y)
                self.types.append(I)
                self.reps.append(w)
                self.cham.append(m)
            self.coset_of[I] = owner
        self.nsimplices = len(self.reps)
        self.vertex_ids = [k for k in range(self.nsimplices) if len(self.types[k]) == r - 1]
        self.vertex_pos = {k: i for i, k in enumerate(self.vertex_ids)}
        self.simplex_vertices: list[tuple[int, ...]] = []
        full = frozenset(range(r))
        for k in range(self.nsimplices):
            I = self.types[k]
            vs = sorted(self.vertex_pos[self.coset_of[full - {s}][self.reps[k]]] for s in range(r) if s not in I)
            self.simplex_vertices.append(tuple(vs))
        self.by_vertices = {frozenset(v): k for k, v in enumerate(self.simplex_vertices)}
        self.by_cham = {m: k for k, m in enumerate(self.cham)}
        self.chamber_ids = [self.coset_of[frozenset()][w] for w in range(n)] if r else []
        self.full_mask = (1 << self.nsimplices) - 1

    def simplex_dim(self, k: int) -> int:
        return self.rank - len(self.types[k]) - 1

    def simplex_key(self, k: int) -> str:
        t = "".join(str(s + 1) for s in sorted(self.types[k]))
        return f"{self.element_key(self.reps[k])}W{{{t}}}"

    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(list(range(len(self.vertex_ids))), faces=self.simplex_vertices)

    @property
    def dim(self) -> int:
        return self.rank - 1

    def is_face(self, a: int, b: int) -> bool:
        """``a`` is a face of ``b``."""
        return self.cham[b] & ~self.cham[a] == 0

    def mask_of(self, simplices) -> int:
        m = 0
        for k in simplices:
            m |= 1 << k
        return m

    def closure(self, simplices) -> int:
        """Mask of all faces of the given simplices."""
        m = 0
        for k in simplices:
            for j in range(self.nsimplices):
                if self.is_face(j, k):
                    m |= 1 << j
        return m

    def mask_dim(self, mask: int) -> int:
        return max((self.simplex_dim(k) for k in bits(mask)), default=-1)

    def mask_vertices(self, mask: int) -> frozenset[int]:
        return frozenset(self.vertex_pos[k] for k in bits(mask) if k in self.vertex_pos)

    def mask_from_vertices(self, verts) -> int:
        """Full subcomplex on a vertex set."""
        vs = set(verts)
        return self.mask_of(k for k, sv in enumerate(self.simplex_vertices) if set(sv) <= vs)

    # opposition -------------------------------------------------------
    @cached_property
    def _op(self) -> list[int]:
        right_w0 = [self.mul(w, self.w0) for w in range(self.order)]
        out = []
        for k in range(self.nsimplices):
            m = 0
            for w in bits(self.cham[k]):
                m |= 1 << right_w0[w]
            out.append(self.by_cham[m])
        return out

    def opposite(self, k: int) -> int:
        """Opposite simplex: ``w W_I`` goes to ``w w0 W_{w0 I w0}``."""
        return self._op[k]

    def gallery_distance(self, u: int, v: int) -> int:
        return self.length[self.mul(self.inverse[u], v)]

    # roots ------------------------------------------------------------
    @cached_property
    def root_list(self) -> list[RootHalf]:
        return [RootHalf(t, s) for t in range(len(self.reflections)) for s in (1, -1)]

    @cached_property
    def _half_chambers(self) -> dict[RootHalf, int]:
        out = {}
        for ti, t in enumerate(self.reflections):
            plus = 0
            for w in range(self.order):
                if self.length[self.mul(t, w)] > self.length[w]:
                    plus |= 1 << w
            out[RootHalf(ti, 1)] = plus
            out[RootHalf(ti, -1)] = ((1 << self.order) - 1) & ~plus
        return out

    def root_chambers(self, a: RootHalf) -> int:
        return self._half_chambers[a]

    @cached_property
    def _root_masks(self) -> dict[RootHalf, int]:
        out = {}
        for a, ch in self._half_chambers.items():
            out[a] = self.mask_of(k for k in range(self.nsimplices) if self.cham[k] & ch)
        return out

    def root_mask(self, a: RootHalf) -> int:
        """All faces of chambers on one side of a wall."""
        return self._root_masks[a]

    def wall_mask(self, t: int) -> int:
        return self._root_masks[RootHalf(t, 1)] & self._root_masks[RootHalf(t, -1)]

    def convex_hull(self, simplices) -> int:
        """Intersection of all roots containing the given simplices (empty if none are given)."""
        s = self.mask_of(simplices)
        acc = self.full_mask
        for a in self.root_list:
            m = self._root_masks[a]
            if m & s == s:
                acc &= m
        return acc

    def projection(self, sigma: int, tau: int) -> int:
        """Largest simplex of the hull of ``{sigma, tau}`` having ``sigma`` as a face."""
        hull = self.convex_hull([sigma, tau])
        cand = [k for k in bits(hull) if self.is_face(sigma, k)]
        best = max(cand, key=self.simplex_dim)
        if not all(self.is_face(k, best) for k in cand):
            raise AssertionError("projection is not unique")
        return best

    # masks closed under intersection ---------------------------------
    def _closure(self, gens: list[int]) -> list[int]:
        gens = [g for g in gens if g]
        seen = set(gens)
        frontier = list(gens)
        while frontier:
            new = []
            for m in frontier:
                for g in gens:
                    x = m & g
                    if x and x not in seen:
                        seen.add(x)
                        new.append(x)
                        if len(seen) > self.max_masks:
                            raise BudgetExceeded(f"more than {self.max_masks} masks")
            frontier = new
        return sorted(seen, key=lambda m: (-popcount(m), m))

    @cached_property
    def levi_spheres(self) -> list[int]:
        """Nonempty intersections of walls, the whole complex included."""
        walls = [self.wall_mask(t) for t in range(len(self.reflections))]
        out = self._closure([self.full_mask] + walls)
        return out

    @cached_property
    def y_masks(self) -> list[int]:
        """Nonempty intersections of roots, the whole complex included."""
        return self._closure([self.full_mask] + [self._root_masks[a] for a in self.root_list])

    def y_poset(self) -> Poset:
        masks = self.y_masks
        return Poset.from_order(masks, lambda a, b: a != b and a & b == a, check=False)

    def y_dimension(self) -> int:
        """Length of a longest chain of nonempty convex subcomplexes.

        Below any convex ``K`` a longest chain can pass through some ``K`` meet a
        root, which turns the search into a recursion over roots.
        """
        roots = [self._root_masks[a] for a in self.root_list]
        memo: dict[int, int] = {}

        def h(K):
            if K in memo:
                return memo[K]
            best = 0
            for r in roots:
                x = K & r
                if x and x != K:
                    best = max(best, h(x) + 1)
            memo[K] = best
            return best

        return h(self.full_mask)

    def positive_roots(self) -> int:
        return len(self.reflections)

    # parabolic subgroups ---------------------------------------------
    def parabolic(self, I) -> tuple["CoxeterSystem", list[int]]:
        """The standard parabolic subsystem on ``I`` and the embedding of its elements."""
        I = sorted(I)
        sub = CoxeterSystem([[self.matrix[a][b] for b in I] for a in I], name=f"{self.name}|{I}")
        embed = [self.word_element(tuple(I[s] for s in sub.words[w])) for w in range(sub.order)]
        return sub, embed

    def parabolic_subgroups(self) -> list[int]:
        """Every conjugate of every standard parabolic subgroup, as element bitmasks."""
        out = set()
        for k in range(self.rank + 1):
            for I in itertools.combinations(range(self.rank), k):
                base = [w for w in range(self.order) if all(s in I for s in self.words[w])]
                for x in range(self.order):
                    xi = self.inverse[x]
                    m = 0
                    for u in base:
                        m |= 1 << self.mul(self.mul(x, u), xi)
                    out.add(m)
        return sorted(out, key=lambda m: (-popcount(m), m))

    def parabolic_poset(self, reverse: bool = True) -> Poset:
        """Parabolic subgroups; by default under reverse inclusion, so ``W`` is the bottom."""
        subs = self.parabolic_subgroups()
        if reverse:
            less = lambda a, b: a != b and a & b == b  # noqa: E731
        else:
            less = lambda a, b: a != b and a & b == a  # noqa: E731
        return Poset.from_order(subs, less, check=False)

    def pointwise_fixer(self, mask: int) -> int:
        """Elements fixing every simplex of a subcomplex under left multiplication."""
        out = 0
        ks = list(bits(mask))
        for w in range(self.order):
            ok = True
            for k in ks:
                img = 0
                for x in bits(self.cham[k]):
                    img |= 1 << self.mul(w, x)
                if img != self.cham[k]:
                    ok = False
                    break
            if ok:
                out |= 1 << w
        return out

    def left_action_on_vertices(self, w: int) -> list[int]:
        """Permutation of vertex positions induced by left multiplication."""
        out = []
        for k in self.vertex_ids:
            img = 0
            for x in bits(self.cham[k]):
                img |= 1 << self.mul(w, x)
            out.append(self.vertex_pos[self.by_cham[img]])
        return out

    def __repr__(self) -> str:
        return f"CoxeterSystem({self.name}, order={self.order})"


def build_coxeter(spec, max_elements: int = MAX_ELEMENTS) -> CoxeterSystem:
    matrix, name = parse_coxeter(spec)
    return CoxeterSystem(matrix, name=name, max_elements=max_elements)


def y_dimension_probe(spec) -> dict:
    """Compare the length of the longest chain of convex subcomplexes with dim + #positive roots."""
    W = spec if isinstance(spec, CoxeterSystem) else build_coxeter(spec)
    dy = W.y_dimension()
    expected = W.dim + W.positive_roots()
    return {"type": W.name, "dim_sigma": W.dim, "positive_roots": W.positive_roots(),
            "dim_Y": dy, "predicted": expected, "equal": dy == expected}
