"""Reduced homology of simplicial complexes and induced maps.

Computation runs in two stages.  First, entries equal to a unit are eliminated
(a chain homotopy equivalence, recorded so cycles can be carried across).  The
small complex that remains is then handled by a dense Smith normal form over
Python integers.  Everything is exact; GF(p) coefficients are also supported.
"""
from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable

from .poset import BudgetExceeded, Poset, SimplicialComplex, order_complex

MAX_FACES = 2_000_000


class ChainComplex:
    """Augmented simplicial chain complex; degree -1 holds the empty face."""

    def __init__(self, cells: dict[int, list], boundary: dict[int, list[dict[int, int]]]):
        self.cells = cells
        self.boundary = boundary
        self.index = {d: {c: i for i, c in enumerate(cs)} for d, cs in cells.items()}

    @classmethod
    def from_complex(cls, k: SimplicialComplex, max_faces: int = MAX_FACES) -> "ChainComplex":
        if len(k) > max_faces:
            raise BudgetExceeded(f"complex has {len(k)} faces, budget {max_faces}")
        cells: dict[int, list] = {-1: [()]}
        for d, lst in enumerate(k.faces_by_dim):
            cells[d] = lst
        bd: dict[int, list[dict[int, int]]] = {}
        if 0 in cells:
            bd[0] = [{0: 1} for _ in cells[0]]
        for d in range(1, k.dim + 1):
            rows = {c: i for i, c in enumerate(cells[d - 1])}
            cols = []
            for f in cells[d]:
                cols.append({rows[f[:i] + f[i + 1:]]: (-1) ** i for i in range(len(f))})
            bd[d] = cols
        return cls(cells, bd)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.cells)

    def boundary_of(self, d: int, chain: dict[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        if d not in self.boundary:
            return out
        for i, c in chain.items():
            for r, v in self.boundary[d][i].items():
                out[r] = out.get(r, 0) + c * v
        return {r: v for r, v in out.items() if v}

    def check_square_zero(self) -> bool:
        for d in self.degrees:
            if d - 1 not in self.boundary:
                continue
            for i in range(len(self.cells[d])):
                b = self.boundary_of(d, {i: 1})
                if self.boundary_of(d - 1, b):
                    return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(cs) for d, cs in self.cells.items())


def chain_complex(obj, max_faces: int = MAX_FACES) -> ChainComplex:
    if isinstance(obj, ChainComplex):
        return obj
    if isinstance(obj, Poset):
        obj = order_complex(obj, max_faces=max_faces)
    return ChainComplex.from_complex(obj, max_faces=max_faces)


# ---------------------------------------------------------------------------
# Smith normal form

def smith_normal_form(a: list[list[int]], transforms: bool = False):
    """Smith normal form ``U A V = S`` over the integers.

    Returns the list of nonzero invariant factors, and with ``transforms`` also
    ``U, U^-1, V, V^-1``.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    A = [list(r) for r in a]
    if transforms:
        U = [[int(i == j) for j in range(m)] for i in range(m)]
        Ui = [[int(i == j) for j in range(m)] for i in range(m)]
        V = [[int(i == j) for j in range(n)] for i in range(n)]
        Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, j, k):  # row i += k * row j
        Ai, Aj = A[i], A[j]
        for c in range(n):
            if Aj[c]:
                Ai[c] += k * Aj[c]
        if transforms:
            Ui_, Uj = U[i], U[j]
            for c in range(m):
                if Uj[c]:
                    Ui_[c] += k * Uj[c]
            for r in range(m):
                if Ui[r][i]:
                    Ui[r][j] -= k * Ui[r][i]

    def col_add(i, j, k):  # col j += k * col i
        for r in range(m):
            if A[r][i]:
                A[r][j] += k * A[r][i]
        if transforms:
            for r in range(n):
                if V[r][i]:
                    V[r][j] += k * V[r][i]
            Vii, Vij = Vi[i], Vi[j]
            for c in range(n):
                if Vij[c]:
                    Vii[c] -= k * Vij[c]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]
            for r in range(m):
                Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def col_swap(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        if transforms:
            for r in range(n):
                V[r][i], V[r][j] = V[r][j], V[r][i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]
            for r in range(m):
                Ui[r][i] = -Ui[r][i]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for r in range(t, m):
            Ar = A[r]
            for c in range(t, n):
                v = Ar[c]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), r, c)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, r, c = best
        if r != t:
            row_swap(r, t)
        if c != t:
            col_swap(c, t)
        while True:
            p = A[t][t]
            done = True
            for r in range(t + 1, m):
                if A[r][t]:
                    q = A[r][t] // p
                    row_add(r, t, -q)
                    if A[r][t]:
                        done = False
            for c in range(t + 1, n):
                if A[t][c]:
                    q = A[t][c] // p
                    col_add(t, c, -q)
                    if A[t][c]:
                        done = False
            if not done:
                best = None
                for r in range(t, m):
                    if A[r][t] and (best is None or abs(A[r][t]) < best[0]):
                        best = (abs(A[r][t]), r, "r")
                for c in range(t, n):
                    if A[t][c] and (best is None or abs(A[t][c]) < best[0]):
                        best = (abs(A[t][c]), c, "c")
                if best[2] == "r" and best[1] != t:
                    row_swap(best[1], t)
                elif best[2] == "c" and best[1] != t:
                    col_swap(best[1], t)
                continue
            bad = None
            for r in range(t + 1, m):
                for c in range(t + 1, n):
                    if A[r][c] % p:
                        bad = r
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if A[t][t] < 0:
            row_neg(t)
        diag.append(A[t][t])
        t += 1
    if transforms:
        return diag, U, Ui, V, Vi
    return diag


def _rank_mod_p(a: list[list[int]], p: int) -> int:
    rows = [[x % p for x in r] for r in a if any(x % p for x in r)]
    rk = 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = pow(rows[rk][c], p - 2, p)
        for i in range(rk + 1, len(rows)):
            f = rows[i][c] * inv % p
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rk])]
        rk += 1
    return rk


def integer_rank_det(a: list[list[int]]) -> tuple[int, list[int]]:
    d = smith_normal_form(a)
    return len(d), d


# ---------------------------------------------------------------------------
# elimination

class Reduction:
    """Unit-pivot elimination of a chain complex, optionally recording the log."""

    def __init__(self, cx: ChainComplex, modulus: int | None = None, record: bool = False):
        self.cx = cx
        self.mod = modulus
        self.record = record
        self.offset: dict[int, int] = {}
        self.deg: list[int] = []
        off = 0
        for d in cx.degrees:
            self.offset[d] = off
            n = len(cx.cells[d])
            self.deg.extend([d] * n)
            off += n
        self.alive = [True] * off
        self.bd: dict[int, dict[int, int]] = {}
        self.cob: dict[int, set[int]] = {g: set() for g in range(off)}
        for d, cols in cx.boundary.items():
            if d - 1 not in self.offset:
                continue
            o, ro = self.offset[d], self.offset[d - 1]
            for i, col in enumerate(cols):
                g = o + i
                c = {}
                for r, v in col.items():
                    v = v % modulus if modulus else v
                    if v:
                        c[ro + r] = v
                        self.cob[ro + r].add(g)
                self.bd[g] = c
        for d in cx.degrees:
            if d not in cx.boundary:
                for i in range(len(cx.cells[d])):
                    self.bd.setdefault(self.offset[d] + i, {})
        self.log: list[tuple] = []
        self._run()

    def gid(self, d: int, i: int) -> int:
        return self.offset[d] + i

    def _unit(self, v: int) -> bool:
        return v != 0 if self.mod else v in (1, -1)

    def _inv(self, v: int) -> int:
        return pow(v, self.mod - 2, self.mod) if self.mod else v

    def _run(self) -> None:
        progress = True
        while progress:
            progress = False
            heap = [(len(s), r) for r, s in self.cob.items() if s]
            heapq.heapify(heap)
            while heap:
                n, b = heapq.heappop(heap)
                s = self.cob.get(b)
                if not s:
                    continue
                if len(s) != n:
                    heapq.heappush(heap, (len(s), b))
                    continue
                best = None
                for a in s:
                    if self._unit(self.bd[a][b]):
                        la = len(self.bd[a])
                        if best is None or la < best[0] or (la == best[0] and a < best[1]):
                            best = (la, a)
                if best is None:
                    continue
                touched = self._eliminate(best[1], b)
                progress = True
                for r in touched:
                    if self.cob.get(r):
                        heapq.heappush(heap, (len(self.cob[r]), r))

    def _eliminate(self, a: int, b: int) -> set[int]:
        mod = self.mod
        bd, cob = self.bd, self.cob
        col_a = bd[a]
        eps = col_a[b]
        inv = self._inv(eps)
        betas = []
        for x in list(cob[b]):
            if x == a:
                continue
            colx = bd[x]
            beta = colx[b]
            f = -beta * inv
            if mod:
                f %= mod
            for r, c in col_a.items():
                v = colx.get(r, 0) + f * c
                if mod:
                    v %= mod
                if v:
                    if r not in colx:
                        cob[r].add(x)
                    colx[r] = v
                elif r in colx:
                    del colx[r]
                    cob[r].discard(x)
            if self.record:
                betas.append((x, beta))
        touched = set(col_a)
        for r in col_a:
            cob[r].discard(a)
        del bd[a]
        for y in cob.pop(a, ()):
            del bd[y][a]
        for r in bd.pop(b, {}):
            cob[r].discard(b)
            touched.add(r)
        cob.pop(b, None)
        touched.discard(b)
        self.alive[a] = self.alive[b] = False
        if self.record:
            gamma = {r: c for r, c in col_a.items() if r != b}
            self.log.append((self.deg[a], a, b, inv, gamma, betas))
        return touched

    # remaining complex
    def remaining(self, d: int) -> list[int]:
        if d not in self.offset:
            return []
        o = self.offset[d]
        return [g for g in range(o, o + len(self.cx.cells[d])) if self.alive[g]]

    def matrix(self, d: int) -> list[list[int]]:
        """Boundary of the remaining complex in degree ``d`` (rows: degree d-1)."""
        rows = self.remaining(d - 1)
        cols = self.remaining(d)
        rpos = {g: k for k, g in enumerate(rows)}
        m = [[0] * len(cols) for _ in rows]
        for k, g in enumerate(cols):
            for r, v in self.bd.get(g, {}).items():
                m[rpos[r]][k] = v
        return m

    def project(self, d: int, chain: dict[int, int]) -> dict[int, int]:
        """Image of an original degree-``d`` chain (by cell gid) in the remaining complex."""
        c = dict(chain)
        mod = self.mod
        for da, a, b, inv, gamma, _ in self.log:
            if da == d:
                c.pop(a, None)
            elif da == d + 1:
                t = c.pop(b, 0)
                if t:
                    f = -t * inv
                    for r, g in gamma.items():
                        v = c.get(r, 0) + f * g
                        if mod:
                            v %= mod
                        if v:
                            c[r] = v
                        else:
                            c.pop(r, None)
        return c

    def lift(self, d: int, chain: dict[int, int]) -> dict[int, int]:
        """Cycle of the original complex representing a cycle of the remaining one."""
        c = dict(chain)
        mod = self.mod
        for da, a, b, inv, gamma, betas in reversed(self.log):
            if da != d:
                continue
            s = 0
            for x, beta in betas:
                v = c.get(x)
                if v:
                    s += v * beta
            lam = -s * inv
            if mod:
                lam %= mod
            if lam:
                c[a] = lam
        return c


# ---------------------------------------------------------------------------
# homology

@dataclass
class HomologyResult:
    """Reduced homology: free ranks and torsion coefficients per degree."""

    betti: dict[int, int]
    torsion: dict[int, list[int]]
    field: str = "Z"

    def to_json(self) -> str:
        return json.dumps({
            "betti": {str(k): v for k, v in sorted(self.betti.items())},
            "torsion": {str(k): v for k, v in sorted(self.torsion.items())},
            "field": self.field,
        }, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "HomologyResult":
        d = json.loads(text)
        return cls({int(k): v for k, v in d["betti"].items()},
                   {int(k): list(v) for k, v in d["torsion"].items()}, d["field"])

    def nonzero(self) -> dict[int, int]:
        return {k: v for k, v in self.betti.items() if v}

    def is_zero(self) -> bool:
        return not any(self.betti.values()) and not any(self.torsion.values())

    def has_torsion(self) -> bool:
        return any(self.torsion.values())

    def same_as(self, other: "HomologyResult") -> bool:
        return self.nonzero() == other.nonzero() and \
            {k: v for k, v in self.torsion.items() if v} == {k: v for k, v in other.torsion.items() if v}

    def __str__(self) -> str:
        parts = [f"H{k}=Z^{v}" for k, v in sorted(self.betti.items()) if v]
        parts += [f"T{k}={v}" for k, v in sorted(self.torsion.items()) if v]
        return ", ".join(parts) or "0"


@dataclass
class _DegreeData:
    r: int                    # rank of the outgoing boundary
    Vi: list[list[int]]
    K: list[list[int]]        # kernel basis as columns
    s: int
    P: list[list[int]]
    free_reps: list[list[int]]
    invariants: list[int]
    cells: list[int]


class HomologyEngine:
    """Homology of one complex with explicit cycle bases over Z."""

    def __init__(self, cx: ChainComplex, modulus: int | None = None, record: bool = True):
        self.cx = cx
        self.mod = modulus
        self.red = Reduction(cx, modulus=modulus, record=record)
        self._data: dict[int, _DegreeData] = {}

    def result(self) -> HomologyResult:
        betti, tors = {}, {}
        for d in self.cx.degrees:
            if self.mod:
                nd = len(self.red.remaining(d))
                r_out = _rank_mod_p(self.red.matrix(d), self.mod) if d - 1 in self.cx.cells else 0
                r_in = _rank_mod_p(self.red.matrix(d + 1), self.mod) if d + 1 in self.cx.cells else 0
                betti[d] = nd - r_out - r_in
                tors[d] = []
            else:
                dd = self.degree_data(d)
                betti[d] = len(dd.free_reps)
                tors[d] = [e for e in dd.invariants if e > 1]
        return HomologyResult(betti, tors, "Z" if not self.mod else f"GF({self.mod})")

    def degree_data(self, d: int) -> _DegreeData:
        if d in self._data:
            return self._data[d]
        cells = self.red.remaining(d)
        n = len(cells)
        if d - 1 in self.cx.cells and n and self.red.remaining(d - 1):
            diag, _, _, V, Vi = smith_normal_form(self.red.matrix(d), transforms=True)
            r = len(diag)
        else:
            V = [[int(i == j) for j in range(n)] for i in range(n)]
            Vi = [row[:] for row in V]
            r = 0
        K = [row[r:] for row in V]
        z = n - r
        if d + 1 in self.cx.cells and z:
            D1 = self.red.matrix(d + 1)
            E = [[sum(Vi[i][k] * D1[k][j] for k in range(n) if Vi[i][k] and D1[k][j])
                  for j in range(len(D1[0]) if D1 else 0)] for i in range(r, n)]
            if E and E[0]:
                inv, P, Pi, _, _ = smith_normal_form(E, transforms=True)
            else:
                inv = []
                P = [[int(i == j) for j in range(z)] for i in range(z)]
                Pi = [row[:] for row in P]
        else:
            inv = []
            P = [[int(i == j) for j in range(z)] for i in range(z)]
            Pi = [row[:] for row in P]
        s = len(inv)
        reps = []
        for j in range(s, z):
            reps.append([sum(K[i][k] * Pi[k][j] for k in range(z)) for i in range(n)])
        dd = _DegreeData(r, Vi, K, s, P, reps, inv, cells)
        self._data[d] = dd
        return dd

    def free_representatives(self, d: int) -> list[dict[int, int]]:
        """Original-complex cycles (by cell index) whose classes form a basis of H_d mod torsion."""
        dd = self.degree_data(d)
        o = self.red.offset[d]
        out = []
        for rep in dd.free_reps:
            c = {g: v for g, v in zip(dd.cells, rep) if v}
            lifted = self.red.lift(d, c)
            out.append({g - o: v for g, v in lifted.items() if v})
        return out

    def free_coordinates(self, d: int, chain: dict[int, int]) -> list[int]:
        """Coordinates of the class of an original cycle in the free basis."""
        dd = self.degree_data(d)
        o = self.red.offset[d]
        red = self.red.project(d, {o + i: v for i, v in chain.items() if v})
        pos = {g: k for k, g in enumerate(dd.cells)}
        vec = [0] * len(dd.cells)
        for g, v in red.items():
            vec[pos[g]] = v
        w = [sum(row[k] * vec[k] for k in range(len(vec)) if vec[k]) for row in dd.Vi]
        if any(w[:dd.r]):
            raise ValueError("chain is not a cycle")
        kz = w[dd.r:]
        y = [sum(row[k] * kz[k] for k in range(len(kz)) if kz[k]) for row in dd.P]
        return y[dd.s:]


def homology(obj, field: str | int = "Z", max_faces: int = MAX_FACES) -> HomologyResult:
    """Reduced homology of a complex, a poset (via its order complex) or a chain complex."""
    cx = chain_complex(obj, max_faces=max_faces)
    mod = None if field in ("Z", None) else int(str(field).replace("GF(", "").rstrip(")"))
    return HomologyEngine(cx, modulus=mod, record=False).result()


# ---------------------------------------------------------------------------
# chain maps and induced maps

ChainFn = Callable[[tuple], dict]


def simplicial_chain_map(vertex_map: Callable[[int], int]) -> ChainFn:
    """Chain map of a simplicial map given on vertex indices (degenerate images vanish)."""
    def f(simplex: tuple) -> dict:
        img = [vertex_map(v) for v in simplex]
        if len(set(img)) < len(img):
            return {}
        order = sorted(range(len(img)), key=lambda i: img[i])
        sign = _perm_sign(order)
        return {tuple(img[i] for i in order): sign}
    return f


def _perm_sign(order: list[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for i in range(len(order)):
        if not seen[i]:
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = order[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
    return sign


@lru_cache(maxsize=None)
def subdivision_terms(n: int) -> tuple[tuple[tuple[tuple[int, ...], ...], int], ...]:
    """Signed flags of faces of an (n-1)-simplex giving the subdivision chain map."""
    if n == 0:
        return (((), 1),)
    if n == 1:
        return ((((0,),), 1),)
    out = []
    full = tuple(range(n))
    for i in range(n):
        face = full[:i] + full[i + 1:]
        for flag, s in subdivision_terms(n - 1):
            mapped = tuple(tuple(face[k] for k in t) for t in flag)
            out.append((mapped + (full,), (-1) ** (n - 1) * (-1) ** i * s))
    return tuple(out)


def poset_chain_map(source: Poset, target: Poset, f: Callable) -> ChainFn:
    """Chain map between order complexes induced by an order-preserving map on keys."""
    def g(simplex: tuple) -> dict:
        img = [target.index(f(source.elements[i])) for i in simplex]
        if len(set(img)) < len(img):
            return {}
        return {tuple(img): 1}
    return g


def subdivision_chain_map(source: Poset, target: Poset, on_chains: Callable) -> ChainFn:
    """Chain map from the order complex of ``source`` for a map defined on its chains.

    ``on_chains`` takes a chain (tuple of keys, increasing) to a key of
    ``target`` and must be order preserving for inclusion of chains.  The
    result composes it with the subdivision operator.
    """
    cache: dict = {}

    def img(chain):
        if chain not in cache:
            cache[chain] = target.index(on_chains(chain))
        return cache[chain]

    def g(simplex: tuple) -> dict:
        if not simplex:
            return {(): 1}
        keys = tuple(source.elements[i] for i in simplex)
        out: dict = {}
        for flag, sign in subdivision_terms(len(keys)):
            ims = [img(tuple(keys[k] for k in t)) for t in flag]
            if len(set(ims)) < len(ims):
                continue
            key = tuple(ims)
            out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}
    return g


@dataclass
class InducedMap:
    """Matrices of a map on free parts of homology, per degree."""

    matrices: dict[int, list[list[int]]]
    source: HomologyResult
    target: HomologyResult
    torsion_free: bool = True
    details: dict = field(default_factory=dict)

    def _snf(self, d):
        m = self.matrices[d]
        if not m or not m[0]:
            return []
        return smith_normal_form(m)

    def injective(self, d: int) -> bool:
        return len(self._snf(d)) == self.source.betti.get(d, 0)

    def surjective(self, d: int) -> bool:
        inv = self._snf(d)
        return len(inv) == self.target.betti.get(d, 0) and all(e == 1 for e in inv)

    def is_iso(self, d: int | None = None) -> bool:
        degs = [d] if d is not None else sorted(self.matrices)
        return self.torsion_free and all(
            self.source.betti.get(k, 0) == self.target.betti.get(k, 0)
            and self.injective(k) and self.surjective(k) for k in degs)

    @property
    def iso(self) -> bool:
        return self.is_iso()


def induced_map(f: ChainFn, source, target, degrees: Iterable[int] | None = None,
                check_chain_map: bool = True, max_faces: int = MAX_FACES) -> InducedMap:
    """Map on reduced homology induced by a chain map given on simplices.

    ``f`` sends a source simplex (tuple of vertex indices) to a dict from
    target simplices to coefficients; the empty simplex goes to itself.
    """
    S = chain_complex(source, max_faces=max_faces)
    T = chain_complex(target, max_faces=max_faces)
    memo: dict = {(): {(): 1}}

    def fn(simplex):
        if simplex not in memo:
            memo[simplex] = f(simplex)
        return memo[simplex]

    for d in S.degrees:
        for simp in S.cells[d]:
            for s2 in fn(simp):
                if s2 not in T.index.get(d, ()):
                    raise ValueError(f"image of {simp} is not a simplex of the target: {s2}")
    if check_chain_map:
        _check_chain_map(fn, S, T)
    es = HomologyEngine(S)
    et = HomologyEngine(T)
    hs, ht = es.result(), et.result()
    degs = sorted(S.cells) if degrees is None else list(degrees)
    mats = {}
    for d in degs:
        reps = es.free_representatives(d) if d in S.cells else []
        cols = []
        for rep in reps:
            tchain: dict[int, int] = {}
            for i, c in rep.items():
                for simp, v in fn(S.cells[d][i]).items():
                    j = T.index[d][simp]
                    tchain[j] = tchain.get(j, 0) + c * v
            tchain = {j: v for j, v in tchain.items() if v}
            cols.append(et.free_coordinates(d, tchain) if d in T.cells else [])
        nt = ht.betti.get(d, 0)
        mats[d] = [[cols[j][i] for j in range(len(cols))] for i in range(nt)]
    return InducedMap(mats, hs, ht, torsion_free=not hs.has_torsion() and not ht.has_torsion())


def _check_chain_map(fn, S: ChainComplex, T: ChainComplex) -> None:
    for d in S.degrees:
        if d < 0:
            continue
        for i, simp in enumerate(S.cells[d]):
            lhs: dict = {}
            for s2, v in fn(simp).items():
                for r, w in T.boundary.get(d, [{}] * (T.index[d][s2] + 1))[T.index[d][s2]].items():
                    key = T.cells[d - 1][r]
                    lhs[key] = lhs.get(key, 0) + v * w
            rhs: dict = {}
            for r, w in S.boundary[d][i].items():
                for s2, v in fn(S.cells[d - 1][r]).items():
                    rhs[s2] = rhs.get(s2, 0) + v * w
            lhs = {k: v for k, v in lhs.items() if v}
            rhs = {k: v for k, v in rhs.items() if v}
            if lhs != rhs:
                raise ValueError(f"not a chain map at {simp}")


# ---------------------------------------------------------------------------
# sphericity and Cohen-Macaulayness

def is_spherical(obj, d: int, result: HomologyResult | None = None) -> bool:
    """Homology vanishes below ``d``, is free in ``d``, and the complex has dimension ``d``."""
    k = order_complex(obj) if isinstance(obj, Poset) else obj
    if k.dim != d:
        return False
    h = result or homology(k)
    for deg, b in h.betti.items():
        if deg < d and b:
            return False
    return not any(v for deg, v in h.torsion.items() if deg <= d)


@dataclass
class CMReport:
    """Outcome of a Cohen-Macaulay test; ``holds`` is ``None`` when some link was skipped."""

    holds: bool | None
    failures: list = field(default_factory=list)
    unchecked: list = field(default_factory=list)
    checked: int = 0


def is_cohen_macaulay(obj, max_link_faces: int = 200_000) -> CMReport:
    """Every link (the empty face included) is spherical of dimension ``dim - |face|``."""
    k = order_complex(obj) if isinstance(obj, Poset) else obj
    rep = CMReport(holds=True)
    for face in itertools.chain([()], k.faces()):
        lk = k.link(face) if face else k
        expect = k.dim - len(face)
        if len(lk) > max_link_faces:
            rep.unchecked.append(face)
            continue
        rep.checked += 1
        if not is_spherical(lk, expect):
            rep.failures.append(face)
    if rep.failures:
        rep.holds = False
    elif rep.unchecked:
        rep.holds = None
    return rep


def join_betti(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    """Reduced Betti numbers of a join (the empty complex has rank one in degree -1)."""
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            if x and y:
                out[i + j + 1] = out.get(i + j + 1, 0) + x * y
    return out
