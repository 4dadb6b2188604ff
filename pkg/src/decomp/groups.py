"""Matrix groups acting on type-A buildings and everything built from them."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from . import gf
from .building import Building, build_typeA
from .decompositions import Decompositions, transport, transport_chain
from .homology import homology
from .poset import BudgetExceeded, Poset, PosetMap

Matrix = tuple[tuple[int, ...], ...]


def _freeze(m) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in m)


class MatrixGroup:
    """Subgroup of GL_n(p) given by generators; the element closure is lazy and budgeted."""

    def __init__(self, p: int, generators, n: int | None = None, max_elements: int = 100_000):
        if not gf.is_prime(p):
            raise ValueError("p must be prime")
        gens = [_freeze([[x % p for x in row] for row in g]) for g in generators]
        if n is None:
            if not gens:
                raise ValueError("dimension unknown for an empty generator list")
            n = len(gens[0])
        for g in gens:
            if len(g) != n or any(len(r) != n for r in g):
                raise ValueError("generator has the wrong shape")
            if gf.rank([list(r) for r in g], p) != n:
                raise ValueError("generator is not invertible")
        self.p, self.n = p, n
        self.generators = gens
        self.max_elements = max_elements

    @classmethod
    def from_config(cls, cfg: dict) -> "MatrixGroup":
        return cls(int(cfg["field"]), cfg["generators"], n=cfg.get("n"))

    @classmethod
    def full(cls, p, n):
        return cls(p, gf.general_linear_generators(p, n), n)

    @classmethod
    def trivial(cls, p, n):
        return cls(p, [], n)

    @classmethod
    def scalars(cls, p, n):
        a = gf.primitive_root(p)
        return cls(p, [[[a if i == j else 0 for j in range(n)] for i in range(n)]], n)

    @classmethod
    def diagonal_torus(cls, p, n):
        a = gf.primitive_root(p)
        gens = []
        for k in range(n):
            gens.append([[(a if i == k else 1) if i == j else 0 for j in range(n)] for i in range(n)])
        return cls(p, gens, n)

    @classmethod
    def unipotent(cls, p, n):
        """Upper unitriangular matrices."""
        gens = []
        for k in range(n - 1):
            gens.append([[1 if i == j or (i == k and j == k + 1) else 0 for j in range(n)]
                         for i in range(n)])
        return cls(p, gens, n)

    @classmethod
    def permutation_matrices(cls, p, n):
        gens = []
        for k in range(n - 1):
            perm = list(range(n))
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            gens.append([[1 if perm[i] == j else 0 for j in range(n)] for i in range(n)])
        return cls(p, gens, n)

    def identity(self) -> Matrix:
        return _freeze(gf.identity(self.n))

    @cached_property
    def elements(self) -> list[Matrix]:
        e = self.identity()
        seen = {e}
        out = [e]
        q = deque([e])
        while q:
            x = q.popleft()
            for g in self.generators:
                y = _freeze(gf.mat_mul(g, x, self.p))
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    q.append(y)
                    if len(out) > self.max_elements:
                        raise BudgetExceeded(f"group has more than {self.max_elements} elements")
        return out

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return all(g == self.identity() for g in self.generators)


def act_on(b: Building, g) -> list[int]:
    """Permutation of building vertices induced by an invertible matrix."""
    if b.kind == "typeA":
        p, n = b.field
        if gf.rank([list(r) for r in g], p) != n:
            raise ValueError("matrix is not invertible")
    return b.vertex_permutation(g)


@dataclass
class OrbitTable:
    orbit_of: dict
    representatives: list
    sizes: list[int]
    stabilizers: list[int] | None = None
    group_order: int | None = None

    def __len__(self):
        return len(self.representatives)

    def consistent(self) -> bool:
        if self.stabilizers is None or self.group_order is None:
            return True
        return all(s * t == self.group_order for s, t in zip(self.sizes, self.stabilizers))


def orbits(keys, b: Building, grp: MatrixGroup, stabilizers: bool = True) -> OrbitTable:
    """Orbit partition of element keys by generator BFS, with stabilizer orders when the group closes."""
    keys = list(keys)
    key_set = set(keys)
    perms = [act_on(b, g) for g in grp.generators]
    orbit_of: dict = {}
    reps, sizes = [], []
    for k in keys:
        if k in orbit_of:
            continue
        oid = len(reps)
        reps.append(k)
        orbit_of[k] = oid
        size = 1
        q = deque([k])
        while q:
            x = q.popleft()
            for vp in perms:
                y = transport(x, vp)
                if y not in key_set:
                    raise ValueError(f"action leaves the structure: {y!r}")
                if y not in orbit_of:
                    orbit_of[y] = oid
                    size += 1
                    q.append(y)
        sizes.append(size)
    table = OrbitTable(orbit_of, reps, sizes)
    if stabilizers:
        elems = grp.elements
        vps = [act_on(b, g) for g in elems]
        table.group_order = len(elems)
        table.stabilizers = [sum(1 for vp in vps if transport(r, vp) == r) for r in reps]
    return table


def check_equivariance(f: PosetMap, b: Building, grp: MatrixGroup, base: Poset | None = None) -> bool:
    """``f(g x) == g f(x)`` for every generator and every source element.

    ``base`` is the poset whose subdivision is the source, when ``f`` is defined on chains.
    """
    for g in grp.generators:
        vp = act_on(b, g)
        for x, y in zip(f.source.elements, f.images):
            gx = transport_chain(x, vp, base) if base is not None else transport(x, vp)
            try:
                if f(gx) != transport(y, vp):
                    return False
            except KeyError:
                raise ValueError(f"action undefined on {x!r}") from None
    return True


def fixed_point_pipeline(poset: Poset, b: Building, grp: MatrixGroup) -> Poset:
    """Subposet of elements fixed by every generator."""
    perms = [act_on(b, g) for g in grp.generators]
    return poset.subposet([x for x in poset.elements if all(transport(x, vp) == x for vp in perms)])


# ---------------------------------------------------------------------------
# Steinberg dimension bookkeeping

_ST_CACHE: dict = {}


def steinberg_dim(p: int, k: int) -> int:
    """Top reduced Betti number of the building of GF(p)^k (1 when k = 1)."""
    if k <= 1:
        return 1
    if (p, k) not in _ST_CACHE:
        b = build_typeA(p, k)
        _ST_CACHE[(p, k)] = homology(b.complex()).betti.get(k - 2, 0)
    return _ST_CACHE[(p, k)]


def levi_blocks(b: Building, flag) -> list[int]:
    """Block sizes of the Levi factor of the stabilizer of a flag."""
    n = b.field[1]
    dims = sorted(b.vertex_keys[v].dim for v in flag)
    steps = [0] + dims + [n]
    return [y - x for x, y in zip(steps, steps[1:])]


@dataclass
class SteinbergReport:
    p: int
    n: int
    st: int
    terms: list[int]
    pair_counts: list[int]
    signed_sum: int
    ok: bool
    orbit_sizes: list[list[int]] = field(default_factory=list)
    orbit_ok: bool = True
    skeleton: dict = field(default_factory=dict)
    skeleton_ok: bool = True

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def steinberg_les_check(p: int, n: int, skeleton: bool = True, orbit_check: bool = True) -> SteinbergReport:
    """Signed dimension count of the long exact sequence for the square of the Steinberg module.

    Pairs (parabolic, Levi complement) are opposite simplex pairs; those whose first entry
    has dimension ``m - j`` form the ``j``-th middle term, each contributing ``dim St(L)^2``.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    b = build_typeA(p, n)
    dec = Decompositions(b)
    m = n - 2
    st = steinberg_dim(p, n)
    terms = [0] * (m + 1)
    counts = [0] * (m + 1)
    for s, _ in dec.opposite_pairs:
        j = m - (len(s) - 1)
        sl = 1
        for k in levi_blocks(b, s):
            sl *= steinberg_dim(p, k)
        terms[j] += sl * sl
        counts[j] += 1
    signed = st * st + sum((-1) ** (m - j + 1) * terms[j] for j in range(m + 1)) + (-1) ** m * st
    rep = SteinbergReport(p, n, st, terms, counts, signed, signed == 0)

    if orbit_check:
        grp = MatrixGroup.full(p, n)
        ok = True
        for j in range(m + 1):
            keys = [x for x in dec.OD.elements if len(x[1]) - 1 == m - j]
            t = orbits(keys, b, grp)
            ok &= t.consistent() and sum(t.sizes) == counts[j]
            rep.orbit_sizes.append(sorted(t.sizes))
        rep.orbit_ok = ok

    if skeleton:
        rep.skeleton, rep.skeleton_ok = _skeleton_crosscheck(dec, m, st, terms)
    return rep


def _skeleton_crosscheck(dec: Decompositions, m: int, st: int, terms: list[int]):
    """Recompute every term from homology of height skeleta of OPD and of lower intervals.

    The short exact sequences of consecutive skeleta give
    ``rank H(X^(i+1)) + rank H(X^(i)) = sum over height i+1 of rank H(X_<x)``.
    """
    X = dec.OPD
    hts = X.heights()
    top = max(hts)
    skel_betti = []
    concentrated = True
    for i in range(top + 1):
        sub = X.subposet([x for x, h in zip(X.elements, hts) if h <= i])
        h = homology(sub)
        nz = h.nonzero()
        concentrated &= set(nz) <= {i} and not h.has_torsion()
        skel_betti.append(h.betti.get(i, 0))
    rel = []
    for i in range(top):
        total = 0
        for x, hx in zip(X.elements, hts):
            if hx == i + 1:
                total += homology(X.lower_subposet(x)).betti.get(i, 0)
        rel.append(total)
    ses_ok = all(skel_betti[i + 1] + skel_betti[i] == rel[i] for i in range(top))
    # the pair layer j sits at height m + 1 + j
    pair_terms = [rel[m + j] for j in range(m + 1)]
    face_is_building = sorted(x for x, h in zip(X.elements, hts) if h <= m) == \
        sorted(dec.face_poset.elements)
    ok = (concentrated and ses_ok and face_is_building and pair_terms == terms
          and skel_betti[m] == st and skel_betti[top] == st * st)
    return {"skeleton_betti": skel_betti, "relative": rel, "pair_terms": pair_terms,
            "concentrated": concentrated, "ses_ok": ses_ok}, ok


def subgroup_roster(p: int, n: int) -> dict[str, MatrixGroup]:
    """Nontrivial subgroups used for fixed-point checks.

    Over GF(2) the diagonal torus is trivial, so unipotent and permutation subgroups stand in.
    """
    out = {}
    if p > 2:
        out["torus"] = MatrixGroup.diagonal_torus(p, n)
    else:
        out["unipotent"] = MatrixGroup.unipotent(p, n)
        if n > 2:
            out["permutations"] = MatrixGroup.permutation_matrices(p, n)
    out["GL"] = MatrixGroup.full(p, n)
    return out
