"""Seeded randomized invariant sampler.

Each family draws cases from a ``random.Random`` and records the number of
cases and failures; no case is ever skipped silently.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .building import build_building
from .coxeter import build_coxeter
from .decompositions import decompositions, transport, transport_chain
from .groups import MatrixGroup, act_on
from .homology import chain_complex, homology, join_betti
from .poset import Poset, SimplicialComplex, barycentric_subdivision, poset_join


@dataclass
class FamilyResult:
    cases: int = 0
    failures: list = field(default_factory=list)

    def record(self, ok: bool, case) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(case)


def random_poset(rng: random.Random, max_size: int = 8, density: float = 0.3) -> Poset:
    n = rng.randint(0, max_size)
    rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset(list(range(n)), rel)


def random_complex(rng: random.Random, max_vertices: int = 7, max_facets: int = 6) -> SimplicialComplex:
    n = rng.randint(1, max_vertices)
    facets = []
    for _ in range(rng.randint(1, max_facets)):
        k = rng.randint(1, min(n, 4))
        facets.append(tuple(sorted(rng.sample(range(n), k))))
    return SimplicialComplex(list(range(n)), facets=facets)


def hull_laws(rng, W, fam: FamilyResult, cases: int) -> None:
    """Extensive, monotone and idempotent, on random simplex sets."""
    N = W.nsimplices
    for _ in range(cases):
        a = rng.sample(range(N), rng.randint(1, 3))
        b = a + rng.sample(range(N), rng.randint(0, 2))
        ha, hb = W.convex_hull(a), W.convex_hull(b)
        closed = W.closure(a)
        ok = (ha & closed == closed and ha & hb == ha
              and W.convex_hull(list(_bits(ha))) == ha)
        fam.record(ok, (W.name, tuple(a), tuple(b)))


def op_involution(W, fam: FamilyResult) -> None:
    for k in range(W.nsimplices):
        o = W.opposite(k)
        ok = W.opposite(o) == k and W.simplex_dim(o) == W.simplex_dim(k)
        fam.record(ok, (W.name, k))


def _bits(m):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def equivariance_cases(spec: str, fam: FamilyResult, rng, limit: int) -> None:
    """F, Gamma and phi commute with every group generator, on sampled elements."""
    b = build_building(spec)
    dec = decompositions(b)
    if b.kind == "typeA":
        gens = [act_on(b, g) for g in MatrixGroup.full(*b.field).generators]
    else:
        gens = [b.vertex_permutation(g) for g in b.automorphism_generators()]
    F, phi = dec.map_F(), dec.map_phi()
    pd_sd = barycentric_subdivision(dec.PD)
    chains = pd_sd.elements
    for vp in gens:
        for x in rng.sample(dec.OPD.elements, min(limit, len(dec.OPD))):
            gx = transport(x, vp)
            fam.record(F(gx) == transport(F(x), vp), ("F", spec, x))
            fam.record(phi(gx) == transport(phi(x), vp), ("phi", spec, x))
        for c in rng.sample(chains, min(limit, len(chains))):
            gc = transport_chain(c, vp, dec.PD)
            fam.record(dec.gamma_image(gc) == transport(dec.gamma_image(c), vp), ("Gamma", spec, c))


def property_suite(seed: int = 0, scale: int = 1) -> dict[str, FamilyResult]:
    rng = random.Random(seed)
    out = {k: FamilyResult() for k in
           ("hull", "op", "boundary", "subdivision", "join", "equivariance")}
    for name in ("A2", "A3", "B3", "I2(5)"):
        W = build_coxeter(name)
        hull_laws(rng, W, out["hull"], 60 * scale)
        op_involution(W, out["op"])
    for _ in range(150 * scale):
        k = random_complex(rng)
        out["boundary"].record(chain_complex(k).check_square_zero(), k.to_json())
    for _ in range(60 * scale):
        p = random_poset(rng, 7)
        ok = homology(p).same_as(homology(barycentric_subdivision(p)))
        out["subdivision"].record(ok, p.to_json())
    for _ in range(60 * scale):
        x, y = random_poset(rng, 5), random_poset(rng, 5)
        hx, hy = homology(x).nonzero(), homology(y).nonzero()
        want = {k: v for k, v in join_betti(hx, hy).items() if v}
        got = homology(poset_join(x, y)).nonzero()
        out["join"].record(got == want, (x.to_json(), y.to_json()))
    for spec in ("A(p=2,n=2)", "A(p=3,n=2)", "thin:A2", "A(p=2,n=3)"):
        equivariance_cases(spec, out["equivariance"], rng, 20 * scale)
    return out
