"""Sizes and homology of every decomposition poset of the building of GF(2)^3."""
import time

from decomp import build_building, homology
from decomp.decompositions import decompositions, vector_decompositions

t = time.perf_counter()
b = build_building("A(p=2,n=3)")
d, v = decompositions(b), vector_decompositions(b)
print(b)
for name in ("D", "OD", "PD", "OPD", "Y", "CB", "join_model"):
    P = getattr(d, name)
    print(f"{name:10s} size {len(P):4d}  betti {homology(P).nonzero()}")
for name in ("PD", "OPD", "K2", "OK2"):
    P = getattr(v, name)
    print(f"{name + '(V)':10s} size {len(P):4d}  betti {homology(P).nonzero()}")
print("Gamma iso:", d.gamma_homology_map().iso, " phi iso:", d.phi_homology_map().iso)
print("vector phi iso (ordered, unordered):", v.phi_map(True).iso, v.phi_map(False).iso)
print("wedge bookkeeping:", d.wedge_bookkeeping())
print(f"{time.perf_counter() - t:.1f}s")
