"""Signed dimension counts for the square of the Steinberg module, small GL_n(p)."""
from decomp.groups import steinberg_les_check

for p, n in ((2, 2), (3, 2), (2, 3)):
    r = steinberg_les_check(p, n)
    print(f"GL{n}({p}): St={r.st} terms={r.terms} pairs={r.pair_counts} "
          f"sum={r.signed_sum} orbits={r.orbit_sizes} skeleton={r.skeleton['skeleton_betti']}")
