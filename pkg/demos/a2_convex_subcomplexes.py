"""Walk through the poset of convex subcomplexes of the hexagon (thin A2)."""
from decomp import build_building, homology, is_spherical
from decomp.decompositions import decompositions, key_str

b = build_building("thin:A2")
d = decompositions(b)
Y = d.Y
print(f"{b}: Y has {len(Y)} elements and dimension {Y.dim}")

wall = next(S for S in d.levi_spheres if len(S) == 2)
above = [y for y in Y.elements if set(wall) < set(y[1])]
print("strictly above the wall", b.face_key(wall), ":", [key_str(b, y) for y in above])

root = next(y for y in above if len(y[1]) == 4)
below = Y.lower_subposet(root)
print("below the root", key_str(b, root), ": betti", homology(below).nonzero(),
      "spherical of dim 2:", is_spherical(below, 2))
