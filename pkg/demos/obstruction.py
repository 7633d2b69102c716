"""An obstructed first-order deformation.

At the zero product on K^2 the twisted differential vanishes, so every
bilinear map is a first-order deformation and the second-order obstruction
is the associator of the direction itself, with no boundaries to absorb it.
The direction e.x = e, x.x = e is not associative, so the lift stops at t^2.
"""

import os

from deforma.convolution import convolution_algebra, load_structure, relation_defects, structure_to_mc
from deforma.deform import DeformationState, ObstructionClass, lift_order

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

base = load_structure(os.path.join(FIX, "zero_k2.st"))
d = load_structure(os.path.join(FIX, "obstructed_dir.st"))
conv = convolution_algebra(base.presentation, base.X, 3, N=5)

print("associator of the direction:", relation_defects(d))
res = lift_order(DeformationState(conv, structure_to_mc(conv, base), [structure_to_mc(conv, d)]))
assert isinstance(res, ObstructionClass)
print(f"obstruction at order {res.order}: nonzero = {res.nonzero}")
print(f"rank of boundaries {res.rank_boundaries}, with the class adjoined {res.rank_with}")
for i, x in sorted(res.representative.items()):
    print(f"  {conv.describe(i)}: {x}")
