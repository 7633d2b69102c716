"""Deforming the dual numbers K[x]/(x^2) towards K[x]/(x^2 - t).

The associative structure is encoded as a Maurer-Cartan element of the
convolution algebra Hom_S(Ass^!, End_X).  We print the Betti numbers of the
twisted complex next to the direct Hochschild computation, then lift the
first-order direction mu_t(x, x) = t through order five.  The direction is
already an associative product for every t, so no higher corrections appear.
"""

import os

from deforma.cli import structure_table
from deforma.convolution import (cohomology_betti, convolution_algebra, load_structure,
                                 structure_to_mc)
from deforma.deform import DeformationState, hochschild_oracle, lift_to
from deforma.linfty import mc_residual, twist

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")

s = load_structure(os.path.join(FIX, "assoc_dual.st"))
d = load_structure(os.path.join(FIX, "assoc_dual_dir.st"))

conv = convolution_algebra(s.presentation, s.X, 6, N=8)
phi, psi = structure_to_mc(conv, s), structure_to_mc(conv, d)
print(f"convolution algebra: dim {conv.dim}, truncation {conv.stamp()}")
print("MC residual of the product:", mc_residual(conv, phi) or 0)

degs = range(0, 4)
betti = cohomology_betti(twist(conv, phi).complex(degs), degs)
table, dim = structure_table(s)
hh = hochschild_oracle(table, dim, 6).betti
print("twisted complex, degree -> Betti:", betti)
print("Hochschild cochains, arity -> Betti:", hh)
print("(degree k of the convolution algebra sits in arity k + 1)")

st = lift_to(DeformationState(conv, phi, [psi]), 5)
print(f"lifted to order {st.order}; MC through that order: {st.check()}")
for k, c in enumerate(st.corrections, 1):
    print(f"  t^{k}: {len(c)} nonzero coordinates")
