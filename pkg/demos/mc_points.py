"""Maurer-Cartan points of a nilpotent algebra as maps out of its CE algebra.

For g = graded Heisenberg (x, y in degree 1, [x, y] = z) and R = K[t]/(t^3)
we write the MC equation of g (x) tR coefficientwise and, separately, the
equations for a cdga map C*(g) -> R.  Both ideals have the same reduced
Groebner basis.  Swapping two coordinates in the comparison breaks the match
on a less symmetric example, which is the control.
"""

import os

from deforma.deform import ce_algebra, mc_vs_ce_points
from deforma.linfty import parse_linfty

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "fixtures")


def load(name):
    with open(os.path.join(FIX, name)) as fh:
        return parse_linfty(fh.read())


g = load("heisenberg.linfty")
print("CE differential d^2 = 0:", not ce_algebra(g).square_defects())
r = mc_vs_ce_points(g, 2)
print("MC equations:", r["mc_equations"])
print("CE equations:", r["ce_equations"])
print("Groebner bases agree:", r["equal"], r["groebner_mc"])

two = load("twostep.linfty")
ones = two.by_degree(1)
swap = {(ones[0], 1): (ones[1], 1), (ones[1], 1): (ones[0], 1), (ones[2], 1): (ones[0], 1)}
print("two-step algebra, honest identification:", mc_vs_ce_points(two, 2)["equal"])
print("two-step algebra, shuffled identification:", mc_vs_ce_points(two, 2, identification=swap)["equal"])
