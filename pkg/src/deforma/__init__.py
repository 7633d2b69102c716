"""deforma: exact deformation complexes of (pr)operadic algebra structures.

Modules
-------
exactalg      rationals, sparse matrices, cochain complexes, cohomology
presentations quadratic (pr)operad presentations, free and quotient components
graphs        decorated directed graphs and canonical forms
graphcal      Koszul dual coproperads, Delta_(1), End_X
linfty        L-infinity algebras, MC elements, twisting, gauge, BCH, forms
convolution   convolution algebras Hom_S(C, End_X) and structure maps
deform        Artinian lifting, obstructions, gauge solver, CE rings, oracles
cli           the ``deforma`` command
"""

__version__ = "0.1.0"

from .exactalg import CochainComplex, GradedVectorSpace, SparseMatrix, cohomology, \
    kernel_basis, parse_complex, rank
from .presentations import BUILTINS, Presentation, free_component, load_presentation, \
    parse_presentation, quotient_component
from .graphcal import end_properad, infinitesimal_coproduct, koszul_dual_component
from .linfty import LInftyAlgebra, TableLInfty, bch, check_linfty, gauge_act, mc_residual, \
    parse_linfty, twist
from .convolution import convolution_algebra, deformation_complex, load_structure, \
    moduli_homotopy_groups, structure_to_mc
from .deform import ArtinianScalars, DeformationState, ce_algebra, ce_oracle, extend_scalars, \
    gauge_equivalent, hochschild_oracle, lift_order, mc_vs_ce_points
