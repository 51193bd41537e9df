"""modrep: modular representation theory over small finite fields.

Library + CLI for constructing modules of finite groups over GF(p^e) and
computing composition factors, Loewy series, homomorphism spaces,
indecomposable decompositions, vertices, Green correspondents, trivial-source
modules, and block/Cartan data.
"""

__version__ = "0.1.0"

from .ffield import GF, FieldSpec, Mat, Poly, echelonize, factor_poly, mat_inv, mat_mul, min_poly, nullspace
from .perm import GroupHandle, Perm, Subgroup, right_transversal
from .prng import Prng
from .rep import (Rep, HomBasis, direct_sum, dual, hom_space, induce, perm_module,
                  regular_module, restrict, tensor, trivial_rep)
from .chop import ChopResult, chop, iso_irr, spin, standard_basis
from .structure import (LoewyData, end_algebra, algebra_radical, fitting_split,
                        indec_decompose, iso_indec, radical_series, socle_series)
from .green import green_correspondent, higman_test, relative_trace_matrix, trivial_source_test, vertex
from .blocks import BlockData, block_of, cartan_matrix, central_idempotents, pims
