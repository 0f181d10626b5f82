"""Numerical construction and certification of extremal entanglement
witnesses on bipartite Hilbert spaces."""

__version__ = "0.1.0"

from .hilbert import (Dims, HermitianOp, ProductVector, is_ppt, kron_product,
                      partial_transpose, pure_product_state,
                      random_hermitian, random_product_vector, sl_transform)
from .biquadratic import (TangentFrame, Zero, classify_zero, eval_form,
                          form_terms, gradient, hessian, tangent_frame)
from .zerofinder import ZeroSet, find_zeros, min_eig_map, min_eig_map_t, \
    minimize_form
from .constraints import (RankReport, constraint_matrix, hermitian_to_real,
                          numerical_rank, product_vector_rank,
                          real_to_hermitian)
from .extremality import (Certificate, FaceDescent, certify, check_optimal,
                          face_boundary, find_extremal)
from .decomposable import (DecompWitness, decomposable_dimension,
                           dependent_product_vectors, overlap_projector,
                           partial_decompose, pure_state_witness,
                           with_prescribed_zeros)
from .maps_and_spa import SpaResult, apply_map, apply_transpose_map, spa, \
    spa_state
from .catalog import CatalogEntry, choi_lam, ha_kye_parameters, robertson
from .facegeom import (SimplexFace, center_distance, closest_state,
                       cm_volume, face_from_zeros, optimize_shape,
                       ppt_entangled_state, r_m, v_reg)
from .realform import RealWitness, pure_state_split, to_real
from . import errors
