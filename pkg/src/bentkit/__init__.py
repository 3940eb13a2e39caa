"""Exact homological algebra for bent complexes, spectral sequences and genus-one surgery counts."""
from .linalg import GF, QQ, ExactMatrix, Field, Subspace
from .graded import Complex, GradedMap, GradedSpace, MapSum, homology, mapping_cone
from .couple import FilteredComplex, UnrolledCouple, converge, couple_from_filtered, e_infinity, page, pages
from .lift import lift, roundtrip_check
from .octahedral import build_octahedron, fourth_sequence_exactness
from .bent import (KhiProfile, build_bent, build_dual_bent, build_half, duality_check, floer_simple_check,
                   is_negative_chain, is_positive_chain, large_surgery_dims, mirror, projection)
from .knots import (AlexanderPolynomial, KnotRecord, LspaceForm, connected_sum_profile, determinant_bound_check,
                    genus_one_pipeline, grading_bounds, jn_consistency, lspace_form_check, lspace_profile,
                    normalize_alexander, su2_verdict, surgery_dim, thin_profile)

__version__ = "0.1.0"
