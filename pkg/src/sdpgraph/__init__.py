"""Elliptope SDP relaxations for sparse random graphs and deformed GOE matrices."""

from .graphs import (CenteredOperator, Labels, SparseGraph, centered_operator,
                     degree_second_moment, gen_er, gen_planted_2, gen_planted_r,
                     gen_regular, inf_to_two_norm_exact)
from .matrices import (Spectrum, bbap_prediction, deformed_goe, deformed_goe_r,
                       eig_sym, sample_goe, semicircle_quantile)
from .solver import (Sandwich, SolveReport, SphereFactor, alpha_k, coordinate_ascent,
                     default_rank, grothendieck_round, init_factor,
                     interpolation_gap_bound, objective, opt_k, sdp_sandwich,
                     zero_temp_gap_bound)

__version__ = "0.1.0"
