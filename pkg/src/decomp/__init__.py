"""Decomposition posets of spherical buildings and their homology."""
from .building import Building, build_building, build_thin, build_typeA
from .coxeter import CoxeterSystem, build_coxeter, y_dimension_probe
from .decompositions import (Decompositions, VectorDecompositions, build_CB, build_D, build_OD,
                             build_OPD, build_PD, build_vector_posets, build_Y,
                             conjecture_probe_upper_intervals, crossed_posets_vector, map_F,
                             map_Gamma, map_phi, wedge_bookkeeping)
from .groups import MatrixGroup, check_equivariance, fixed_point_pipeline, orbits, steinberg_les_check
from .homology import HomologyResult, homology, induced_map, is_cohen_macaulay, is_spherical
from .poset import Poset, PosetMap, SimplicialComplex, barycentric_subdivision, order_complex

__version__ = "0.1.0"
