"""Exact-arithmetic toolkit for GKM graphs of torus actions."""

from .algebra import (
    BettiProfile,
    Matrix,
    PoincareSeries,
    Polynomial,
    homogeneous_basis,
    kernel_basis,
    rank,
    restrict_to_hyperplane,
    series_shape_divide,
)
from .chase import AffineExpr, ChaseProblem, ChaseResult, chase_tower, entails, gysin_step
from .classify import Verdict, classify, cpn_realizable
from .cohomology import (
    EquivariantClass,
    equivariant_basis,
    equivariant_dim,
    formality_check,
    generator_class,
    ordinary_betti,
)
from .errors import GKMError
from .graph import (
    Edge,
    GKMGraph,
    SubtorusSpec,
    Weight,
    check_gkm_k,
    disjoint_union,
    euler_characteristic,
    fixed_subgraph,
    isomorphic,
    s0_membership,
    sp_membership,
    two_skeleton_components,
    validate,
)
from .localization import (
    ModuleCoordinates,
    PushforwardReport,
    integrate,
    modp_divisibility,
    module_coordinates,
    validate_orientation_signs,
)
from .models import ModelSpec, cpn_graph, generic_weights, hpn_graph, sphere_graph

__version__ = "0.1.0"
