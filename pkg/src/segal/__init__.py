"""Composable surface types, plane dilatation calculus, and boundary flattening.

Six coordinated pieces: a monoid of open/closed surface types with splice
composition, transformation rules for complex dilatation data under chart
changes, quasisymmetry bounds for boundary reparametrizations, conformal
modules of half-plane quadrilaterals, a shuffle product on formal chains,
and the order-doubling recursion that flattens boundary structure fields.
"""

__version__ = "0.1.0"

from .beltrami import (
    ACSMatrix,
    DilatationField,
    LinearMapZZbar,
    SampledChartMap,
    abs_mu_from_K,
    acs_from_frame,
    acs_from_mu,
    dilatation_K,
    field_distance,
    mu_from_acs,
    mu_of_linear,
    pullback_field,
    pullback_mu,
    sew_sections,
    teichmuller_distance,
    transform_field,
    transform_mu,
)
from .chains import (
    Chain,
    FormalSimplex,
    ProductSimplex,
    boundary,
    check_associativity,
    check_chain_map,
    check_symmetry,
    generator,
    shuffle_product,
    swap_factors,
)
from .cobordism import (
    BoundaryCycle,
    ComponentData,
    CycleEntry,
    ObjectSignature,
    OCType,
    compose_types,
    disjoint_union,
    is_stable,
    octype_from_json,
    octype_to_json,
    validate_type,
)
from .flattening import (
    INFINITE,
    BoundaryGlueMap,
    FlattenedChart,
    OrderPair,
    StructureField,
    base_structure_field,
    flatten_step,
    glue_identity,
    glue_linear,
    glue_sine,
    next_structure_field,
    order_sequence,
    order_step,
    structure_field_chain,
    tau_minus1,
    verify_orders,
)
from .modulus import (
    DEFAULT_RECT_ASPECTS,
    QuadrilateralSpec,
    check_geometric_qc,
    cross_ratio,
    module_of_quad,
    module_rect,
    module_sc,
    normalize_quad,
    rotated_position,
)
from .quasisym import (
    CircleDiffeo,
    SampledIncreasingFunction,
    bump,
    circle_identity,
    circle_rotation,
    corner_dilatation,
    corner_map,
    corner_transform,
    half_angle_piecewise,
    half_angle_smooth,
    qs_bound,
    sampled_exp,
    sampled_identity,
    sampled_slope_break,
    smooth_twist,
)
from .acceptance import CriterionResult, run_acceptance

__all__ = [
    "__version__",
    "ACSMatrix",
    "BoundaryCycle",
    "BoundaryGlueMap",
    "Chain",
    "CircleDiffeo",
    "ComponentData",
    "CriterionResult",
    "CycleEntry",
    "DEFAULT_RECT_ASPECTS",
    "DilatationField",
    "FlattenedChart",
    "FormalSimplex",
    "INFINITE",
    "LinearMapZZbar",
    "OCType",
    "ObjectSignature",
    "OrderPair",
    "ProductSimplex",
    "QuadrilateralSpec",
    "SampledChartMap",
    "SampledIncreasingFunction",
    "StructureField",
    "abs_mu_from_K",
    "acs_from_frame",
    "acs_from_mu",
    "base_structure_field",
    "boundary",
    "bump",
    "check_associativity",
    "check_chain_map",
    "check_geometric_qc",
    "check_symmetry",
    "circle_identity",
    "circle_rotation",
    "compose_types",
    "corner_dilatation",
    "corner_map",
    "corner_transform",
    "cross_ratio",
    "dilatation_K",
    "disjoint_union",
    "field_distance",
    "flatten_step",
    "generator",
    "glue_identity",
    "glue_linear",
    "glue_sine",
    "half_angle_piecewise",
    "half_angle_smooth",
    "is_stable",
    "module_of_quad",
    "module_rect",
    "module_sc",
    "mu_from_acs",
    "mu_of_linear",
    "next_structure_field",
    "normalize_quad",
    "octype_from_json",
    "octype_to_json",
    "order_sequence",
    "order_step",
    "pullback_field",
    "pullback_mu",
    "qs_bound",
    "rotated_position",
    "run_acceptance",
    "sampled_exp",
    "sampled_identity",
    "sampled_slope_break",
    "sew_sections",
    "shuffle_product",
    "smooth_twist",
    "structure_field_chain",
    "swap_factors",
    "tau_minus1",
    "teichmuller_distance",
    "transform_field",
    "transform_mu",
    "validate_type",
    "verify_orders",
]
