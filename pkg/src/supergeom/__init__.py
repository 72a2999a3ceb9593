"""Exact computer algebra for graded supermanifolds, n-vector bundles and their functors."""
from .bundle import (
    Atlas,
    BundleKind,
    BundleMorphism,
    Transition,
    ValidationError,
    ValidationReport,
    check_morphism,
    core_bundle,
    permute_atlas,
    restrict_to_weight,
    validate_atlas,
    weight_vector_field,
)
from .dsl import AtlasDocument, DslError, DslSemanticError, DslSyntaxError, emit_atlas, loads, parse_atlas
from .parity import koszul_sign, phi_iso, reverse_parity, total_reversion
from .polar import desuperize, diag_embedding, diagonalize, polarize, roundtrip_isomorphism
from .superalg import (
    Chart,
    Coordinate,
    Derivation,
    GsaError,
    Polynomial,
    PolynomialMap,
    apply_derivation,
    bracket,
    normalize_mul,
    partial,
    substitute,
)
from .symmetry import SKEW, SYMMETRIC, ActionTable, nice_coordinates, validate_action, xi_functor
from .tangent import flip_action, iterated_tangent, tangent_lift, tangent_of_atlas

__version__ = "0.1.0"
