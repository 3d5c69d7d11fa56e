"""Orthogonal Latin squares: transversals, L_g(s) schemes, nets and completion."""

from .errors import (
    DimensionError,
    IncompatibilityError,
    InvalidAnchorError,
    InvalidCliqueError,
    MalformedInputError,
    MalformedRelationError,
    MolsError,
    NotLatinError,
    OrthogonalityError,
    ParseError,
    PreconditionError,
    StructuralError,
)
from .estimator import PolCompleter, TransversalEnumerator
from .extend import ExtensionResult, Status, complete_pol, extend_by_one, square_from_class
from .latin import LatinSquare, PolSet, TreatmentGrid, are_orthogonal, is_latin, validate_pol
from .net import Net, PseudoNet, complementary_net, joined, net_from_pol, scheme_from_net
from .resolution import (
    Resolution,
    count_block_resolutions,
    count_resolutions,
    find_parallel_class,
    find_resolution,
)
from .scheme import (
    AssociationScheme,
    SchemeParameters,
    Verdict,
    bruck_bound_holds,
    build_Lg_scheme,
    classify_pseudo_Lg,
    compute_parameters,
    induce_complement,
)
from .transversals import Transversal, check_anchors, common_transversals, count_all_transversals, delete
from .verify import (
    Classification,
    CliqueSet,
    PropertyReport,
    check_cross_count_law,
    check_g3_conditions,
    check_six_properties,
    count_formations,
    detect_violations,
    neighbor_partitions,
    unique_containing_set,
)

__version__ = "0.1.0"
