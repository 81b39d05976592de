"""Exact toolkit for cross-t-intersecting set families.

Builds the standard family classes, computes largest t-stars and their
ratios, and exhaustively finds maximum-product cross-t-intersecting
subfamily pairs and tuples together with every extremal witness.
"""

from .bounds import (
    ClosedFormRatio,
    Ratio,
    ThresholdVerdict,
    TransversalCheck,
    c_threshold,
    closed_form_ratio,
    refined_transversal_bound,
    star_ratio,
    threshold_holds,
    transversal_bound,
)
from .core import (
    BuildResult,
    ContainsSet,
    GroundSet,
    IntersectsAtLeast,
    MemberSet,
    SetFamily,
    SizeEquals,
    StarReport,
    build_family,
    common_core,
    is_t_transversal,
    largest_stars,
    star_counts,
    star_of,
    subfamily_where,
    t_intersects,
)
from .errors import (
    EncodingError,
    ParameterError,
    ParseError,
    PreconditionError,
    ResourceError,
    StarlabError,
)
from .familyio import (
    LoadedFamily,
    emit_report,
    family_roundtrip,
    load_family,
    save_family,
)
from .generators import (
    ClassParams,
    atoms_ground,
    gen_compositions,
    gen_example1,
    gen_level,
    gen_multisets,
    gen_partitions,
    gen_permutations,
    gen_powerset,
    gen_sequences,
    generate,
    single_set_family,
    stirling,
)
from .solver import (
    BicliqueInstance,
    ProbeReport,
    PropertyReport,
    PropertyVerdict,
    SearchLimits,
    SolveResult,
    VerificationReport,
    build_instance,
    chi_probe,
    classify_properties,
    max_product_pair,
    max_product_tuple,
    verify_main_theorem,
)

__version__ = "0.1.0"
