"""Exact combinatorics and rational homology behind the support strata of
GL_n Hitchin fibrations over the reduced locus: dual graphs of nodal spectral
curves, cographic-matroid complexes, weight-graded monodromy complexes, the
symmetric-group action on top homology, and the closed-form numerology of the
new supports.
"""

from .multigraph import (
    CycleSpaceBasis,
    GraphError,
    HitchinPartition,
    Multigraph,
    build_dual_graph,
    contract_edge,
    cycle_space,
    delete_edge,
    delta_aff,
    double_edges,
    graph_from_json,
    graph_to_json,
)
from .complexes import (
    FaceComplex,
    cographic_complex,
    complex_f_vector,
    nonspanning_complex,
    partition_order_complex,
)
from .homology import (
    HomologyProfile,
    RationalChainComplex,
    SparseRationalMatrix,
    boundary_complex,
    exact_rank,
    induced_map_on_top_homology,
    reduced_homology,
)
from .cks import (
    CKSComplexInstance,
    CksCohomology,
    CksError,
    GradedH1Model,
    build_cks,
    build_graded_model,
    cks_cohomology,
    image_NI,
    model_from_graph,
    nilpotent_family,
    picard_lefschetz,
    top_weight_action,
    top_weight_dimensions,
)
from .symgroup import (
    ClassFunction,
    ProductClassFunction,
    SymgroupError,
    character_inner_product,
    edge_action,
    induced_character_oracle,
    restrict_to_young,
    top_homology_character,
)
from .numerology import (
    SupportReport,
    VerificationError,
    delta_aff_formula,
    doubling_reduce,
    local_system_rank,
    stalk_dimension,
    support_report,
)

__all__ = [
    "CKSComplexInstance",
    "CksCohomology",
    "CksError",
    "ClassFunction",
    "GradedH1Model",
    "ProductClassFunction",
    "SupportReport",
    "SymgroupError",
    "VerificationError",
    "build_cks",
    "build_graded_model",
    "character_inner_product",
    "cks_cohomology",
    "delta_aff_formula",
    "doubling_reduce",
    "edge_action",
    "image_NI",
    "induced_character_oracle",
    "local_system_rank",
    "model_from_graph",
    "nilpotent_family",
    "picard_lefschetz",
    "restrict_to_young",
    "stalk_dimension",
    "support_report",
    "top_homology_character",
    "top_weight_action",
    "top_weight_dimensions",
    "CycleSpaceBasis",
    "FaceComplex",
    "GraphError",
    "HitchinPartition",
    "HomologyProfile",
    "Multigraph",
    "RationalChainComplex",
    "SparseRationalMatrix",
    "boundary_complex",
    "build_dual_graph",
    "cographic_complex",
    "complex_f_vector",
    "contract_edge",
    "cycle_space",
    "delete_edge",
    "delta_aff",
    "double_edges",
    "exact_rank",
    "graph_from_json",
    "graph_to_json",
    "induced_map_on_top_homology",
    "nonspanning_complex",
    "partition_order_complex",
    "reduced_homology",
]

__version__ = "0.1.0"
