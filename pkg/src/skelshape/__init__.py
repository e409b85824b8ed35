"""Skeleton-based topological shape descriptors and inductive prototypes.

The pipeline turns a binary silhouette into a compact topological record (a
sequence of root-to-tip skeleton path features), matches those records
elastically, generalizes same-class records into an explicit prototype, and
applies the prototype back to instances to explain similarities, occlusions,
and missing parts.
"""

__version__ = "0.1.0"

from .apply import (
    CharacterMask,
    CompletionResult,
    SimilarityTransform,
    apply_character,
    complete_shape,
    estimate_similarity_transform,
)
from .errors import (
    DecodeError,
    DegeneratePairs,
    DegenerateSkeleton,
    DegenerateVector,
    EmptyCorrespondence,
    EmptyDataset,
    EmptyGallery,
    EmptyInput,
    EmptyShape,
    InsufficientCorrespondence,
    LengthMismatch,
    NoCandidate,
    SkelshapeError,
    ZeroDenominator,
)
from .generalize import (
    Grts,
    MergeNode,
    generalize_set,
    grts_distance,
    grts_from_rts,
    load_grts,
    merge_grts,
    save_grts,
)
from .harness import (
    Dataset,
    RetrievalReport,
    build_all,
    cross_classify,
    evaluate,
    load_config,
    load_dataset,
    retrieve,
)
from .metric import (
    MatchParams,
    discrete_frechet,
    distance_matrix,
    endpoint_distance,
    frechet_pairwise,
    mass_length_distance,
    spatial_distance,
)
from .osbmatch import MatchResult, global_cost, jump_cost, match_shapes, osb_match
from .raster import (
    BinaryShape,
    DistanceField,
    Skeleton,
    distance_transform,
    extract_skeleton,
    load_silhouette,
    prune_skeleton,
    shape_from_mask,
)
from .rts import (
    RTS,
    EndFeature,
    PipelineConfig,
    SpineAxis,
    SpineParams,
    build_rts,
    find_spine_axis,
    load_rts,
    normalize_features,
    path_mass,
    quantize_uneven,
    quantize_uniform,
    save_rts,
    spatial_value,
)
from .skeltree import (
    Branch,
    EndPath,
    GraphNode,
    PointClass,
    SkeletonGraph,
    SkeletonTree,
    build_skeleton_graph,
    build_skeleton_tree,
    classify_points,
    graph_debug_json,
)

__all__ = [
    "__version__",
    # errors
    "SkelshapeError",
    "DecodeError",
    "EmptyShape",
    "DegenerateSkeleton",
    "LengthMismatch",
    "ZeroDenominator",
    "DegenerateVector",
    "NoCandidate",
    "EmptyCorrespondence",
    "EmptyInput",
    "EmptyDataset",
    "EmptyGallery",
    "DegeneratePairs",
    "InsufficientCorrespondence",
    # raster
    "BinaryShape",
    "DistanceField",
    "Skeleton",
    "load_silhouette",
    "shape_from_mask",
    "distance_transform",
    "extract_skeleton",
    "prune_skeleton",
    # skeltree
    "PointClass",
    "GraphNode",
    "Branch",
    "SkeletonGraph",
    "EndPath",
    "SkeletonTree",
    "classify_points",
    "build_skeleton_graph",
    "build_skeleton_tree",
    "graph_debug_json",
    # rts
    "RTS",
    "EndFeature",
    "SpineAxis",
    "SpineParams",
    "PipelineConfig",
    "quantize_uniform",
    "quantize_uneven",
    "path_mass",
    "normalize_features",
    "find_spine_axis",
    "spatial_value",
    "build_rts",
    "save_rts",
    "load_rts",
    # metric
    "MatchParams",
    "discrete_frechet",
    "frechet_pairwise",
    "mass_length_distance",
    "spatial_distance",
    "endpoint_distance",
    "distance_matrix",
    # osbmatch
    "MatchResult",
    "jump_cost",
    "osb_match",
    "global_cost",
    "match_shapes",
    # generalize
    "Grts",
    "MergeNode",
    "grts_from_rts",
    "grts_distance",
    "merge_grts",
    "generalize_set",
    "save_grts",
    "load_grts",
    # apply
    "SimilarityTransform",
    "CharacterMask",
    "CompletionResult",
    "estimate_similarity_transform",
    "apply_character",
    "complete_shape",
    # harness
    "Dataset",
    "RetrievalReport",
    "load_dataset",
    "build_all",
    "retrieve",
    "evaluate",
    "cross_classify",
    "load_config",
]
