"""Hierarchical clustering on finite metric spaces with exact arithmetic.

Provides single, complete and average linkage with simultaneous tie merging,
alpha-unchaining single linkage (plain and size-aware), exact
Gromov-Hausdorff distances for small spaces, and a randomized property lab.
"""

from .estimators import LinkageClustering, UnchainingClustering, cut_dendrogram
from .exceptions import (
    AsymmetryError,
    BudgetExceeded,
    CoverageError,
    DisconnectedGraphError,
    EmptySubsetError,
    IndexSetMismatch,
    InvalidDendrogramError,
    InvalidPartitionError,
    LabelMismatch,
    MetricError,
    NegativeDistanceError,
    NonFiniteDistanceError,
    NonzeroDiagonalError,
    NotUltrametricError,
    OverlappingBlocksError,
    ParseError,
    ShapeError,
    TriangleViolation,
    ValidationError,
    ZeroOffDiagonalError,
)
from .formats import emit_dendrogram, parse_input, read_input
from .generators import barbell_k4, bridged_k4, random_metric, random_ultrametric
from .gromov_hausdorff import Correspondence, distortion, gh_exact, gh_lower_diameter, gh_upper_identity
from .linkage import LinkageKind, linkage_value, sl_mst_oracle, standard_linkage_dendrogram
from .methods import AL, CL, SL, MethodId, SLalpha, SLstar, parse_method, run_method
from .metric import (
    Dendrogram,
    FiniteMetricSpace,
    Partition,
    Ultrametric,
    dendrogram_to_ultrametric,
    refines,
    shortest_path_metric,
    ultrametric_to_dendrogram,
    validate_metric,
)
from .rips import condition_ii, max_crossing_clique_dim, rips_dimension
from .unchaining import block_graph, big_small_split, sl_alpha_dendrogram, sl_star_alpha_dendrogram

__version__ = "0.1.0"

__all__ = [
    "LinkageClustering",
    "UnchainingClustering",
    "cut_dendrogram",
    "FiniteMetricSpace",
    "Ultrametric",
    "Partition",
    "Dendrogram",
    "validate_metric",
    "shortest_path_metric",
    "dendrogram_to_ultrametric",
    "ultrametric_to_dendrogram",
    "refines",
    "rips_dimension",
    "max_crossing_clique_dim",
    "condition_ii",
    "LinkageKind",
    "linkage_value",
    "standard_linkage_dendrogram",
    "sl_mst_oracle",
    "block_graph",
    "big_small_split",
    "sl_alpha_dendrogram",
    "sl_star_alpha_dendrogram",
    "MethodId",
    "SL",
    "CL",
    "AL",
    "SLalpha",
    "SLstar",
    "parse_method",
    "run_method",
    "Correspondence",
    "distortion",
    "gh_exact",
    "gh_upper_identity",
    "gh_lower_diameter",
    "barbell_k4",
    "bridged_k4",
    "random_metric",
    "random_ultrametric",
    "parse_input",
    "read_input",
    "emit_dendrogram",
    "ValidationError",
    "MetricError",
    "ShapeError",
    "NegativeDistanceError",
    "NonFiniteDistanceError",
    "AsymmetryError",
    "NonzeroDiagonalError",
    "ZeroOffDiagonalError",
    "TriangleViolation",
    "NotUltrametricError",
    "DisconnectedGraphError",
    "IndexSetMismatch",
    "InvalidPartitionError",
    "InvalidDendrogramError",
    "EmptySubsetError",
    "OverlappingBlocksError",
    "CoverageError",
    "LabelMismatch",
    "ParseError",
    "BudgetExceeded",
]
