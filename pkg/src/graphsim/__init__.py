"""Similarity scores for directed colored graphs.

The core method scores node pairs by iteratively matching their in- and
out-neighborhoods with an optimal assignment solver. Two spectral-style
baselines, whole-graph measures built on optimal node matchings, a
subgraph matching experiment harness, and a CNF classification pipeline
round out the package.
"""

from .assignment import Matching, WeightTable, max_assignment_weight, solve_max_assignment
from .baseline_methods import (
    EdgeSimilarityMatrix,
    blondel_similarity,
    blondel_step,
    zager_edge_step,
    zager_similarity,
    zager_step,
)
from .experiments import (
    METHOD_ORDER,
    CellResult,
    ClassificationResult,
    CnfInstance,
    ExperimentReport,
    MethodSummary,
    SubgraphExperimentConfig,
    chain_formula,
    format_dimacs,
    knn_classify,
    parse_dimacs,
    pigeonhole_formula,
    read_manifest,
    read_report_csv,
    read_report_json,
    run_subgraph_experiment,
    variable_clause_graph,
    write_report_csv,
    write_report_json,
)
from .graph_core import (
    DirectedGraph,
    NodeMapping,
    ParseError,
    complement,
    erdos_renyi,
    exists_isomorphism,
    format_graph,
    from_edge_list,
    induced_subgraph,
    is_mapping_isomorphism,
    parse_graph_text,
    read_graph_file,
    relabel,
)
from .graph_measures import VARIANTS, graph_similarity, optimal_node_matching
from .neighbor_matching import NMConfig, NMResult, nm_similarity, nm_step

__version__ = "0.1.0"

__all__ = [
    "CellResult",
    "ClassificationResult",
    "CnfInstance",
    "DirectedGraph",
    "EdgeSimilarityMatrix",
    "ExperimentReport",
    "METHOD_ORDER",
    "Matching",
    "MethodSummary",
    "NMConfig",
    "NMResult",
    "NodeMapping",
    "ParseError",
    "SubgraphExperimentConfig",
    "VARIANTS",
    "WeightTable",
    "blondel_similarity",
    "blondel_step",
    "chain_formula",
    "complement",
    "erdos_renyi",
    "exists_isomorphism",
    "format_dimacs",
    "format_graph",
    "from_edge_list",
    "graph_similarity",
    "induced_subgraph",
    "is_mapping_isomorphism",
    "knn_classify",
    "max_assignment_weight",
    "nm_similarity",
    "nm_step",
    "optimal_node_matching",
    "parse_dimacs",
    "parse_graph_text",
    "pigeonhole_formula",
    "read_graph_file",
    "read_manifest",
    "read_report_csv",
    "read_report_json",
    "relabel",
    "run_subgraph_experiment",
    "solve_max_assignment",
    "variable_clause_graph",
    "write_report_csv",
    "write_report_json",
    "zager_edge_step",
    "zager_similarity",
    "zager_step",
    "__version__",
]
