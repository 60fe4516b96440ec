"""Zero-error capacity toolkit for quantum channels via noncommutative graphs."""
__version__ = "0.1.0"

from .additivity import (ANY, AdditivityCertificate, Rule, Verdict, audit_certificate, check_additivity,
                         numeric_multiplicativity_probe)
from .channels import KrausChannel, graph_of_channel, validate_channel
from .graphs import (BlockGraph, NoncommutativeGraph, QubitClass, classify_qubit_graph, decompose_block,
                     detect_diagonal_algebra, tensor_graphs)
from .independence import AlphaResult, CodewordSet, alpha_exact, alpha_lower_search, alpha_upper_bound, block_alpha
from .linalg import OperatorSubspace, Tolerances, complement, orthonormalize_span
from .rankone import RankOneStatus, SearchOptions, find_rank_one

__all__ = [
    "ANY", "AdditivityCertificate", "Rule", "Verdict", "audit_certificate", "check_additivity",
    "numeric_multiplicativity_probe", "KrausChannel", "graph_of_channel", "validate_channel", "BlockGraph",
    "NoncommutativeGraph", "QubitClass", "classify_qubit_graph", "decompose_block", "detect_diagonal_algebra",
    "tensor_graphs", "AlphaResult", "CodewordSet", "alpha_exact", "alpha_lower_search", "alpha_upper_bound",
    "block_alpha", "OperatorSubspace", "Tolerances", "complement", "orthonormalize_span", "RankOneStatus",
    "SearchOptions", "find_rank_one", "__version__",
]
