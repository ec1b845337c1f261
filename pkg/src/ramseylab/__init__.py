"""Ramsey colorings, exact small Ramsey numbers, and the vertex-deletion gap."""

from .balance import balance_report, balanced_trace, chase_trace, es_clique_order, reverse_jensen_bound
from .coloring import (
    EdgeColoring,
    PatternSpec,
    build_pattern,
    find_mono_copy,
    parse_pattern,
    pentagon_coloring,
    product_coloring,
    random_coloring,
    turan_coloring,
    verify_free,
)
from .config import LimitExceeded, Limits
from .graph import (
    DegeneracyOrder,
    Embedding,
    Graph,
    chromatic_number,
    connected_components,
    contains_subgraph,
    degeneracy_order,
    greedy_embed,
    max_clique,
)
from .search import (
    RamseyCertificate,
    arrows,
    expected_mono_copies,
    ramsey_number,
    random_lb_witness,
    read_certificate,
    write_certificate,
)

__version__ = "0.1.0"

__all__ = [
    "DegeneracyOrder",
    "EdgeColoring",
    "Embedding",
    "Graph",
    "LimitExceeded",
    "Limits",
    "PatternSpec",
    "RamseyCertificate",
    "arrows",
    "balance_report",
    "balanced_trace",
    "build_pattern",
    "chase_trace",
    "chromatic_number",
    "connected_components",
    "contains_subgraph",
    "degeneracy_order",
    "es_clique_order",
    "expected_mono_copies",
    "find_mono_copy",
    "greedy_embed",
    "max_clique",
    "parse_pattern",
    "pentagon_coloring",
    "product_coloring",
    "ramsey_number",
    "random_coloring",
    "random_lb_witness",
    "read_certificate",
    "reverse_jensen_bound",
    "turan_coloring",
    "verify_free",
    "write_certificate",
]
