"""Verify algebraic tree-width certificates and run the supporting oracles.

A geodesic cycle that is a GF(2) sum of short cycles forces large
tree-width. This package checks such certificates exactly (rational
arithmetic throughout), searches for them on small graphs, implements the
constructive separator lemmas behind the bound, and provides brute-force
oracles (exact tree-width, balanced separators) to cross-check everything.
"""

from twcert.certificate import (
    Certificate,
    CertificateRejected,
    Flavor,
    VerifiedCertificate,
    Violation,
    lower_bound_unit,
    scale_factor,
    search_certificate,
    subdivide,
    verify_certificate,
    verify_cyclespace_certificate,
    verify_unit_certificate,
)
from twcert.errors import (
    BudgetExceeded,
    GraphMismatchError,
    LemmaViolation,
    NotACycle,
    OracleLimitExceeded,
    ParseError,
)
from twcert.generators import intro_grid_lengths, make_grid, make_wall, make_wheel, wall_certificate
from twcert.graph import (
    Cycle,
    EdgeSet,
    Graph,
    VertexSet,
    as_cycle,
    components,
    decompose_in_span,
    f2_sum,
)
from twcert.lemmas import (
    absorb_component,
    balanced_separator,
    check_precise_theorem,
    exact_treewidth,
    extend_separator,
    range_in,
)
from twcert.metric import (
    LengthFn,
    distance,
    enumerate_cycles_up_to,
    is_geodesic_algebraic,
    is_geodesic_cycle,
    subgraph_length,
)

__version__ = "0.1.0"

__all__ = [
    "absorb_component",
    "as_cycle",
    "balanced_separator",
    "BudgetExceeded",
    "Certificate",
    "CertificateRejected",
    "check_precise_theorem",
    "components",
    "Cycle",
    "decompose_in_span",
    "distance",
    "EdgeSet",
    "enumerate_cycles_up_to",
    "exact_treewidth",
    "extend_separator",
    "f2_sum",
    "Flavor",
    "Graph",
    "GraphMismatchError",
    "intro_grid_lengths",
    "is_geodesic_algebraic",
    "is_geodesic_cycle",
    "LemmaViolation",
    "LengthFn",
    "lower_bound_unit",
    "make_grid",
    "make_wall",
    "make_wheel",
    "NotACycle",
    "OracleLimitExceeded",
    "ParseError",
    "range_in",
    "scale_factor",
    "search_certificate",
    "subdivide",
    "subgraph_length",
    "VerifiedCertificate",
    "verify_certificate",
    "verify_cyclespace_certificate",
    "verify_unit_certificate",
    "VertexSet",
    "Violation",
    "wall_certificate",
]
