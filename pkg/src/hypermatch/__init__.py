"""Random hypergraphs H(n, M) and their maximum hyper-matchings."""

__version__ = "0.1.0"

from .bounds import (
    ExpectationBounds,
    Regime,
    RegimeReport,
    chebyshev_ratio,
    conditional_match_probability_bound,
    expected_matchings_bounds,
    expected_matchings_exact,
    markov_no_pair_bound,
    match_probability,
    regime_classify,
    unit_threshold,
    variance_upper_bound,
)
from .combinatorics import (
    LogNumber,
    binomial,
    disjoint_family_count,
    log_binomial,
    log_disjoint_family_count,
    log_stirling2,
    stirling2,
)
from .hypergraph import (
    Hypergraph,
    complete_hypergraph,
    members,
    parse_instance,
    sample_hypergraph,
    serialize_instance,
    support_size,
    vertex_set,
)
from .solver import (
    Matching,
    SolveStats,
    count_matchings_of_size,
    export_ilp,
    is_matching,
    max_matching_bruteforce,
    max_matching_exact,
)
