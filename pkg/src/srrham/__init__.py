"""Exact service rate regions of q-ary Hamming coded storage systems."""

from .codes import (
    Codeword,
    LinearCode,
    build_parity_check,
    classic_hamming,
    codewords_with_unit_at,
    dual_codewords,
    import_generator,
    odd_weight_column_count,
    systematic_hamming,
)
from .fields import FieldElement, FieldMatrix, Rational, in_span, rref
from .hypergraph import (
    Edge,
    Hypergraph,
    HypergraphStats,
    compute_stats,
    fractional_matching_number,
    from_recovery_system,
    matching_number,
    partial_hypergraph,
    transversal_number,
)
from .lp import LpOutcome, LpProblem, PivotLimitError, check_feasible, solve
from .recovery import (
    RecoverySystem,
    StructureReport,
    build_recovery_system,
    count_by_nonsystematic_nodes,
    recovery_sets_general,
    recovery_sets_systematic,
    structure_report,
)
from .srr import (
    Allocation,
    SrrInstance,
    SubsetBound,
    VerificationReport,
    delta_simplex,
    lambda_star,
    lambda_star_vector,
    m3_brute,
    m3_closed_form,
    max_objective,
    max_served,
    membership,
    subset_bound,
    verify_report,
    waterfill,
)

__version__ = "0.1.0"
