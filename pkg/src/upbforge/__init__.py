"""upbforge: unextendible product bases on seven qubits.

Reconstructs an eleven-vector unextendible product basis, classifies which
system merges preserve unextendibility, builds the associated rank-117
PPT entangled state, and bounds its geometric measure of entanglement.
"""

from .linalg import (
    DEFAULT_TOL,
    Tolerances,
    canonical_angle,
    complement,
    det4,
    hermitian_eigen,
    null_space,
    qubit_from_angle,
    tensor,
)
from .uom import (
    ConcreteProductSet,
    Partition,
    SymbolEntry,
    SymbolicUOM,
    builtin_a,
    builtin_a_tilde,
    enumerate_merge_pairs,
    format_uom,
    instantiate,
    merge,
    multiplicity_profile,
    parse_uom,
    random_assignment,
    verify_symbolic_orthogonality,
)
from .merge_analysis import (
    MinOverlapResult,
    PairSubmatrix,
    QuadrupleClassification,
    SearchBudgetExceeded,
    Witness,
    classify_zero_quadruples,
    closed_form_det_roots,
    closed_form_quadruple_det,
    find_witness,
    min_overlap_product,
    pair_submatrix,
    quadruple_matrix,
    zero_quintuples,
)
from .ppt import (
    PPTReport,
    build_state,
    builtin_upb,
    canonical_cuts,
    partial_transpose,
    ppt_report,
    projector_from_set,
    state_diagnostics,
)
from .geom import (
    DescentResult,
    MeasureResult,
    OptimizerState,
    SamplingResult,
    gradient,
    merged_measure,
    objective,
    product_state,
    random_sampling,
    steepest_descent,
    to_ebits,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "Tolerances",
    "canonical_angle",
    "complement",
    "det4",
    "hermitian_eigen",
    "null_space",
    "qubit_from_angle",
    "tensor",
    "ConcreteProductSet",
    "Partition",
    "SymbolEntry",
    "SymbolicUOM",
    "builtin_a",
    "builtin_a_tilde",
    "enumerate_merge_pairs",
    "format_uom",
    "instantiate",
    "merge",
    "multiplicity_profile",
    "parse_uom",
    "random_assignment",
    "verify_symbolic_orthogonality",
    "MinOverlapResult",
    "PairSubmatrix",
    "QuadrupleClassification",
    "SearchBudgetExceeded",
    "Witness",
    "classify_zero_quadruples",
    "closed_form_det_roots",
    "closed_form_quadruple_det",
    "find_witness",
    "min_overlap_product",
    "pair_submatrix",
    "quadruple_matrix",
    "zero_quintuples",
    "PPTReport",
    "build_state",
    "builtin_upb",
    "canonical_cuts",
    "partial_transpose",
    "ppt_report",
    "projector_from_set",
    "state_diagnostics",
    "DescentResult",
    "MeasureResult",
    "OptimizerState",
    "SamplingResult",
    "gradient",
    "merged_measure",
    "objective",
    "product_state",
    "random_sampling",
    "steepest_descent",
    "to_ebits",
]
