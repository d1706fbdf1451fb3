"""Trace-norm quantum discord and the correlation cost of weak measurements."""

__version__ = "0.1.0"

from .bell import bell_post_projective, bell_post_weak, bell_qcc, bell_tqd
from .discord import (
    CorrelationReport,
    OptimizationResult,
    correlation_report,
    offdiag_objective,
    qcc,
    qcc_multi,
    qcc_via_factorization,
    residual_quantumness,
    super_quantum_discord,
    tqd,
)
from .measurement import (
    BlochProjectorPair,
    MultiOutcomeWeakMeasurement,
    TwoOutcomeWeakMeasurement,
    channel_multi_outcome,
    channel_two_outcome,
    conditional_states,
    projective_channel,
    weak_operators,
)
from .search import SearchConfig
from .states import (
    BellDiagonalParams,
    DensityMatrix,
    bell_diagonal,
    from_matrix,
    local_unitary,
    random_state,
)
