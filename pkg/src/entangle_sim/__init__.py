"""Simulation of remote entanglement generation by local disentangling."""

from .qcore import (
    DensityMatrix,
    InvalidArgumentError,
    NotAStateError,
    QubitLayout,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    operator_schmidt_rank,
    partial_trace,
    reduced_state,
    rotation_matrix,
    tensor_product,
    trace_distance,
    von_neumann_entropy,
)
from .protocol import (
    LAYOUT,
    AngleTriple,
    DegenerateOutcomeError,
    PreparedSystem,
    ProtocolMode,
    VerificationReport,
    conditional_state,
    disentangler_global,
    disentangler_pair,
    generalized_bell,
    prepare_joint_state,
    reduced_abcd,
    run_protocol,
    standard_bell,
)
from .analysis import (
    ConditionReport,
    SweepSpec,
    averaged_trace_distance,
    classical_counterpart,
    coherence_trace_distance,
    condition_scan,
    entanglement_entropy_closed_form,
    entanglement_entropy_state,
    mutual_information_ad,
    run_sweep,
)

__version__ = "0.1.0"
