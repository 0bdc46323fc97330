"""Quantum ptychography toolkit.

Simulates the 3n-circuit measurement protocol an n-qubit device would run on
a pure state (exactly or with finite shots and readout noise), mitigates
readout errors with calibration matrices, and reconstructs the state with an
iterative phase-retrieval engine, reporting fidelity and trace-distance
convergence.
"""

from .experiments import (
    SweepConfig,
    run_aqft_study,
    run_fidelity_sweep,
    run_timing_bench,
)
from .mitigation import (
    CalibrationMatrix,
    ReadoutNoiseModel,
    build_calibration,
    corrupt_counts,
    load_calibration,
    mitigate,
    save_calibration,
)
from .pie import (
    PieConfig,
    PieTrace,
    beta_schedule,
    fidelity,
    pie_correction_step,
    pie_run,
    random_estimate,
    trace_distance,
)
from .protocol import (
    CircuitRecord,
    PtychoDataset,
    circuit_settings,
    dataset_to_csv,
    exact_joint_distribution,
    generate_dataset,
    load_dataset,
    mitigate_dataset,
    normalize_dataset,
    sample_shots,
    save_dataset,
)
from .stateprep import (
    ghz_state,
    named_state,
    random_arbitrary,
    random_separable,
    table_states,
    w_state,
)
from .states import (
    ProjectorId,
    StateVector,
    apply_pauli_projector,
    apply_single_qubit,
    basis_state,
    born_distribution,
    inner_product,
    load_state,
    projector_ids,
    save_state,
)
from .transforms import (
    UnitarySpec,
    aqft_apply,
    aqft_matrix,
    dense_unitary,
    hadamard_apply,
    qft_apply,
    separable_apply,
    u3_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "CalibrationMatrix",
    "CircuitRecord",
    "PieConfig",
    "PieTrace",
    "ProjectorId",
    "PtychoDataset",
    "ReadoutNoiseModel",
    "StateVector",
    "SweepConfig",
    "UnitarySpec",
    "apply_pauli_projector",
    "apply_single_qubit",
    "aqft_apply",
    "aqft_matrix",
    "basis_state",
    "beta_schedule",
    "born_distribution",
    "build_calibration",
    "circuit_settings",
    "corrupt_counts",
    "dataset_to_csv",
    "dense_unitary",
    "exact_joint_distribution",
    "fidelity",
    "generate_dataset",
    "ghz_state",
    "hadamard_apply",
    "inner_product",
    "load_calibration",
    "load_dataset",
    "load_state",
    "mitigate",
    "mitigate_dataset",
    "named_state",
    "normalize_dataset",
    "pie_correction_step",
    "pie_run",
    "projector_ids",
    "qft_apply",
    "random_arbitrary",
    "random_estimate",
    "random_separable",
    "run_aqft_study",
    "run_fidelity_sweep",
    "run_timing_bench",
    "sample_shots",
    "save_calibration",
    "save_dataset",
    "save_state",
    "separable_apply",
    "table_states",
    "trace_distance",
    "u3_matrix",
    "w_state",
]
