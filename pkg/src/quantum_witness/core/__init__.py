"""Dense linear algebra, quantum states, observables and measurements."""

from quantum_witness.core.measurements import (
    Measurement,
    Observable,
    born_probabilities,
    computational_basis,
    max_overlap,
    overlap_basis,
    pauli,
    phi_basis,
    standard_measurements,
)
from quantum_witness.core.states import (
    DensityMatrix,
    PureState,
    fidelity,
    maximally_mixed,
    partial_trace,
    phi_state,
    tensor,
    von_neumann_entropy,
)

__all__ = [
    "DensityMatrix",
    "Measurement",
    "Observable",
    "PureState",
    "born_probabilities",
    "computational_basis",
    "fidelity",
    "max_overlap",
    "maximally_mixed",
    "overlap_basis",
    "partial_trace",
    "pauli",
    "phi_basis",
    "phi_state",
    "standard_measurements",
    "tensor",
    "von_neumann_entropy",
]
