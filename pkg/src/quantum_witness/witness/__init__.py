"""Coherence, entanglement and nonlocality witnesses built on majorization."""

from quantum_witness.witness.coherence import (
    coherence_vector_relation,
    d_h_from_marginals,
    phi_scan,
    relative_entropy_coherence,
)
from quantum_witness.witness.entanglement import bell_state_witness, witness_uncertainty_relation
from quantum_witness.witness.models import BellLevel, CorrelationTable, CorrelatorConvention, WitnessOperator
from quantum_witness.witness.nonlocality import (
    check_chsh_relation,
    chsh_f_vector,
    chsh_value,
    correlator,
    covariance_chsh,
    deterministic_boxes,
    pr_box,
    quantum_chsh_value,
    simulate_phi_table,
    tsirelson_box,
)
from quantum_witness.witness.svetlichny import (
    optimize_ghz_svetlichny,
    simulate_ghz_table,
    svetlichny_check,
    svetlichny_f_vector,
    svetlichny_ns_box,
    svetlichny_value,
)

__all__ = [
    "BellLevel",
    "CorrelationTable",
    "CorrelatorConvention",
    "WitnessOperator",
    "bell_state_witness",
    "check_chsh_relation",
    "chsh_f_vector",
    "chsh_value",
    "coherence_vector_relation",
    "correlator",
    "covariance_chsh",
    "d_h_from_marginals",
    "deterministic_boxes",
    "optimize_ghz_svetlichny",
    "phi_scan",
    "pr_box",
    "quantum_chsh_value",
    "relative_entropy_coherence",
    "simulate_ghz_table",
    "simulate_phi_table",
    "svetlichny_check",
    "svetlichny_f_vector",
    "svetlichny_ns_box",
    "svetlichny_value",
    "tsirelson_box",
    "witness_uncertainty_relation",
]
