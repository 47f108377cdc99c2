"""Published data tables, counting statistics and tomography."""

from quantum_witness.experiment.analysis import AnalysisResult, WitnessAnalysis
from quantum_witness.experiment.fixtures import fixture_path, load_fixture
from quantum_witness.experiment.models import (
    CoincidenceRecord,
    FidelityRecord,
    MarginalRecord,
    ScanRecord,
    TomographyInput,
)
from quantum_witness.experiment.statistics import (
    ResampleResult,
    poisson_resample,
    probs_from_counts,
    table_from_records,
)
from quantum_witness.experiment.tomography import (
    james_projectors,
    simulate_tomography_input,
    tomography_reconstruct,
)

__all__ = [
    "AnalysisResult",
    "CoincidenceRecord",
    "FidelityRecord",
    "MarginalRecord",
    "ResampleResult",
    "ScanRecord",
    "TomographyInput",
    "WitnessAnalysis",
    "fixture_path",
    "james_projectors",
    "load_fixture",
    "poisson_resample",
    "probs_from_counts",
    "simulate_tomography_input",
    "table_from_records",
    "tomography_reconstruct",
]
