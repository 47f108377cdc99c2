"""Test configuration and fixtures."""

import os
from pathlib import Path

# Set ALL required test environment variables FIRST before any imports
os.environ.setdefault("QW_APP_ENV", "development")
os.environ.setdefault("QW_LOG_LEVEL", "WARNING")
os.environ.setdefault("QW_OPTIMIZER_PROFILE", "default")
os.environ.setdefault("QW_RESAMPLE_SAMPLES", "2000")
os.environ.setdefault("QW_MAX_WORKERS", "1")
os.environ.setdefault("QW_SEED", "20240601")

import numpy as np
import pytest

from quantum_witness.core.measurements import Measurement, standard_measurements
from quantum_witness.core.states import DensityMatrix, PureState, maximally_mixed, phi_state

PROJECT_ROOT = Path(__file__).parent.parent


@pytest.fixture
def fixtures_dir() -> Path:
    """Directory of the transcribed data tables."""
    return PROJECT_ROOT / "fixtures"


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for reproducible random states."""
    return np.random.default_rng(1234)


@pytest.fixture
def measurements() -> dict[str, Measurement]:
    """Z, X and W measurements of one qubit."""
    return standard_measurements()


@pytest.fixture
def plus_state() -> DensityMatrix:
    """|+> = (|0> + |1>) / sqrt(2)."""
    return PureState(amplitudes=np.array([1.0, 1.0]) / np.sqrt(2.0)).density()


@pytest.fixture
def zero_state() -> DensityMatrix:
    return PureState(amplitudes=[1.0, 0.0]).density()


@pytest.fixture
def mixed_qubit() -> DensityMatrix:
    return maximally_mixed(2)


@pytest.fixture
def phi_plus() -> DensityMatrix:
    """(|00> + |11>) / sqrt(2), i.e. |Φ(45°)>."""
    return phi_state(np.pi / 4).density()
