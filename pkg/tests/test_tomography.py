"""Tests for two-qubit polarization tomography."""

import numpy as np
import pytest

from quantum_witness.core.states import fidelity, maximally_mixed, phi_state, random_pure_state
from quantum_witness.errors import InvalidMeasurementError
from quantum_witness.experiment.models import TomographyInput
from quantum_witness.experiment.tomography import (
    JAMES_SEQUENCE,
    james_projectors,
    project_to_density,
    projector,
    simulate_tomography_input,
    state_fidelities,
    tomography_reconstruct,
)


class TestProjectors:
    def test_sequence_has_sixteen_projections(self):
        projectors = james_projectors()
        assert len(projectors) == 16
        assert set(projectors) == set(JAMES_SEQUENCE)

    def test_projector_is_rank_one(self):
        p = projector("HD")
        assert np.allclose(p @ p, p)
        assert np.trace(p).real == pytest.approx(1.0)

    def test_lower_case_labels(self):
        assert np.allclose(projector("rl"), projector("RL"))

    def test_unknown_label(self):
        with pytest.raises(InvalidMeasurementError, match="unknown projection"):
            projector("HX")


class TestReconstruction:
    """Linear inversion followed by projection onto density matrices."""

    @pytest.mark.parametrize("theta", [0.0, 30.0, 45.0, 75.0])
    def test_noiseless_round_trip(self, theta):
        target = phi_state(np.radians(theta)).density()
        estimate = tomography_reconstruct(simulate_tomography_input(target))
        assert np.allclose(estimate.matrix, target.matrix, atol=1e-8)

    def test_random_pure_states(self, rng):
        for _ in range(100):
            target = random_pure_state(4, rng).density()
            estimate = tomography_reconstruct(simulate_tomography_input(target))
            assert fidelity(estimate, target) >= 1.0 - 1e-8

    def test_maximally_mixed(self):
        target = maximally_mixed(4)
        estimate = tomography_reconstruct(simulate_tomography_input(target))
        assert np.allclose(estimate.matrix, target.matrix, atol=1e-10)
        assert estimate.purity == pytest.approx(0.25)

    def test_scale_is_irrelevant(self):
        target = phi_state(np.radians(60.0)).density()
        data = simulate_tomography_input(target)
        scaled = TomographyInput(labels=data.labels, values=tuple(5000.0 * v for v in data.values))
        assert np.allclose(tomography_reconstruct(scaled).matrix, tomography_reconstruct(data).matrix)

    def test_poisson_counts_keep_high_fidelity(self):
        target = phi_state(np.radians(30.0)).density()
        data = simulate_tomography_input(target, mean_counts=1e4, rng=np.random.default_rng(42))
        assert all(float(v).is_integer() for v in data.values)
        fidelities = state_fidelities(tomography_reconstruct(data), target)
        assert set(fidelities) == {"two_qubit", "one_qubit_a", "one_qubit_b"}
        assert min(fidelities.values()) >= 0.98

    def test_rank_deficient_projection_set(self):
        data = TomographyInput(labels=("HH",) * 16, values=(1.0,) * 16)
        with pytest.raises(InvalidMeasurementError, match="rank"):
            tomography_reconstruct(data)

    def test_negative_eigenvalues_are_clipped(self):
        matrix = np.diag([0.7, 0.5, -0.2, 0.0]).astype(np.complex128)
        rho = project_to_density(matrix)
        assert np.all(rho.eigenvalues >= -1e-12)
        assert np.trace(rho.matrix).real == pytest.approx(1.0)
        assert rho.matrix[0, 0].real == pytest.approx(0.7 / 1.2)

    def test_no_positive_part(self):
        with pytest.raises(InvalidMeasurementError):
            project_to_density(-np.eye(4, dtype=np.complex128))
