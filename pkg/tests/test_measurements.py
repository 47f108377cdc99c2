"""Tests for POVMs, observables and Born probabilities."""

import numpy as np
import pytest

from quantum_witness.core.measurements import (
    Measurement,
    Observable,
    born_probabilities,
    born_probabilities_batch,
    computational_basis,
    max_overlap,
    overlap_basis,
    pauli,
    phi_basis,
)
from quantum_witness.core.states import PureState, maximally_mixed, random_density_matrix
from quantum_witness.errors import DimensionMismatchError, InvalidMeasurementError


class TestMeasurement:
    """POVM validation."""

    def test_incomplete_effects(self):
        with pytest.raises(InvalidMeasurementError, match="identity"):
            Measurement(label="bad", effects=[np.diag([1.0, 0.0]), np.diag([0.0, 0.5])])

    def test_non_psd_effect(self):
        with pytest.raises(InvalidMeasurementError, match="positive"):
            Measurement(label="bad", effects=[np.diag([1.2, 0.0]), np.diag([-0.2, 1.0])])

    def test_unsharp_povm_is_not_projective(self):
        m = Measurement(label="noisy", effects=[np.diag([0.9, 0.1]), np.diag([0.1, 0.9])])
        assert not m.is_projective
        assert not m.is_rank_one

    def test_computational_basis_is_rank_one(self):
        assert computational_basis(3).is_rank_one


class TestObservable:
    """Spectral decomposition with outcome 0 on the largest eigenvalue."""

    def test_pauli_z_order(self):
        z = pauli("Z")
        assert z.eigenvalues == pytest.approx((1.0, -1.0))
        assert np.allclose(z.projectors[0], np.diag([1.0, 0.0]))

    def test_identity_has_one_outcome(self):
        assert pauli("I").eigenvalues == pytest.approx((1.0,))

    def test_w_positive_eigenvector(self):
        """W = (sqrt(3) X + Z)/2 has +1 eigenvector (sqrt(3)/2, 1/2)."""
        w = pauli("W")
        v = np.array([np.sqrt(3) / 2, 0.5])
        assert np.allclose(w.projectors[0], np.outer(v, v))

    def test_unknown_pauli(self):
        with pytest.raises(InvalidMeasurementError):
            pauli("Q")

    def test_non_hermitian(self):
        with pytest.raises(InvalidMeasurementError):
            Observable(label="bad", matrix=[[0.0, 1.0], [0.0, 0.0]])


class TestBornProbabilities:
    """tr(M_a rho)."""

    def test_plus_in_x_basis(self, plus_state):
        assert born_probabilities(plus_state, pauli("X").measurement) == pytest.approx([1.0, 0.0])

    def test_plus_in_z_basis(self, plus_state):
        assert born_probabilities(plus_state, computational_basis(2)) == pytest.approx([0.5, 0.5])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            born_probabilities(maximally_mixed(4), computational_basis(2))

    def test_batch_matches_single(self, plus_state, zero_state):
        m = phi_basis(0.3)
        batch = born_probabilities_batch(np.stack([plus_state.matrix, zero_state.matrix]), m)
        assert batch[0] == pytest.approx(born_probabilities(plus_state, m))
        assert batch[1] == pytest.approx(born_probabilities(zero_state, m))

    def test_phi_basis_vectors(self):
        state = PureState(amplitudes=[np.cos(0.4), np.sin(0.4)]).density()
        assert born_probabilities(state, phi_basis(0.4))[0] == pytest.approx(1.0)

    def test_random_mixed_states(self, rng, measurements):
        """Ginibre states give normalized, nonnegative outcome distributions."""
        bases = [*measurements.values(), computational_basis(3), computational_basis(4)]
        for index in range(1000):
            m = bases[index % len(bases)]
            rho = random_density_matrix(m.dim, rng)
            unclipped = np.real(np.einsum("aij,ji->a", m.stacked, rho.matrix))
            assert unclipped.min() >= -1e-9
            assert born_probabilities(rho, m).sum() == pytest.approx(1.0, abs=1e-8)


class TestOverlap:
    """Maximal overlap between rank-1 measurements."""

    @pytest.mark.parametrize(
        "first, second, expected",
        [
            ("Z", "X", 1 / np.sqrt(2)),
            ("Z", "W", np.sqrt(3) / 2),
            ("X", "W", (np.sqrt(3) + 1) / (2 * np.sqrt(2))),
        ],
    )
    def test_standard_pairs(self, measurements, first, second, expected):
        assert max_overlap(measurements[first], measurements[second]) == pytest.approx(expected)

    def test_overlap_basis(self):
        assert max_overlap(computational_basis(2), overlap_basis(0.9)) == pytest.approx(0.9)

    def test_overlap_basis_range(self):
        with pytest.raises(ValueError):
            overlap_basis(0.5)

    def test_requires_rank_one(self):
        noisy = Measurement(label="noisy", effects=[np.diag([0.9, 0.1]), np.diag([0.1, 0.9])])
        with pytest.raises(InvalidMeasurementError):
            max_overlap(noisy, computational_basis(2))
