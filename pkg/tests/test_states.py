"""Tests for density matrices, pure states and their helpers."""

import numpy as np
import pytest

from quantum_witness.core.states import (
    DensityMatrix,
    PureState,
    basis_state,
    bloch_vector,
    fidelity,
    from_bloch,
    ghz_state,
    maximally_mixed,
    partial_trace,
    phi_state,
    random_density_matrix,
    random_pure_state,
    tensor,
    von_neumann_entropy,
)
from quantum_witness.errors import DimensionMismatchError, InvalidStateError


class TestDensityMatrix:
    """Validation of density matrices."""

    def test_valid_state(self, plus_state):
        """A pure state has purity one."""
        assert plus_state.dim == 2
        assert plus_state.purity == pytest.approx(1.0)

    def test_rejects_wrong_trace(self):
        with pytest.raises(InvalidStateError, match="trace"):
            DensityMatrix(matrix=np.eye(2))

    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError, match="Hermitian"):
            DensityMatrix(matrix=[[0.5, 0.5], [0.0, 0.5]])

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(InvalidStateError, match="positive semidefinite"):
            DensityMatrix(matrix=[[1.1, 0.0], [0.0, -0.1]])

    def test_rejects_oversized_dimension(self):
        with pytest.raises(DimensionMismatchError):
            maximally_mixed(16)

    def test_matrix_is_read_only(self, plus_state):
        with pytest.raises(ValueError):
            plus_state.matrix[0, 0] = 1.0

    def test_diagonal_dephases(self, plus_state):
        assert np.allclose(plus_state.diagonal().matrix, np.eye(2) / 2)

    def test_mix_endpoints(self, zero_state, mixed_qubit):
        assert np.allclose(zero_state.mix(mixed_qubit, 0.0).matrix, zero_state.matrix)
        assert np.allclose(zero_state.mix(mixed_qubit, 1.0).matrix, mixed_qubit.matrix)
        with pytest.raises(ValueError):
            zero_state.mix(mixed_qubit, 1.5)


class TestPureState:
    """Normalization of state vectors."""

    def test_rejects_unnormalized(self):
        with pytest.raises(InvalidStateError, match="norm"):
            PureState(amplitudes=[1.0, 1.0])

    def test_normalized_constructor(self):
        state = PureState.normalized([3.0, 4.0])
        assert np.allclose(state.amplitudes, [0.6, 0.8])

    def test_zero_vector(self):
        with pytest.raises(InvalidStateError):
            PureState.normalized([0.0, 0.0])

    def test_phi_state_amplitudes(self):
        """sin(theta)|00> + cos(theta)|11>."""
        state = phi_state(np.radians(30.0))
        assert state.amplitudes[0] == pytest.approx(0.5)
        assert state.amplitudes[3] == pytest.approx(np.sqrt(3) / 2)

    def test_ghz_state(self):
        state = ghz_state(3)
        assert state.dim == 8
        assert abs(state.amplitudes[0]) ** 2 == pytest.approx(0.5)


class TestTensorAndPartialTrace:
    """Composite systems."""

    def test_tensor_keeps_type(self, zero_state, plus_state):
        product = tensor(zero_state, plus_state)
        assert isinstance(product, DensityMatrix)
        assert product.dim == 4

    def test_partial_trace_of_product(self, zero_state, plus_state):
        product = tensor(zero_state, plus_state)
        assert np.allclose(partial_trace(product, 0, (2, 2)).matrix, zero_state.matrix)
        assert np.allclose(partial_trace(product, 1, (2, 2)).matrix, plus_state.matrix)

    def test_partial_trace_undoes_tensor(self, rng):
        for index in range(100):
            dims = (2, 3) if index % 2 else (2, 2)
            rho_a, rho_b = random_density_matrix(dims[0], rng), random_density_matrix(dims[1], rng)
            product = tensor(rho_a, rho_b)
            assert np.allclose(partial_trace(product, 0, dims).matrix, rho_a.matrix, rtol=0.0, atol=1e-10)
            assert np.allclose(partial_trace(product, 1, dims).matrix, rho_b.matrix, rtol=0.0, atol=1e-10)

    def test_partial_trace_of_bell_state(self, phi_plus):
        assert np.allclose(partial_trace(phi_plus, 0, (2, 2)).matrix, np.eye(2) / 2)

    def test_partial_trace_dimension_mismatch(self, phi_plus):
        with pytest.raises(DimensionMismatchError):
            partial_trace(phi_plus, 0, (2, 3))


class TestFidelity:
    """Uhlmann fidelity."""

    def test_identical_states(self, rng):
        rho = random_density_matrix(3, rng)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)

    def test_orthogonal_states(self):
        assert fidelity(basis_state(0).density(), basis_state(1).density()) == pytest.approx(0.0, abs=1e-12)

    def test_pure_overlap(self, zero_state, plus_state):
        assert fidelity(zero_state, plus_state) == pytest.approx(0.5)

    def test_symmetric(self, rng):
        a, b = random_density_matrix(2, rng), random_density_matrix(2, rng)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-9)

    def test_mixing_with_noise_is_monotone(self, rng):
        """F(rho, mix_t) falls with t for pure rho; F(I/d, mix_t) rises."""
        rho = random_pure_state(2, rng).density()
        noise = maximally_mixed(2)
        ts = np.linspace(0.0, 1.0, 11)
        towards_rho = [fidelity(rho, rho.mix(noise, t)) for t in ts]
        towards_noise = [fidelity(noise, rho.mix(noise, t)) for t in ts]
        assert all(b <= a + 1e-10 for a, b in zip(towards_rho, towards_rho[1:]))
        assert all(b >= a - 1e-10 for a, b in zip(towards_noise, towards_noise[1:]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fidelity(maximally_mixed(2), maximally_mixed(4))


class TestEntropyAndBloch:
    """Von Neumann entropy and Bloch conversions."""

    def test_entropy_of_mixed_qubit(self, mixed_qubit):
        assert von_neumann_entropy(mixed_qubit) == pytest.approx(1.0)

    def test_entropy_of_pure_state(self, plus_state):
        assert von_neumann_entropy(plus_state) == pytest.approx(0.0, abs=1e-9)

    def test_bloch_round_trip(self):
        r = np.array([0.3, -0.2, 0.5])
        assert np.allclose(bloch_vector(from_bloch(r)), r)

    def test_bloch_norm_limit(self):
        with pytest.raises(InvalidStateError):
            from_bloch([1.0, 1.0, 0.0])
