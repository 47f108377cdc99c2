"""Tests for the multi-start state-space search."""

import numpy as np
import pytest

from quantum_witness.bounds.functionals import shannon_functional
from quantum_witness.bounds.models import StateSet
from quantum_witness.bounds.optimizer import StateSpaceOptimizer
from quantum_witness.bounds.uncertainty import cumulative_bounds
from quantum_witness.bounds.vectors import top_k_sums
from quantum_witness.config import get_optimizer_profile
from quantum_witness.core.states import basis_state
from quantum_witness.errors import OptimizerError
from quantum_witness.witness.entanglement import bell_state_witness, cell_operators


@pytest.fixture
def fast_profile():
    return get_optimizer_profile("fast")


def witness_levels(matrices):
    K = cell_operators(bell_state_witness())
    cells = np.einsum("abij,nji->nab", K, matrices).real.reshape(len(matrices), -1)
    return top_k_sums(cells)


class TestWorkerIndependence:
    """Refinement on a thread pool reproduces the sequential search exactly."""

    @pytest.mark.parametrize("kind", ["all_states", "pure_states"])
    def test_cumulative_bounds(self, measurements, fast_profile, kind):
        D = getattr(StateSet, kind)(2)
        runs = [
            cumulative_bounds(
                shannon_functional(), measurements["Z"], measurements["X"], D, fast_profile, max_workers=workers
            )
            for workers in (1, 4)
        ]
        assert runs[0].levels_max == runs[1].levels_max
        assert runs[0].levels_min == runs[1].levels_min

    @pytest.mark.parametrize("maximize", [True, False])
    def test_product_state_search(self, fast_profile, maximize):
        searches = [
            StateSpaceOptimizer(StateSet.separable((2, 2)), profile=fast_profile, max_workers=workers).extremize(
                witness_levels, maximize=maximize
            )
            for workers in (1, 3)
        ]
        assert searches[0].values == searches[1].values
        assert searches[0].converged == searches[1].converged
        assert searches[0].evaluations == searches[1].evaluations
        for left, right in zip(searches[0].argbest, searches[1].argbest, strict=True):
            assert np.array_equal(left, right)


class TestSearch:
    def test_explicit_list_is_scanned(self):
        states = [basis_state(0).density(), basis_state(1).density()]
        search = StateSpaceOptimizer(StateSet.explicit(states)).extremize(
            lambda ms: ms[:, :1, 0].real, maximize=True
        )
        assert search.values == (1.0,)
        assert search.parametrizations == ("explicit_list",)

    def test_minimum_searches_the_sphere_too(self, fast_profile):
        optimizer = StateSpaceOptimizer(StateSet.all_states(2), profile=fast_profile)
        assert [p.name for p in optimizer.parametrizations(maximize=False)] == ["bloch_ball", "bloch_sphere"]
        assert [p.name for p in optimizer.parametrizations(maximize=True)] == ["bloch_ball"]

    def test_qutrits_are_not_searched(self, fast_profile):
        with pytest.raises(OptimizerError, match="qubits"):
            StateSpaceOptimizer(StateSet.all_states(3), profile=fast_profile).parametrizations(maximize=True)

    def test_empty_explicit_list(self):
        with pytest.raises(OptimizerError, match="empty"):
            StateSet.explicit([])
