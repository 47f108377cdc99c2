"""Tests for cumulative bounds and the two-sided majorization relation."""

from itertools import combinations

import numpy as np
import pytest

from quantum_witness.bounds.entropic import c_lb_from_bounds
from quantum_witness.bounds.functionals import (
    get_functional,
    registered_functionals,
    shannon_functional,
    tsallis_functional,
)
from quantum_witness.bounds.models import StateSet
from quantum_witness.bounds.uncertainty import (
    check_device_independent_relation,
    check_relation_3,
    cumulative_bounds,
    device_independent_bounds,
    f_vector_for,
    multi_observable_bounds,
)
from quantum_witness.bounds.vectors import bottom_k_sums, top_k_sums
from quantum_witness.config import get_optimizer_profile
from quantum_witness.core.states import maximally_mixed, random_density_matrix
from quantum_witness.errors import DimensionMismatchError, InvalidStateError, ShapeMismatchError


@pytest.fixture
def fast_profile():
    return get_optimizer_profile("fast")


@pytest.fixture
def zx_bounds(measurements, fast_profile):
    return cumulative_bounds(
        shannon_functional(), measurements["Z"], measurements["X"], StateSet.all_states(2), profile=fast_profile
    )


class TestCumulativeBounds:
    """R_k and r_k for the Shannon table of Z and X."""

    def test_levels_are_ordered(self, zx_bounds):
        assert zx_bounds.n == 4
        assert zx_bounds.is_monotone
        assert np.all(np.asarray(zx_bounds.levels_min) <= np.asarray(zx_bounds.levels_max) + 1e-12)

    def test_largest_single_entry(self, zx_bounds):
        """max eta(p) + eta(q) = 2 / (e ln 2)."""
        assert zx_bounds.levels_max[0] == pytest.approx(2.0 / (np.e * np.log(2.0)), abs=1e-4)

    def test_totals(self, zx_bounds):
        """The table total is twice H(Z) + H(X): 4 at I/2, 2 at the minimum."""
        assert zx_bounds.levels_max[-1] == pytest.approx(4.0, abs=1e-6)
        assert zx_bounds.levels_min[-1] == pytest.approx(2.0, abs=1e-4)
        assert c_lb_from_bounds(zx_bounds, 2) == pytest.approx(1.0, abs=1e-4)

    def test_trace_records_search(self, zx_bounds):
        assert "bloch_ball" in zx_bounds.trace.parametrizations
        assert zx_bounds.trace.evaluations > 0

    def test_vectors_reproduce_levels(self, zx_bounds):
        assert zx_bounds.upper_vector().prefix_sums == pytest.approx(zx_bounds.levels_max)
        assert zx_bounds.lower_vector().prefix_sums == pytest.approx(zx_bounds.levels_min)

    def test_dimension_mismatch(self, measurements, fast_profile):
        with pytest.raises(DimensionMismatchError):
            cumulative_bounds(
                shannon_functional(), measurements["Z"], measurements["X"], StateSet.all_states(4), fast_profile
            )

    def test_arity_mismatch(self, measurements, fast_profile):
        with pytest.raises(ShapeMismatchError):
            cumulative_bounds(
                shannon_functional(3), measurements["Z"], measurements["X"], StateSet.all_states(2), fast_profile
            )


class TestRelation:
    """r_ms ≺ f_ab ≺ R_ms."""

    @pytest.mark.parametrize("state_name", ["plus_state", "zero_state", "mixed_qubit"])
    def test_holds_for_states_in_the_set(self, request, measurements, zx_bounds, state_name):
        rho = request.getfixturevalue(state_name)
        for ordering in ("raw", "sorted"):
            report = check_relation_3(
                shannon_functional(),
                measurements["Z"],
                measurements["X"],
                StateSet.all_states(2),
                rho,
                bounds=zx_bounds,
                ordering=ordering,
            )
            assert report.holds, (state_name, ordering, report.upper_margins, report.lower_margins)

    def test_violated_outside_explicit_set(self, measurements, zero_state, mixed_qubit):
        """Bounds from |0> alone cannot contain the flat table of I/2."""
        D = StateSet.explicit([zero_state])
        report = check_relation_3(shannon_functional(), measurements["Z"], measurements["X"], D, mixed_qubit)
        assert not report.upper_ok
        assert report.upper_margins[0] == pytest.approx(-0.5)

    def test_state_outside_pure_set(self, measurements, mixed_qubit, zx_bounds):
        with pytest.raises(InvalidStateError):
            check_relation_3(
                shannon_functional(),
                measurements["Z"],
                measurements["X"],
                StateSet.pure_states(2),
                mixed_qubit,
                bounds=zx_bounds,
            )

    def test_unknown_ordering(self, measurements, plus_state, zx_bounds):
        with pytest.raises(ValueError, match="ordering"):
            check_relation_3(
                shannon_functional(),
                measurements["Z"],
                measurements["X"],
                StateSet.all_states(2),
                plus_state,
                bounds=zx_bounds,
                ordering="reversed",
            )


class TestMultiObservable:
    """Joint tables of three or more measurements and device-independent bounds."""

    def test_three_observables(self, measurements, fast_profile):
        bounds = multi_observable_bounds(
            tsallis_functional(2.0, arity=3),
            [measurements["Z"], measurements["X"], measurements["W"]],
            StateSet.all_states(2),
            profile=fast_profile,
        )
        assert bounds.n == 8
        assert bounds.labels == ("Z", "X", "W")

    def test_arity_must_match(self, measurements, fast_profile):
        with pytest.raises(ShapeMismatchError):
            multi_observable_bounds(
                shannon_functional(),
                [measurements["Z"], measurements["X"], measurements["W"]],
                StateSet.all_states(2),
                profile=fast_profile,
            )

    def test_device_independent_envelope(self, measurements, fast_profile, zx_bounds):
        """Bounds over a list of pairs contain each pair's bounds."""
        D = StateSet.all_states(2)
        pairs = [(measurements["Z"], measurements["X"]), (measurements["Z"], measurements["W"])]
        combined = device_independent_bounds(shannon_functional(), pairs, D, profile=fast_profile)
        assert np.all(np.asarray(combined.levels_max) >= np.asarray(zx_bounds.levels_max) - 1e-9)
        assert np.all(np.asarray(combined.levels_min) <= np.asarray(zx_bounds.levels_min) + 1e-9)

        reports = check_device_independent_relation(shannon_functional(), pairs, D, maximally_mixed(2), bounds=combined)
        assert len(reports) == 2
        assert all(r.holds for r in reports)


class TestSubsetChoice:
    """The best k cells of a table are its k largest (or smallest) entries."""

    @pytest.mark.parametrize("labels", [("Z", "X"), ("Z", "W"), ("Z", "X", "W")])
    def test_matches_exhaustive_search(self, rng, measurements, labels):
        f = shannon_functional(arity=len(labels))
        for _ in range(20):
            rho = random_density_matrix(2, rng)
            table = f_vector_for(f, [measurements[label] for label in labels], rho).array
            sums = {k: [sum(c) for c in combinations(table, k)] for k in range(1, len(table) + 1)}
            assert top_k_sums(table) == pytest.approx([max(sums[k]) for k in sorted(sums)], abs=1e-12)
            assert bottom_k_sums(table) == pytest.approx([min(sums[k]) for k in sorted(sums)], abs=1e-12)


@pytest.mark.slow
class TestRandomStates:
    """r_ms ≺ f_ab ≺ R_ms for random mixed states, for every registered functional."""

    @pytest.mark.parametrize("name", registered_functionals())
    def test_no_violations(self, rng, measurements, name):
        f = get_functional(name)
        D = StateSet.all_states(2)
        bounds = cumulative_bounds(f, measurements["Z"], measurements["X"], D, profile=get_optimizer_profile("default"))
        violations = []
        for index in range(1000):
            rho = random_density_matrix(2, rng, rank=1 + index % 2)
            report = check_relation_3(
                f, measurements["Z"], measurements["X"], D, rho, bounds=bounds, tol=1e-6, ordering="sorted"
            )
            if not report.holds:
                violations.append((index, report.upper_margins, report.lower_margins))
        assert violations == []
