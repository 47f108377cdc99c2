"""Tests for count handling and Poisson resampling."""

from pathlib import Path

import numpy as np
import pytest

from quantum_witness.errors import ShapeMismatchError
from quantum_witness.experiment.fixtures import load_fixture
from quantum_witness.experiment.models import CoincidenceRecord
from quantum_witness.experiment.statistics import (
    chsh_statistic,
    counts_by_theta,
    poisson_resample,
    probs_from_counts,
    table_from_counts,
    table_from_records,
)
from quantum_witness.witness.nonlocality import chsh_value


TABLE4 = Path(__file__).parent.parent / "fixtures" / "table4.csv"


@pytest.fixture(scope="module")
def measured_counts():
    records = load_fixture(TABLE4, "table4")
    return counts_by_theta(records)


class TestCounts:
    """Counts to conditional probabilities."""

    def test_probabilities(self):
        probs = probs_from_counts([14560, 630, 139, 1047])
        assert probs[0, 0] == pytest.approx(0.8891, abs=1e-4)
        assert probs.sum() == pytest.approx(1.0)

    def test_zero_total(self):
        with pytest.raises(ValueError, match="zero total"):
            probs_from_counts([0, 0, 0, 0])

    def test_cell_count(self):
        with pytest.raises(ShapeMismatchError):
            probs_from_counts([1, 2, 3])

    def test_missing_cells(self):
        records = [CoincidenceRecord(theta_deg=45.0, x=0, y=0, a=0, b=0, count=10)]
        with pytest.raises(ShapeMismatchError, match="missing"):
            counts_by_theta(records)

    def test_table_from_records(self, fixtures_dir):
        records = load_fixture(fixtures_dir / "table4.csv", "table4")
        table = table_from_records(records, 45.0)
        assert table.slice(0, 0)[0, 0] == pytest.approx(26058 / (26058 + 4259 + 4936 + 27230))
        with pytest.raises(ValueError, match="available"):
            table_from_records(records, 50.0)

    def test_batch_statistic_matches_table(self, measured_counts):
        counts = measured_counts[30.0]
        assert chsh_statistic(counts[None, ...])[0] == pytest.approx(chsh_value(table_from_counts(counts)))


class TestPoissonResample:
    """Resampled CHSH values."""

    def test_reproducible(self, measured_counts):
        first = poisson_resample(measured_counts[45.0], n_samples=2000, seed=7)
        second = poisson_resample(measured_counts[45.0], n_samples=2000, seed=7)
        assert first.mean == second.mean
        assert first.std == second.std

    def test_independent_of_workers(self, measured_counts):
        sequential = poisson_resample(measured_counts[60.0], n_samples=25_000, seed=3, max_workers=1)
        threaded = poisson_resample(measured_counts[60.0], n_samples=25_000, seed=3, max_workers=4)
        assert sequential.mean == threaded.mean
        assert sequential.std == threaded.std

    def test_error_scales_with_counts(self, measured_counts):
        """Hundred times the counts gives a tenth of the spread."""
        counts = measured_counts[30.0]
        base = poisson_resample(counts, n_samples=2000, seed=11)
        scaled = poisson_resample(counts * 100, n_samples=2000, seed=11)
        assert base.std / scaled.std == pytest.approx(10.0, rel=0.15)
        assert scaled.mean == pytest.approx(base.observed, abs=1e-3)

    def test_strong_violation_hits_floor(self, measured_counts):
        result = poisson_resample(measured_counts[45.0], n_samples=2000, seed=5, bound=2.0)
        assert result.observed == pytest.approx(2.7825, abs=1e-4)
        assert result.p_value_floor
        assert result.p_value == pytest.approx(1 / 2000)
        assert result.gaussian_tail < 1e-12
        assert result.p_value_text == "< 5e-04"

    def test_no_violation(self):
        """Perfect correlations in every slice give S = 2 in every draw."""
        counts = np.zeros((2, 2, 2, 2))
        counts[:, :, 0, 0] = 25
        counts[:, :, 1, 1] = 25
        result = poisson_resample(counts, n_samples=1000, seed=1, bound=2.0)
        assert result.observed == pytest.approx(2.0)
        assert result.p_value == pytest.approx(1.0)
        assert not result.p_value_floor

    def test_minimum_samples(self, measured_counts):
        with pytest.raises(ValueError, match="at least"):
            poisson_resample(measured_counts[45.0], n_samples=10)
