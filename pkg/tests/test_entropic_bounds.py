"""Tests for the MU, VS, FGG and optimizer entropic bounds."""

import numpy as np
import pytest

from quantum_witness.bounds.entropic import (
    INV_SQRT2,
    bound_sweep,
    entropic_lower_bound,
    fgg_bound,
    fgg_vector,
    mu_bound,
    optimizer_bound,
    pairwise_vs_sum,
    vs_bound,
    vs_h3,
)
from quantum_witness.bounds.models import BoundKind, EntropyKind
from quantum_witness.core.measurements import pauli
from quantum_witness.errors import UnsupportedBoundError


class TestAnalyticBounds:
    """MU and the piecewise VS bound."""

    def test_mu_at_unbiased_overlap(self):
        assert mu_bound(INV_SQRT2) == pytest.approx(1.0)

    def test_vs_matches_mu_below_band(self):
        assert vs_bound(INV_SQRT2) == pytest.approx(1.0)

    def test_vs_upper_piece(self):
        """2 h((1 + c) / 2) at c = 0.9."""
        assert vs_bound(0.9) == pytest.approx(0.572794, abs=1e-6)
        assert vs_h3(1.0) == pytest.approx(0.0)

    def test_vs_dominates_mu_above_band(self):
        for c in (0.85, 0.9, 0.95):
            assert vs_bound(c) >= mu_bound(c)

    def test_middle_band_envelope(self):
        assert vs_bound(0.8, "envelope") == pytest.approx(mu_bound(0.8))

    def test_middle_band_callable(self):
        assert vs_bound(0.8, lambda c: 0.5) == pytest.approx(0.5)

    def test_middle_band_undefined(self):
        with pytest.raises(UnsupportedBoundError, match="middle-band"):
            vs_bound(0.8, "none")

    def test_overlap_range(self):
        with pytest.raises(ValueError, match="overlap"):
            entropic_lower_bound(BoundKind.MU, EntropyKind.SHANNON, 0.5)

    def test_shannon_only(self):
        with pytest.raises(UnsupportedBoundError):
            entropic_lower_bound("MU", "renyi", 0.9)
        with pytest.raises(UnsupportedBoundError):
            entropic_lower_bound("VS", "tsallis", 0.9)

    def test_pairwise_sum_for_mutually_unbiased_triple(self):
        """Three pairwise terms of 1, divided by m - 1 = 2."""
        measurements = [pauli(name).measurement for name in ("X", "Y", "Z")]
        assert pairwise_vs_sum(measurements) == pytest.approx(1.5)

    def test_pairwise_needs_two(self):
        with pytest.raises(ValueError):
            pairwise_vs_sum([pauli("Z").measurement])


class TestNumericalBounds:
    """FGG omega vector and direct minimization."""

    def test_fgg_vector_is_normalized(self):
        omega = fgg_vector(0.9)
        assert omega.total == pytest.approx(1.0)
        assert np.all(np.diff(omega.prefix_sums) >= -1e-12)

    def test_fgg_vanishes_for_identical_bases(self):
        assert fgg_bound(1.0) == pytest.approx(0.0, abs=1e-6)

    def test_tsallis_order_below_one(self):
        with pytest.raises(UnsupportedBoundError):
            fgg_bound(0.9, EntropyKind.TSALLIS, 0.5)

    @pytest.mark.parametrize("c", [INV_SQRT2, 0.9])
    def test_fgg_is_a_lower_bound(self, c):
        assert 0.0 <= fgg_bound(c) <= optimizer_bound(c) + 1e-6

    def test_optimizer_at_unbiased_overlap(self):
        assert optimizer_bound(INV_SQRT2) == pytest.approx(1.0, abs=1e-5)

    def test_optimizer_is_tight_above_band(self):
        assert optimizer_bound(0.9) == pytest.approx(vs_bound(0.9), abs=1e-4)

    def test_renyi_optimizer_bound(self):
        assert entropic_lower_bound("optimizer", "renyi", INV_SQRT2) >= 0.0


@pytest.mark.slow
class TestSweep:
    """Bound table over the overlap range."""

    def test_sweep_columns(self):
        frame = bound_sweep(EntropyKind.SHANNON, points=4)
        assert list(frame.columns) == ["c", "MU", "VS", "FGG", "optimizer"]
        assert len(frame) == 4
        assert frame["c"].iloc[0] == pytest.approx(INV_SQRT2)
        assert not frame[["MU", "VS", "FGG", "optimizer"]].isna().any().any()
        assert (frame["optimizer"] >= frame["MU"] - 1e-5).all()

    def test_renyi_sweep_marks_undefined(self):
        frame = bound_sweep(EntropyKind.RENYI, points=2)
        assert frame["MU"].isna().all()
        assert frame["VS"].isna().all()
