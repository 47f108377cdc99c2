"""Tests for settings and optimizer profiles."""

import pytest
from pydantic import ValidationError

from quantum_witness.config import Settings, get_optimizer_profile, get_settings, load_optimizer_profile


@pytest.fixture
def fresh_settings():
    """Drop cached settings and profiles around tests that change the environment."""
    get_settings.cache_clear()
    get_optimizer_profile.cache_clear()
    yield
    get_settings.cache_clear()
    get_optimizer_profile.cache_clear()


class TestSettings:
    def test_environment_overrides(self, monkeypatch):
        monkeypatch.setenv("QW_RESAMPLE_SAMPLES", "5000")
        monkeypatch.setenv("QW_VS_MIDDLE_BAND", "none")
        settings = Settings()
        assert settings.resample_samples == 5000
        assert settings.vs_middle_band == "none"

    def test_defaults(self, monkeypatch):
        monkeypatch.delenv("QW_SEED", raising=False)
        settings = Settings(_env_file=None)
        assert settings.seed == 20240601
        assert settings.phi_step_deg == 1.0
        assert settings.is_development

    def test_invalid_values_rejected(self, monkeypatch):
        monkeypatch.setenv("QW_RESAMPLE_SAMPLES", "10")
        with pytest.raises(ValidationError):
            Settings()

    def test_empty_profile_name(self, monkeypatch):
        monkeypatch.setenv("QW_OPTIMIZER_PROFILE", "  ")
        with pytest.raises(ValidationError, match="must not be empty"):
            Settings()

    def test_relative_paths_resolve_against_project(self):
        path = Settings().resolve_path("config/optimizer.yaml")
        assert path.exists()


class TestOptimizerProfiles:
    @pytest.mark.parametrize(
        "name, grid, seeds",
        [("default", 21, 5), ("fast", 11, 3), ("precise", 31, 8)],
    )
    def test_shipped_profiles(self, name, grid, seeds):
        profile = load_optimizer_profile(name)
        assert profile.name == name
        assert profile.grid_resolution == grid
        assert profile.refine_seeds == seeds

    def test_unknown_profile(self):
        with pytest.raises(ValueError, match="Available profiles: default, fast, precise"):
            load_optimizer_profile("turbo")

    def test_profile_from_environment(self, monkeypatch, fresh_settings):
        monkeypatch.setenv("QW_OPTIMIZER_PROFILE", "fast")
        assert load_optimizer_profile().name == "fast"

    def test_custom_config_file(self, tmp_path, monkeypatch, fresh_settings):
        path = tmp_path / "optimizer.yaml"
        path.write_text("coarse:\n  grid_resolution: 5\n  refine_seeds: 1\n")
        monkeypatch.setenv("QW_OPTIMIZER_CONFIG_PATH", str(path))
        profile = load_optimizer_profile("coarse")
        assert profile.grid_resolution == 5
        assert profile.sphere_resolution == 24

    def test_missing_config_file(self, tmp_path, monkeypatch, fresh_settings):
        monkeypatch.setenv("QW_OPTIMIZER_CONFIG_PATH", str(tmp_path / "absent.yaml"))
        with pytest.raises(FileNotFoundError):
            load_optimizer_profile("default")

    def test_invalid_profile_values(self, tmp_path, monkeypatch, fresh_settings):
        path = tmp_path / "optimizer.yaml"
        path.write_text("broken:\n  grid_resolution: 1\n")
        monkeypatch.setenv("QW_OPTIMIZER_CONFIG_PATH", str(path))
        with pytest.raises(ValidationError):
            load_optimizer_profile("broken")

    def test_profiles_are_cached(self):
        assert get_optimizer_profile("fast") is get_optimizer_profile("fast")
