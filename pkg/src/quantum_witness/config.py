"""Configuration management for the quantumness witness toolkit."""

import os
from functools import lru_cache
from pathlib import Path
from typing import TYPE_CHECKING, Literal

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

if TYPE_CHECKING:
    from quantum_witness.bounds.models import OptimizerProfile

PROJECT_ROOT = Path(__file__).parent.parent.parent


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="QW_",
        case_sensitive=False,
        extra="ignore",
    )

    # Application Settings
    app_env: Literal["development", "staging", "production"] = Field(
        default="development", description="Application environment"
    )
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Logging level"
    )

    # Optimizer Configuration
    optimizer_profile: str = Field(
        default="default",
        description="Optimizer profile to use from optimizer.yaml (e.g., 'fast', 'precise')",
    )
    optimizer_config_path: str = Field(
        default="config/optimizer.yaml",
        description="Path to optimizer profile configuration file",
    )
    max_workers: int = Field(
        default=1,
        ge=1,
        le=32,
        description="Worker threads for seed refinement and resampling (1 = sequential)",
    )

    # Tolerances
    relation_tol: float = Field(
        default=1e-6,
        gt=0.0,
        le=1e-2,
        description="Tolerance for majorization verdicts against optimized bounds",
    )
    majorization_tol: float = Field(
        default=1e-9,
        gt=0.0,
        le=1e-2,
        description="Default prefix-sum tolerance of the majorization preorder",
    )

    # Sweeps and scans
    sweep_points: int = Field(default=50, ge=2, le=1000, description="Points in the overlap sweep")
    phi_step_deg: float = Field(
        default=1.0,
        gt=0.0,
        le=15.0,
        description="Angular resolution of the basis family used for coherence maximization",
    )
    vs_middle_band: Literal["envelope", "none"] = Field(
        default="envelope",
        description="Behaviour of the piecewise VS bound inside its undefined middle band",
    )

    # Resampling
    resample_samples: int = Field(default=100_000, ge=1000, description="Poisson resamples per statistic")
    seed: int = Field(default=20240601, ge=0, description="Root seed for resampling and noisy simulation")

    # Data
    fixtures_dir: str = Field(default="fixtures", description="Directory holding table{1,2,3,4}.csv")

    # Monitoring
    enable_metrics: bool = Field(default=False, description="Enable metrics collection")

    @field_validator("optimizer_profile")
    @classmethod
    def validate_profile_name(cls, v: str) -> str:
        """Reject empty profile names early; existence is checked on load."""
        if not v.strip():
            raise ValueError("optimizer_profile must not be empty")
        return v.strip()

    @property
    def is_development(self) -> bool:
        """Check if running in development environment."""
        return self.app_env == "development"

    def resolve_path(self, value: str) -> Path:
        """Resolve a configured path relative to the project root."""
        path = Path(value)
        if not path.is_absolute() and not path.exists():
            path = PROJECT_ROOT / path
        return path


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


def load_optimizer_profile(profile: str | None = None) -> "OptimizerProfile":
    """
    Load optimizer parameters from optimizer.yaml.

    Args:
        profile: Profile name to load (e.g., 'fast', 'precise').
                 If None, uses QW_OPTIMIZER_PROFILE env var or 'default'.

    Returns:
        OptimizerProfile with the loaded parameters.

    Raises:
        FileNotFoundError: If config file not found.
        ValueError: If profile not found in config.
    """
    from quantum_witness.bounds.models import OptimizerProfile

    settings = get_settings()

    if profile is None:
        profile = os.getenv("QW_OPTIMIZER_PROFILE", settings.optimizer_profile)

    config_path = settings.resolve_path(settings.optimizer_config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Optimizer config not found at {config_path}")

    with open(config_path) as f:
        config_data = yaml.safe_load(f)

    if not config_data:
        raise ValueError(f"Empty config file at {config_path}")

    if profile not in config_data:
        available_profiles = ", ".join(config_data.keys())
        raise ValueError(
            f"Profile '{profile}' not found in {config_path}. " f"Available profiles: {available_profiles}"
        )

    return OptimizerProfile(name=profile, **config_data[profile])


@lru_cache
def get_optimizer_profile(profile: str | None = None) -> "OptimizerProfile":
    """Get cached optimizer profile (cached per profile name)."""
    return load_optimizer_profile(profile)
