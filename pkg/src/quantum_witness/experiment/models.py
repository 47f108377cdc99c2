"""Typed records for the published data tables."""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MARGINAL_SLACK = 0.05


class CoincidenceRecord(BaseModel):
    """Coincidence count N^{a,b}_{x,y} at one state angle."""

    model_config = ConfigDict(frozen=True)

    theta_deg: float = Field(..., ge=0.0, le=90.0)
    x: int = Field(..., ge=0)
    y: int = Field(..., ge=0)
    a: int = Field(..., ge=0)
    b: int = Field(..., ge=0)
    count: int = Field(..., ge=0)


class MarginalRecord(BaseModel):
    """Outcome probabilities of one measurement context.

    ``raw`` keeps the published values; ``normalized`` rescales them to sum
    to one. Rows whose raw sum misses 1 by more than the slack are marked
    inconsistent and kept verbatim.
    """

    model_config = ConfigDict(frozen=True)

    theta_deg: float = Field(..., ge=0.0, le=90.0)
    context: str
    party: str = "a"
    raw: tuple[float, ...]
    normalized: tuple[float, ...] = ()
    consistent: bool = True

    @field_validator("raw", mode="before")
    @classmethod
    def validate_raw(cls, v: Any) -> tuple[float, ...]:
        values = tuple(float(p) for p in v)
        if len(values) < 2:
            raise ValueError("a marginal needs at least two outcomes")
        if any(p < 0.0 or not np.isfinite(p) for p in values):
            raise ValueError(f"marginal probabilities must be finite and nonnegative, got {values}")
        return values

    @model_validator(mode="after")
    def normalize(self) -> "MarginalRecord":
        total = sum(self.raw)
        object.__setattr__(self, "consistent", abs(total - 1.0) <= MARGINAL_SLACK)
        if total > 0:
            object.__setattr__(self, "normalized", tuple(p / total for p in self.raw))
        return self

    @property
    def probabilities(self) -> np.ndarray:
        return np.asarray(self.normalized)


class FidelityRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta_deg: float = Field(..., ge=0.0, le=90.0)
    two_qubit: float = Field(..., ge=0.0, le=1.0)
    one_qubit: float = Field(..., ge=0.0, le=1.0)


class ScanRecord(BaseModel):
    """Marginal of the path-I photon in the phi basis at one scan angle."""

    model_config = ConfigDict(frozen=True)

    theta_deg: float = Field(..., ge=0.0, le=90.0)
    phi_deg: float
    marginal: MarginalRecord


class TomographyInput(BaseModel):
    """Projector labels with their measured counts (or expectations)."""

    model_config = ConfigDict(frozen=True)

    labels: tuple[str, ...] = Field(..., min_length=16)
    values: tuple[float, ...]

    @model_validator(mode="after")
    def check_lengths(self) -> "TomographyInput":
        if len(self.labels) != len(self.values):
            raise ValueError(f"{len(self.labels)} projector labels but {len(self.values)} values")
        if any(v < 0 for v in self.values):
            raise ValueError("tomography counts must be nonnegative")
        return self
