"""Data models for coherence and nonlocality witnesses."""

from enum import Enum
from itertools import product
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from quantum_witness.bounds.models import BoundVector
from quantum_witness.core.measurements import Observable
from quantum_witness.errors import ShapeMismatchError

SLICE_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-9


class BellLevel(str, Enum):
    """Hierarchy of bound vectors: local, quantum, no-signaling."""

    CLASSICAL = "classical"
    QUANTUM = "quantum"
    NONSIGNALING = "nonsignaling"


class CorrelatorConvention(str, Enum):
    """Sign attached to outcome pair (a, b): (-1)^(a+b) or (-1)^(a*b)."""

    PARITY = "parity"
    PRODUCT = "product"


class CorrelationTable(BaseModel):
    """Joint conditional distribution P(a, b, ... | x, y, ...).

    ``probs`` is indexed by all settings first, then all outcomes, e.g.
    ``probs[x, y, a, b]`` for two parties.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    settings: tuple[int, ...] = Field(..., min_length=1)
    outcomes: tuple[int, ...] = Field(..., min_length=1)
    probs: np.ndarray

    @field_validator("probs", mode="before")
    @classmethod
    def validate_probs(cls, v: Any) -> np.ndarray:
        probs = np.array(v, dtype=np.float64)
        if not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite")
        if np.any(probs < -SLICE_TOL):
            raise ValueError("probabilities must be nonnegative")
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        return probs

    @model_validator(mode="after")
    def check_slices(self) -> "CorrelationTable":
        if len(self.settings) != len(self.outcomes):
            raise ShapeMismatchError("settings and outcomes must list one count per party")
        expected = tuple(self.settings) + tuple(self.outcomes)
        if self.probs.shape != expected:
            raise ShapeMismatchError(f"probs has shape {self.probs.shape}, expected {expected}")
        parties = self.parties
        sums = self.probs.sum(axis=tuple(range(parties, 2 * parties)))
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > SLICE_TOL:
            raise ValueError(f"a setting slice sums to 1 only within {worst:.3e}")
        return self

    @classmethod
    def from_counts(cls, counts: ArrayLike, settings: tuple[int, ...] | None = None) -> "CorrelationTable":
        """Normalize each setting slice of a count array."""
        array = np.asarray(counts, dtype=np.float64)
        parties = array.ndim // 2
        if array.ndim % 2:
            raise ShapeMismatchError(f"count array has odd rank {array.ndim}")
        settings = settings or tuple(array.shape[:parties])
        totals = array.sum(axis=tuple(range(parties, 2 * parties)), keepdims=True)
        if np.any(totals <= 0):
            raise ValueError("every setting slice needs a positive total count")
        return cls(settings=settings, outcomes=tuple(array.shape[parties:]), probs=array / totals)

    @property
    def parties(self) -> int:
        return len(self.settings)

    def slice(self, *setting: int) -> NDArray[np.float64]:
        return self.probs[tuple(setting)]

    def marginal(self, party: int) -> NDArray[np.float64]:
        """P(outcome of ``party`` | all settings), shape settings + (n_party,)."""
        outcome_axes = [self.parties + p for p in range(self.parties) if p != party]
        return self.probs.sum(axis=tuple(outcome_axes))

    def is_no_signaling(self, tol: float = 1e-6) -> bool:
        """Each party's marginal is independent of the other parties' settings."""
        for party in range(self.parties):
            marginal = self.marginal(party)
            others = tuple(p for p in range(self.parties) if p != party)
            spread = marginal.max(axis=others) - marginal.min(axis=others)
            if np.max(spread) > tol:
                return False
        return True

    def cells(self) -> list[tuple[int, ...]]:
        return list(product(*(range(n) for n in self.outcomes)))


class WitnessOperator(BaseModel):
    """E = sum_xy alpha_xy A_x ⊗ B_y with local observables."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coefficients: np.ndarray
    a_observables: tuple[Observable, ...]
    b_observables: tuple[Observable, ...]
    matrix: np.ndarray | None = None

    @field_validator("coefficients", mode="before")
    @classmethod
    def validate_coefficients(cls, v: Any) -> np.ndarray:
        alpha = np.array(v, dtype=np.float64)
        if alpha.ndim != 2:
            raise ShapeMismatchError("coefficients must be a 2-D array alpha[x, y]")
        alpha.setflags(write=False)
        return alpha

    @model_validator(mode="after")
    def check_reconstruction(self) -> "WitnessOperator":
        if self.coefficients.shape != (len(self.a_observables), len(self.b_observables)):
            raise ShapeMismatchError(
                f"coefficients shape {self.coefficients.shape} does not match "
                f"{len(self.a_observables)} x {len(self.b_observables)} observables"
            )
        rebuilt = self.reconstruct()
        if self.matrix is None:
            object.__setattr__(self, "matrix", rebuilt)
        elif np.max(np.abs(rebuilt - self.matrix)) > RECONSTRUCTION_TOL:
            raise ValueError("sum of alpha_xy A_x ⊗ B_y does not reproduce the stored matrix")
        return self

    def reconstruct(self) -> NDArray[np.complex128]:
        total: NDArray[np.complex128] = 0  # type: ignore[assignment]
        for x, a in enumerate(self.a_observables):
            for y, b in enumerate(self.b_observables):
                total = total + self.coefficients[x, y] * np.kron(a.matrix, b.matrix)
        return total

    @property
    def dims(self) -> tuple[int, int]:
        return self.a_observables[0].dim, self.b_observables[0].dim


class ChshReport(BaseModel):
    level: BellLevel
    chsh_value: float
    f_vector: BoundVector
    f_sorted: BoundVector
    bound_vector: BoundVector
    holds: bool
    margins: tuple[float, ...]
    masked: bool


class CovarianceReport(BaseModel):
    covariances: dict[str, float]
    total: float
    f_vector: BoundVector
    bound_vector: BoundVector
    scalar_bound: float
    scalar_holds: bool
    vector_holds: bool
    degenerate: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.scalar_holds


class WitnessReport(BaseModel):
    f_vector: BoundVector
    f_sorted: BoundVector
    separable_bound: BoundVector
    c_q: float
    majorization_holds: bool
    converged: bool
    margins: tuple[float, ...]

    @property
    def entangled(self) -> bool:
        """Either the majorization relation or the scalar witness tr(rho E) <= 0 fails."""
        return (not self.majorization_holds) or self.c_q > 1e-9


class SvetlichnyReport(BaseModel):
    s3: float
    f_vector: BoundVector
    f_sorted: BoundVector
    verdicts: dict[str, bool]
    margins: dict[str, tuple[float, ...]]
    masked: bool


class CoherenceReport(BaseModel):
    """Coherence relation 0 ≺ f↓ ≺ R_coh with C_r and D_H."""

    f_desc: BoundVector
    R_coh: BoundVector
    C_r: float | None
    D_H: float
    basis_angle_at_min: float
    lower_ok: bool
    upper_ok: bool

    @property
    def witnessed(self) -> bool:
        """Nonzero R_coh total witnesses coherence."""
        return self.R_coh.total > 1e-6
