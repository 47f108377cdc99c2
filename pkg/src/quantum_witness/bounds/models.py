"""Data models for bound vectors, state sets and optimizer results."""

from enum import Enum
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from quantum_witness.core.states import DensityMatrix
from quantum_witness.errors import OptimizerError

MONOTONE_TOL = 1e-9


class VectorTag(str, Enum):
    """How the components of a bound vector are ordered."""

    RAW = "raw"
    SORTED_DESC = "sorted_desc"
    SORTED_ASC = "sorted_asc"
    SUCCESSIVE_DIFFERENCE = "successive_difference"


class StateSetKind(str, Enum):
    """State families the optimizer can search."""

    ALL_STATES = "all_states"
    PURE_STATES = "pure_states"
    SEPARABLE_PRODUCT = "separable_product"
    EXPLICIT_LIST = "explicit_list"


class EntropyKind(str, Enum):
    SHANNON = "shannon"
    RENYI = "renyi"
    TSALLIS = "tsallis"


class BoundKind(str, Enum):
    MU = "MU"
    VS = "VS"
    FGG = "FGG"
    OPTIMIZER = "optimizer"


class BoundVector(BaseModel):
    """Real vector compared under the prefix-sum (majorization) preorder."""

    model_config = ConfigDict(frozen=True)

    components: tuple[float, ...] = Field(..., min_length=1)
    tag: VectorTag = VectorTag.RAW
    cumulative: tuple[float, ...] | None = None
    warnings: tuple[str, ...] = ()

    @field_validator("components", mode="before")
    @classmethod
    def validate_components(cls, v: Any) -> tuple[float, ...]:
        values = tuple(float(x) for x in np.asarray(v, dtype=np.float64).reshape(-1))
        if not all(np.isfinite(values)):
            raise ValueError("bound vector components must be finite")
        return values

    @model_validator(mode="after")
    def check_order(self) -> "BoundVector":
        diffs = np.diff(self.components)
        if self.tag == VectorTag.SORTED_DESC and np.any(diffs > 0):
            raise ValueError("sorted_desc vector is not nonincreasing")
        if self.tag == VectorTag.SORTED_ASC and np.any(diffs < 0):
            raise ValueError("sorted_asc vector is not nondecreasing")
        if self.cumulative is not None and len(self.cumulative) != len(self.components):
            raise ValueError("cumulative levels must match the component count")
        return self

    @property
    def array(self) -> NDArray[np.float64]:
        return np.asarray(self.components, dtype=np.float64)

    @property
    def prefix_sums(self) -> NDArray[np.float64]:
        """Prefix sums k = 1..n; exact levels for vectors built from cumulative input."""
        if self.cumulative is not None:
            return np.asarray(self.cumulative, dtype=np.float64)
        return np.cumsum(self.array)

    @property
    def total(self) -> float:
        return float(self.prefix_sums[-1])

    def __len__(self) -> int:
        return len(self.components)


class OptimizerProfile(BaseModel):
    """Sampling and refinement parameters for the multi-start search."""

    name: str = "default"
    grid_resolution: int = Field(default=21, ge=3, le=101)
    sphere_resolution: int = Field(default=24, ge=4, le=360)
    refine_seeds: int = Field(default=5, ge=1, le=50)
    refine_iterations: int = Field(default=200, ge=10, le=10_000)
    simplex_tol: float = Field(default=1e-10, gt=0.0, le=1e-3)
    product_resolution: int = Field(default=8, ge=3, le=36)


class StateSet(BaseModel):
    """Closed set D of states over which bounds are optimized."""

    model_config = ConfigDict(frozen=True)

    dim: int = Field(default=2, ge=1, le=8)
    kind: StateSetKind = StateSetKind.ALL_STATES
    states: tuple[DensityMatrix, ...] = ()
    subsystem_dims: tuple[int, ...] = ()
    profile: OptimizerProfile | None = None

    @model_validator(mode="after")
    def check_consistency(self) -> "StateSet":
        if self.kind == StateSetKind.EXPLICIT_LIST:
            for index, state in enumerate(self.states):
                if state.dim != self.dim:
                    raise ValueError(f"explicit state {index} has dim {state.dim}, set dim is {self.dim}")
        if self.kind == StateSetKind.SEPARABLE_PRODUCT:
            dims = self.subsystem_dims or (2, 2)
            if int(np.prod(dims)) != self.dim:
                raise ValueError(f"subsystem dims {dims} do not multiply to {self.dim}")
        return self

    @classmethod
    def all_states(cls, dim: int = 2, profile: OptimizerProfile | None = None) -> "StateSet":
        return cls(dim=dim, kind=StateSetKind.ALL_STATES, profile=profile)

    @classmethod
    def pure_states(cls, dim: int = 2, profile: OptimizerProfile | None = None) -> "StateSet":
        return cls(dim=dim, kind=StateSetKind.PURE_STATES, profile=profile)

    @classmethod
    def separable(cls, subsystem_dims: tuple[int, ...] = (2, 2), profile: OptimizerProfile | None = None) -> "StateSet":
        return cls(
            dim=int(np.prod(subsystem_dims)),
            kind=StateSetKind.SEPARABLE_PRODUCT,
            subsystem_dims=subsystem_dims,
            profile=profile,
        )

    @classmethod
    def explicit(cls, states: list[DensityMatrix]) -> "StateSet":
        if not states:
            raise OptimizerError("explicit state list is empty")
        return cls(dim=states[0].dim, kind=StateSetKind.EXPLICIT_LIST, states=tuple(states))

    def contains_kind_of(self, rho: DensityMatrix) -> bool:
        """Cheap membership test used by relation checks."""
        if rho.dim != self.dim:
            return False
        if self.kind == StateSetKind.PURE_STATES:
            return abs(rho.purity - 1.0) <= 1e-8
        return True


class OptimizerTrace(BaseModel):
    """What the multi-start search did for one objective."""

    objective: str
    parametrizations: tuple[str, ...] = ()
    evaluations: int = 0
    converged_max: tuple[bool, ...] = ()
    converged_min: tuple[bool, ...] = ()

    @property
    def converged(self) -> bool:
        return all(self.converged_max) and all(self.converged_min)


class CumulativeBounds(BaseModel):
    """R_k (levels_max) and r_k (levels_min) for k = 1..N."""

    model_config = ConfigDict(frozen=True)

    functional: str
    labels: tuple[str, ...]
    levels_max: tuple[float, ...]
    levels_min: tuple[float, ...]
    trace: OptimizerTrace
    warnings: tuple[str, ...] = ()

    @model_validator(mode="after")
    def check_levels(self) -> "CumulativeBounds":
        if len(self.levels_max) != len(self.levels_min):
            raise ValueError("levels_max and levels_min must have equal length")
        gap = np.asarray(self.levels_min) - np.asarray(self.levels_max)
        if np.any(gap > MONOTONE_TOL):
            raise ValueError("a lower level exceeds the matching upper level")
        return self

    @property
    def n(self) -> int:
        return len(self.levels_max)

    @property
    def is_monotone(self) -> bool:
        return bool(
            np.all(np.diff(self.levels_max) >= -MONOTONE_TOL) and np.all(np.diff(self.levels_min) >= -MONOTONE_TOL)
        )

    def upper_vector(self) -> BoundVector:
        """R_ms."""
        from quantum_witness.bounds.vectors import from_cumulative

        return from_cumulative(self.levels_max)

    def lower_vector(self) -> BoundVector:
        """r_ms."""
        from quantum_witness.bounds.vectors import from_cumulative

        return from_cumulative(self.levels_min)


class RelationReport(BaseModel):
    """Outcome of a two-sided majorization relation r ≺ f ≺ R."""

    f_vector: BoundVector
    lower_vector: BoundVector
    upper_vector: BoundVector
    lower_ok: bool
    upper_ok: bool
    lower_margins: tuple[float, ...]
    upper_margins: tuple[float, ...]
    ordering: str = "raw"

    @property
    def holds(self) -> bool:
        return self.lower_ok and self.upper_ok
