"""Cumulative uncertainty bounds R_k / r_k and the majorization relations built on them."""

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from quantum_witness.bounds.functionals import UncertaintyFunctional, f_tables
from quantum_witness.bounds.models import (
    BoundVector,
    CumulativeBounds,
    OptimizerProfile,
    OptimizerTrace,
    RelationReport,
    StateSet,
    VectorTag,
)
from quantum_witness.bounds.optimizer import LevelFunction, StateSpaceOptimizer
from quantum_witness.bounds.vectors import bottom_k_sums, majorizes, prefix_margins, sort_asc, sort_desc, top_k_sums
from quantum_witness.config import get_settings
from quantum_witness.core.measurements import Measurement, born_probabilities, born_probabilities_batch
from quantum_witness.core.states import DensityMatrix
from quantum_witness.errors import DimensionMismatchError, InvalidStateError, OptimizerError, ShapeMismatchError
from quantum_witness.utils.logger import get_logger

logger = get_logger(__name__)

MAX_OUTCOME_GRID = 4096


def table_function(f: UncertaintyFunctional, measurements: Sequence[Measurement]) -> LevelFunction:
    """Batched f tables for a fixed list of measurements."""

    def tables(matrices: NDArray[np.complex128]) -> NDArray[np.float64]:
        return f_tables(f, [born_probabilities_batch(matrices, m) for m in measurements])

    return tables


def _check_dims(measurements: Sequence[Measurement], D: StateSet) -> None:
    for m in measurements:
        if m.dim != D.dim:
            raise DimensionMismatchError(f"measurement '{m.label}' acts on dim {m.dim}, state set has dim {D.dim}")


def _bounds_for(
    f: UncertaintyFunctional,
    measurements: Sequence[Measurement],
    D: StateSet,
    profile: OptimizerProfile | None,
    max_workers: int | None,
) -> CumulativeBounds:
    _check_dims(measurements, D)
    tables = table_function(f, measurements)
    optimizer = StateSpaceOptimizer(D, profile=profile, max_workers=max_workers)
    objective = f"{f.name}:" + "/".join(m.label for m in measurements)
    upper = optimizer.extremize(lambda ms: top_k_sums(tables(ms)), maximize=True, objective=f.name)
    lower = optimizer.extremize(lambda ms: bottom_k_sums(tables(ms)), maximize=False, objective=f.name)
    bounds = CumulativeBounds(
        functional=f.name,
        labels=tuple(m.label for m in measurements),
        levels_max=upper.values,
        levels_min=lower.values,
        trace=OptimizerTrace(
            objective=objective,
            parametrizations=tuple(dict.fromkeys(upper.parametrizations + lower.parametrizations)),
            evaluations=upper.evaluations + lower.evaluations,
            converged_max=upper.converged,
            converged_min=lower.converged,
        ),
    )
    if not bounds.is_monotone:
        bounds = bounds.model_copy(update={"warnings": ("levels are not monotone in k",)})
    logger.debug("cumulative_bounds_computed", objective=objective, converged=bounds.trace.converged)
    return bounds


def cumulative_bounds(
    f: UncertaintyFunctional,
    A: Measurement,
    B: Measurement,
    D: StateSet,
    profile: OptimizerProfile | None = None,
    max_workers: int | None = None,
) -> CumulativeBounds:
    """R_k(A,B) and r_k(A,B): extreme sums of k entries of the f table over D.

    The inner subset choice is exact (sorting); the outer search over states
    is the multi-start optimizer.
    """
    if f.arity != 2:
        raise ShapeMismatchError(f"functional '{f.name}' has arity {f.arity}; a measurement pair needs arity 2")
    return _bounds_for(f, [A, B], D, profile, max_workers)


def multi_observable_bounds(
    f: UncertaintyFunctional,
    obs: Sequence[Measurement],
    D: StateSet,
    profile: OptimizerProfile | None = None,
    max_workers: int | None = None,
) -> CumulativeBounds:
    """Cumulative bounds over the joint outcome grid of 2 to 4 measurements."""
    if not 2 <= len(obs) <= 4:
        raise ShapeMismatchError(f"multi-observable bounds take 2 to 4 measurements, got {len(obs)}")
    if f.arity != len(obs):
        raise ShapeMismatchError(f"functional '{f.name}' has arity {f.arity} for {len(obs)} measurements")
    grid = int(np.prod([m.n_outcomes for m in obs]))
    if grid > MAX_OUTCOME_GRID:
        raise OptimizerError(f"outcome grid of {grid} cells exceeds {MAX_OUTCOME_GRID}")
    return _bounds_for(f, list(obs), D, profile, max_workers)


def device_independent_bounds(
    f: UncertaintyFunctional,
    pairs: Sequence[tuple[Measurement, Measurement]],
    D: StateSet,
    profile: OptimizerProfile | None = None,
    max_workers: int | None = None,
) -> CumulativeBounds:
    """Bounds optimized over both the state and an explicit list of measurement pairs."""
    if not pairs:
        raise OptimizerError("measurement pair list is empty")
    per_pair = [cumulative_bounds(f, A, B, D, profile, max_workers) for A, B in pairs]
    lengths = {b.n for b in per_pair}
    if len(lengths) != 1:
        raise ShapeMismatchError(f"measurement pairs have differing outcome grids {sorted(lengths)}")
    return CumulativeBounds(
        functional=f.name,
        labels=tuple(f"{A.label}|{B.label}" for A, B in pairs),
        levels_max=tuple(np.max([b.levels_max for b in per_pair], axis=0)),
        levels_min=tuple(np.min([b.levels_min for b in per_pair], axis=0)),
        trace=OptimizerTrace(
            objective=f"{f.name}:device_independent",
            parametrizations=per_pair[0].trace.parametrizations,
            evaluations=sum(b.trace.evaluations for b in per_pair),
            converged_max=tuple(all(c) for c in zip(*(b.trace.converged_max for b in per_pair), strict=True)),
            converged_min=tuple(all(c) for c in zip(*(b.trace.converged_min for b in per_pair), strict=True)),
        ),
    )


def _relation(
    f_vector: BoundVector, bounds: CumulativeBounds, tol: float, ordering: str
) -> RelationReport:
    if len(f_vector) != bounds.n:
        raise ShapeMismatchError(f"f vector has {len(f_vector)} entries, bounds have {bounds.n} levels")
    lower, upper = bounds.lower_vector(), bounds.upper_vector()
    if ordering == "sorted":
        f_low, f_up = sort_asc(f_vector), sort_desc(f_vector)
    elif ordering == "raw":
        f_low = f_up = f_vector
    else:
        raise ValueError(f"ordering must be 'raw' or 'sorted', got '{ordering}'")
    return RelationReport(
        f_vector=f_vector,
        lower_vector=lower,
        upper_vector=upper,
        lower_ok=majorizes(lower, f_low, tol),
        upper_ok=majorizes(f_up, upper, tol),
        lower_margins=tuple(prefix_margins(lower, f_low)),
        upper_margins=tuple(prefix_margins(f_up, upper)),
        ordering=ordering,
    )


def f_vector_for(f: UncertaintyFunctional, measurements: Sequence[Measurement], rho: DensityMatrix) -> BoundVector:
    distributions = [born_probabilities(rho, m)[None, :] for m in measurements]
    return BoundVector(components=f_tables(f, distributions)[0], tag=VectorTag.RAW)


def check_relation_3(
    f: UncertaintyFunctional,
    A: Measurement,
    B: Measurement,
    D: StateSet,
    rho: DensityMatrix,
    bounds: CumulativeBounds | None = None,
    tol: float | None = None,
    ordering: str = "raw",
) -> RelationReport:
    """r_ms ≺ f_ab ≺ R_ms for one state.

    ``ordering="raw"`` compares the row-major f table as is; ``"sorted"``
    compares f↑ against r_ms and f↓ against R_ms, the tighter reading.
    Precomputed ``bounds`` skip the optimizer.
    """
    if not D.contains_kind_of(rho):
        raise InvalidStateError(f"state (dim {rho.dim}) is not in a {D.kind.value} set of dim {D.dim}")
    tol = get_settings().relation_tol if tol is None else tol
    bounds = bounds or cumulative_bounds(f, A, B, D)
    return _relation(f_vector_for(f, [A, B], rho), bounds, tol, ordering)


def check_device_independent_relation(
    f: UncertaintyFunctional,
    pairs: Sequence[tuple[Measurement, Measurement]],
    D: StateSet,
    rho: DensityMatrix,
    bounds: CumulativeBounds | None = None,
    tol: float | None = None,
    ordering: str = "raw",
) -> list[RelationReport]:
    """Device-independent relation: every pair's f table against bounds optimized over all pairs."""
    if not D.contains_kind_of(rho):
        raise InvalidStateError(f"state (dim {rho.dim}) is not in a {D.kind.value} set of dim {D.dim}")
    tol = get_settings().relation_tol if tol is None else tol
    bounds = bounds or device_independent_bounds(f, pairs, D)
    return [_relation(f_vector_for(f, [A, B], rho), bounds, tol, ordering) for A, B in pairs]
