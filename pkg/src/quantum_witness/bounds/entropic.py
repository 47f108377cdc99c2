"""Entropic uncertainty bounds for qubit measurement pairs with overlap c.

Four lower bounds on H(A) + H(B) are provided:

* ``MU``: -2 log c.
* ``VS``: the piecewise analytic bound, -2 log c below 1/sqrt(2) and
  -(1+c) log((1+c)/2) - (1-c) log((1-c)/2) above 0.834. The band in
  between has no closed form; its value comes from a configured policy.
* ``FGG``: the entropy of the vector omega whose prefix sums are the largest
  possible sums of k entries of p ⊗ q over pure states.
* ``optimizer``: direct numerical minimization of H(A) + H(B).
"""

from collections.abc import Callable, Sequence
from functools import lru_cache
from itertools import combinations

import numpy as np
import pandas as pd
from numpy.typing import NDArray

from quantum_witness.bounds.functionals import entropy, entropy_batch
from quantum_witness.bounds.models import (
    BoundKind,
    BoundVector,
    CumulativeBounds,
    EntropyKind,
    OptimizerProfile,
    StateSet,
)
from quantum_witness.bounds.optimizer import StateSpaceOptimizer
from quantum_witness.bounds.vectors import from_cumulative, top_k_sums
from quantum_witness.config import get_optimizer_profile, get_settings
from quantum_witness.core.measurements import (
    Measurement,
    born_probabilities_batch,
    computational_basis,
    max_overlap,
    overlap_basis,
)
from quantum_witness.errors import UnsupportedBoundError
from quantum_witness.utils.logger import get_logger

logger = get_logger(__name__)

INV_SQRT2 = 1.0 / np.sqrt(2.0)
VS_UPPER_BAND = 0.834
OVERLAP_TOL = 1e-12

MiddleBand = str | Callable[[float], float] | None


def _check_overlap(c: float) -> float:
    if not INV_SQRT2 - OVERLAP_TOL <= c <= 1.0 + OVERLAP_TOL:
        raise ValueError(f"qubit overlap c={c} outside [1/sqrt(2), 1]")
    return float(min(max(c, INV_SQRT2), 1.0))


def mu_bound(c: float) -> float:
    return float(-2.0 * np.log2(c))


def vs_h3(c: float) -> float:
    p = (1.0 + c) / 2.0
    return 2.0 * entropy(EntropyKind.SHANNON, [p, 1.0 - p])


def vs_bound(c: float, middle_band: MiddleBand = None) -> float:
    """Piecewise VS bound; ``middle_band`` decides 1/sqrt(2) < c < 0.834."""
    if c <= INV_SQRT2 + OVERLAP_TOL:
        return mu_bound(c)
    if c >= VS_UPPER_BAND:
        return vs_h3(c)
    policy = get_settings().vs_middle_band if middle_band is None else middle_band
    if callable(policy):
        return float(policy(c))
    if policy == "envelope":
        return mu_bound(c)
    raise UnsupportedBoundError(
        f"VS bound is undefined for c={c:.4f} in (1/sqrt(2), {VS_UPPER_BAND}) without a middle-band policy"
    )


def _pair_for(c: float) -> tuple[Measurement, Measurement]:
    return computational_basis(2), overlap_basis(c)


@lru_cache(maxsize=256)
def _omega_levels(c: float, profile_name: str) -> tuple[float, ...]:
    A, B = _pair_for(c)
    optimizer = StateSpaceOptimizer(StateSet.pure_states(2), profile=get_optimizer_profile(profile_name))

    def levels(matrices: NDArray[np.complex128]) -> NDArray[np.float64]:
        p = born_probabilities_batch(matrices, A)
        q = born_probabilities_batch(matrices, B)
        return top_k_sums(np.einsum("na,nb->nab", p, q).reshape(len(matrices), -1))

    search = optimizer.extremize(levels, maximize=True, objective="fgg_omega")
    # The full sum is exactly 1.
    return search.values[:-1] + (1.0,)


def fgg_vector(c: float, profile: OptimizerProfile | None = None) -> BoundVector:
    """omega with prefix sums Omega_k = max over pure states of the k largest entries of p ⊗ q."""
    c = _check_overlap(c)
    name = (profile or get_optimizer_profile(get_settings().optimizer_profile)).name
    levels = np.maximum.accumulate(np.asarray(_omega_levels(round(c, 12), name)))
    return from_cumulative(levels)


def fgg_bound(c: float, kind: EntropyKind = EntropyKind.SHANNON, order: float = 2.0) -> float:
    if kind == EntropyKind.TSALLIS and order < 1.0:
        raise UnsupportedBoundError("FGG for Tsallis entropies requires order > 1")
    omega = np.clip(fgg_vector(c).array, 0.0, None)
    return entropy(kind, omega / omega.sum(), order)


def optimizer_bound(
    c: float,
    kind: EntropyKind = EntropyKind.SHANNON,
    order: float = 2.0,
    profile: OptimizerProfile | None = None,
    max_workers: int | None = None,
) -> float:
    """min over qubit states of H(A) + H(B) for a pair with overlap c."""
    A, B = _pair_for(_check_overlap(c))
    optimizer = StateSpaceOptimizer(StateSet.all_states(2, profile=profile), max_workers=max_workers)

    def total(matrices: NDArray[np.complex128]) -> NDArray[np.float64]:
        pa = born_probabilities_batch(matrices, A)
        pb = born_probabilities_batch(matrices, B)
        return (entropy_batch(kind, pa, order) + entropy_batch(kind, pb, order))[:, None]

    return max(optimizer.extremize(total, maximize=False, objective=f"entropy_{kind.value}").values[0], 0.0)


def entropic_lower_bound(
    kind: BoundKind | str,
    entropy_kind: EntropyKind | str,
    c: float,
    order: float = 2.0,
    middle_band: MiddleBand = None,
) -> float:
    """Lower bound on H(A) + H(B) for qubit observables with maximal overlap c."""
    kind = BoundKind(kind)
    entropy_kind = EntropyKind(entropy_kind)
    c = _check_overlap(c)
    if kind in (BoundKind.MU, BoundKind.VS) and entropy_kind != EntropyKind.SHANNON:
        raise UnsupportedBoundError(f"{kind.value} bound is defined for Shannon entropy only")
    if kind == BoundKind.MU:
        return mu_bound(c)
    if kind == BoundKind.VS:
        return vs_bound(c, middle_band)
    if kind == BoundKind.FGG:
        return fgg_bound(c, entropy_kind, order)
    return optimizer_bound(c, entropy_kind, order)


def c_lb_from_bounds(bounds: CumulativeBounds, n: int) -> float:
    """(1/n) times the smallest total of the f table, the scalar Shannon lower bound."""
    return bounds.levels_min[-1] / n


def bound_sweep(
    entropy_kind: EntropyKind | str = EntropyKind.SHANNON,
    order: float = 2.0,
    points: int | None = None,
    middle_band: MiddleBand = None,
) -> pd.DataFrame:
    """Table of {c, MU, VS, FGG, optimizer} over c in [1/sqrt(2), 1]; NaN where a bound is undefined."""
    entropy_kind = EntropyKind(entropy_kind)
    points = points or get_settings().sweep_points
    rows = []
    for c in np.linspace(INV_SQRT2, 1.0, points):
        row = {"c": float(c)}
        for kind in BoundKind:
            try:
                row[kind.value] = entropic_lower_bound(kind, entropy_kind, float(c), order, middle_band)
            except UnsupportedBoundError:
                row[kind.value] = float("nan")
        rows.append(row)
    logger.info("bound_sweep_completed", entropy=entropy_kind.value, points=points)
    return pd.DataFrame(rows, columns=["c", "MU", "VS", "FGG", "optimizer"])


def pairwise_vs_sum(measurements: Sequence[Measurement], middle_band: MiddleBand = None) -> float:
    """Lower bound on sum_i H(A_i) from pairwise VS terms: (1/(m-1)) sum_{i<j} h(c_ij)."""
    if len(measurements) < 2:
        raise ValueError("need at least two measurements")
    total = 0.0
    for a, b in combinations(measurements, 2):
        c = min(max(max_overlap(a, b), INV_SQRT2), 1.0)
        total += vs_bound(c, middle_band)
    return total / (len(measurements) - 1)
