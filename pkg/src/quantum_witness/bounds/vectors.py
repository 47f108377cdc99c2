"""The majorization preorder and bound-vector construction."""

from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from quantum_witness.bounds.models import BoundVector, VectorTag
from quantum_witness.errors import ShapeMismatchError
from quantum_witness.utils.logger import get_logger

logger = get_logger(__name__)

DEFAULT_TOL = 1e-9


def _as_vector(v: BoundVector | ArrayLike) -> BoundVector:
    return v if isinstance(v, BoundVector) else BoundVector(components=v)


def raw(values: ArrayLike) -> BoundVector:
    return BoundVector(components=values, tag=VectorTag.RAW)


def sort_desc(v: BoundVector | ArrayLike) -> BoundVector:
    vector = _as_vector(v)
    return BoundVector(components=np.sort(vector.array)[::-1], tag=VectorTag.SORTED_DESC)


def sort_asc(v: BoundVector | ArrayLike) -> BoundVector:
    vector = _as_vector(v)
    return BoundVector(components=np.sort(vector.array), tag=VectorTag.SORTED_ASC)


def prefix_margins(x: BoundVector | ArrayLike, y: BoundVector | ArrayLike) -> NDArray[np.float64]:
    """prefix_k(y) - prefix_k(x) for k = 1..n (including the total)."""
    xv, yv = _as_vector(x), _as_vector(y)
    if len(xv) != len(yv):
        raise ShapeMismatchError(f"cannot compare vectors of length {len(xv)} and {len(yv)}")
    return yv.prefix_sums - xv.prefix_sums


def majorizes(x: BoundVector | ArrayLike, y: BoundVector | ArrayLike, tol: float = DEFAULT_TOL) -> bool:
    """True iff x ≺ y: every prefix sum of x is at most that of y (+tol), k = 1..n-1.

    Vectors are compared in the order given; totals are not compared.
    """
    margins = prefix_margins(x, y)
    return bool(np.all(margins[:-1] >= -tol))


def from_cumulative(levels: Sequence[float] | ArrayLike) -> BoundVector:
    """[L_1, L_2 - L_1, ...]; prefix sums reproduce ``levels`` exactly."""
    values = np.asarray(levels, dtype=np.float64).reshape(-1)
    if values.size == 0:
        raise ShapeMismatchError("cumulative levels must be non-empty")
    components = np.concatenate([values[:1], np.diff(values)])
    warnings: tuple[str, ...] = ()
    if np.any(np.diff(values) < -DEFAULT_TOL):
        first = int(np.argmax(np.diff(values) < -DEFAULT_TOL)) + 2
        warnings = (f"cumulative levels decrease at k={first}; components are negative there",)
        logger.debug("non_monotone_levels", first_decrease=first)
    return BoundVector(
        components=components,
        tag=VectorTag.SUCCESSIVE_DIFFERENCE,
        cumulative=tuple(float(x) for x in values),
        warnings=warnings,
    )


def leading_vector(value: float, length: int) -> BoundVector:
    """[value, 0, ..., 0], the flat-level form used for scalar bounds."""
    if length < 1:
        raise ShapeMismatchError("length must be positive")
    return from_cumulative([value] * length)


def top_k_sums(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Sum of the k largest entries along the last axis, for every k."""
    return np.cumsum(np.sort(values, axis=-1)[..., ::-1], axis=-1)


def bottom_k_sums(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Sum of the k smallest entries along the last axis, for every k."""
    return np.cumsum(np.sort(values, axis=-1), axis=-1)
