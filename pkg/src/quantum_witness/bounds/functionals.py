"""Uncertainty functionals f(p_a, q_b, ...) and entropies.

All logarithms are base 2. Shannon-type terms use ``scipy.special.entr`` so
that 0 log 0 evaluates to 0.
"""

from collections.abc import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import entr

from quantum_witness.bounds.models import BoundVector, EntropyKind, VectorTag
from quantum_witness.core.operators import LN2
from quantum_witness.errors import ShapeMismatchError

PROBABILITY_TOL = 1e-9
NORMALIZATION_TOL = 1e-8

Evaluator = Callable[[list[NDArray[np.float64]]], NDArray[np.float64]]


class UncertaintyFunctional(BaseModel):
    """Named map from an m-tuple of outcome probabilities to a real number.

    ``evaluate`` receives one array per probability argument, already
    broadcast against each other, and returns their elementwise value.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    arity: int = Field(..., ge=1, le=4)
    order: float | None = None
    evaluate: Evaluator = Field(..., exclude=True, repr=False)

    def __call__(self, *probabilities: float) -> float:
        if len(probabilities) != self.arity:
            raise ShapeMismatchError(f"functional '{self.name}' takes {self.arity} arguments")
        arrays = [np.asarray(p, dtype=np.float64) for p in probabilities]
        return float(self.evaluate(arrays))


def _eta(p: NDArray[np.float64]) -> NDArray[np.float64]:
    """-p log2 p with 0 log 0 := 0."""
    return entr(np.clip(p, 0.0, None)) / LN2


def _check_order(order: float) -> float:
    if order <= 0 or abs(order - 1.0) < 1e-12:
        raise ValueError(f"order must be positive and different from 1, got {order}")
    return float(order)


def shannon_functional(arity: int = 2) -> UncertaintyFunctional:
    """f_S = sum_i -p_i log p_i."""
    return UncertaintyFunctional(name="shannon", arity=arity, evaluate=lambda ps: sum(_eta(p) for p in ps))


def renyi_functional(order: float = 2.0, arity: int = 2) -> UncertaintyFunctional:
    """f_R = prod_i p_i^k."""
    k = _check_order(order)
    return UncertaintyFunctional(
        name="renyi", arity=arity, order=k, evaluate=lambda ps: np.prod(np.stack(np.broadcast_arrays(*ps)) ** k, axis=0)
    )


def tsallis_functional(order: float = 2.0, arity: int = 2) -> UncertaintyFunctional:
    """f_T = sum_i p_i^k."""
    k = _check_order(order)
    return UncertaintyFunctional(name="tsallis", arity=arity, order=k, evaluate=lambda ps: sum(p**k for p in ps))


def coherence_functional() -> UncertaintyFunctional:
    """f(p_a, q_b) = p_a log p_a - q_b log q_b.

    p comes from the tested measurement, q from the computational basis, so
    (1/n) sum_ab f = H(q) - H(p).
    """
    return UncertaintyFunctional(name="coherence", arity=2, evaluate=lambda ps: _eta(ps[1]) - _eta(ps[0]))


_REGISTRY: dict[str, Callable[..., UncertaintyFunctional]] = {}


def register_functional(name: str, factory: Callable[..., UncertaintyFunctional]) -> None:
    if name in _REGISTRY:
        raise ValueError(f"functional '{name}' is already registered")
    _REGISTRY[name] = factory


def get_functional(name: str, **params: float) -> UncertaintyFunctional:
    """Build a registered functional, e.g. ``get_functional("renyi", order=2)``."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        available = ", ".join(sorted(_REGISTRY))
        raise ValueError(f"unknown functional '{name}'. Available functionals: {available}") from None
    return factory(**params)


def registered_functionals() -> list[str]:
    return sorted(_REGISTRY)


register_functional("shannon", shannon_functional)
register_functional("renyi", renyi_functional)
register_functional("tsallis", tsallis_functional)
register_functional("coherence", coherence_functional)


def validate_distribution(p: ArrayLike, label: str = "p") -> NDArray[np.float64]:
    values = np.asarray(p, dtype=np.float64).reshape(-1)
    if values.size == 0 or np.any(values < -PROBABILITY_TOL) or not np.all(np.isfinite(values)):
        raise ValueError(f"{label} is not a probability vector: {values}")
    if abs(values.sum() - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"{label} sums to {values.sum():.10f}, expected 1")
    return np.clip(values, 0.0, 1.0)


def f_tables(f: UncertaintyFunctional, distributions: list[NDArray[np.float64]]) -> NDArray[np.float64]:
    """Row-major f tables for batches of distributions.

    ``distributions[i]`` has shape (N, n_i); the result has shape
    (N, n_1 * ... * n_m) with the last argument varying fastest.
    """
    if len(distributions) != f.arity:
        raise ShapeMismatchError(f"functional '{f.name}' takes {f.arity} distributions, got {len(distributions)}")
    m = len(distributions)
    batch = distributions[0].shape[0]
    shaped = []
    for index, dist in enumerate(distributions):
        shape = [batch] + [1] * m
        shape[index + 1] = dist.shape[1]
        shaped.append(dist.reshape(shape))
    broadcast = np.broadcast_arrays(*shaped)
    return np.asarray(f.evaluate(list(broadcast))).reshape(batch, -1)


def eval_f_table(f: UncertaintyFunctional, pA: ArrayLike, pB: ArrayLike) -> BoundVector:
    """[f(p_1, q_1), ..., f(p_n, q_m)] for one pair of distributions."""
    if f.arity != 2:
        raise ShapeMismatchError(f"functional '{f.name}' has arity {f.arity}; a pair table needs arity 2")
    p = validate_distribution(pA, "pA")
    q = validate_distribution(pB, "pB")
    table = f_tables(f, [p[None, :], q[None, :]])[0]
    return BoundVector(components=table, tag=VectorTag.RAW)


def eval_f_table_multi(f: UncertaintyFunctional, distributions: list[ArrayLike]) -> BoundVector:
    dists = [validate_distribution(d, f"p{i}")[None, :] for i, d in enumerate(distributions)]
    return BoundVector(components=f_tables(f, dists)[0], tag=VectorTag.RAW)


def shannon_entropy(p: ArrayLike) -> float:
    return float(np.sum(_eta(np.asarray(p, dtype=np.float64))))


def renyi_entropy(p: ArrayLike, order: float = 2.0) -> float:
    k = _check_order(order)
    values = np.clip(np.asarray(p, dtype=np.float64), 0.0, None)
    return float(np.log2(np.sum(values**k)) / (1.0 - k))


def tsallis_entropy(p: ArrayLike, order: float = 2.0) -> float:
    k = _check_order(order)
    values = np.clip(np.asarray(p, dtype=np.float64), 0.0, None)
    return float((np.sum(values**k) - 1.0) / (1.0 - k))


def entropy_batch(kind: EntropyKind, p: NDArray[np.float64], order: float = 2.0) -> NDArray[np.float64]:
    """Entropy of each row of an (N, n) array of distributions."""
    values = np.clip(p, 0.0, None)
    if kind == EntropyKind.SHANNON:
        return np.sum(_eta(values), axis=-1)
    k = _check_order(order)
    power = np.sum(values**k, axis=-1)
    if kind == EntropyKind.RENYI:
        return np.log2(power) / (1.0 - k)
    return (power - 1.0) / (1.0 - k)


def entropy(kind: EntropyKind | str, p: ArrayLike, order: float = 2.0) -> float:
    kind = EntropyKind(kind)
    return float(entropy_batch(kind, np.asarray(p, dtype=np.float64)[None, :], order)[0])
