"""POVMs, observables and Born-rule statistics."""

from collections.abc import Sequence
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from quantum_witness.core.operators import PAULIS, as_complex_matrix, check_dimension, hermitian_deviation
from quantum_witness.core.states import DensityMatrix
from quantum_witness.errors import DimensionMismatchError, InvalidMeasurementError, InvalidStateError

POVM_TOL = 1e-9
SPECTRAL_TOL = 1e-9
PROBABILITY_TOL = 1e-9
NORMALIZATION_TOL = 1e-8


class Measurement(BaseModel):
    """Labeled POVM {M_a}; outcome a is the index of the effect."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str
    effects: tuple[np.ndarray, ...] = Field(..., min_length=1)

    @field_validator("effects", mode="before")
    @classmethod
    def validate_effects(cls, v: Any) -> tuple[np.ndarray, ...]:
        effects = tuple(as_complex_matrix(e) for e in v)
        if not effects:
            raise InvalidMeasurementError("a measurement needs at least one effect")
        dim = effects[0].shape[0]
        check_dimension(dim)
        for index, effect in enumerate(effects):
            if effect.shape != (dim, dim):
                raise InvalidMeasurementError(f"effect {index} has shape {effect.shape}, expected {(dim, dim)}")
            if hermitian_deviation(effect) > POVM_TOL:
                raise InvalidMeasurementError(f"effect {index} is not Hermitian")
            if np.linalg.eigvalsh(effect)[0] < -POVM_TOL:
                raise InvalidMeasurementError(f"effect {index} is not positive semidefinite")
        completeness = np.max(np.abs(sum(effects) - np.eye(dim)))
        if completeness > POVM_TOL:
            raise InvalidMeasurementError(f"effects sum to identity only within {completeness:.3e}")
        return effects

    @classmethod
    def from_basis(cls, label: str, vectors: Sequence[ArrayLike]) -> "Measurement":
        """Projective measurement onto the given basis vectors, in order."""
        effects = []
        for vector in vectors:
            v = np.asarray(vector, dtype=np.complex128).reshape(-1)
            effects.append(np.outer(v, v.conj()))
        return cls(label=label, effects=tuple(effects))

    @property
    def dim(self) -> int:
        return int(self.effects[0].shape[0])

    @property
    def n_outcomes(self) -> int:
        return len(self.effects)

    @property
    def stacked(self) -> NDArray[np.complex128]:
        """Effects as an (n, d, d) array."""
        return np.stack(self.effects)

    @property
    def is_projective(self) -> bool:
        return all(np.max(np.abs(e @ e - e)) <= POVM_TOL for e in self.effects)

    @property
    def is_rank_one(self) -> bool:
        return self.is_projective and all(abs(np.trace(e).real - 1.0) <= POVM_TOL for e in self.effects)


class Observable(BaseModel):
    """Hermitian operator with its spectral decomposition.

    Distinct eigenvalues are ordered descending, so for Pauli-type
    observables outcome 0 corresponds to eigenvalue +1.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    label: str
    matrix: np.ndarray
    eigenvalues: tuple[float, ...] = ()
    projectors: tuple[np.ndarray, ...] = ()

    @model_validator(mode="before")
    @classmethod
    def decompose(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        matrix = as_complex_matrix(data["matrix"])
        if hermitian_deviation(matrix) > SPECTRAL_TOL:
            raise InvalidMeasurementError(f"observable '{data.get('label')}' is not Hermitian")
        if not data.get("eigenvalues"):
            values, vectors = np.linalg.eigh(0.5 * (matrix + matrix.conj().T))
            order = np.argsort(-values, kind="stable")
            values, vectors = values[order], vectors[:, order]
            groups: list[list[int]] = []
            for index, value in enumerate(values):
                if groups and abs(values[groups[-1][0]] - value) <= SPECTRAL_TOL:
                    groups[-1].append(index)
                else:
                    groups.append([index])
            eigenvalues = tuple(float(np.mean(values[g])) for g in groups)
            projectors = tuple(vectors[:, g] @ vectors[:, g].conj().T for g in groups)
            return {**data, "matrix": matrix, "eigenvalues": eigenvalues, "projectors": projectors}
        return {**data, "matrix": matrix}

    @model_validator(mode="after")
    def check_reconstruction(self) -> "Observable":
        rebuilt = sum(value * proj for value, proj in zip(self.eigenvalues, self.projectors, strict=True))
        if np.max(np.abs(rebuilt - self.matrix)) > SPECTRAL_TOL:
            raise InvalidMeasurementError(f"spectral decomposition of '{self.label}' does not reconstruct it")
        return self

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def measurement(self) -> Measurement:
        return Measurement(label=self.label, effects=self.projectors)


def born_probabilities(state: DensityMatrix, m: Measurement) -> NDArray[np.float64]:
    """Outcome distribution tr(M_a rho)."""
    if state.dim != m.dim:
        raise DimensionMismatchError(f"state dim {state.dim} does not match measurement '{m.label}' dim {m.dim}")
    probabilities = np.real(np.einsum("aij,ji->a", m.stacked, state.matrix))
    if np.any(probabilities < -PROBABILITY_TOL) or np.any(probabilities > 1.0 + PROBABILITY_TOL):
        raise InvalidStateError(f"Born probabilities {probabilities} leave [0, 1]")
    probabilities = np.clip(probabilities, 0.0, 1.0)
    if abs(probabilities.sum() - 1.0) > NORMALIZATION_TOL:
        raise InvalidMeasurementError(f"Born probabilities sum to {probabilities.sum():.10f}")
    return probabilities


def born_probabilities_batch(matrices: NDArray[np.complex128], m: Measurement) -> NDArray[np.float64]:
    """Outcome distributions for an (N, d, d) stack of states, shape (N, n_outcomes).

    No validation; used inside optimizers where states are constructed valid.
    """
    probabilities = np.real(np.einsum("aij,nji->na", m.stacked, matrices))
    return np.clip(probabilities, 0.0, 1.0)


def expectation(state: DensityMatrix, observable: Observable) -> float:
    return state.expectation(observable.matrix)


def max_overlap(a: Measurement, b: Measurement) -> float:
    """c = max_{a,b} |<phi_a|psi_b>| for rank-1 projective measurements."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"measurements act on dims {a.dim} and {b.dim}")
    for m in (a, b):
        if not m.is_rank_one:
            raise InvalidMeasurementError(f"measurement '{m.label}' is not rank-1 projective")
    # |<u|v>|^2 = tr(P_u P_v) for rank-1 projectors.
    overlaps = np.real(np.einsum("aij,bji->ab", a.stacked, b.stacked))
    return float(np.sqrt(np.clip(overlaps.max(), 0.0, 1.0)))


def phi_basis(phi: float, label: str | None = None) -> Measurement:
    """{cos(phi)|0> + sin(phi)|1>, -sin(phi)|0> + cos(phi)|1>}, phi in radians."""
    c, s = np.cos(phi), np.sin(phi)
    return Measurement.from_basis(label or f"phi={np.degrees(phi):.4f}", [[c, s], [-s, c]])


def overlap_basis(c: float) -> Measurement:
    """Real qubit basis whose maximal overlap with Z is ``c``."""
    if not 1.0 / np.sqrt(2.0) - 1e-12 <= c <= 1.0:
        raise ValueError(f"qubit overlap {c} outside [1/sqrt(2), 1]")
    return phi_basis(float(np.arccos(min(c, 1.0))), label=f"c={c:.6f}")


def computational_basis(dim: int = 2) -> Measurement:
    return Measurement.from_basis("computational", list(np.eye(dim)))


def pauli(name: str) -> Observable:
    """One of I, X, Y, Z (or W = (sqrt(3) X + Z) / 2)."""
    key = name.upper()
    if key == "W":
        return Observable(label="W", matrix=(np.sqrt(3.0) * PAULIS["X"] + PAULIS["Z"]) / 2.0)
    if key not in PAULIS:
        raise InvalidMeasurementError(f"unknown Pauli observable '{name}'")
    return Observable(label=key, matrix=PAULIS[key])


def qubit_observable(direction: ArrayLike, label: str) -> Observable:
    """n.sigma for a unit vector n."""
    n = np.asarray(direction, dtype=np.float64).reshape(3)
    n = n / np.linalg.norm(n)
    matrix = n[0] * PAULIS["X"] + n[1] * PAULIS["Y"] + n[2] * PAULIS["Z"]
    return Observable(label=label, matrix=matrix)


def standard_measurements() -> dict[str, Measurement]:
    """Z (H/V), X (D/A) and W (G/K) measurements of the polarization qubit."""
    return {name: pauli(name).measurement for name in ("Z", "X", "W")}
