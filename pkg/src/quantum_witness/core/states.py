"""Quantum states: density matrices, pure states and their standard constructors."""

from collections.abc import Sequence
from typing import Any, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, field_validator

from quantum_witness.core.operators import (
    LN2,
    ComplexArray,
    as_complex_matrix,
    check_dimension,
    entropy_bits,
    hermitian_deviation,
    kron,
    min_eigenvalue,
    psd_sqrt,
    trace_out,
)
from quantum_witness.errors import DimensionMismatchError, InvalidStateError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
NORM_TOL = 1e-10


class DensityMatrix(BaseModel):
    """Trace-one positive-semidefinite matrix.

    The stored array is a read-only copy, so instances can be shared
    between threads.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def validate_matrix(cls, v: Any) -> np.ndarray:
        matrix = as_complex_matrix(v)
        check_dimension(matrix.shape[0])
        deviation = hermitian_deviation(matrix)
        if deviation > HERMITIAN_TOL:
            raise InvalidStateError(f"matrix is not Hermitian (max deviation {deviation:.3e})")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"trace {trace.real:.12f} differs from 1")
        smallest = min_eigenvalue(matrix)
        if smallest < -PSD_TOL:
            raise InvalidStateError(f"matrix is not positive semidefinite (min eigenvalue {smallest:.3e})")
        return matrix

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def eigenvalues(self) -> NDArray[np.float64]:
        return np.linalg.eigvalsh(self.matrix)

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    def diagonal(self) -> "DensityMatrix":
        """Dephased state rho_d in the computational basis."""
        return DensityMatrix(matrix=np.diag(np.real(np.diag(self.matrix))))

    def mix(self, other: "DensityMatrix", weight: float) -> "DensityMatrix":
        """Convex combination (1 - weight) * self + weight * other."""
        if other.dim != self.dim:
            raise DimensionMismatchError(f"cannot mix dimensions {self.dim} and {other.dim}")
        if not 0.0 <= weight <= 1.0:
            raise ValueError(f"mixing weight {weight} outside [0, 1]")
        return DensityMatrix(matrix=(1.0 - weight) * self.matrix + weight * other.matrix)

    def expectation(self, operator: ArrayLike) -> float:
        op = np.asarray(operator, dtype=np.complex128)
        if op.shape != self.matrix.shape:
            raise DimensionMismatchError(f"operator shape {op.shape} does not match state dim {self.dim}")
        return float(np.real(np.trace(self.matrix @ op)))


class PureState(BaseModel):
    """Unit vector in C^d."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitudes: np.ndarray

    @field_validator("amplitudes", mode="before")
    @classmethod
    def validate_amplitudes(cls, v: Any) -> np.ndarray:
        vector = np.array(v, dtype=np.complex128).reshape(-1)
        check_dimension(vector.size)
        if not np.all(np.isfinite(vector)):
            raise InvalidStateError("amplitudes have non-finite entries")
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"amplitudes have norm {norm:.12f}, expected 1")
        vector.setflags(write=False)
        return vector

    @classmethod
    def normalized(cls, vector: ArrayLike) -> "PureState":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(v)
        if norm == 0:
            raise InvalidStateError("cannot normalize the zero vector")
        return cls(amplitudes=v / norm)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def density(self) -> DensityMatrix:
        return DensityMatrix(matrix=np.outer(self.amplitudes, self.amplitudes.conj()))


@overload
def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix: ...


@overload
def tensor(a: PureState, b: PureState) -> PureState: ...


@overload
def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray: ...


def tensor(a: Any, b: Any) -> Any:
    """Kronecker product; the result keeps the operand type."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(amplitudes=np.kron(a.amplitudes, b.amplitudes))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(matrix=kron(a.matrix, b.matrix))
    left = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a, dtype=np.complex128)
    right = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b, dtype=np.complex128)
    return kron(left, right)


def partial_trace(rho: DensityMatrix, keep: int | Sequence[int], dims: Sequence[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep``."""
    keep_list = [keep] if isinstance(keep, int) else list(keep)
    reduced = trace_out(np.asarray(rho.matrix), keep_list, list(dims))
    # Summation can leave ~1e-17 anti-Hermitian residue.
    return DensityMatrix(matrix=0.5 * (reduced + reduced.conj().T))


def fidelity(r1: DensityMatrix, r2: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(r1) r2 sqrt(r1)))^2, clipped to [0, 1]."""
    if not isinstance(r1, DensityMatrix) or not isinstance(r2, DensityMatrix):
        r1 = r1 if isinstance(r1, DensityMatrix) else DensityMatrix(matrix=r1)
        r2 = r2 if isinstance(r2, DensityMatrix) else DensityMatrix(matrix=r2)
    if r1.dim != r2.dim:
        raise DimensionMismatchError(f"fidelity of states with dims {r1.dim} and {r2.dim}")
    root = psd_sqrt(r1.matrix)
    inner = root @ r2.matrix @ root
    values = np.linalg.eigvalsh(0.5 * (inner + inner.conj().T))
    value = float(np.sum(np.sqrt(np.clip(values, 0.0, None))) ** 2)
    return min(max(value, 0.0), 1.0)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """S(rho) in bits."""
    return float(entropy_bits(np.clip(rho.eigenvalues, 0.0, None)))


def basis_state(index: int, dim: int = 2) -> PureState:
    vector = np.zeros(dim, dtype=np.complex128)
    vector[index] = 1.0
    return PureState(amplitudes=vector)


def maximally_mixed(dim: int = 2) -> DensityMatrix:
    return DensityMatrix(matrix=np.eye(dim, dtype=np.complex128) / dim)


def bloch_matrices(vectors: NDArray[np.float64]) -> ComplexArray:
    """Batch of qubit matrices (I + r.sigma)/2 for an (N, 3) array of Bloch vectors."""
    r = np.atleast_2d(vectors)
    out = np.empty((r.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = 0.5 * (1.0 + r[:, 2])
    out[:, 1, 1] = 0.5 * (1.0 - r[:, 2])
    out[:, 0, 1] = 0.5 * (r[:, 0] - 1j * r[:, 1])
    out[:, 1, 0] = 0.5 * (r[:, 0] + 1j * r[:, 1])
    return out


def from_bloch(vector: ArrayLike) -> DensityMatrix:
    r = np.asarray(vector, dtype=np.float64).reshape(3)
    if np.linalg.norm(r) > 1.0 + 1e-12:
        raise InvalidStateError(f"Bloch vector norm {np.linalg.norm(r):.6f} exceeds 1")
    return DensityMatrix(matrix=bloch_matrices(r)[0])


def bloch_vector(rho: DensityMatrix) -> NDArray[np.float64]:
    if rho.dim != 2:
        raise DimensionMismatchError("Bloch vectors are defined for qubits only")
    m = rho.matrix
    return np.array([2 * m[0, 1].real, -2 * m[0, 1].imag, (m[0, 0] - m[1, 1]).real])


def phi_state(theta: float) -> PureState:
    """sin(theta)|00> + cos(theta)|11>, theta in radians (|H> = |0>)."""
    vector = np.zeros(4, dtype=np.complex128)
    vector[0] = np.sin(theta)
    vector[3] = np.cos(theta)
    return PureState(amplitudes=vector)


def ghz_state(parties: int = 3) -> PureState:
    vector = np.zeros(2**parties, dtype=np.complex128)
    vector[0] = vector[-1] = 1.0 / np.sqrt(2.0)
    return PureState(amplitudes=vector)


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.normalized(vector)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Ginibre-ensemble mixed state G G^dagger / tr."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(matrix=rho / np.trace(rho).real)


def binary_entropy(p: float) -> float:
    """h(p) in bits."""
    return float(entropy_bits([p, 1.0 - p]))


__all__ = [
    "LN2",
    "DensityMatrix",
    "PureState",
    "basis_state",
    "binary_entropy",
    "bloch_matrices",
    "bloch_vector",
    "fidelity",
    "from_bloch",
    "ghz_state",
    "maximally_mixed",
    "partial_trace",
    "phi_state",
    "random_density_matrix",
    "random_pure_state",
    "tensor",
    "von_neumann_entropy",
]
