"""Dense complex matrix helpers shared by states, measurements and optimizers."""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import entr

from quantum_witness.errors import DimensionMismatchError, InvalidStateError

MAX_DIM = 8
LN2 = float(np.log(2.0))

ComplexArray = NDArray[np.complex128]

PAULI_I: ComplexArray = np.eye(2, dtype=np.complex128)
PAULI_X: ComplexArray = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y: ComplexArray = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z: ComplexArray = np.array([[1, 0], [0, -1]], dtype=np.complex128)

PAULIS: dict[str, ComplexArray] = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}


def as_complex_matrix(value: ArrayLike, *, square: bool = True) -> ComplexArray:
    """Coerce to a finite 2-D complex array (read-only copy)."""
    matrix = np.array(value, dtype=np.complex128)
    if matrix.ndim != 2:
        raise InvalidStateError(f"expected a 2-D matrix, got shape {matrix.shape}")
    if square and matrix.shape[0] != matrix.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise InvalidStateError("matrix has non-finite entries")
    matrix.setflags(write=False)
    return matrix


def hermitian_deviation(matrix: NDArray) -> float:
    """Max elementwise |M - M^dagger|."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def is_hermitian(matrix: NDArray, tol: float = 1e-10) -> bool:
    return hermitian_deviation(matrix) <= tol


def hermitize(matrix: NDArray) -> ComplexArray:
    return 0.5 * (matrix + matrix.conj().T)


def min_eigenvalue(matrix: NDArray) -> float:
    """Smallest eigenvalue of the Hermitian part."""
    return float(np.linalg.eigvalsh(hermitize(matrix))[0])


def is_psd(matrix: NDArray, tol: float = 1e-9) -> bool:
    return is_hermitian(matrix, max(tol, 1e-10)) and min_eigenvalue(matrix) >= -tol


def psd_sqrt(matrix: NDArray) -> ComplexArray:
    """Square root of a PSD matrix via eigh, negative eigenvalues clipped to 0."""
    values, vectors = np.linalg.eigh(hermitize(matrix))
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def kron(a: NDArray, b: NDArray) -> ComplexArray:
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != a.shape[1] or b.shape[0] != b.shape[1]:
        raise DimensionMismatchError(f"tensor requires square operands, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def trace_out(matrix: NDArray, keep: list[int], dims: list[int]) -> ComplexArray:
    """Partial trace of a raw matrix over every subsystem not in ``keep``."""
    total = int(np.prod(dims))
    if matrix.shape != (total, total):
        raise DimensionMismatchError(f"dims {dims} do not multiply to matrix size {matrix.shape[0]}")
    if any(k < 0 or k >= len(dims) for k in keep):
        raise DimensionMismatchError(f"keep indices {keep} out of range for {len(dims)} subsystems")
    tensor = matrix.reshape(list(dims) + list(dims))
    remaining = len(dims)
    for index in reversed(range(len(dims))):
        if index in keep:
            continue
        tensor = np.trace(tensor, axis1=index, axis2=index + remaining)
        remaining -= 1
    kept = int(np.prod([dims[k] for k in sorted(keep)]))
    return tensor.reshape(kept, kept)


def entropy_bits(probabilities: ArrayLike, axis: int = -1) -> NDArray[np.float64]:
    """Shannon entropy in bits with 0 log 0 := 0."""
    p = np.clip(np.asarray(probabilities, dtype=np.float64), 0.0, None)
    return np.sum(entr(p), axis=axis) / LN2


def check_dimension(dim: int) -> None:
    if dim < 1 or dim > MAX_DIM:
        raise DimensionMismatchError(f"dimension {dim} outside supported range 1..{MAX_DIM}")
