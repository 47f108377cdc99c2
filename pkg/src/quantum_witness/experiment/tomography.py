"""Two-qubit polarization tomography by linear inversion."""

from itertools import product

import numpy as np
from numpy.typing import NDArray

from quantum_witness.core.operators import PAULIS
from quantum_witness.core.states import DensityMatrix, fidelity, partial_trace
from quantum_witness.errors import InvalidMeasurementError
from quantum_witness.experiment.models import TomographyInput
from quantum_witness.utils.logger import get_logger

logger = get_logger(__name__)

_S = 1.0 / np.sqrt(2.0)
POLARIZATIONS: dict[str, NDArray[np.complex128]] = {
    "H": np.array([1.0, 0.0], dtype=np.complex128),
    "V": np.array([0.0, 1.0], dtype=np.complex128),
    "D": np.array([_S, _S], dtype=np.complex128),
    "A": np.array([_S, -_S], dtype=np.complex128),
    "R": np.array([_S, -1j * _S], dtype=np.complex128),
    "L": np.array([_S, 1j * _S], dtype=np.complex128),
}

JAMES_SEQUENCE = (
    "HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
    "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL",
)  # fmt: skip

PAULI_ORDER = ("I", "X", "Y", "Z")


def projector(label: str) -> NDArray[np.complex128]:
    """|ψ_a ψ_b><ψ_a ψ_b| for a two-letter polarization label such as 'HD'."""
    if len(label) != 2 or any(c not in POLARIZATIONS for c in label.upper()):
        raise InvalidMeasurementError(f"unknown projection '{label}'")
    ket = np.kron(POLARIZATIONS[label[0].upper()], POLARIZATIONS[label[1].upper()])
    return np.outer(ket, ket.conj())


def james_projectors() -> dict[str, NDArray[np.complex128]]:
    """The sixteen two-photon projections of the standard polarization sequence."""
    return {label: projector(label) for label in JAMES_SEQUENCE}


def _pauli_products() -> list[NDArray[np.complex128]]:
    return [np.kron(PAULIS[i], PAULIS[j]) for i, j in product(PAULI_ORDER, repeat=2)]


def _design_matrix(labels: tuple[str, ...]) -> NDArray[np.float64]:
    """M[ν, k] = <ψ_ν| σ_k |ψ_ν> / 4, so that p_ν = M r for rho = sum_k r_k σ_k / 4."""
    paulis = _pauli_products()
    return np.array([[np.real(np.trace(projector(label) @ s)) / 4.0 for s in paulis] for label in labels])


def project_to_density(matrix: NDArray[np.complex128]) -> DensityMatrix:
    """Hermitize, clip negative eigenvalues and renormalize the trace."""
    hermitian = 0.5 * (matrix + matrix.conj().T)
    values, vectors = np.linalg.eigh(hermitian)
    values = np.clip(values, 0.0, None)
    if values.sum() <= 0:
        raise InvalidMeasurementError("reconstruction has no positive part")
    rho = (vectors * (values / values.sum())) @ vectors.conj().T
    return DensityMatrix(matrix=0.5 * (rho + rho.conj().T))


def tomography_reconstruct(data: TomographyInput) -> DensityMatrix:
    """Least-squares linear inversion followed by projection onto density matrices.

    Values may be counts or probabilities; the overall scale is removed by
    fixing the trace.
    """
    M = _design_matrix(data.labels)
    rank = int(np.linalg.matrix_rank(M))
    if rank < 16:
        raise InvalidMeasurementError(f"projection set has rank {rank}, tomography needs 16")
    coefficients, *_ = np.linalg.lstsq(M, np.asarray(data.values, dtype=np.float64), rcond=None)
    if coefficients[0] <= 0:
        raise InvalidMeasurementError("reconstructed trace is not positive")
    coefficients = coefficients / coefficients[0]
    estimate = sum(r * s for r, s in zip(coefficients, _pauli_products(), strict=True)) / 4.0
    rho = project_to_density(estimate)
    logger.debug("tomography_reconstructed", projections=len(data.labels), purity=rho.purity)
    return rho


def simulate_tomography_input(
    rho: DensityMatrix,
    mean_counts: float | None = None,
    rng: np.random.Generator | None = None,
) -> TomographyInput:
    """Born probabilities for the sixteen projections, optionally Poisson-noised.

    With ``mean_counts`` each projection's count has mean
    4 * mean_counts * p, i.e. ``mean_counts`` on average across a basis.
    """
    probabilities = [float(np.real(np.trace(rho.matrix @ P))) for P in james_projectors().values()]
    probabilities = [max(p, 0.0) for p in probabilities]
    if mean_counts is None:
        return TomographyInput(labels=JAMES_SEQUENCE, values=tuple(probabilities))
    rng = rng or np.random.default_rng()
    counts = rng.poisson(4.0 * mean_counts * np.asarray(probabilities))
    return TomographyInput(labels=JAMES_SEQUENCE, values=tuple(float(c) for c in counts))


def state_fidelities(estimate: DensityMatrix, target: DensityMatrix) -> dict[str, float]:
    """Two-qubit fidelity plus the fidelities of both single-photon reductions."""
    return {
        "two_qubit": fidelity(estimate, target),
        "one_qubit_a": fidelity(partial_trace(estimate, 0, (2, 2)), partial_trace(target, 0, (2, 2))),
        "one_qubit_b": fidelity(partial_trace(estimate, 1, (2, 2)), partial_trace(target, 1, (2, 2))),
    }
