"""Entanglement witnesses read as majorization relations over outcome cells."""

from collections.abc import Sequence

import numpy as np
from numpy.typing import NDArray

from quantum_witness.bounds.models import BoundVector, OptimizerProfile, StateSet, StateSetKind, VectorTag
from quantum_witness.bounds.optimizer import StateSpaceOptimizer
from quantum_witness.bounds.vectors import from_cumulative, majorizes, prefix_margins, sort_desc, top_k_sums
from quantum_witness.config import get_settings
from quantum_witness.core.measurements import Observable, pauli
from quantum_witness.core.states import DensityMatrix
from quantum_witness.errors import DimensionMismatchError, InvalidStateError
from quantum_witness.utils.logger import get_logger
from quantum_witness.witness.models import WitnessOperator, WitnessReport

logger = get_logger(__name__)


def bell_state_witness() -> WitnessOperator:
    """|Φ+><Φ+| - I/2 = (XX - YY + ZZ - II) / 4."""
    labels = ("I", "X", "Y", "Z")
    observables = tuple(pauli(label) for label in labels)
    alpha = np.diag([-0.25, 0.25, -0.25, 0.25])
    phi_plus = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    matrix = np.outer(phi_plus, phi_plus).astype(np.complex128) - 0.5 * np.eye(4)
    return WitnessOperator(coefficients=alpha, a_observables=observables, b_observables=observables, matrix=matrix)


def _max_outcomes(observables: Sequence[Observable]) -> int:
    return max(len(o.eigenvalues) for o in observables)


def cell_operators(w: WitnessOperator) -> NDArray[np.complex128]:
    """K[a, b] = sum_xy alpha_xy mu_a|x gamma_b|y M_a|x ⊗ N_b|y.

    Observables with fewer outcomes leave the extra cells empty, so
    tr(rho K[a, b]) is the f table and sum_ab K[a, b] = E.
    """
    n_a, n_b = _max_outcomes(w.a_observables), _max_outcomes(w.b_observables)
    d_a, d_b = w.dims
    K = np.zeros((n_a, n_b, d_a * d_b, d_a * d_b), dtype=np.complex128)
    for x, A in enumerate(w.a_observables):
        for y, B in enumerate(w.b_observables):
            alpha = w.coefficients[x, y]
            if alpha == 0.0:
                continue
            for a, (mu, M) in enumerate(zip(A.eigenvalues, A.projectors, strict=True)):
                for b, (gamma, N) in enumerate(zip(B.eigenvalues, B.projectors, strict=True)):
                    K[a, b] += alpha * mu * gamma * np.kron(M, N)
    return K


def _f_batch(K: NDArray[np.complex128], matrices: NDArray[np.complex128]) -> NDArray[np.float64]:
    values = np.einsum("abij,nji->nab", K, matrices).real
    return values.reshape(len(matrices), -1)


def witness_f_vector(w: WitnessOperator, rho: DensityMatrix) -> BoundVector:
    """f(a, b) = sum_xy alpha_xy mu_a|x gamma_b|y P(a, b | x, y), row-major."""
    d_a, d_b = w.dims
    if rho.dim != d_a * d_b:
        raise DimensionMismatchError(f"state dim {rho.dim} does not match witness dim {d_a * d_b}")
    return BoundVector(components=_f_batch(cell_operators(w), rho.matrix[None, :, :])[0], tag=VectorTag.RAW)


def separable_bound(
    w: WitnessOperator, D_sep: StateSet | None = None, profile: OptimizerProfile | None = None
) -> tuple[BoundVector, bool]:
    """c_s: prefix sums are the largest sums of k cells over product states.

    Levels are taken as found. Negative cells make them fall towards the
    total, which is at most zero for a witness, so c_s may carry a
    non-monotone warning.
    """
    D_sep = D_sep or StateSet.separable(w.dims, profile=profile)
    if D_sep.kind not in (StateSetKind.SEPARABLE_PRODUCT, StateSetKind.EXPLICIT_LIST):
        raise InvalidStateError(f"witness bounds need a separable state set, got {D_sep.kind.value}")
    K = cell_operators(w)
    search = StateSpaceOptimizer(D_sep, profile=profile).extremize(
        lambda ms: top_k_sums(_f_batch(K, ms)), maximize=True, objective="witness_separable"
    )
    return from_cumulative(np.asarray(search.values)), all(search.converged)


def witness_uncertainty_relation(
    w: WitnessOperator,
    rho: DensityMatrix,
    D_sep: StateSet | None = None,
    bound: BoundVector | None = None,
    tol: float | None = None,
) -> WitnessReport:
    """f↓ ≺ c_s together with the scalar value c_q = tr(rho E)."""
    tol = get_settings().relation_tol if tol is None else tol
    f = witness_f_vector(w, rho)
    converged = True
    if bound is None:
        bound, converged = separable_bound(w, D_sep)
    f_sorted = sort_desc(f)
    report = WitnessReport(
        f_vector=f,
        f_sorted=f_sorted,
        separable_bound=bound,
        c_q=float(np.real(np.trace(rho.matrix @ w.matrix))),
        majorization_holds=majorizes(f_sorted, bound, tol),
        converged=converged,
        margins=tuple(prefix_margins(f_sorted, bound)),
    )
    logger.debug("witness_evaluated", c_q=report.c_q, entangled=report.entangled)
    return report
