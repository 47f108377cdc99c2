"""CHSH as a vector relation: correlators, f vectors, bound hierarchy and covariance form."""

from collections.abc import Sequence
from itertools import product

import numpy as np
from numpy.typing import NDArray

from quantum_witness.bounds.models import BoundVector, VectorTag
from quantum_witness.bounds.vectors import leading_vector, majorizes, prefix_margins, sort_desc
from quantum_witness.config import get_settings
from quantum_witness.core.measurements import Observable, pauli
from quantum_witness.core.states import phi_state
from quantum_witness.errors import ShapeMismatchError
from quantum_witness.witness.models import (
    BellLevel,
    ChshReport,
    CorrelationTable,
    CorrelatorConvention,
    CovarianceReport,
)

SQRT2 = float(np.sqrt(2.0))

# Largest masked prefix sums: deterministic boxes, Tsirelson box, PR box.
CHSH_LEVELS: dict[BellLevel, float] = {
    BellLevel.CLASSICAL: 2.0,
    BellLevel.QUANTUM: 2.0 * SQRT2,
    BellLevel.NONSIGNALING: 3.0,
}

COVARIANCE_BOUND = 16.0 / 7.0
OUTCOME_VALUES = np.array([1.0, -1.0])


def _require_chsh_shape(table: CorrelationTable) -> None:
    if table.settings != (2, 2) or table.outcomes != (2, 2):
        raise ShapeMismatchError(
            f"CHSH needs 2 settings and 2 outcomes per side, got settings {table.settings}, outcomes {table.outcomes}"
        )


def outcome_signs(convention: CorrelatorConvention = CorrelatorConvention.PARITY) -> NDArray[np.float64]:
    """sign[a, b] = (-1)^(a+b) or (-1)^(a*b)."""
    a, b = np.meshgrid([0, 1], [0, 1], indexing="ij")
    exponent = a + b if convention == CorrelatorConvention.PARITY else a * b
    return (-1.0) ** exponent


def correlator(
    table: CorrelationTable, x: int, y: int, convention: CorrelatorConvention = CorrelatorConvention.PARITY
) -> float:
    """E(x, y) = sum_ab sign(a, b) P(a, b | x, y)."""
    if table.parties != 2 or table.outcomes != (2, 2):
        raise ShapeMismatchError(f"correlators need binary outcomes for two parties, got {table.outcomes}")
    return float(np.sum(outcome_signs(convention) * table.slice(x, y)))


def chsh_value(table: CorrelationTable, convention: CorrelatorConvention = CorrelatorConvention.PARITY) -> float:
    """S = E00 + E01 + E10 - E11."""
    _require_chsh_shape(table)
    return sum((-1.0) ** (x * y) * correlator(table, x, y, convention) for x, y in product(range(2), range(2)))


def chsh_f_vector(table: CorrelationTable, diagonal_only: bool = False) -> BoundVector:
    """f(a, b) = sum_xy (-1)^(xy) P(a, b | x, y), row-major over (a, b).

    With ``diagonal_only`` the cells a != b are zeroed; the masked total is
    1 + S/2 for the parity correlator.
    """
    _require_chsh_shape(table)
    weights = np.array([[1.0, 1.0], [1.0, -1.0]])
    f = np.einsum("xy,xyab->ab", weights, table.probs)
    if diagonal_only:
        f = f * np.eye(2)
    return BoundVector(components=f.reshape(-1), tag=VectorTag.RAW)


def bell_level_vector(level: BellLevel | str, length: int = 4) -> BoundVector:
    return leading_vector(CHSH_LEVELS[BellLevel(level)], length)


def check_chsh_relation(
    table: CorrelationTable,
    level: BellLevel | str = BellLevel.CLASSICAL,
    diagonal_only: bool = True,
    tol: float | None = None,
) -> ChshReport:
    """f↓ ≺ c for the classical [2,0,0,0], quantum [2√2,0,0,0] or no-signaling [3,0,0,0] vector."""
    level = BellLevel(level)
    tol = get_settings().majorization_tol if tol is None else tol
    f = chsh_f_vector(table, diagonal_only=diagonal_only)
    f_sorted = sort_desc(f)
    bound = bell_level_vector(level)
    return ChshReport(
        level=level,
        chsh_value=chsh_value(table),
        f_vector=f,
        f_sorted=f_sorted,
        bound_vector=bound,
        holds=majorizes(f_sorted, bound, tol),
        margins=tuple(prefix_margins(f_sorted, bound)),
        masked=diagonal_only,
    )


def quantum_chsh_value(theta_deg: float) -> float:
    """γ(θ) = 2 sqrt(1 + sin²(2θ)), the largest CHSH value of sinθ|00> + cosθ|11>."""
    if not 0.0 <= theta_deg <= 90.0:
        raise ValueError(f"theta {theta_deg} outside [0, 90] degrees")
    return float(2.0 * np.sqrt(1.0 + np.sin(np.radians(2.0 * theta_deg)) ** 2))


def optimal_phi(theta: float) -> float:
    """Angle of B_y that attains γ(θ); both in radians."""
    return float(np.arctan(np.sin(2.0 * theta)))


def table_from_observables(
    state_matrix: NDArray[np.complex128], a_obs: Sequence[Observable], b_obs: Sequence[Observable]
) -> CorrelationTable:
    """Born-rule table for binary local observables on a two-qubit state."""
    probs = np.zeros((len(a_obs), len(b_obs), 2, 2))
    for x, A in enumerate(a_obs):
        for y, B in enumerate(b_obs):
            for a, Ma in enumerate(A.projectors):
                for b, Nb in enumerate(B.projectors):
                    probs[x, y, a, b] = np.real(np.trace(state_matrix @ np.kron(Ma, Nb)))
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum(axis=(2, 3), keepdims=True)
    return CorrelationTable(settings=(len(a_obs), len(b_obs)), outcomes=(2, 2), probs=probs)


def chsh_observables(phi: float) -> tuple[list[Observable], list[Observable]]:
    """A_x in {Z, X}; B_y = cos(phi) Z + (-1)^y sin(phi) X."""
    Z, X = pauli("Z").matrix, pauli("X").matrix
    a_obs = [pauli("Z"), pauli("X")]
    b_obs = [
        Observable(label=f"B{y}", matrix=np.cos(phi) * Z + (-1) ** y * np.sin(phi) * X) for y in range(2)
    ]
    return a_obs, b_obs


def simulate_phi_table(theta: float, phi: float | None = None) -> CorrelationTable:
    """CHSH table of |Φ(θ)> with the {Z, X} / cos(phi) Z ± sin(phi) X settings (radians)."""
    phi = optimal_phi(theta) if phi is None else phi
    a_obs, b_obs = chsh_observables(phi)
    return table_from_observables(phi_state(theta).density().matrix, a_obs, b_obs)


def tsirelson_box() -> CorrelationTable:
    """P(a,b|x,y) = [1 + (-1)^(a+b+xy) / sqrt(2)] / 4."""
    x, y, a, b = np.meshgrid(*([np.arange(2)] * 4), indexing="ij")
    probs = (1.0 + (-1.0) ** (a + b + x * y) / SQRT2) / 4.0
    return CorrelationTable(settings=(2, 2), outcomes=(2, 2), probs=probs)


def pr_box() -> CorrelationTable:
    """P(a,b|x,y) = 1/2 if a xor b = x*y."""
    x, y, a, b = np.meshgrid(*([np.arange(2)] * 4), indexing="ij")
    probs = np.where((a ^ b) == (x * y), 0.5, 0.0)
    return CorrelationTable(settings=(2, 2), outcomes=(2, 2), probs=probs)


def deterministic_boxes(parties: int = 2, settings: int = 2, outcomes: int = 2) -> list[CorrelationTable]:
    """Every local deterministic strategy: each party's outcome is a function of its own setting."""
    local = list(product(range(outcomes), repeat=settings))
    boxes = []
    for strategy in product(local, repeat=parties):
        probs = np.zeros((settings,) * parties + (outcomes,) * parties)
        for setting in product(range(settings), repeat=parties):
            answer = tuple(strategy[p][setting[p]] for p in range(parties))
            probs[setting + answer] = 1.0
        boxes.append(CorrelationTable(settings=(settings,) * parties, outcomes=(outcomes,) * parties, probs=probs))
    return boxes


def mix_tables(tables: Sequence[CorrelationTable], weights: Sequence[float]) -> CorrelationTable:
    w = np.asarray(weights, dtype=np.float64)
    if len(tables) != len(w) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be a probability vector matching the tables")
    probs = np.tensordot(w, np.stack([t.probs for t in tables]), axes=1)
    return CorrelationTable(settings=tables[0].settings, outcomes=tables[0].outcomes, probs=probs)


def covariance_chsh(
    table: CorrelationTable,
    marginals: tuple[Sequence[float], Sequence[float]] | None = None,
    tol: float | None = None,
) -> CovarianceReport:
    """Cov(A0,B0) + Cov(A0,B1) + Cov(A1,B0) - Cov(A1,B1) ≤ 16/7 with outcome values ±1.

    ``marginals`` are (<A_0>, <A_1>) and (<B_0>, <B_1>); by default they are read
    from each setting slice. The per-cell vector is compared against
    (4/7, 4/7, 4/7, 4/7); the scalar relation decides ``holds``.
    """
    _require_chsh_shape(table)
    tol = get_settings().majorization_tol if tol is None else tol
    f = np.zeros((2, 2))
    covariances: dict[str, float] = {}
    degenerate: set[str] = set()
    for x, y in product(range(2), range(2)):
        p = table.slice(x, y)
        if marginals is None:
            mean_a = float(OUTCOME_VALUES @ p.sum(axis=1))
            mean_b = float(OUTCOME_VALUES @ p.sum(axis=0))
        else:
            mean_a, mean_b = float(marginals[0][x]), float(marginals[1][y])
        if abs(abs(mean_a) - 1.0) < 1e-12:
            degenerate.add(f"A{x}")
        if abs(abs(mean_b) - 1.0) < 1e-12:
            degenerate.add(f"B{y}")
        centered = np.outer(OUTCOME_VALUES - mean_a, OUTCOME_VALUES - mean_b)
        cell = p * centered
        covariances[f"A{x}B{y}"] = float(cell.sum())
        f += (-1.0) ** (x * y) * cell
    f_vector = BoundVector(components=f.reshape(-1), tag=VectorTag.RAW)
    bound = BoundVector(components=[COVARIANCE_BOUND / 4.0] * 4, tag=VectorTag.RAW)
    total = float(f.sum())
    return CovarianceReport(
        covariances=covariances,
        total=total,
        f_vector=f_vector,
        bound_vector=bound,
        scalar_bound=COVARIANCE_BOUND,
        scalar_holds=total <= COVARIANCE_BOUND + tol,
        vector_holds=majorizes(sort_desc(f_vector), bound, tol),
        degenerate=tuple(sorted(degenerate)),
    )
