"""Three-party Svetlichny inequality as a vector relation."""

from collections.abc import Sequence
from itertools import product

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from quantum_witness.bounds.models import BoundVector, VectorTag
from quantum_witness.bounds.vectors import leading_vector, majorizes, prefix_margins, sort_desc
from quantum_witness.config import get_optimizer_profile, get_settings
from quantum_witness.core.operators import PAULIS
from quantum_witness.core.states import ghz_state
from quantum_witness.errors import ShapeMismatchError
from quantum_witness.utils.logger import get_logger
from quantum_witness.witness.models import BellLevel, CorrelationTable, SvetlichnyReport

logger = get_logger(__name__)

SVETLICHNY_LEVELS: dict[BellLevel, float] = {
    BellLevel.CLASSICAL: 4.0,
    BellLevel.QUANTUM: 4.0 * np.sqrt(2.0),
    BellLevel.NONSIGNALING: 8.0,
}

GRID_STEP = np.pi / 4.0


def svetlichny_signs() -> NDArray[np.float64]:
    """Λ[x, y, z] = -1 when x = y = z, +1 otherwise."""
    x, y, z = np.meshgrid(*([np.arange(2)] * 3), indexing="ij")
    return np.where((x == y) & (y == z), -1.0, 1.0)


def _parity_signs() -> NDArray[np.float64]:
    a, b, c = np.meshgrid(*([np.arange(2)] * 3), indexing="ij")
    return (-1.0) ** (a + b + c)


def _require_shape(table: CorrelationTable) -> None:
    if table.settings != (2, 2, 2) or table.outcomes != (2, 2, 2):
        raise ShapeMismatchError(
            f"Svetlichny needs three parties with 2 settings and 2 outcomes, got {table.settings} / {table.outcomes}"
        )


def three_party_correlators(table: CorrelationTable) -> NDArray[np.float64]:
    """E[x, y, z] = sum_abc (-1)^(a+b+c) P(a, b, c | x, y, z)."""
    _require_shape(table)
    return np.einsum("abc,xyzabc->xyz", _parity_signs(), table.probs)


def svetlichny_value(table: CorrelationTable) -> float:
    return float(np.sum(svetlichny_signs() * three_party_correlators(table)))


def svetlichny_f_vector(table: CorrelationTable, even_only: bool = True) -> BoundVector:
    """f(a, b, c) = sum_xyz Λ_xyz P(a, b, c | x, y, z), row-major.

    With ``even_only`` the odd-parity cells are zeroed; the masked total is
    2 + S3/2.
    """
    _require_shape(table)
    f = np.einsum("xyz,xyzabc->abc", svetlichny_signs(), table.probs)
    if even_only:
        f = np.where(_parity_signs() > 0, f, 0.0)
    return BoundVector(components=f.reshape(-1), tag=VectorTag.RAW)


def svetlichny_check(table: CorrelationTable, even_only: bool = True, tol: float | None = None) -> SvetlichnyReport:
    """f↓ against the classical [4,..], quantum [4√2,..] and no-signaling [8,..] vectors."""
    tol = get_settings().majorization_tol if tol is None else tol
    f = svetlichny_f_vector(table, even_only)
    f_sorted = sort_desc(f)
    verdicts, margins = {}, {}
    for level, value in SVETLICHNY_LEVELS.items():
        bound = leading_vector(float(value), len(f))
        verdicts[level.value] = majorizes(f_sorted, bound, tol)
        margins[level.value] = tuple(prefix_margins(f_sorted, bound))
    return SvetlichnyReport(
        s3=svetlichny_value(table),
        f_vector=f,
        f_sorted=f_sorted,
        verdicts=verdicts,
        margins=margins,
        masked=even_only,
    )


def _xy_projectors(phi: float) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    observable = np.cos(phi) * PAULIS["X"] + np.sin(phi) * PAULIS["Y"]
    identity = np.eye(2, dtype=np.complex128)
    return (identity + observable) / 2.0, (identity - observable) / 2.0


def simulate_ghz_table(angles: Sequence[float]) -> CorrelationTable:
    """Born-rule table of the GHZ state with cos(phi) X + sin(phi) Y measurements.

    ``angles`` is (a0, a1, b0, b1, c0, c1) in radians.
    """
    if len(angles) != 6:
        raise ShapeMismatchError(f"expected 6 measurement angles, got {len(angles)}")
    rho = ghz_state(3).density().matrix
    local = [[_xy_projectors(angles[2 * party + s]) for s in range(2)] for party in range(3)]
    probs = np.zeros((2,) * 6)
    for x, y, z in product(range(2), repeat=3):
        for a, b, c in product(range(2), repeat=3):
            effect = np.kron(np.kron(local[0][x][a], local[1][y][b]), local[2][z][c])
            probs[x, y, z, a, b, c] = np.real(np.trace(rho @ effect))
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum(axis=(3, 4, 5), keepdims=True)
    return CorrelationTable(settings=(2, 2, 2), outcomes=(2, 2, 2), probs=probs)


def _ghz_value(angles: NDArray[np.float64]) -> NDArray[np.float64]:
    """S3 for rows of angles; GHZ correlators are cos(a_x + b_y + c_z)."""
    angles = np.atleast_2d(angles)
    a, b, c = angles[:, 0:2], angles[:, 2:4], angles[:, 4:6]
    total = a[:, :, None, None] + b[:, None, :, None] + c[:, None, None, :]
    return np.einsum("xyz,nxyz->n", svetlichny_signs(), np.cos(total))


def optimize_ghz_svetlichny() -> tuple[tuple[float, ...], CorrelationTable]:
    """Search measurement angles maximizing S3 on the GHZ state.

    A pi/4 lattice seeds Nelder-Mead refinements; the returned table is the
    Born-rule simulation at the best angles.
    """
    profile = get_optimizer_profile(get_settings().optimizer_profile)
    steps = np.arange(8) * GRID_STEP
    grid = np.stack(np.meshgrid(*([steps] * 6), indexing="ij"), axis=-1).reshape(-1, 6)
    values = _ghz_value(grid)
    seeds = grid[np.argsort(-values, kind="stable")[: profile.refine_seeds]]
    best_x, best_value = seeds[0], float(values.max())
    for seed in seeds:
        res = minimize(
            lambda x: -float(_ghz_value(x)[0]),
            seed,
            method="Nelder-Mead",
            options={"maxiter": profile.refine_iterations, "xatol": profile.simplex_tol, "fatol": profile.simplex_tol},
        )
        if -res.fun > best_value:
            best_x, best_value = np.asarray(res.x), float(-res.fun)
    angles = tuple(float(v) for v in np.mod(best_x, 2.0 * np.pi))
    logger.debug("ghz_svetlichny_optimized", s3=best_value, angles=angles)
    return angles, simulate_ghz_table(angles)


def svetlichny_ns_box() -> CorrelationTable:
    """P(a,b,c|x,y,z) = 1/4 when a xor b xor c = [x = y = z]; reaches S3 = 8."""
    x, y, z, a, b, c = np.meshgrid(*([np.arange(2)] * 6), indexing="ij")
    target = ((x == y) & (y == z)).astype(int)
    probs = np.where((a ^ b ^ c) == target, 0.25, 0.0)
    return CorrelationTable(settings=(2, 2, 2), outcomes=(2, 2, 2), probs=probs)
