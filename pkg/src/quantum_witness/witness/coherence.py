"""Coherence witness: relative entropy of coherence and the f↓ ≺ R_coh relation."""

from collections.abc import Sequence
from typing import Literal

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize

from quantum_witness.bounds.functionals import coherence_functional, f_tables, shannon_entropy
from quantum_witness.bounds.models import BoundVector, OptimizerProfile, VectorTag
from quantum_witness.bounds.vectors import from_cumulative, majorizes, sort_desc, top_k_sums
from quantum_witness.config import get_optimizer_profile, get_settings
from quantum_witness.core.measurements import (
    Measurement,
    born_probabilities,
    born_probabilities_batch,
    computational_basis,
    phi_basis,
)
from quantum_witness.core.states import DensityMatrix, bloch_vector, von_neumann_entropy
from quantum_witness.errors import InvalidMeasurementError, ShapeMismatchError
from quantum_witness.utils.logger import get_logger
from quantum_witness.witness.models import CoherenceReport

logger = get_logger(__name__)

MARGINAL_SLACK = 0.05
SCAN_SPACING_DEG = 5.0

Family = Literal["phi", "sphere"] | Sequence[Measurement]


def relative_entropy_coherence(rho: DensityMatrix) -> float:
    """C_r(rho) = S(rho_d) - S(rho) in bits."""
    return von_neumann_entropy(rho.diagonal()) - von_neumann_entropy(rho)


def _require_computational(B: Measurement) -> None:
    reference = computational_basis(B.dim)
    if B.n_outcomes != reference.n_outcomes or any(
        np.max(np.abs(e - r)) > 1e-9 for e, r in zip(B.effects, reference.effects, strict=True)
    ):
        raise InvalidMeasurementError(f"measurement '{B.label}' is not the computational basis")


def _directions(params: NDArray[np.float64], family: str) -> NDArray[np.float64]:
    """Bloch directions of the 0-outcome projector of each family member."""
    params = np.atleast_2d(params)
    if family == "phi":
        # cos(phi)|0> + sin(phi)|1> has Bloch direction (sin 2phi, 0, cos 2phi).
        two_phi = 2.0 * params[:, 0]
        return np.stack([np.sin(two_phi), np.zeros_like(two_phi), np.cos(two_phi)], axis=-1)
    theta, azimuth = params[:, 0], params[:, 1]
    return np.stack([np.sin(theta) * np.cos(azimuth), np.sin(theta) * np.sin(azimuth), np.cos(theta)], axis=-1)


def _family_grid(family: str, step_deg: float) -> NDArray[np.float64]:
    if family == "phi":
        return np.radians(np.arange(0.0, 180.0, step_deg))[:, None]
    theta = np.radians(np.arange(0.0, 180.0 + step_deg / 2, step_deg * 4))
    azimuth = np.radians(np.arange(0.0, 360.0, step_deg * 4))
    return np.stack(np.meshgrid(theta, azimuth, indexing="ij"), axis=-1).reshape(-1, 2)


def _levels_over_directions(
    r: NDArray[np.float64], q: NDArray[np.float64], directions: NDArray[np.float64]
) -> NDArray[np.float64]:
    p0 = np.clip(0.5 * (1.0 + directions @ r), 0.0, 1.0)
    p = np.stack([p0, 1.0 - p0], axis=-1)
    tables = f_tables(coherence_functional(), [p, np.broadcast_to(q, (len(p), q.size))])
    return top_k_sums(tables)


def _maximize_over_family(
    rho: DensityMatrix, q: NDArray[np.float64], family: str, step_deg: float, profile: OptimizerProfile
) -> tuple[NDArray[np.float64], float]:
    """Max top-k sums over a continuous qubit basis family, plus the angle maximizing the total."""
    if rho.dim != 2:
        raise ShapeMismatchError("continuous basis families are defined for qubits; pass an explicit family")
    r = bloch_vector(rho)
    grid = _family_grid(family, step_deg)
    values = _levels_over_directions(r, q, _directions(grid, family))
    candidates = [grid]
    options = {"maxiter": profile.refine_iterations, "xatol": profile.simplex_tol, "fatol": profile.simplex_tol}
    for level in range(values.shape[1]):
        seed = grid[int(np.argmax(values[:, level]))]

        def cost(x: NDArray[np.float64], level: int = level) -> float:
            return -float(_levels_over_directions(r, q, _directions(x[None, :], family))[0, level])

        res = minimize(cost, seed, method="Nelder-Mead", options=options)
        candidates.append(np.asarray(res.x)[None, :])
    pool = np.concatenate(candidates, axis=0)
    pooled = _levels_over_directions(r, q, _directions(pool, family))
    best_total = int(np.argmax(pooled[:, -1]))
    angle = float(np.degrees(pool[best_total, 0])) % 180.0
    return pooled.max(axis=0), angle


def coherence_vector_relation(
    rho: DensityMatrix,
    A: Measurement,
    B: Measurement | None = None,
    family: Family = "phi",
    phi_step_deg: float | None = None,
    tol: float | None = None,
    profile: OptimizerProfile | None = None,
) -> CoherenceReport:
    """0 ≺ f↓ ≺ R_coh for the tested measurement A against the computational basis B.

    R_coh holds the largest sums of k entries of the coherence f table over the
    measurement family (the supplied A is always part of it).
    """
    B = B or computational_basis(rho.dim)
    _require_computational(B)
    settings = get_settings()
    tol = settings.relation_tol if tol is None else tol
    step = phi_step_deg or settings.phi_step_deg
    f = coherence_functional()

    q = born_probabilities(rho, B)
    p = born_probabilities(rho, A)
    f_desc = sort_desc(f_tables(f, [p[None, :], q[None, :]])[0])
    own_levels = np.cumsum(f_desc.array)

    if isinstance(family, str):
        profile = profile or get_optimizer_profile(settings.optimizer_profile)
        levels, angle = _maximize_over_family(rho, q, family, step, profile)
        levels = np.maximum(levels, own_levels)
    else:
        if not family:
            raise InvalidMeasurementError("measurement family is empty")
        members = list(family) + [A]
        tables = np.stack(
            [f_tables(f, [born_probabilities(rho, m)[None, :], q[None, :]])[0] for m in members]
        )
        per_member = top_k_sums(tables)
        levels = per_member.max(axis=0)
        angle = float(int(np.argmax(per_member[:, -1])))

    R_coh = from_cumulative(levels)
    n = A.n_outcomes
    report = CoherenceReport(
        f_desc=f_desc,
        R_coh=R_coh,
        C_r=relative_entropy_coherence(rho),
        D_H=R_coh.total / n,
        basis_angle_at_min=angle,
        lower_ok=majorizes(BoundVector(components=np.zeros(len(f_desc))), f_desc, tol),
        upper_ok=majorizes(f_desc, R_coh, tol),
    )
    logger.debug("coherence_relation", c_r=report.C_r, d_h=report.D_H, angle=angle)
    return report


def phi_scan(rho: DensityMatrix, phis_deg: ArrayLike) -> list[tuple[float, NDArray[np.float64]]]:
    """Exact Born marginals of rho in the phi-basis family."""
    stack = rho.matrix[None, :, :]
    scans = []
    for phi in np.asarray(phis_deg, dtype=np.float64).reshape(-1):
        m = phi_basis(float(np.radians(phi)))
        scans.append((float(phi), born_probabilities_batch(stack, m)[0]))
    return scans


def _normalize_marginal(p: ArrayLike, label: str) -> NDArray[np.float64]:
    values = np.asarray(p, dtype=np.float64).reshape(-1)
    if values.size < 2 or np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError(f"{label} is not a probability vector: {values}")
    total = values.sum()
    if abs(total - 1.0) > MARGINAL_SLACK:
        raise ValueError(f"{label} sums to {total:.4f}, outside the 1 ± {MARGINAL_SLACK} slack")
    return values / total


def _check_coverage(phis: Sequence[float]) -> None:
    ordered = np.sort(np.asarray(phis, dtype=np.float64))
    if ordered[0] > 1e-9 or ordered[-1] < 45.0 - 1e-9:
        raise ValueError(f"phi scan must cover [0, 45] degrees, got [{ordered[0]}, {ordered[-1]}]")
    covered = ordered[(ordered >= -1e-9) & (ordered <= 45.0 + 1e-9)]
    if np.max(np.diff(covered)) > SCAN_SPACING_DEG + 1e-9:
        raise ValueError(f"phi scan spacing exceeds {SCAN_SPACING_DEG} degrees")


def d_h_from_marginals(
    pZ: ArrayLike, scans: Sequence[tuple[float, ArrayLike]], tol: float | None = None
) -> CoherenceReport:
    """D_H = H(pZ) - min_phi H(p_phi) on a discrete scan (degrees), no interpolation."""
    if not scans:
        raise ValueError("scan list is empty")
    tol = get_settings().relation_tol if tol is None else tol
    q = _normalize_marginal(pZ, "pZ")
    phis = [float(phi) for phi, _ in scans]
    _check_coverage(phis)
    marginals = np.stack([_normalize_marginal(p, f"p(phi={phi})") for phi, p in scans])

    entropies = np.array([shannon_entropy(p) for p in marginals])
    best = int(np.argmin(entropies))
    ties = np.flatnonzero(np.isclose(entropies, entropies[best], rtol=0.0, atol=1e-15))
    best = int(min(ties, key=lambda i: phis[i]))

    f = coherence_functional()
    tables = f_tables(f, [marginals, np.broadcast_to(q, (len(marginals), q.size))])
    f_desc = BoundVector(components=np.sort(tables[best])[::-1], tag=VectorTag.SORTED_DESC)
    R_coh = from_cumulative(top_k_sums(tables).max(axis=0))
    return CoherenceReport(
        f_desc=f_desc,
        R_coh=R_coh,
        C_r=None,
        D_H=float(shannon_entropy(q) - entropies[best]),
        basis_angle_at_min=phis[best],
        lower_ok=majorizes(BoundVector(components=np.zeros(len(f_desc))), f_desc, tol),
        upper_ok=majorizes(f_desc, R_coh, tol),
    )
