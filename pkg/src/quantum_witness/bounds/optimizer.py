"""Multi-start state-space search: grid seeding plus Nelder-Mead refinement.

A search extremizes a vector of "levels" (for example the sums of the k
largest f-table entries, k = 1..N) over a state set. Every level is
refined separately from its own best grid seeds, then all refined points
are pooled and every level is re-evaluated on the pool, so levels that are
monotone pointwise stay monotone after the search.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize

from quantum_witness.bounds.models import OptimizerProfile, StateSet, StateSetKind
from quantum_witness.config import get_optimizer_profile, get_settings
from quantum_witness.core.states import bloch_matrices
from quantum_witness.errors import OptimizerError
from quantum_witness.utils.logger import get_logger
from quantum_witness.utils.metrics import MetricsTimer, optimizer_duration_seconds, optimizer_runs_total

logger = get_logger(__name__)

LevelFunction = Callable[[NDArray[np.complex128]], NDArray[np.float64]]

GRID_CHUNK = 2048


class Parametrization(ABC):
    """Maps unconstrained real parameters onto density matrices."""

    name: str = "base"

    @abstractmethod
    def grid(self, profile: OptimizerProfile) -> NDArray[np.float64]:
        """Seed parameters, shape (G, n_params)."""

    @abstractmethod
    def matrices(self, params: NDArray[np.float64]) -> NDArray[np.complex128]:
        """Density matrices for an (N, n_params) array, shape (N, d, d)."""


class BlochBall(Parametrization):
    """Qubit states; points outside the unit ball are projected onto it."""

    name = "bloch_ball"

    def grid(self, profile: OptimizerProfile) -> NDArray[np.float64]:
        axis = np.linspace(-1.0, 1.0, profile.grid_resolution)
        lattice = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1).reshape(-1, 3)
        return self.clip(lattice)

    @staticmethod
    def clip(r: NDArray[np.float64]) -> NDArray[np.float64]:
        norms = np.linalg.norm(r, axis=-1, keepdims=True)
        return r / np.maximum(norms, 1.0)

    def matrices(self, params: NDArray[np.float64]) -> NDArray[np.complex128]:
        return bloch_matrices(self.clip(np.atleast_2d(params)))


def _sphere_grid(resolution: int) -> NDArray[np.float64]:
    theta = np.linspace(0.0, np.pi, resolution + 1)
    phi = np.linspace(0.0, 2.0 * np.pi, 2 * resolution, endpoint=False)
    return np.stack(np.meshgrid(theta, phi, indexing="ij"), axis=-1).reshape(-1, 2)


def _qubit_kets(angles: NDArray[np.float64]) -> NDArray[np.complex128]:
    """(N, 2) kets cos(t/2)|0> + e^{i p} sin(t/2)|1> from (N, 2) angles (t, p)."""
    theta, phi = angles[:, 0], angles[:, 1]
    return np.stack([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)], axis=-1)


class BlochSphere(Parametrization):
    """Pure qubit states by polar and azimuthal angle."""

    name = "bloch_sphere"

    def grid(self, profile: OptimizerProfile) -> NDArray[np.float64]:
        return _sphere_grid(profile.sphere_resolution)

    def matrices(self, params: NDArray[np.float64]) -> NDArray[np.complex128]:
        kets = _qubit_kets(np.atleast_2d(params))
        return np.einsum("ni,nj->nij", kets, kets.conj())


class ProductQubits(Parametrization):
    """Pure product states of several qubits, two angles per qubit."""

    name = "product_qubits"

    def __init__(self, parties: int = 2):
        self.parties = parties

    def grid(self, profile: OptimizerProfile) -> NDArray[np.float64]:
        single = _sphere_grid(profile.product_resolution // 2 + 1)
        grids = np.meshgrid(*([np.arange(len(single))] * self.parties), indexing="ij")
        indices = np.stack([g.reshape(-1) for g in grids], axis=-1)
        return np.concatenate([single[indices[:, p]] for p in range(self.parties)], axis=-1)

    def matrices(self, params: NDArray[np.float64]) -> NDArray[np.complex128]:
        params = np.atleast_2d(params)
        ket = _qubit_kets(params[:, 0:2])
        for p in range(1, self.parties):
            other = _qubit_kets(params[:, 2 * p : 2 * p + 2])
            ket = np.einsum("ni,nj->nij", ket, other).reshape(params.shape[0], -1)
        return np.einsum("ni,nj->nij", ket, ket.conj())


class LevelSearch(BaseModel):
    """Best level values found and where they were attained."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    values: tuple[float, ...]
    argbest: tuple[np.ndarray, ...]
    converged: tuple[bool, ...]
    evaluations: int
    parametrizations: tuple[str, ...]


class StateSpaceOptimizer:
    """Extremizes level functions over a :class:`StateSet`."""

    def __init__(
        self,
        state_set: StateSet,
        profile: OptimizerProfile | None = None,
        max_workers: int | None = None,
    ):
        settings = get_settings()
        self.state_set = state_set
        self.profile = profile or state_set.profile or get_optimizer_profile(settings.optimizer_profile)
        self.max_workers = max_workers or settings.max_workers

    def parametrizations(self, maximize: bool) -> list[Parametrization]:
        kind = self.state_set.kind
        if kind == StateSetKind.SEPARABLE_PRODUCT:
            dims = self.state_set.subsystem_dims or (2, 2)
            if any(d != 2 for d in dims):
                raise OptimizerError(f"product-state search supports qubit factors only, got {dims}")
            return [ProductQubits(len(dims))]
        if self.state_set.dim != 2:
            raise OptimizerError(f"{kind.value} search is implemented for qubits, got dim {self.state_set.dim}")
        if kind == StateSetKind.PURE_STATES:
            return [BlochSphere()]
        # Minima of concave objectives sit on the pure-state surface.
        return [BlochBall()] if maximize else [BlochBall(), BlochSphere()]

    def extremize(self, levels_fn: LevelFunction, maximize: bool, objective: str = "levels") -> LevelSearch:
        """Maximize (or minimize) every column of ``levels_fn`` independently."""
        with MetricsTimer(optimizer_duration_seconds, {"objective": objective}):
            if self.state_set.kind == StateSetKind.EXPLICIT_LIST:
                result = self._scan_explicit(levels_fn, maximize)
            else:
                result = self._search(levels_fn, maximize)
        converged = all(result.converged)
        optimizer_runs_total.labels(objective=objective, converged=str(converged).lower()).inc()
        logger.debug(
            "optimizer_finished",
            objective=objective,
            maximize=maximize,
            levels=len(result.values),
            evaluations=result.evaluations,
            converged=converged,
        )
        return result

    def _scan_explicit(self, levels_fn: LevelFunction, maximize: bool) -> LevelSearch:
        if not self.state_set.states:
            raise OptimizerError("state set is empty")
        matrices = np.stack([state.matrix for state in self.state_set.states])
        values = np.asarray(levels_fn(matrices))
        best = np.argmax(values, axis=0) if maximize else np.argmin(values, axis=0)
        return LevelSearch(
            values=tuple(float(values[b, k]) for k, b in enumerate(best)),
            argbest=tuple(matrices[b] for b in best),
            converged=(True,) * values.shape[1],
            evaluations=len(matrices),
            parametrizations=("explicit_list",),
        )

    def _evaluate(self, levels_fn: LevelFunction, param: Parametrization, params: NDArray) -> NDArray[np.float64]:
        chunks = [levels_fn(param.matrices(params[i : i + GRID_CHUNK])) for i in range(0, len(params), GRID_CHUNK)]
        return np.concatenate(chunks, axis=0)

    def _search(self, levels_fn: LevelFunction, maximize: bool) -> LevelSearch:
        sign = -1.0 if maximize else 1.0
        params = self.parametrizations(maximize)
        profile = self.profile
        evaluations = 0
        seeds: list[NDArray[np.float64]] = []
        jobs: list[tuple[int, int, NDArray[np.float64]]] = []

        for pi, param in enumerate(params):
            grid = param.grid(profile)
            values = self._evaluate(levels_fn, param, grid)
            evaluations += len(grid)
            cost = sign * values
            chosen = []
            for level in range(values.shape[1]):
                order = np.argsort(cost[:, level], kind="stable")[: profile.refine_seeds]
                chosen.append(grid[order])
                jobs.extend((pi, level, grid[index]) for index in order)
            seeds.append(np.concatenate(chosen, axis=0))

        def refine(job: tuple[int, int, NDArray[np.float64]]) -> tuple[NDArray[np.float64], float, bool, int]:
            pi, level, x0 = job
            param = params[pi]

            def cost(x: NDArray[np.float64]) -> float:
                return float(sign * levels_fn(param.matrices(x[None, :]))[0, level])

            res: Any = minimize(
                cost,
                x0,
                method="Nelder-Mead",
                options={
                    "maxiter": profile.refine_iterations,
                    "xatol": profile.simplex_tol,
                    "fatol": profile.simplex_tol,
                },
            )
            return np.asarray(res.x), float(res.fun), bool(res.success), int(res.nfev)

        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                refined = list(executor.map(refine, jobs))
        else:
            refined = [refine(job) for job in jobs]
        evaluations += sum(r[3] for r in refined)

        n_levels = None
        pooled_values, pooled_matrices = [], []
        for pi, param in enumerate(params):
            points = [seeds[pi]] + [r[0][None, :] for job, r in zip(jobs, refined, strict=True) if job[0] == pi]
            candidates = np.concatenate(points, axis=0)
            matrices = param.matrices(candidates)
            values = levels_fn(matrices)
            evaluations += len(candidates)
            n_levels = values.shape[1]
            pooled_values.append(values)
            pooled_matrices.append(matrices)
        values = np.concatenate(pooled_values, axis=0)
        matrices = np.concatenate(pooled_matrices, axis=0)
        best = np.argmax(values, axis=0) if maximize else np.argmin(values, axis=0)

        converged = []
        for level in range(n_levels or 0):
            runs = [r for job, r in zip(jobs, refined, strict=True) if job[1] == level]
            best_run = min(range(len(runs)), key=lambda i: (runs[i][1], i))
            converged.append(runs[best_run][2])

        return LevelSearch(
            values=tuple(float(values[b, k]) for k, b in enumerate(best)),
            argbest=tuple(matrices[b] for b in best),
            converged=tuple(converged),
            evaluations=evaluations,
            parametrizations=tuple(p.name for p in params),
        )
