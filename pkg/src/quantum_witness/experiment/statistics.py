"""Counts to probabilities, and Poisson resampling of derived statistics."""

from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel
from scipy.stats import norm

from quantum_witness.config import get_settings
from quantum_witness.errors import ShapeMismatchError
from quantum_witness.experiment.models import CoincidenceRecord
from quantum_witness.utils.logger import get_logger
from quantum_witness.utils.metrics import resample_draws_total
from quantum_witness.witness.models import CorrelationTable

logger = get_logger(__name__)

MIN_SAMPLES = 1000
CHUNK = 10_000

BatchStatistic = Callable[[NDArray[np.float64]], NDArray[np.float64]]


class ResampleResult(BaseModel):
    """Summary of a Poisson resampling run."""

    statistic: str
    observed: float
    mean: float
    std: float
    n_samples: int
    bound: float | None = None
    p_value: float | None = None
    p_value_floor: bool = False
    gaussian_tail: float | None = None

    @property
    def p_value_text(self) -> str:
        if self.p_value is None:
            return ""
        return f"< {self.p_value:.0e}" if self.p_value_floor else f"{self.p_value:.3g}"


def probs_from_counts(counts: ArrayLike) -> NDArray[np.float64]:
    """P(a,b|x,y) = N^{ab} / sum of the four cells, shaped (2, 2)."""
    values = np.asarray(counts, dtype=np.float64)
    if values.size != 4:
        raise ShapeMismatchError(f"expected the four cells (0,0) (0,1) (1,0) (1,1), got {values.size}")
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValueError("counts must be finite and nonnegative")
    total = values.sum()
    if total <= 0:
        raise ValueError("setting slice has zero total count")
    return (values / total).reshape(2, 2)


def counts_by_theta(records: Sequence[CoincidenceRecord]) -> dict[float, NDArray[np.float64]]:
    """Group coincidence records into count arrays N[x, y, a, b] per angle."""
    grouped: dict[float, NDArray[np.float64]] = {}
    seen: dict[float, set[tuple[int, int, int, int]]] = {}
    for r in records:
        counts = grouped.setdefault(r.theta_deg, np.zeros((2, 2, 2, 2)))
        key = (r.x, r.y, r.a, r.b)
        if any(v > 1 for v in key):
            raise ShapeMismatchError(f"record {key} at theta={r.theta_deg} is not a binary CHSH cell")
        counts[key] = r.count
        seen.setdefault(r.theta_deg, set()).add(key)
    for theta, keys in seen.items():
        missing = set(product(range(2), repeat=4)) - keys
        if missing:
            raise ShapeMismatchError(f"theta={theta} is missing cells {sorted(missing)}")
    return dict(sorted(grouped.items()))


def table_from_counts(counts: ArrayLike) -> CorrelationTable:
    values = np.asarray(counts, dtype=np.float64)
    probs = np.stack([[probs_from_counts(values[x, y]) for y in range(2)] for x in range(2)])
    return CorrelationTable(settings=(2, 2), outcomes=(2, 2), probs=probs)


def table_from_records(records: Sequence[CoincidenceRecord], theta_deg: float) -> CorrelationTable:
    grouped = counts_by_theta(records)
    if theta_deg not in grouped:
        raise ValueError(f"no coincidence records at theta={theta_deg}; available {sorted(grouped)}")
    return table_from_counts(grouped[theta_deg])


def chsh_statistic(batch: NDArray[np.float64]) -> NDArray[np.float64]:
    """CHSH S = E00 + E01 + E10 - E11 for a batch of count arrays (..., 2, 2, 2, 2)."""
    totals = batch.sum(axis=(-2, -1), keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        probs = batch / totals
    parity = np.array([[1.0, -1.0], [-1.0, 1.0]])
    weights = np.array([[1.0, 1.0], [1.0, -1.0]])
    return np.einsum("xy,ab,...xyab->...", weights, parity, probs)


def _draw_chunk(
    counts: NDArray[np.float64], statistic: BatchStatistic, size: int, seed: np.random.SeedSequence
) -> NDArray[np.float64]:
    rng = np.random.Generator(np.random.Philox(seed))
    draws = rng.poisson(counts, size=(size,) + counts.shape).astype(np.float64)
    return np.asarray(statistic(draws), dtype=np.float64).reshape(size)


def poisson_resample(
    counts: ArrayLike,
    statistic: BatchStatistic = chsh_statistic,
    n_samples: int | None = None,
    seed: int | None = None,
    bound: float | None = None,
    name: str = "chsh",
    max_workers: int | None = None,
) -> ResampleResult:
    """Redraw every count from Poisson(observed) and recompute ``statistic``.

    With a ``bound`` the one-sided p-value is the fraction of resamples that
    do not exceed it. When none do, the p-value is reported at the 1/n
    resolution floor alongside a Gaussian tail estimate. Chunks use
    independent Philox streams spawned from one seed, so the result does
    not depend on ``max_workers``.
    """
    settings = get_settings()
    n_samples = n_samples or settings.resample_samples
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be at least {MIN_SAMPLES}, got {n_samples}")
    seed = settings.seed if seed is None else seed
    max_workers = max_workers or settings.max_workers
    observed_counts = np.asarray(counts, dtype=np.float64)
    if np.any(observed_counts < 0):
        raise ValueError("counts must be nonnegative")

    sizes = [min(CHUNK, n_samples - start) for start in range(0, n_samples, CHUNK)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = list(zip(sizes, seeds, strict=True))

    def run(job: tuple[int, np.random.SeedSequence]) -> NDArray[np.float64]:
        return _draw_chunk(observed_counts, statistic, job[0], job[1])

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            chunks = list(executor.map(run, jobs))
    else:
        chunks = [run(job) for job in jobs]
    samples = np.concatenate(chunks)
    resample_draws_total.inc(n_samples)

    observed = float(np.asarray(statistic(observed_counts[None, ...])).reshape(-1)[0])
    mean, std = float(np.mean(samples)), float(np.std(samples))
    result = ResampleResult(statistic=name, observed=observed, mean=mean, std=std, n_samples=n_samples, bound=bound)
    if bound is not None:
        not_violating = int(np.count_nonzero(samples <= bound))
        floor = not_violating == 0
        tail = float(norm.sf((mean - bound) / std)) if std > 0 else (0.0 if mean > bound else 1.0)
        result = result.model_copy(
            update={
                "p_value": (1.0 / n_samples) if floor else not_violating / n_samples,
                "p_value_floor": floor,
                "gaussian_tail": tail,
            }
        )
    logger.debug("resample_completed", statistic=name, n_samples=n_samples, mean=mean, std=std)
    return result
