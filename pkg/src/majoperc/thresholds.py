"""Critical initial-set sizes and Monte Carlo estimates of percolation probability.

The critical size for initial sets of size ``m`` on G(n, p) is

    m = n/2 - (n/2) sqrt(log d / d) + lam * n * logloglog(d) / sqrt(d log d)

with ``d = np/(1-p)``; the lower-order correction is taken to be zero, so
``lam`` alone places ``m`` inside the critical window.  The Bernoulli
initialisation has the same formula divided by ``n``, plus a second regime
in which ``theta / sqrt(n)`` replaces the ``lam`` term.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence

import numpy as np

from .config import ExperimentConfig
from .engine import percolates
from .graph import Graph, VertexSet, sample_gnp
from .rng import derive_seed, make_rng

__all__ = [
    "ThresholdParams",
    "ThresholdRow",
    "ThresholdCurve",
    "effective_degree",
    "critical_m",
    "critical_q",
    "normal_cdf",
    "wilson_interval",
    "isotonic_fit",
    "count_crossings",
    "estimate_percolation_prob",
    "scan_threshold",
    "locate_transition",
]

E_TO_E = math.exp(math.e)


def effective_degree(n: int, p: float) -> float:
    if not 0.0 <= p < 1.0:
        raise ValueError(f"effective degree needs 0 <= p < 1, got p={p}")
    return n * p / (1.0 - p)


@dataclass(frozen=True)
class ThresholdParams:
    n: int
    p: float
    lam: float | None = None
    theta: float | None = None

    def __post_init__(self):
        if not 0.0 < self.p < 1.0:
            raise ValueError(f"threshold formulas need 0 < p < 1, got p={self.p}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    @property
    def d(self) -> float:
        return effective_degree(self.n, self.p)

    @property
    def triple_log_defined(self) -> bool:
        """``log log log d`` is positive only for ``d > e^e``."""
        return self.d > E_TO_E


def _base_fraction(params: ThresholdParams) -> tuple[float, float, float]:
    d = params.d
    if not params.triple_log_defined:
        raise ValueError(f"d = {d:.6g} must exceed e^e = {E_TO_E:.6g} for log log log d")
    log_d = math.log(d)
    base = 0.5 - 0.5 * math.sqrt(log_d / d)
    window = math.log(math.log(log_d)) / math.sqrt(d * log_d)
    return d, base, window


def critical_m(params: ThresholdParams) -> int:
    if params.lam is None or params.theta is not None:
        raise ValueError("critical_m takes lam and no theta")
    _, base, window = _base_fraction(params)
    n = params.n
    m = n * base + params.lam * n * window
    return int(min(max(math.floor(m + 0.5), 0), n))


def critical_q(params: ThresholdParams) -> float:
    if (params.lam is None) == (params.theta is None):
        raise ValueError("critical_q takes exactly one of lam and theta")
    _, base, window = _base_fraction(params)
    if params.lam is not None:
        q = base + params.lam * window
    else:
        q = base + params.theta / math.sqrt(params.n)
    return min(max(q, 0.0), 1.0)


def normal_cdf(x: float) -> float:
    """Standard normal distribution function via the complementary error function."""
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    if trials < 1 or not 0 <= successes <= trials:
        raise ValueError(f"need 0 <= successes <= trials and trials >= 1, got {successes}/{trials}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2.0)
    p_hat = successes / trials
    z2n = z * z / trials
    centre = (p_hat + z2n / 2.0) / (1.0 + z2n)
    half = z / (1.0 + z2n) * math.sqrt(p_hat * (1.0 - p_hat) / trials + z2n / (4.0 * trials))
    return max(0.0, min(centre - half, p_hat)), min(1.0, max(centre + half, p_hat))


@dataclass(frozen=True)
class ThresholdRow:
    m: int | float      # initial size, or infection probability in bernoulli mode
    trials: int
    successes: int
    p_hat: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class ThresholdCurve:
    grid: tuple[ThresholdRow, ...]
    mode: str = "fixed_m"

    def __post_init__(self):
        xs = [r.m for r in self.grid]
        if xs != sorted(xs):
            raise ValueError("curve grid must be sorted by m")

    @property
    def m(self) -> np.ndarray:
        return np.array([r.m for r in self.grid], dtype=float)

    @property
    def p_hat(self) -> np.ndarray:
        return np.array([r.p_hat for r in self.grid], dtype=float)

    @property
    def trials(self) -> np.ndarray:
        return np.array([r.trials for r in self.grid], dtype=float)


def isotonic_fit(y: Sequence[float], weights: Sequence[float] | None = None) -> np.ndarray:
    """Weighted least-squares non-decreasing fit by pooling adjacent violators."""
    y = np.asarray(y, dtype=float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    blocks: list[list[float]] = []     # [weighted mean, weight, length]
    for yi, wi in zip(y, w):
        blocks.append([yi, wi, 1])
        while len(blocks) > 1 and blocks[-2][0] > blocks[-1][0]:
            m2, w2, n2 = blocks.pop()
            m1, w1, n1 = blocks.pop()
            wt = w1 + w2
            blocks.append([(m1 * w1 + m2 * w2) / wt, wt, n1 + n2])
    return np.concatenate([np.full(n, mean) for mean, _, n in blocks]) if blocks else y.copy()


def count_crossings(values: Sequence[float], level: float = 0.5) -> int:
    above = np.asarray(values) >= level
    return int(np.count_nonzero(above[1:] != above[:-1]))


def locate_transition(curve: ThresholdCurve, level: float = 0.5) -> float:
    """First crossing of ``level`` by the isotonic fit of ``p_hat`` against ``m``,
    linearly interpolated between the bracketing grid points."""
    if len(curve.grid) < 2:
        raise ValueError("need at least two grid points to locate a transition")
    xs = curve.m
    ys = isotonic_fit(curve.p_hat, curve.trials)
    hits = np.flatnonzero(ys >= level)
    if hits.size == 0:
        raise ValueError(f"no crossing: smoothed curve never reaches {level}")
    i = int(hits[0])
    if i == 0:
        raise ValueError(f"no crossing: smoothed curve already starts at or above {level}")
    x0, x1, y0, y1 = xs[i - 1], xs[i], ys[i - 1], ys[i]
    return float(x0 + (level - y0) / (y1 - y0) * (x1 - x0))


# ---------------------------------------------------------------- Monte Carlo

def _initial(config: ExperimentConfig, point, uniforms) -> VertexSet:
    if config.mode == "fixed_m":
        return VertexSet.first(config.n, int(point))
    return VertexSet.from_mask(uniforms < point)


def _trial_inputs(config: ExperimentConfig, seed: int) -> tuple[Graph, np.ndarray | None]:
    g = sample_gnp(config.n, config.p, derive_seed(seed, 0))
    uniforms = None
    if config.mode == "bernoulli_q":
        uniforms = make_rng(derive_seed(seed, 1)).random(config.n)
    return g, uniforms


def _independent_task(config, index, point, trial) -> bool:
    seed = derive_seed(config.master_seed, index, trial)
    g, uniforms = _trial_inputs(config, seed)
    return percolates(g, _initial(config, point, uniforms))


def _shared_task(config, points, trial) -> int:
    """Index of the first point in ascending ``points`` that percolates on this
    trial's graph (``len(points)`` if none).  Initial sets are nested in the
    point, so percolation is monotone and bisection is exact."""
    g, uniforms = _trial_inputs(config, derive_seed(config.master_seed, trial))
    lo, hi = 0, len(points)
    while lo < hi:
        mid = (lo + hi) // 2
        if percolates(g, _initial(config, points[mid], uniforms)):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _map(fn, items, threads):
    if threads is None or threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _successes(config: ExperimentConfig, points: list, threads: int | None) -> list[int]:
    trials = range(config.trials)
    if config.shared_graph:
        uniq = sorted(set(points))
        firsts = _map(lambda k: _shared_task(config, uniq, k), trials, threads)
        counts = np.bincount(np.asarray(firsts, dtype=np.int64), minlength=len(uniq) + 1)
        cum = np.cumsum(counts)[: len(uniq)]
        by_point = {pt: int(c) for pt, c in zip(uniq, cum)}
        return [by_point[pt] for pt in points]
    tasks = [(i, pt, k) for i, pt in enumerate(points) for k in trials]
    outcomes = _map(lambda t: _independent_task(config, *t), tasks, threads)
    per = np.asarray(outcomes, dtype=bool).reshape(len(points), config.trials)
    return [int(x) for x in per.sum(axis=1)]


def _row(config: ExperimentConfig, point, successes: int) -> ThresholdRow:
    lo, hi = wilson_interval(successes, config.trials, config.confidence_level)
    return ThresholdRow(point, config.trials, successes, successes / config.trials, lo, hi)


def estimate_percolation_prob(config: ExperimentConfig, threads: int | None = None) -> tuple[float, float, float]:
    """``(p_hat, ci_low, ci_high)`` for the single grid point of ``config``.

    Fixed-size mode infects ``{0, ..., m-1}`` of a fresh G(n, p) each trial;
    Bernoulli mode infects each vertex independently with probability ``q``.
    """
    points = config.points()
    if len(points) != 1:
        raise ValueError(f"estimate_percolation_prob needs a single grid point, got {len(points)}")
    row = _row(config, points[0], _successes(config, points, threads)[0])
    return row.p_hat, row.ci_low, row.ci_high


def scan_threshold(config: ExperimentConfig, m_grid: Sequence | None = None,
                   threads: int | None = None) -> ThresholdCurve:
    """One estimate per grid point.  Trial ``k`` at grid index ``i`` is seeded
    from ``(master_seed, i, k)``, or from ``(master_seed, k)`` with ``shared_graph``,
    in which case every point reuses the same graph per trial."""
    points = list(config.points() if m_grid is None else m_grid)
    if points != sorted(points):
        raise ValueError("grid must be sorted")
    if not points:
        raise ValueError("grid must not be empty")
    if config.mode == "fixed_m" and (points[0] < 0 or points[-1] > config.n):
        raise ValueError(f"grid must lie within [0, {config.n}]")
    succ = _successes(config, points, threads)
    return ThresholdCurve(tuple(_row(config, pt, s) for pt, s in zip(points, succ)), config.mode)
