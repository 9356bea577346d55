"""Untypical points: log-Jacobian scores and Monte Carlo checks of the Markov tail bound.

For a bijection f of [0, 1] pushing the uniform distribution forward, the
density of the image relative to the uniform one at f(x) is ``1 / f'(x)``,
so ``-log q_f(f(x)) = log f'(x)`` and the set where it exceeds ``c`` has
Lebesgue measure at most ``exp(-c)``.  The n-fold product map behaves the
same way with ``sum_j log f'(x_j)``.

Trials are drawn in fixed-size blocks, each from its own counter-keyed
substream, so results depend only on the seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .density import MonotoneMap, SamplePair
from .errors import IGCIError
from .rng import substream

BLOCK = 65_536
SLACK_SIGMAS = 3.0


@dataclass(frozen=True)
class TypicalityReport:
    c_grid: tuple[float, ...]
    empirical_mass: tuple[float, ...]
    bound: tuple[float, ...]
    slack: tuple[float, ...]
    exact_mass: tuple[float, ...]
    trials: int
    sample_score: float | None = None
    within_bound: tuple[bool, ...] = field(init=False)

    def __post_init__(self):
        ok = tuple(e <= b + s for e, b, s in zip(self.empirical_mass, self.bound, self.slack))
        object.__setattr__(self, "within_bound", ok)

    @property
    def ok(self) -> bool:
        return all(self.within_bound)


def log_jacobian_score(xs, f: MonotoneMap) -> float:
    """``sum_j log f'(x_j)``; knots take the slope of the segment to their right."""
    if isinstance(xs, SamplePair):
        xs = xs.xs
    xs = np.asarray(xs, dtype=float)
    if np.any((xs < 0) | (xs > 1)):
        raise IGCIError("points must lie in [0, 1]")
    return float(np.sum(np.log(f.slope_at(xs))))


def exact_tail_mass(f: MonotoneMap, c: float) -> float:
    """Lebesgue measure of ``{x : log f'(x) >= c}``, summed over segments."""
    widths = np.diff(f.knots_x)
    return float(widths[np.log(f.slopes) >= c].sum())


def monte_carlo_slack(bound: float, trials: int) -> float:
    return SLACK_SIGMAS * math.sqrt(bound / trials)


def _uniform_blocks(seed: int, labels: tuple, trials: int, dim: int = 1):
    done, block = 0, 0
    while done < trials:
        size = min(BLOCK, trials - done)
        rng = substream(seed, *labels, block)
        yield rng.uniform(0.0, 1.0, (size, dim)) if dim > 1 else rng.uniform(0.0, 1.0, size)
        done += size
        block += 1


def verify_markov_bound(
    f: MonotoneMap, c_grid, trials: int = 100_000, seed: int = 0, xs=None
) -> TypicalityReport:
    """Measure ``P(log f'(X) >= c)`` for uniform X at each ``c`` and compare with ``exp(-c)``.

    ``xs`` optionally supplies an observed tuple whose log-Jacobian score is
    stored in the report.
    """
    c_grid = tuple(float(c) for c in c_grid)
    if any(c <= 0 for c in c_grid):
        raise IGCIError("thresholds must be positive")
    if trials < 1:
        raise IGCIError("trials must be positive")
    hits = np.zeros(len(c_grid), dtype=np.int64)
    cs = np.array(c_grid)
    for u in _uniform_blocks(seed, ("markov",), trials):
        logs = np.log(f.slope_at(u))
        hits += (logs[:, None] >= cs[None, :]).sum(axis=0)
    bound = tuple(math.exp(-c) for c in c_grid)
    return TypicalityReport(
        c_grid=c_grid,
        empirical_mass=tuple(float(h) / trials for h in hits),
        bound=bound,
        slack=tuple(monte_carlo_slack(b, trials) for b in bound),
        exact_mass=tuple(exact_tail_mass(f, c) for c in c_grid),
        trials=trials,
        sample_score=None if xs is None else log_jacobian_score(xs, f),
    )


def product_map_bound(
    f: MonotoneMap, n: int, c: float, trials: int = 100_000, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo volume of ``{x in [0,1]^n : sum_j log f'(x_j) >= c}`` and its bound ``exp(-c)``."""
    if n < 1:
        raise IGCIError("n must be at least 1")
    hits = 0
    # n = 1 shares the stream of verify_markov_bound so the two agree draw for draw
    labels = ("markov",) if n == 1 else ("product", n)
    for u in _uniform_blocks(seed, labels, trials, dim=n):
        logs = np.log(f.slope_at(u))
        total = logs.sum(axis=1) if logs.ndim == 2 else logs
        hits += int(np.count_nonzero(total >= c))
    return hits / trials, math.exp(-c)


def expectation_of_inverse_image_density(
    f: MonotoneMap, trials: int = 100_000, seed: int = 0
) -> tuple[float, float]:
    """Mean and standard error of ``1 / q_f`` under the image of the uniform measure.

    With y = f(x) and x uniform, ``1 / q_f(y) = f'(x)``, whose expectation is
    ``f(1) - f(0) = 1``.
    """
    total = total_sq = 0.0
    for u in _uniform_blocks(seed, ("expectation",), trials):
        v = f.slope_at(u)
        total += float(v.sum())
        total_sq += float(np.dot(v, v))
    mean = total / trials
    var = max(total_sq / trials - mean * mean, 0.0)
    return mean, math.sqrt(var / trials)
