"""Counting monotone functions on integer grids.

A monotone (non-decreasing) function ``{0..a} -> {0..b}`` with ``f(0) = 0``
and ``f(a) = b`` is fixed by its ``a - 1`` interior values, a non-decreasing
sequence in ``{0..b}``, so there are ``C(a + b - 1, b)`` of them.  Observed
lattice points split the grid into independent cells and the number of
interpolating functions is the product of the per-cell counts.

Comparing the two generating models (function from X to Y drawn uniformly,
then inputs drawn uniformly; and the mirror image) gives a likelihood ratio
whose fine-grid limit is the IGCI slope score.  Counts are exact Python
integers; ratios are exact ``Fraction`` objects reported as natural logs.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidGridError, LatticeCollisionError, OracleTooLargeError

EXACT_LIMIT = 10_000
LGAMMA_RTOL = 1e-9
ORACLE_LIMIT = 400


def count_monotone(a: int, b: int) -> int:
    """Number of monotone functions from ``{0..a}`` to ``{0..b}`` through (0, 0) and (a, b)."""
    a, b = _as_int(a), _as_int(b)
    if a < 1 or b < 0:
        raise InvalidGridError(f"need a >= 1 and b >= 0, got a={a}, b={b}")
    return math.comb(a + b - 1, b)


def log_count_monotone(a: int, b: int) -> float:
    """``log N(a, b)``; exact big-integer route up to ``a + b <= 10**4``, log-gamma beyond."""
    a, b = _as_int(a), _as_int(b)
    if a < 1 or b < 0:
        raise InvalidGridError(f"need a >= 1 and b >= 0, got a={a}, b={b}")
    if a + b <= EXACT_LIMIT:
        return math.log(math.comb(a + b - 1, b))
    return math.lgamma(a + b) - math.lgamma(b + 1) - math.lgamma(a)


def _as_int(v) -> int:
    if isinstance(v, (bool, float)) or int(v) != v:
        raise InvalidGridError(f"grid sizes must be integers, got {v!r}")
    return int(v)


@dataclass(frozen=True)
class CountModel:
    """Lattice observations on ``{0..k} x {0..l}`` pinned at both corners."""

    k: int
    l: int  # noqa: E741
    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        k, l = _as_int(self.k), _as_int(self.l)
        if k < 1 or l < 1:
            raise InvalidGridError(f"grid must be at least 1x1, got k={k}, l={l}")
        pts = tuple((_as_int(x), _as_int(y)) for x, y in self.points)
        if len(pts) < 2:
            raise InvalidGridError("need at least the two corner points")
        if pts[0] != (0, 0) or pts[-1] != (k, l):
            raise InvalidGridError(f"points must start at (0, 0) and end at ({k}, {l})")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0 or y1 <= y0:
                raise InvalidGridError(f"points must increase strictly: ({x0},{y0}) -> ({x1},{y1})")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points) -> "CountModel":
        pts = [tuple(p) for p in points]
        return cls(pts[-1][0], pts[-1][1], tuple(pts))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def xs(self) -> tuple[int, ...]:
        return tuple(p[0] for p in self.points)

    @property
    def ys(self) -> tuple[int, ...]:
        return tuple(p[1] for p in self.points)

    def gaps(self) -> list[tuple[int, int]]:
        return [(x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])]

    def transposed(self) -> "CountModel":
        return CountModel(self.l, self.k, tuple((y, x) for x, y in self.points))

    def refined(self, factor: int) -> "CountModel":
        """Same observations on a grid ``factor`` times finer in both axes."""
        factor = _as_int(factor)
        return CountModel(
            self.k * factor, self.l * factor, tuple((x * factor, y * factor) for x, y in self.points)
        )


def _oriented(m: CountModel, direction: str) -> CountModel:
    if direction == "xy":
        return m
    if direction == "yx":
        return m.transposed()
    raise InvalidGridError(f"direction must be 'xy' or 'yx', got {direction!r}")


def count_interpolants(m: CountModel, direction: str = "xy") -> int:
    """|F_{x,y}| (functions X -> Y through every point), or |G_{y,x}| for ``"yx"``."""
    m = _oriented(m, direction)
    return math.prod(count_monotone(dx, dy) for dx, dy in m.gaps())


def log_count_interpolants(m: CountModel, direction: str = "xy") -> float:
    m = _oriented(m, direction)
    return math.fsum(log_count_monotone(dx, dy) for dx, dy in m.gaps())


def enumerate_interpolants(m: CountModel, direction: str = "xy"):
    """Yield every interpolating function as the tuple ``(f(0), ..., f(k))``.

    Literal generate-and-filter over all monotone functions with pinned
    corners; only usable on tiny grids.
    """
    m = _oriented(m, direction)
    pins = dict(m.points)
    for interior in itertools.combinations_with_replacement(range(m.l + 1), m.k - 1):
        f = (0, *interior, m.l)
        if all(f[x] == y for x, y in pins.items()):
            yield f


def brute_force_enumerate(m: CountModel, direction: str = "xy") -> int:
    """Count interpolating functions by exhaustive search over function values.

    Walks x = 0..k and branches on every admissible value of f(x); completed
    branches are tabulated on (x, f(x)), so each partial function state is
    expanded once.  Uses neither the binomial formula nor the cell
    product, which makes it an independent check of :func:`count_interpolants`.
    """
    m = _oriented(m, direction)
    if m.k * m.l > ORACLE_LIMIT:
        raise OracleTooLargeError(f"k*l = {m.k * m.l} exceeds the oracle bound {ORACLE_LIMIT}")
    pins = dict(m.points)
    k, top = m.k, m.l
    # completions[v] = number of ways to finish from state (x, f(x) = v); filled from x = k down
    completions = [int(v == top) for v in range(top + 1)]
    for x in range(k - 1, -1, -1):
        nxt = pins.get(x + 1)
        row = []
        for v in range(top + 1):
            if nxt is not None:
                row.append(completions[nxt] if nxt >= v else 0)
            else:
                row.append(sum(completions[w] for w in range(v, top + 1)))
        completions = row
    return completions[0]


def likelihood_ratio_exact(m: CountModel) -> Fraction:
    """P_{X->Y}(x, y) / P_{Y->X}(x, y) in closed form, as an exact fraction."""
    n, k, l = m.n, m.k, m.l
    ratio = Fraction((l + 1) ** (n - 2), (k + 1) ** (n - 2)) * Fraction(l, k)
    for dx, dy in m.gaps():
        ratio *= Fraction(dx, dy)
    return ratio


def _log_fraction(q: Fraction) -> float:
    return math.log(q.numerator) - math.log(q.denominator)


def _combinatorial_log_ratio(m: CountModel) -> tuple[float, Fraction | None]:
    """The same ratio assembled from function counts; exact when every cell is small."""
    n, k, l = m.n, m.k, m.l
    exact = all(dx + dy <= EXACT_LIMIT for dx, dy in m.gaps()) and k + l <= EXACT_LIMIT
    if exact:
        p_xy = Fraction(count_interpolants(m, "xy"), count_monotone(k, l) * (k + 1) ** (n - 2))
        p_yx = Fraction(count_interpolants(m, "yx"), count_monotone(l, k) * (l + 1) ** (n - 2))
        q = p_xy / p_yx
        return _log_fraction(q), q
    log_xy = log_count_interpolants(m, "xy") - log_count_monotone(k, l) - (n - 2) * math.log(k + 1)
    log_yx = log_count_interpolants(m, "yx") - log_count_monotone(l, k) - (n - 2) * math.log(l + 1)
    return log_xy - log_yx, None


def likelihood_ratio(m: CountModel) -> float:
    """Natural log of P_{X->Y} / P_{Y->X} for the observed lattice points.

    The closed form is cross-checked against the ratio built from actual
    function counts (exactly when all counts fit the big-integer route,
    otherwise in log space to a relative 1e-9).
    """
    closed = likelihood_ratio_exact(m)
    log_closed = _log_fraction(closed)
    log_comb, q = _combinatorial_log_ratio(m)
    if q is not None:
        if q != closed:
            raise AssertionError(f"count route {q} disagrees with closed form {closed}")
    elif not math.isclose(log_comb, log_closed, rel_tol=LGAMMA_RTOL, abs_tol=LGAMMA_RTOL):
        raise AssertionError(f"count route {log_comb} disagrees with closed form {log_closed}")
    return log_closed


def grid_free_log_ratio(m: CountModel) -> float:
    """Log likelihood ratio with the ``(l+1)/(k+1)`` grid factor replaced by its limit ``l/k``.

    This is the part of the ratio that survives refining the grid with the
    point ratios held fixed.
    """
    correction = (m.n - 2) * (math.log((m.l + 1) / (m.k + 1)) - math.log(m.l / m.k))
    return likelihood_ratio(m) - correction


def continuum_score(m: CountModel) -> float:
    """Sum over cells of ``log((dx / x-range) / (dy / y-range))``; invariant under refinement."""
    xr = m.points[-1][0] - m.points[0][0]
    yr = m.points[-1][1] - m.points[0][1]
    return math.fsum(math.log((dx / xr) / (dy / yr)) for dx, dy in m.gaps())


def discretize(xs, ys, k: int, l: int) -> CountModel:  # noqa: E741
    """Snap co-monotone continuous samples onto the ``{0..k} x {0..l}`` lattice.

    Each axis is min-max scaled and rounded to the nearest lattice point.  If
    two samples land on the same lattice coordinate the sample is rejected
    with :class:`LatticeCollisionError`; callers redraw.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    gx = np.rint((xs - xs[0]) / (xs[-1] - xs[0]) * k).astype(np.int64)
    gy = np.rint((ys - ys.min()) / (ys.max() - ys.min()) * l).astype(np.int64)
    if np.any(np.diff(gx) <= 0) or np.any(np.diff(gy) <= 0):
        raise LatticeCollisionError(f"samples collide on the {k}x{l} lattice")
    return CountModel(k, l, tuple(zip(gx.tolist(), gy.tolist())))


def random_count_model(rng: np.random.Generator, max_area: int = ORACLE_LIMIT) -> CountModel:
    """Random lattice model with ``k * l <= max_area`` and a random number of interior points."""
    short = int(rng.integers(1, math.isqrt(max_area) + 1))
    long_ = int(rng.integers(1, max_area // short + 1))
    k, l = (short, long_) if rng.random() < 0.5 else (long_, short)  # noqa: E741
    room = min(k, l) - 1
    r = int(rng.integers(0, room + 1)) if room > 0 else 0
    xs = np.sort(rng.choice(np.arange(1, k), size=r, replace=False)) if r else []
    ys = np.sort(rng.choice(np.arange(1, l), size=r, replace=False)) if r else []
    pts = [(0, 0), *zip((int(v) for v in xs), (int(v) for v in ys)), (k, l)]
    return CountModel(k, l, tuple(pts))
