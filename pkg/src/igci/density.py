"""Grid densities, piecewise-linear monotone maps and the operations between them.

Densities are piecewise constant on a uniform grid and maps are piecewise
linear bijections of [0, 1].  With these two representations the image of a
density under a map, the CDF of a density and integrals of ``log f'``
against a density all have closed forms, so nothing here samples.

All logarithms are natural; entropies and divergences are in nats.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import digamma

from .errors import (
    DegenerateDataError,
    DomainError,
    GridMismatchError,
    InsufficientDataError,
)

MASS_TOL = 1e-12
KNOT_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Strictly positive probability masses on ``M`` equal bins of ``domain``."""

    masses: np.ndarray
    domain: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        m = _frozen(self.masses)
        if m.ndim != 1 or m.size < 2:
            raise DomainError("a grid density needs at least 2 bins")
        if not np.all(np.isfinite(m)) or np.any(m <= 0):
            bad = int(np.flatnonzero(~(m > 0))[0]) if np.any(~(m > 0)) else -1
            raise DomainError(f"masses must be finite and strictly positive (bin {bad})")
        if abs(m.sum() - 1.0) > MASS_TOL:
            raise DomainError(f"masses sum to {m.sum()!r}, not 1")
        lo, hi = (float(v) for v in self.domain)
        if not hi > lo:
            raise DomainError(f"empty domain [{lo}, {hi}]")
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "domain", (lo, hi))

    @classmethod
    def uniform(cls, bins: int, domain=(0.0, 1.0)) -> "GridDensity":
        return cls(np.full(bins, 1.0 / bins), domain)

    @classmethod
    def from_weights(cls, weights, domain=(0.0, 1.0)) -> "GridDensity":
        """Normalise non-negative ``weights`` into a density."""
        w = np.asarray(weights, dtype=float)
        return cls(w / w.sum(), domain)

    @classmethod
    def from_cdf(cls, cdf, bins: int, domain=(0.0, 1.0)) -> "GridDensity":
        """Exact bin masses of a continuous distribution given its CDF."""
        lo, hi = domain
        edges = np.linspace(lo, hi, bins + 1)
        vals = np.asarray(cdf(edges), dtype=float)
        return cls.from_weights(np.diff(vals), domain)

    @property
    def bins(self) -> int:
        return self.masses.size

    @property
    def width(self) -> float:
        return self.domain[1] - self.domain[0]

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], self.bins + 1)

    @property
    def centers(self) -> np.ndarray:
        e = self.edges
        return 0.5 * (e[:-1] + e[1:])

    @property
    def values(self) -> np.ndarray:
        """Density height on each bin."""
        return self.masses * self.bins / self.width

    def cumulative(self) -> np.ndarray:
        """CDF at the ``M + 1`` bin edges; first entry 0, last exactly 1."""
        c = np.concatenate(([0.0], np.cumsum(self.masses)))
        c /= c[-1]
        return c

    def pdf(self, t) -> np.ndarray:
        """Density at ``t`` (right-continuous at bin edges)."""
        t = np.asarray(t, dtype=float)
        u = (t - self.domain[0]) / self.width
        idx = np.clip(np.floor(u * self.bins).astype(np.int64), 0, self.bins - 1)
        return self.values[idx]

    def cdf_at(self, t) -> np.ndarray:
        t = np.clip(np.asarray(t, dtype=float), *self.domain)
        return np.interp(t, self.edges, self.cumulative())

    def quantile(self, u) -> np.ndarray:
        """Inverse CDF, used for inverse-transform sampling."""
        u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
        return np.interp(u, self.cumulative(), self.edges)

    def l1(self, other: "GridDensity") -> float:
        _check_same_grid(self, other)
        return float(np.abs(self.masses - other.masses).sum())


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    """Strictly increasing piecewise-linear bijection of [0, 1].

    The knot lists must start at (0, 0) and end at (1, 1).  Segment slopes
    stand in for ``f'``; at a knot the slope of the segment to the right is
    used (the last knot takes the last segment).
    """

    knots_x: np.ndarray
    knots_y: np.ndarray

    def __post_init__(self):
        kx, ky = _frozen(self.knots_x), _frozen(self.knots_y)
        if kx.ndim != 1 or kx.shape != ky.shape or kx.size < 2:
            raise DomainError("knot lists must be 1-D, equally long, with at least 2 knots")
        for name, k in (("knots_x", kx), ("knots_y", ky)):
            if not np.all(np.isfinite(k)):
                raise DomainError(f"{name} contains non-finite values")
            if abs(k[0]) > KNOT_TOL or abs(k[-1] - 1.0) > KNOT_TOL:
                raise DomainError(f"{name} must run from 0 to 1")
            if np.any(np.diff(k) <= 0):
                raise DomainError(f"{name} must be strictly increasing")
        if kx[0] != 0.0 or kx[-1] != 1.0 or ky[0] != 0.0 or ky[-1] != 1.0:
            kx, ky = kx.copy(), ky.copy()
            kx[0] = ky[0] = 0.0
            kx[-1] = ky[-1] = 1.0
            kx.setflags(write=False)
            ky.setflags(write=False)
        object.__setattr__(self, "knots_x", kx)
        object.__setattr__(self, "knots_y", ky)

    @classmethod
    def identity(cls) -> "MonotoneMap":
        return cls([0.0, 1.0], [0.0, 1.0])

    @classmethod
    def from_function(cls, fn, knots: int) -> "MonotoneMap":
        """Interpolate an increasing ``fn`` with ``fn(0)=0, fn(1)=1`` at evenly spaced x."""
        x = np.linspace(0.0, 1.0, knots)
        return cls(x, fn(x))

    def __call__(self, t):
        return np.interp(t, self.knots_x, self.knots_y)

    def inverse(self) -> "MonotoneMap":
        return MonotoneMap(self.knots_y, self.knots_x)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.knots_y) / np.diff(self.knots_x)

    def slope_at(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        seg = np.searchsorted(self.knots_x, t, side="right") - 1
        seg = np.clip(seg, 0, self.knots_x.size - 2)
        return self.slopes[seg]

    def sup_distance(self, other: "MonotoneMap") -> float:
        """Sup-norm distance; exact because both maps are piecewise linear."""
        grid = np.union1d(self.knots_x, other.knots_x)
        return float(np.max(np.abs(self(grid) - other(grid))))

    def is_identity(self) -> bool:
        return bool(np.allclose(self.knots_x, self.knots_y, atol=0.0, rtol=0.0))


@dataclass(frozen=True, eq=False)
class SamplePair:
    """Paired observations sorted by x.

    ``source_index[j]`` is the position that sorted sample ``j`` had in the
    caller's input, which lets errors point at the original rows.
    """

    xs: np.ndarray
    ys: np.ndarray
    source_index: np.ndarray = field(default=None)

    def __post_init__(self):
        xs, ys = _frozen(self.xs), _frozen(self.ys)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise DegenerateDataError("xs and ys must be 1-D of equal length")
        if xs.size < 3:
            raise InsufficientDataError(f"need at least 3 observations, got {xs.size}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DomainError("observations must be finite")
        if np.any(np.diff(xs) < 0):
            raise DegenerateDataError("xs must be sorted; build with SamplePair.from_arrays")
        idx = np.arange(xs.size) if self.source_index is None else np.asarray(self.source_index)
        idx = np.array(idx, dtype=np.int64)
        idx.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "source_index", idx)

    @classmethod
    def from_arrays(cls, xs, ys) -> "SamplePair":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.shape != ys.shape:
            raise DegenerateDataError("xs and ys must have equal length")
        order = np.argsort(xs, kind="stable")
        return cls(xs[order], ys[order], order)

    @property
    def n(self) -> int:
        return self.xs.size

    @property
    def has_x_ties(self) -> bool:
        return bool(np.any(np.diff(self.xs) == 0))

    @property
    def has_y_ties(self) -> bool:
        return bool(np.any(np.diff(np.sort(self.ys)) == 0))

    @property
    def co_sorted(self) -> bool:
        """True when ys are increasing along the x order (noiseless monotone data)."""
        return bool(np.all(np.diff(self.ys) > 0))

    def swapped(self) -> "SamplePair":
        """The same data with the roles of x and y exchanged."""
        order = np.argsort(self.ys, kind="stable")
        return SamplePair(self.ys[order], self.xs[order], self.source_index[order])


def _check_same_grid(p: GridDensity, q: GridDensity):
    if p.bins != q.bins or p.domain != q.domain:
        raise GridMismatchError(
            f"grids differ: {p.bins} bins on {p.domain} vs {q.bins} bins on {q.domain}"
        )


def _check_unit(p: GridDensity):
    if p.domain != (0.0, 1.0):
        raise DomainError(f"density must live on [0, 1], got {p.domain}")


def kl_divergence(p: GridDensity, q: GridDensity) -> float:
    """Relative entropy D(p || q) in nats between densities on the same grid."""
    _check_same_grid(p, q)
    val = float(np.sum(p.masses * np.log(p.masses / q.masses)))
    return max(val, 0.0)


def pushforward(p: GridDensity, f: MonotoneMap) -> GridDensity:
    """Image of ``p`` under ``f``, re-binned onto the same grid.

    Output bin ``[a, b]`` receives exactly the mass ``p`` puts on
    ``[f^-1(a), f^-1(b)]``; the CDF of a piecewise-constant density is
    piecewise linear, so this is exact interval-intersection transfer.
    """
    _check_unit(p)
    edges = np.linspace(0.0, 1.0, p.bins + 1)
    pre = np.interp(edges, f.knots_y, f.knots_x)
    pre[0], pre[-1] = 0.0, 1.0
    mass = np.diff(p.cdf_at(pre))
    if np.any(mass <= 0):
        raise DomainError("pushforward produced an empty bin; refine the grid")
    return GridDensity(mass / mass.sum())


def cdf(p: GridDensity) -> MonotoneMap:
    """Piecewise-linear CDF of ``p`` as a map of [0, 1]; slope on bin i is ``M * p_i``."""
    _check_unit(p)
    return MonotoneMap(p.edges, p.cumulative())


def _merged_segments(p: GridDensity, f: MonotoneMap):
    cuts = np.union1d(p.edges, f.knots_x)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    return np.diff(cuts), p.pdf(mids), np.log(f.slope_at(mids))


def log_slope_covariance(p: GridDensity, f: MonotoneMap) -> float:
    """``int p log f' - int log f'`` over [0, 1].

    Both integrands are piecewise constant, so the integral is summed exactly
    over the common refinement of bin edges and knots.  This is the
    covariance of ``p`` and ``log f'`` under the uniform distribution.
    """
    _check_unit(p)
    w, dens, logslope = _merged_segments(p, f)
    return float(np.sum(w * (dens - 1.0) * logslope))


def expected_log_slope(p: GridDensity, f: MonotoneMap) -> float:
    """Exact ``int p(x) log f'(x) dx``, the population IGCI score for X -> Y."""
    _check_unit(p)
    w, dens, logslope = _merged_segments(p, f)
    return float(np.sum(w * dens * logslope))


def differential_entropy_kl_estimator(samples) -> float:
    """1-nearest-neighbour (Kozachenko-Leonenko) entropy estimate in nats.

    Repeated values are collapsed before the neighbour search, since a zero
    distance has no finite logarithm.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if not np.all(np.isfinite(x)):
        raise DomainError("samples must be finite")
    x = np.unique(x)
    n = x.size
    if n < 10:
        raise InsufficientDataError(f"need at least 10 distinct values, got {n}")
    gaps = np.diff(x)
    nn = np.empty(n)
    nn[0], nn[-1] = gaps[0], gaps[-1]
    nn[1:-1] = np.minimum(gaps[:-1], gaps[1:])
    # unit-ball volume in one dimension is 2
    return float(digamma(n) - digamma(1) + np.log(2.0) + np.mean(np.log(nn)))
