"""Un- and semi-supervised prediction of the cause from the effect.

If X causes Y through an increasing bijection f, the marginal of Y carries
information about g = f^-1: the CDF of p_Y is exactly g when p_X is uniform,
and its distance from g (measured by the relative entropy of the densities
the two maps send to uniform) equals D(p_X || u).  The mirror-image estimate
of f from p_X is never closer.  The discrete half of the module works on
grid functions ``{1..k} -> {1..l}`` encoded by their preimage counts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import (
    GridDensity,
    MonotoneMap,
    cdf,
    kl_divergence,
    log_slope_covariance,
    pushforward,
)
from .errors import DomainError, ExtrapolationError, IGCIError
from .rng import substream

TIE_RTOL = 1e-12


def unsupervised_estimator(p_y: GridDensity) -> MonotoneMap:
    """Predict x from y by the CDF of the effect's density."""
    return cdf(p_y)


def unsupervised_error(p_x: GridDensity, f: MonotoneMap) -> tuple[float, float]:
    """``(D(p_Y || f_* u), D(p_X || (f^-1)_* u))``: anticausal and causal prediction errors."""
    u = GridDensity.uniform(p_x.bins)
    p_y = pushforward(p_x, f)
    anticausal = kl_divergence(p_y, pushforward(u, f))
    causal = kl_divergence(p_x, pushforward(u, f.inverse()))
    return anticausal, causal


def conservation_gap(p_x: GridDensity, f: MonotoneMap) -> float:
    """``D(p_Y || f_* u) - D(p_X || u)``; zero up to re-binning error."""
    u = GridDensity.uniform(p_x.bins)
    return kl_divergence(pushforward(p_x, f), pushforward(u, f)) - kl_divergence(p_x, u)


def map_log_likelihood(f: MonotoneMap, p_y: GridDensity, mu: float = 1.0) -> float:
    """``mu * int p_Y log (f_* u)``, the continuous log likelihood of f given p_Y (up to a constant).

    ``mu`` plays the role of the number of observations.
    """
    image = pushforward(GridDensity.uniform(p_y.bins), f)
    return float(mu * np.sum(p_y.masses * np.log(image.values)))


def _bin_log_slopes(p: GridDensity, f: MonotoneMap) -> np.ndarray:
    cuts = np.union1d(p.edges, f.knots_x)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    contrib = np.diff(cuts) * np.log(f.slope_at(mids))
    owner = np.clip(np.floor(mids * p.bins).astype(np.int64), 0, p.bins - 1)
    return np.bincount(owner, weights=contrib, minlength=p.bins) * p.bins


def decorrelate(p: GridDensity, f: MonotoneMap, min_mass: float | None = None) -> GridDensity:
    """Closest-in-spirit density to ``p`` whose covariance with ``log f'`` is zero.

    Removes the component of ``p`` along the bin-averaged log slope, then
    blends with the uniform density if needed to keep every mass above
    ``min_mass`` (default ``0.05 / M``).  Both steps keep the covariance at
    zero because it is linear in ``p`` and vanishes for the uniform density.
    """
    m = p.bins
    g = _bin_log_slopes(p, f)
    centred = g - g.mean()
    var = float(np.dot(centred, centred)) / m
    if var == 0.0:
        return p
    beta = log_slope_covariance(p, f) / var
    q = p.masses - beta * centred / m
    floor = 0.05 / m if min_mass is None else min_mass
    if q.min() < floor:
        t = (1.0 / m - floor) / (1.0 / m - q.min())
        q = t * q + (1.0 - t) / m
    return GridDensity(q / q.sum())


@dataclass(frozen=True, eq=False)
class DiscreteFunction:
    """Monotone surjection ``{1..k} -> {1..l}`` given by ``|f^-1(1)|, ..., |f^-1(l)|``."""

    preimage_counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.preimage_counts)
        if len(counts) < 1 or min(counts) < 1:
            raise DomainError("preimage counts must all be at least 1 (surjectivity)")
        object.__setattr__(self, "preimage_counts", counts)

    @classmethod
    def random_surjection(cls, k: int, l: int, rng: np.random.Generator) -> "DiscreteFunction":  # noqa: E741
        """Uniformly random monotone surjection (a random composition of k into l parts)."""
        if not 1 <= l <= k:
            raise DomainError(f"need 1 <= l <= k, got k={k}, l={l}")
        cuts = np.sort(rng.choice(np.arange(1, k), size=l - 1, replace=False))
        return cls(tuple(np.diff(np.concatenate(([0], cuts, [k]))).tolist()))

    @property
    def k(self) -> int:
        return sum(self.preimage_counts)

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.preimage_counts)

    @property
    def image_of_uniform(self) -> np.ndarray:
        """``|f^-1(y)| / k`` for y = 1..l."""
        return np.asarray(self.preimage_counts, dtype=float) / self.k

    def values(self) -> np.ndarray:
        """``f(1), ..., f(k)``."""
        return np.repeat(np.arange(1, self.l + 1), self.preimage_counts)

    def __call__(self, x) -> np.ndarray:
        return self.values()[np.asarray(x) - 1]

    def permuted(self, perm) -> "DiscreteFunction":
        """``f_pi`` with preimage list ``|f^-1(pi(1))|, ..., |f^-1(pi(l))|`` (``perm`` 0-based)."""
        c = np.asarray(self.preimage_counts)
        return DiscreteFunction(tuple(c[np.asarray(perm)].tolist()))


def discrete_log_posterior(f: DiscreteFunction, y_tuple) -> float:
    """``sum_j log(|f^-1(y_j)| / k)``; the f-independent normaliser is left out."""
    y = np.asarray(y_tuple, dtype=np.int64)
    if np.any((y < 1) | (y > f.l)):
        raise DomainError(f"y values must lie in 1..{f.l}")
    return float(np.sum(np.log(f.image_of_uniform[y - 1])))


def empirical_y_distribution(
    f: DiscreteFunction, n: int, seed: int = 0, x_probs=None
) -> np.ndarray:
    """Relative frequencies of y = f(x) over 1..l for ``n`` draws of x (uniform by default)."""
    rng = substream(seed, "discrete-x")
    x = rng.choice(np.arange(1, f.k + 1), size=n, p=x_probs)
    return np.bincount(f(x), minlength=f.l + 1)[1:] / n


def permutation_equivalence_experiment(
    f: DiscreteFunction, p_y, num_permutations: int = 1000, seed: int = 0
) -> float:
    """Fraction of random ``f_pi`` whose expected log image density under ``p_y`` is below f's.

    Ties count as not below.  Scores that agree to ``TIE_RTOL`` are ties, so
    permutations that only reorder a floating-point sum are not counted.
    """
    p_y = np.asarray(p_y, dtype=float)
    if p_y.shape != (f.l,):
        raise DomainError(f"p_y must have {f.l} entries")
    if num_permutations < 1:
        raise IGCIError("num_permutations must be positive")
    log_image = np.log(f.image_of_uniform)
    rng = substream(seed, "permutations")
    perms = rng.permuted(np.tile(np.arange(f.l), (num_permutations, 1)), axis=1)
    rows = np.vstack([np.arange(f.l), perms])
    scores = (log_image[rows] * p_y[None, :]).sum(axis=1)
    tol = TIE_RTOL * (1.0 + abs(scores[0]))
    return float(np.mean(scores[1:] < scores[0] - tol))


@dataclass(frozen=True, eq=False)
class SSLProblem:
    """A few labelled (y, x) pairs plus the density of the unlabelled y's."""

    labeled_y: np.ndarray
    labeled_x: np.ndarray
    unlabeled_density: GridDensity

    def __post_init__(self):
        y = np.array(self.labeled_y, dtype=float)
        x = np.array(self.labeled_x, dtype=float)
        if y.ndim != 1 or y.shape != x.shape or y.size < 2:
            raise DomainError("need at least two labelled pairs")
        order = np.argsort(y, kind="stable")
        y, x = y[order], x[order]
        if np.any(np.diff(y) <= 0):
            raise DomainError("labelled y values must be distinct")
        if np.any(np.diff(x) < 0):
            raise DomainError("labelled pairs are not co-monotone")
        lo, hi = self.unlabeled_density.domain
        if y[0] < lo or y[-1] > hi:
            raise DomainError("labelled y values fall outside the unlabelled density's domain")
        y.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "labeled_y", y)
        object.__setattr__(self, "labeled_x", x)

    @classmethod
    def from_samples(cls, labeled, unlabeled_y, bins: int = 64, domain=None) -> "SSLProblem":
        """Histogram the unlabelled y's (add-one smoothing keeps every bin positive)."""
        labeled = np.asarray(labeled, dtype=float)
        ly, lx = labeled[:, 0], labeled[:, 1]
        uy = np.asarray(unlabeled_y, dtype=float)
        if domain is None:
            both = np.concatenate([ly, uy])
            domain = (float(both.min()), float(both.max()))
        counts, _ = np.histogram(uy, bins=bins, range=domain)
        return cls(ly, lx, GridDensity.from_weights(counts + 1.0, domain))


def ssl_interpolate(prob: SSLProblem, y):
    """Interpolate between labelled points along the CDF of the unlabelled density.

    On ``[y_j, y_{j+1}]`` the prediction moves from ``x_j`` to ``x_{j+1}`` in
    proportion to the unlabelled mass already passed.
    """
    scalar = np.ndim(y) == 0
    y = np.atleast_1d(np.asarray(y, dtype=float))
    ly, lx = prob.labeled_y, prob.labeled_x
    if np.any((y < ly[0]) | (y > ly[-1])):
        raise ExtrapolationError(f"y must lie within the labelled range [{ly[0]}, {ly[-1]}]")
    j = np.clip(np.searchsorted(ly, y, side="right") - 1, 0, ly.size - 2)
    cdf_at = prob.unlabeled_density.cdf_at
    lo, hi = cdf_at(ly[j]), cdf_at(ly[j + 1])
    # labels closer than the CDF can resolve: fall back to linear interpolation in y
    flat = hi <= lo
    t = np.where(flat, (y - ly[j]) / (ly[j + 1] - ly[j]),
                 (cdf_at(y) - lo) / np.where(flat, 1.0, hi - lo))
    out = (1.0 - t) * lx[j] + t * lx[j + 1]
    return float(out[0]) if scalar else out
