"""Seeded generators for mechanisms, input densities and samples.

Maps and densities are both built from the same recipe: the integral of a
constant plus a random mixture of logistic-derivative bumps, normalised and
then mixed with a 5% uniform floor so slopes and masses stay bounded away
from zero.  Bumps wrap around [0, 1], which makes the random functions
stationary: the expected density is uniform and the expected log slope is
constant in x, so an independently drawn density and map are uncorrelated
on average.

The map and the density take their randomness from disjoint substreams of
the master seed ("map" and "density"), and samples from a third one.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

import numpy as np
from scipy.special import expit
from scipy.stats import truncnorm

from .density import GridDensity, MonotoneMap, SamplePair
from .errors import IGCIError
from .rng import substream

FLOOR = 0.05
MAP_BUMPS = 4
MAP_WIDTHS = (0.01, 0.06)
DENSITY_BUMPS = 6
DENSITY_WIDTHS = (0.05, 0.2)
_WRAPS = np.arange(-3, 4)

CONFIG_KEYS = ("seed", "map_roughness", "density_roughness", "bins", "noise_level")


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    map_roughness: float = 10.0
    density_roughness: float = 0.3
    bins: int = 1000
    noise_level: float = 0.0

    def __post_init__(self):
        if self.map_roughness < 0 or self.density_roughness < 0:
            raise IGCIError("roughness parameters must be non-negative")
        if self.bins < 2:
            raise IGCIError("bins must be at least 2")
        if self.noise_level < 0:
            raise IGCIError("noise_level must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise IGCIError("seed must fit in 64 unsigned bits")

    def with_seed(self, seed: int) -> "GeneratorConfig":
        return replace(self, seed=int(seed))

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in asdict(self).items())

    @classmethod
    def from_text(cls, text: str) -> "GeneratorConfig":
        """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or key not in types:
                raise IGCIError(f"line {lineno}: expected one of {CONFIG_KEYS} as key=value")
            kwargs[key] = int(value) if types[key] in (int, "int") else float(value)
        return cls(**kwargs)

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def load(cls, path) -> "GeneratorConfig":
        return cls.from_text(Path(path).read_text())


def _bump_mixture_cdf(rng, roughness, x, n_bumps, width_range) -> np.ndarray:
    """Normalised integral over [0, x] of ``1 + roughness * (wrapped bumps)``, floored."""
    centers = rng.uniform(0.0, 1.0, n_bumps)
    widths = rng.uniform(*width_range, n_bumps)
    amps = rng.exponential(1.0, n_bumps)
    shifted = centers[:, None] + _WRAPS[None, :]  # (bump, wrap)
    z = (x[:, None, None] - shifted[None]) / widths[None, :, None]
    z0 = (0.0 - shifted) / widths[:, None]
    per_bump = (expit(z) - expit(z0)[None]).sum(axis=2)  # (x, bump)
    h = x + roughness * per_bump @ amps
    g = h / h[-1]
    return FLOOR * x + (1.0 - FLOOR) * g


def random_diffeomorphism(cfg: GeneratorConfig) -> MonotoneMap:
    """Random increasing bijection of [0, 1] with ``bins + 1`` evenly spaced knots."""
    x = np.linspace(0.0, 1.0, cfg.bins + 1)
    y = _bump_mixture_cdf(
        substream(cfg.seed, "map"), cfg.map_roughness, x, MAP_BUMPS, MAP_WIDTHS
    )
    return MonotoneMap(x, y)


def random_density(cfg: GeneratorConfig) -> GridDensity:
    """Random strictly positive density on ``bins`` bins; each mass is at least 0.05 / bins."""
    x = np.linspace(0.0, 1.0, cfg.bins + 1)
    c = _bump_mixture_cdf(
        substream(cfg.seed, "density"), cfg.density_roughness, x, DENSITY_BUMPS, DENSITY_WIDTHS
    )
    mass = np.diff(c)
    return GridDensity(mass / mass.sum())


def _truncated_noise(rng: np.random.Generator, centre: np.ndarray, sd: float) -> np.ndarray:
    a = (0.0 - centre) / sd
    b = (1.0 - centre) / sd
    return truncnorm.rvs(a, b, loc=centre, scale=sd, random_state=rng)


def sample_pair(
    p: GridDensity, f: MonotoneMap, n: int, noise_level: float = 0.0, seed: int = 0
) -> SamplePair:
    """Draw ``n`` points with x ~ p (inverse CDF) and y = f(x) plus optional noise.

    Noise is Gaussian with standard deviation ``noise_level`` truncated so that
    y stays inside [0, 1].
    """
    if n < 3:
        raise IGCIError("n must be at least 3")
    rng = substream(seed, "sample")
    xs = p.quantile(rng.uniform(0.0, 1.0, n))
    ys = f(xs)
    if noise_level > 0:
        ys = np.clip(_truncated_noise(rng, ys, noise_level), 0.0, 1.0)
    return SamplePair.from_arrays(xs, ys)


def draw_instance(cfg: GeneratorConfig, n: int, noise_level: float | None = None):
    """(density, map, sample) for one experiment trial, all keyed on ``cfg.seed``."""
    p = random_density(cfg)
    f = random_diffeomorphism(cfg)
    noise = cfg.noise_level if noise_level is None else noise_level
    return p, f, sample_pair(p, f, n, noise, cfg.seed)
