"""Brute-force midpoint quadrature.

This is the reference integrator the tests and ``igci verify`` compare the
closed-form routines in :mod:`igci.density` against.  It only evaluates
integrands pointwise, so it shares no code path with the exact
segment-merging used by the library.
"""
from __future__ import annotations

import numpy as np

DEFAULT_POINTS = 1_000_000


def midpoints(lo: float = 0.0, hi: float = 1.0, points: int = DEFAULT_POINTS) -> np.ndarray:
    h = (hi - lo) / points
    return lo + h * (np.arange(points) + 0.5)


def midpoint_integral(fn, lo: float = 0.0, hi: float = 1.0, points: int = DEFAULT_POINTS) -> float:
    """Midpoint-rule integral of vectorised ``fn`` over ``[lo, hi]``."""
    t = midpoints(lo, hi, points)
    return float(np.sum(fn(t)) * (hi - lo) / points)


def kl_continuous(p_pdf, q_pdf, points: int = DEFAULT_POINTS) -> float:
    """D(p || q) for two densities on [0, 1] given as vectorised callables."""
    t = midpoints(0.0, 1.0, points)
    p, q = p_pdf(t), q_pdf(t)
    return float(np.sum(p * np.log(p / q)) / points)
