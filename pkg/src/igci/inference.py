"""Empirical IGCI scores and the direction decision.

Two estimators are offered.  The slope estimator averages
``log |dy| / |dx|`` over neighbouring samples; the entropy estimator compares
1-NN differential entropies of the two standardised marginals.  Either is
applied after mapping both axes onto a common reference: min-max scaling
onto [0, 1] for the uniform reference, z-scores for the Gaussian reference.

X -> Y is inferred when ``score_xy < score_yx``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .density import SamplePair, differential_entropy_kl_estimator
from .errors import DegenerateDataError, IGCIError, InsufficientDataError

TIE_EPSILON = 1e-9
CONFIDENCE_EPS = 1e-9

X_CAUSES_Y = "X_causes_Y"
Y_CAUSES_X = "Y_causes_X"
UNDECIDED = "undecided"

METHODS = ("slope", "entropy")
REFERENCES = ("uniform", "gaussian")
ORDERINGS = ("deterministic", "noisy")
_ORDERING_ALIASES = {"det": "deterministic", "deterministic": "deterministic", "noisy": "noisy"}


@dataclass(frozen=True)
class CausalVerdict:
    score_xy: float
    score_yx: float
    direction: str
    confidence: float
    method: str
    ordering: str

    def to_dict(self) -> dict:
        return asdict(self)


def _canonical_ordering(ordering: str) -> str:
    try:
        return _ORDERING_ALIASES[ordering]
    except KeyError:
        raise IGCIError(f"unknown ordering {ordering!r}; use one of {ORDERINGS}") from None


def _minmax(v: np.ndarray, axis: str) -> np.ndarray:
    lo, hi = v.min(), v.max()
    if not hi > lo:
        raise DegenerateDataError(f"{axis} is constant; cannot normalise")
    if lo == 0.0 and hi == 1.0:
        return v.copy()
    return (v - lo) / (hi - lo)


def _zscore(v: np.ndarray, axis: str) -> np.ndarray:
    sd = v.std()
    if not sd > 0:
        raise DegenerateDataError(f"{axis} is constant; cannot standardise")
    return (v - v.mean()) / sd


def normalize(s: SamplePair) -> SamplePair:
    """Affinely map each axis onto [0, 1] (order preserving, idempotent)."""
    return SamplePair(_minmax(s.xs, "x"), _minmax(s.ys, "y"), s.source_index)


def standardize(s: SamplePair) -> SamplePair:
    """Zero-mean, unit-variance version of each axis."""
    return SamplePair(_zscore(s.xs, "x"), _zscore(s.ys, "y"), s.source_index)


def apply_reference(s: SamplePair, reference: str = "uniform") -> SamplePair:
    if reference == "uniform":
        return normalize(s)
    if reference == "gaussian":
        return standardize(s)
    raise IGCIError(f"unknown reference {reference!r}; use one of {REFERENCES}")


def _axis_view(s: SamplePair, sort_by: str):
    """Return (a, b, rows): b listed in increasing order of a."""
    if sort_by == "x":
        return s.xs, s.ys, s.source_index
    order = np.argsort(s.ys, kind="stable")
    return s.ys[order], s.xs[order], s.source_index[order]


def _collapse_ties(a: np.ndarray, b: np.ndarray):
    """Merge runs of equal ``a`` (already sorted), averaging ``b`` within each run."""
    uniq, start = np.unique(a, return_index=True)
    sums = np.add.reduceat(b, start)
    counts = np.diff(np.append(start, a.size))
    return uniq, sums / counts


def igci_slope_score(
    s: SamplePair, direction: str = "xy", sort_by: str | None = None, collapse_ties: bool = False
) -> float:
    """Mean of ``log(|dy| / |dx|)`` over consecutive samples (or its x<->y mirror).

    ``direction="xy"`` scores X -> Y and ``"yx"`` scores Y -> X.  Samples are
    taken in increasing order of ``sort_by``, which defaults to the axis the
    direction starts from.  The sum is divided by the number of gaps so that
    values are comparable across sample sizes.

    With ``collapse_ties`` (the noisy-ordering treatment) tied values on the
    sorting axis are merged by averaging their partners, and zero gaps on the
    other axis are skipped; otherwise any zero gap is an error.
    """
    if direction not in ("xy", "yx"):
        raise IGCIError(f"direction must be 'xy' or 'yx', got {direction!r}")
    if s.n < 3:
        raise InsufficientDataError("need at least 3 observations")
    if sort_by is None:
        sort_by = "x" if direction == "xy" else "y"
    a, b, rows = _axis_view(s, sort_by)
    if collapse_ties:
        a, b = _collapse_ties(a, b)
    da, db = np.abs(np.diff(a)), np.abs(np.diff(b))
    if collapse_ties:
        keep = (da > 0) & (db > 0)
        da, db = da[keep], db[keep]
        if da.size < 2:
            raise DegenerateDataError("fewer than 2 non-zero gaps remain after merging ties")
    else:
        zero = np.flatnonzero((da == 0) | (db == 0))
        if zero.size:
            j = int(zero[0])
            raise DegenerateDataError(
                f"zero gap between samples {rows[j]} and {rows[j + 1]}", rows=(rows[j], rows[j + 1])
            )
    # sort axis plays the role of the input for the "xy" direction when sorting by x
    input_gap, output_gap = (da, db) if (direction == "xy") == (sort_by == "x") else (db, da)
    return float(np.mean(np.log(output_gap / input_gap)))


def igci_entropy_score(s: SamplePair, reference: str = "gaussian") -> tuple[float, float]:
    """``(H(y) - H(x), H(x) - H(y))`` of the standardised marginals."""
    if s.n < 10:
        raise InsufficientDataError(f"entropy scores need at least 10 observations, got {s.n}")
    t = apply_reference(s, reference)
    hx = differential_entropy_kl_estimator(t.xs)
    hy = differential_entropy_kl_estimator(t.ys)
    return hy - hx, hx - hy


def _first_tie(values: np.ndarray, rows: np.ndarray):
    order = np.argsort(values, kind="stable")
    v = values[order]
    dup = np.flatnonzero(np.diff(v) == 0)
    if dup.size == 0:
        return None
    j = int(dup[0])
    return int(rows[order[j]]), int(rows[order[j + 1]])


def _reject_ties(s: SamplePair):
    for axis, vals in (("x", s.xs), ("y", s.ys)):
        tie = _first_tie(vals, s.source_index)
        if tie is not None:
            raise DegenerateDataError(
                f"duplicate {axis} value at samples {tie[0]} and {tie[1]}; deterministic "
                "ordering requires an invertible relation",
                rows=tie,
            )


def decide(score_xy: float, score_yx: float, tie_epsilon: float = TIE_EPSILON) -> str:
    if score_xy < score_yx - tie_epsilon:
        return X_CAUSES_Y
    if score_yx < score_xy - tie_epsilon:
        return Y_CAUSES_X
    return UNDECIDED


def confidence(score_xy: float, score_yx: float) -> float:
    c = abs(score_xy - score_yx) / (abs(score_xy) + abs(score_yx) + CONFIDENCE_EPS)
    return float(min(max(c, 0.0), 1.0))


def infer_direction(
    s: SamplePair,
    method: str = "slope",
    ordering: str = "deterministic",
    reference: str = "uniform",
) -> CausalVerdict:
    """Decide between X -> Y and Y -> X.

    Deterministic ordering scores both directions along the x order, as for
    an invertible noiseless relation, and refuses tied values.  Noisy
    ordering scores X -> Y along the x order and Y -> X along the y order.
    """
    ordering = _canonical_ordering(ordering)
    if method not in METHODS:
        raise IGCIError(f"unknown method {method!r}; use one of {METHODS}")
    if ordering == "deterministic":
        _reject_ties(s)
    if method == "entropy":
        sxy, syx = igci_entropy_score(s, reference)
    else:
        t = apply_reference(s, reference)
        if ordering == "deterministic":
            sxy = igci_slope_score(t, "xy", sort_by="x")
            syx = igci_slope_score(t, "yx", sort_by="x")
        else:
            sxy = igci_slope_score(t, "xy", sort_by="x", collapse_ties=True)
            syx = igci_slope_score(t, "yx", sort_by="y", collapse_ties=True)
    return CausalVerdict(
        score_xy=float(sxy),
        score_yx=float(syx),
        direction=decide(sxy, syx),
        confidence=confidence(sxy, syx),
        method=f"{method}_{reference}",
        ordering=ordering,
    )
