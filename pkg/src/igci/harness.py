"""Experiment suites behind ``igci benchmark`` and ``igci verify``.

Each trial derives its own seed from the master seed and its index, and
results are collected in index order, so the output does not depend on how
many worker threads run the trials (``IGCI_THREADS`` overrides the default).
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats

from . import __version__
from .counting import (
    brute_force_enumerate,
    continuum_score,
    count_interpolants,
    count_monotone,
    discretize,
    enumerate_interpolants,
    grid_free_log_ratio,
    likelihood_ratio,
    random_count_model,
)
from .density import (
    GridDensity,
    MonotoneMap,
    SamplePair,
    kl_divergence,
    log_slope_covariance,
    pushforward,
)
from .errors import DegenerateDataError, LatticeCollisionError
from .inference import X_CAUSES_Y, igci_slope_score, infer_direction
from .learning import (
    DiscreteFunction,
    SSLProblem,
    decorrelate,
    empirical_y_distribution,
    permutation_equivalence_experiment,
    ssl_interpolate,
    unsupervised_error,
    unsupervised_estimator,
)
from .rng import derive_seed, substream
from .synth import GeneratorConfig, random_density, random_diffeomorphism, sample_pair
from .typicality import (
    expectation_of_inverse_image_density,
    log_jacobian_score,
    product_map_bound,
    verify_markov_bound,
)

SCHEMA_VERSION = 1
THREADS_ENV = "IGCI_THREADS"
C_GRID = (0.25, 0.5, 1.0, 2.0, 3.0)
COMBINATIONS = (
    ("slope", "deterministic", "uniform"),
    ("slope", "noisy", "uniform"),
    ("entropy", "noisy", "gaussian"),
    ("entropy", "noisy", "uniform"),
)


def thread_count() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def parallel_map(fn, items) -> list:
    items = list(items)
    workers = thread_count()
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def report_header(command: str, seed: int, parameters: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": "igci",
        "version": __version__,
        "command": command,
        "seed": int(seed),
        "parameters": parameters,
    }


@dataclass
class Check:
    """Outcome of one verified invariant; ``margin > 0`` means comfortably passing."""

    name: str
    passed: bool
    measured: float
    threshold: float
    comparison: str
    cases: int
    failing_case: dict | None = None
    extra: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        if self.comparison == "<=":
            return self.threshold - self.measured
        return self.measured - self.threshold

    def to_dict(self) -> dict:
        d = asdict(self)
        d["margin"] = self.margin
        return d


def _le(name, measured, threshold, cases, failing=None, **extra) -> Check:
    return Check(name, bool(measured <= threshold), float(measured), float(threshold), "<=", cases,
                 failing, extra)


def _ge(name, measured, threshold, cases, failing=None, **extra) -> Check:
    return Check(name, bool(measured >= threshold), float(measured), float(threshold), ">=", cases,
                 failing, extra)


# -- benchmark ------------------------------------------------------------------------------


def _benchmark_trial(args):
    base, index, n, noise_grid = args
    cfg = base.with_seed(derive_seed(base.seed, "trial", index))
    p, f = random_density(cfg), random_diffeomorphism(cfg)
    anticausal, causal = unsupervised_error(p, f)
    rows = []
    for noise in noise_grid:
        s = sample_pair(p, f, n, noise, cfg.seed)
        out = {}
        for method, ordering, reference in COMBINATIONS:
            key = f"{method}_{reference}/{ordering}"
            try:
                v = infer_direction(s, method, ordering, reference)
                out[key] = (v.direction, v.score_xy, v.score_yx)
            except DegenerateDataError:
                out[key] = ("error", math.nan, math.nan)
        rows.append(out)
    return rows, anticausal <= causal


def run_benchmark(cfg: GeneratorConfig, trials: int, n: int, noise_grid) -> dict:
    noise_grid = [float(v) for v in noise_grid]
    results = parallel_map(_benchmark_trial, [(cfg, i, n, noise_grid) for i in range(trials)])
    ineq_rate = float(np.mean([ok for _, ok in results]))
    levels = []
    for j, noise in enumerate(noise_grid):
        combos = {}
        for key in results[0][0][j]:
            entries = [rows[j][key] for rows, _ in results]
            dirs = [e[0] for e in entries]
            sxy = [e[1] for e in entries if e[0] != "error"]
            syx = [e[2] for e in entries if e[0] != "error"]
            combos[key] = {
                "accuracy": dirs.count(X_CAUSES_Y) / trials,
                "undecided": dirs.count("undecided") / trials,
                "errors": dirs.count("error"),
                "mean_score_xy": float(np.mean(sxy)) if sxy else None,
                "mean_score_yx": float(np.mean(syx)) if syx else None,
            }
        levels.append({"noise": noise, "methods": combos, "error_inequality_rate": ineq_rate})
    report = report_header(
        "benchmark",
        cfg.seed,
        {"config": asdict(cfg), "trials": trials, "n": n, "noise_grid": noise_grid},
    )
    report["results"] = levels
    return report


def accuracy_trend(report: dict, key: str = "slope_uniform/noisy") -> list[float]:
    return [lvl["methods"][key]["accuracy"] for lvl in report["results"]]


# -- counting -------------------------------------------------------------------------------


def counting_checks(seed: int = 0, cases: int = 500, max_ab: int = 50) -> list[Check]:
    mismatches, failing, literal_checked = 0, None, 0
    for i in range(cases):
        m = random_count_model(substream(seed, "count-model", i))
        for direction in ("xy", "yx"):
            fast, slow = count_interpolants(m, direction), brute_force_enumerate(m, direction)
            if fast != slow:
                mismatches += 1
                failing = failing or {"index": i, "model": asdict(m), "direction": direction,
                                      "count": fast, "oracle": slow}
        if count_monotone(m.k, m.l) <= 2000:
            literal = sum(1 for _ in enumerate_interpolants(m))
            literal_checked += 1
            if literal != count_interpolants(m):
                mismatches += 1
                failing = failing or {"index": i, "model": asdict(m), "literal": literal}
    law_violations, law_fail = 0, None
    for a in range(1, max_ab + 1):
        for b in range(1, max_ab + 1):
            if count_monotone(a, b) * b != count_monotone(b, a) * a:
                law_violations += 1
                law_fail = law_fail or {"a": a, "b": b}
    return [
        _le("oracle_equivalence_mismatches", mismatches, 0, cases, failing,
            literal_enumerations=literal_checked),
        _le("ratio_law_violations", law_violations, 0, max_ab * max_ab, law_fail),
    ]


def bridge_checks(
    seed: int = 0, pairs: int = 100, n: int = 50, grid: int = 10_000, tol: float = 1e-6
) -> list[Check]:
    """Continuum limit of the counting likelihood ratio on discretised samples."""
    base = GeneratorConfig()
    worst_gf, worst_slope, redraws, failing = 0.0, 0.0, 0, None
    for i in range(pairs):
        cfg = base.with_seed(derive_seed(seed, "bridge", i))
        p, f = random_density(cfg), random_diffeomorphism(cfg)
        for attempt in range(1000):
            s = sample_pair(p, f, n, 0.0, derive_seed(cfg.seed, "draw", attempt))
            try:
                m = discretize(s.xs, s.ys, grid, grid)
                break
            except LatticeCollisionError:
                redraws += 1
        cs = continuum_score(m)
        gf = grid_free_log_ratio(m)
        lattice = SamplePair(np.array(m.xs) / m.k, np.array(m.ys) / m.l)
        slope = igci_slope_score(lattice, "xy")
        e1, e2 = abs(gf - cs), abs(cs + (n - 1) * slope)
        if max(e1, e2) > tol and failing is None:
            failing = {"index": i, "seed": cfg.seed, "grid_free": gf, "continuum": cs,
                       "slope": slope}
        worst_gf, worst_slope = max(worst_gf, e1), max(worst_slope, e2)
    return [
        _le("grid_free_ratio_vs_continuum", worst_gf, tol, pairs, failing, redraws=redraws),
        _le("continuum_vs_slope_score", worst_slope, tol, pairs, failing),
    ]


# -- typicality -----------------------------------------------------------------------------


def _typicality_map(args):
    seed, i, trials, c_grid = args
    cfg = GeneratorConfig(seed=derive_seed(seed, "typicality-map", i))
    f = random_diffeomorphism(cfg)
    rep = verify_markov_bound(f, c_grid, trials, seed=cfg.seed)
    mean, se = expectation_of_inverse_image_density(f, trials, seed=cfg.seed)
    excess = max(e - b - s for e, b, s in zip(rep.empirical_mass, rep.bound, rep.slack))
    return excess, rep, mean, se, cfg.seed


def two_slope_map() -> MonotoneMap:
    """Slope 3 on [0, 1/4] and 1/3 on [1/4, 1]."""
    return MonotoneMap([0.0, 0.25, 1.0], [0.0, 0.75, 1.0])


def two_slope_volume(n: int, c: float) -> float:
    """Exact volume where ``sum log f'`` of the two-slope map reaches ``c``: binomial over steep hits."""
    return float(sum(stats.binom.pmf(m, n, 0.25) for m in range(n + 1)
                     if (2 * m - n) * math.log(3.0) >= c))


def typicality_checks(
    seed: int = 0, maps: int = 500, trials: int = 100_000, c_grid=C_GRID, link_cases: int = 100
) -> list[Check]:
    out = parallel_map(_typicality_map, [(seed, i, trials, tuple(c_grid)) for i in range(maps)])
    worst = max(o[0] for o in out)
    failing = None
    if worst > 0:
        o = max(out, key=lambda o: o[0])
        failing = {"map_seed": o[4], "report": asdict(o[1])}
    means = np.array([o[2] for o in out])
    ses = np.array([o[3] for o in out])
    pooled = float(means.mean())
    pooled_se = float(np.sqrt(np.sum(ses**2)) / maps)
    outside = float(np.mean(np.abs(means - 1.0) > 3 * ses))

    n, c = 5, 1.0
    est, bound = product_map_bound(two_slope_map(), n, c, trials, seed=seed)
    exact = two_slope_volume(n, c)
    sigma = math.sqrt(exact * (1 - exact) / trials)

    xs_scores, ys_scores = [], []
    for i in range(link_cases):
        cfg = GeneratorConfig(seed=derive_seed(seed, "link", i))
        p, f = random_density(cfg), random_diffeomorphism(cfg)
        s = sample_pair(p, f, 1000, 0.0, cfg.seed)
        v = infer_direction(s, "slope", "deterministic")
        xs_scores.append(v.score_yx * (s.n - 1))
        ys_scores.append(log_jacobian_score(s.ys, f.inverse()))
    corr = float(np.corrcoef(xs_scores, ys_scores)[0, 1])

    return [
        _le("markov_tail_excess", worst, 0.0, maps * len(c_grid), failing, trials=trials),
        _le("expectation_pooled_deviation_sigmas", abs(pooled - 1.0) / pooled_se, 3.0, maps,
            pooled_mean=pooled, pooled_se=pooled_se),
        _le("expectation_maps_outside_3sigma_fraction", outside, 0.01, maps),
        _le("product_map_vs_binomial_sigmas", abs(est - exact) / sigma, 3.0, trials,
            estimate=est, exact=exact, bound=bound),
        _le("product_map_bound_excess", est - bound - 3 * math.sqrt(bound / trials), 0.0, trials),
        _ge("slope_score_log_jacobian_correlation", corr, 0.99, link_cases),
    ]


# -- learning -------------------------------------------------------------------------------


def _learning_case(args):
    seed, i, bins = args
    cfg = GeneratorConfig(seed=derive_seed(seed, "learning", i), bins=bins)
    p, f = random_density(cfg), random_diffeomorphism(cfg)
    u = GridDensity.uniform(bins)
    out = []
    for variant, q in (("raw", p), ("decorrelated", decorrelate(p, f))):
        anticausal, causal = unsupervised_error(q, f)
        out.append({
            "seed": cfg.seed,
            "variant": variant,
            "covariance": log_slope_covariance(q, f),
            "anticausal": anticausal,
            "causal": causal,
            "input_divergence": kl_divergence(q, u),
            "mechanism_divergence": kl_divergence(u, pushforward(u, f.inverse())),
        })
    return out


def sqrt_map(knots: int) -> MonotoneMap:
    """Piecewise-linear interpolant of sqrt at evenly spaced x."""
    return MonotoneMap.from_function(np.sqrt, knots)


def ghat_sup_error(bins: int, probe: int = 200_001) -> float:
    """sup |g_hat - y^2| when X is uniform and f approximates sqrt on ``bins + 1`` knots."""
    p_y = pushforward_uniform(sqrt_map(bins + 1), bins)
    g = unsupervised_estimator(p_y)
    y = np.linspace(0.0, 1.0, probe)
    return float(np.max(np.abs(g(y) - y**2)))


def pushforward_uniform(f: MonotoneMap, bins: int) -> GridDensity:
    return pushforward(GridDensity.uniform(bins), f)


def learning_checks(
    seed: int = 0, cases: int = 200, bins: int = 1000, perm_trials: int = 1000
) -> list[Check]:
    rows = [r for case in parallel_map(_learning_case, [(seed, i, bins) for i in range(cases)])
            for r in case]
    raw = [r for r in rows if r["variant"] == "raw"]
    gaps = [abs(r["anticausal"] - r["input_divergence"]) for r in raw]
    worst = int(np.argmax(gaps))
    near = [r for r in rows if abs(r["covariance"]) < 1e-3]
    violations = [r for r in near if r["anticausal"] > r["causal"] + 1e-2]
    strict_pool = [r for r in near if r["mechanism_divergence"] > 1e-2]
    strict_fail = [r for r in strict_pool if not r["anticausal"] < r["causal"]]

    errs = {m: ghat_sup_error(m) for m in (100, 1000, 10_000)}
    decreasing = errs[100] > errs[1000] > errs[10_000]

    u = GridDensity.uniform(bins)
    f = sqrt_map(bins + 1)
    p_y = pushforward_uniform(f, bins)
    prob = SSLProblem([0.0, 1.0], [0.0, 1.0], p_y)
    y = np.linspace(0.0, 1.0, 100_001)
    ssl_err = float(np.max(np.abs(ssl_interpolate(prob, y) - y**2)))
    rng = substream(seed, "ssl-labels")
    ly = np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0, 1, 8)]))
    labelled = SSLProblem(ly, f.inverse()(ly), p_y)
    label_err = float(np.max(np.abs(ssl_interpolate(labelled, ly) - labelled.labeled_x)))
    # inverse with kinks only at grid edges, so labels on every edge pin it down completely
    edges = u.edges
    aligned = MonotoneMap(edges**2, edges).inverse()
    full = SSLProblem(edges, aligned(edges), random_density(GeneratorConfig(seed=seed, bins=bins)))
    probe = np.linspace(0.0, 1.0, 100_001)
    full_err = float(np.max(np.abs(ssl_interpolate(full, probe) - aligned(probe))))

    dfun = DiscreteFunction.random_surjection(200, 20, substream(seed, "surjection"))
    p_emp = empirical_y_distribution(dfun, 10_000, seed=seed)
    frac = permutation_equivalence_experiment(dfun, p_emp, perm_trials, seed=seed)

    return [
        _le("conservation_max_gap", gaps[worst], 5e-3, len(raw),
            raw[worst] if gaps[worst] >= 5e-3 else None),
        _le("near_orthogonal_inequality_violations", len(violations), 0, len(near),
            violations[0] if violations else None),
        _ge("near_orthogonal_cases", len(near), 1, len(rows),
            raw_draws=sum(r["variant"] == "raw" for r in near)),
        _le("strict_inequality_failures", len(strict_fail), 0, len(strict_pool),
            strict_fail[0] if strict_fail else None),
        _le("ghat_sup_error_m1000", errs[1000], 2e-2, 1, extra_errors=errs),
        _ge("ghat_error_decreasing_in_m", float(decreasing), 1.0, 3, errors=errs),
        _le("ssl_label_reproduction_error", label_err, 0.0, len(ly)),
        _le("ssl_uniform_recovery_sup_error", ssl_err, 2e-2, y.size),
        _le("ssl_full_labels_vs_inverse_sup_error", full_err, 1e-12, probe.size),
        _ge("permutation_win_fraction", frac, 0.95, perm_trials),
    ]


SUITES = {
    "counting": lambda seed, trials: counting_checks(seed) + bridge_checks(seed),
    "typicality": lambda seed, trials: typicality_checks(seed, trials=trials),
    "learning": lambda seed, trials: learning_checks(seed),
}


def run_verify(suite: str, seed: int = 0, trials: int = 100_000) -> dict:
    names = list(SUITES) if suite == "all" else [suite]
    results = {}
    for name in names:
        results[name] = [c.to_dict() for c in SUITES[name](seed, trials)]
    report = report_header("verify", seed, {"suite": suite, "trials": trials})
    report["results"] = results
    report["passed"] = all(c["passed"] for checks in results.values() for c in checks)
    return report
