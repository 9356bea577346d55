"""Acceptance criteria 1-9, one test each.

Each test appends a PASS/FAIL line to ``ACCEPTANCE`` (printed in the pytest
terminal summary by conftest) and then asserts.  Tolerances are the ones the
criteria state; nothing here is loosened to make a check pass.
"""
import json
import os
import subprocess
import sys
import time
from functools import lru_cache
from pathlib import Path

import numpy as np

from igci.density import SamplePair
from igci.harness import (
    bridge_checks,
    counting_checks,
    learning_checks,
    run_benchmark,
    typicality_checks,
)
from igci.inference import UNDECIDED, infer_direction
from igci.pairfile import read_pair_file
from igci.rng import derive_seed
from igci.synth import GeneratorConfig, random_density, random_diffeomorphism, sample_pair

ACCEPTANCE: list[str] = []
DATA = Path(__file__).parent / "data"


def record(number: int, title: str, ok: bool, detail: str) -> None:
    ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {detail}")
    assert ok, detail


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def by_name(checks):
    return {c.name: c for c in checks}


@lru_cache(maxsize=None)
def learning():
    checks, secs = timed(learning_checks, seed=0, cases=200, bins=1000, perm_trials=1000)
    return by_name(checks), secs


def test_1_counting_oracle():
    checks, secs = timed(counting_checks, seed=0, cases=500, max_ab=50)
    c = by_name(checks)
    eq, law = c["oracle_equivalence_mismatches"], c["ratio_law_violations"]
    ok = eq.passed and law.passed and eq.cases >= 500 and secs < 60
    record(1, "counting oracle", ok,
           f"{int(eq.measured)} mismatches over {eq.cases} models, {int(law.measured)} ratio-law "
           f"violations over {law.cases} (a, b), {secs:.1f}s")


def test_2_continuum_bridge():
    checks, secs = timed(bridge_checks, seed=0, pairs=100, n=50, grid=10_000, tol=1e-6)
    c = by_name(checks)
    gf, sl = c["grid_free_ratio_vs_continuum"], c["continuum_vs_slope_score"]
    ok = gf.passed and sl.passed and secs < 60
    record(2, "continuum bridge", ok,
           f"max |grid-free - continuum| = {gf.measured:.2e}, max |continuum + (n-1) slope| = "
           f"{sl.measured:.2e} (tol 1e-6), {secs:.1f}s")


def test_3_markov_bound():
    checks, secs = timed(typicality_checks, seed=0, maps=500, trials=100_000)
    c = by_name(checks)
    tail = c["markov_tail_excess"]
    pooled = c["expectation_pooled_deviation_sigmas"]
    frac = c["expectation_maps_outside_3sigma_fraction"]
    ok = tail.passed and pooled.passed and frac.passed and secs < 300
    record(3, "Markov bound", ok,
           f"worst tail excess over bound+3sigma = {tail.measured:.4f} across {tail.cases} "
           f"map-threshold pairs; E[f'] pooled deviation {pooled.measured:.2f} sigma, "
           f"{frac.measured:.3f} of maps outside 3 sigma; {secs:.1f}s")


def test_4_antisymmetry_and_identity():
    samples = []
    pf = read_pair_file(DATA / "synthetic_xy.csv")
    samples.append(SamplePair.from_arrays(pf.xs, pf.ys))
    for i in range(50):
        cfg = GeneratorConfig(seed=derive_seed(0, "antisym", i))
        samples.append(sample_pair(random_density(cfg), random_diffeomorphism(cfg), 1000, 0.0,
                                   cfg.seed))
    worst = 0.0
    for s in samples:
        v = infer_direction(s, "slope", "deterministic", "uniform")
        worst = max(worst, abs(v.score_xy + v.score_yx))
    x = np.linspace(0.0, 1.0, 100)
    ident = infer_direction(SamplePair.from_arrays(x, x), "slope", "deterministic")
    ok = worst <= 1e-10 and ident.direction == UNDECIDED
    record(4, "antisymmetry and identity", ok,
           f"max |score_xy + score_yx| = {worst:.1e} over {len(samples)} fixtures; "
           f"y = x -> {ident.direction}")


def test_5_inference_accuracy():
    noise = [0.0, 0.01, 0.05]
    report, secs = timed(run_benchmark, GeneratorConfig(seed=0), 200, 1000, noise)
    levels = report["results"]
    acc0 = levels[0]["methods"]["slope_uniform/deterministic"]["accuracy"]
    noisy_keys = [k for k in levels[0]["methods"] if k.endswith("/noisy")]
    trend = [float(np.mean([lvl["methods"][k]["accuracy"] for k in noisy_keys])) for lvl in levels]
    non_increasing = all(a >= b for a, b in zip(trend, trend[1:]))
    ok = acc0 >= 0.95 and non_increasing and secs < 120
    record(5, "inference accuracy", ok,
           f"slope accuracy at noise 0 = {acc0:.3f}; mean noisy-ordering accuracy over noise "
           f"{noise} = {[round(t, 4) for t in trend]}; {secs:.1f}s")


def test_6_conservation_and_inequality():
    c, secs = learning()
    cons = c["conservation_max_gap"]
    viol, near = c["near_orthogonal_inequality_violations"], c["near_orthogonal_cases"]
    ok = cons.passed and viol.passed and near.passed and secs < 60
    record(6, "conservation and inequality", ok,
           f"max conservation gap {cons.measured:.2e} (< 5e-3) over {cons.cases} pairs; "
           f"{int(viol.measured)} inequality violations among {int(near.measured)} "
           f"near-orthogonal cases ({near.extra['raw_draws']} raw draws, rest decorrelated); "
           f"{secs:.1f}s")


def test_7_unsupervised_and_ssl():
    c, _ = learning()
    names = ["ghat_sup_error_m1000", "ghat_error_decreasing_in_m", "ssl_label_reproduction_error",
             "ssl_uniform_recovery_sup_error", "ssl_full_labels_vs_inverse_sup_error"]
    ok = all(c[n].passed for n in names)
    errs = c["ghat_error_decreasing_in_m"].extra["errors"]
    record(7, "unsupervised and SSL recovery", ok,
           f"g_hat sup error by M {{{', '.join(f'{m}: {e:.1e}' for m, e in errs.items())}}}; "
           f"SSL label error {c['ssl_label_reproduction_error'].measured:.1e}, "
           f"uniform-case error {c['ssl_uniform_recovery_sup_error'].measured:.1e}")


def test_8_permutation_experiment():
    c, _ = learning()
    frac = c["permutation_win_fraction"]
    record(8, "permutation experiment", frac.passed,
           f"true function beats {frac.measured:.3f} of {frac.cases} permutations (>= 0.95)")


def _cli(args, threads):
    env = {**os.environ, "IGCI_THREADS": str(threads)}
    out = subprocess.run([sys.executable, "-m", "igci.cli", *args], env=env, capture_output=True,
                         check=True)
    return out.stdout


def test_9_reproducibility():
    threads = 4
    fixture = str(DATA / "synthetic_xy.csv")
    commands = {
        "infer": ["infer", "--input", fixture, "--seed", "1"],
        "infer-entropy": ["infer", "--input", fixture, "--method", "entropy", "--ordering",
                          "noisy", "--reference", "gaussian"],
        "benchmark": ["benchmark", "--trials", "16", "--n", "300", "--seed", "7"],
        "verify": ["verify", "--suite", "learning", "--seed", "3"],
        "generate": ["generate", "--n", "200", "--seed", "11"],
    }
    differing = []
    for name, args in commands.items():
        if _cli(args, 1) != _cli(args, threads):
            differing.append(name)
    ok = not differing
    record(9, "reproducibility", ok,
           f"{len(commands) - len(differing)}/{len(commands)} commands byte-identical with "
           f"IGCI_THREADS=1 vs {threads}" + (f"; differing: {differing}" if differing else ""))
    assert json.loads(_cli(commands["infer"], 1))["seed"] == 1
