"""Accuracy of every method/ordering combination across a noise grid.

    python3 scripts/benchmark_sweep.py --trials 200 --n 1000 --noise 0,0.01,0.02,0.05,0.1
"""
import argparse

from igci.harness import run_benchmark
from igci.synth import GeneratorConfig


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--n", type=int, default=1000)
    ap.add_argument("--noise", default="0,0.01,0.02,0.05,0.1")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    noise = [float(v) for v in args.noise.split(",")]
    report = run_benchmark(GeneratorConfig(seed=args.seed), args.trials, args.n, noise)
    keys = sorted(report["results"][0]["methods"])
    print("noise   " + "  ".join(f"{k:>28}" for k in keys))
    for lvl in report["results"]:
        accs = "  ".join(f"{lvl['methods'][k]['accuracy']:>28.3f}" for k in keys)
        print(f"{lvl['noise']:<7} {accs}")
    print(f"error-inequality satisfaction rate: {report['results'][0]['error_inequality_rate']:.3f}")


if __name__ == "__main__":
    main()
