"""Semi-supervised interpolation versus plain linear interpolation between labels.

X is uniform and y = f(x) for a generated f, so the unlabelled y density
carries the shape of f^-1 between the labelled points.
"""
import argparse

import numpy as np

from igci.density import GridDensity, pushforward
from igci.learning import SSLProblem, ssl_interpolate
from igci.rng import substream
from igci.synth import GeneratorConfig, random_diffeomorphism


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--labels", type=int, default=5)
    ap.add_argument("--unlabelled", type=int, default=20_000)
    ap.add_argument("--bins", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    f = random_diffeomorphism(GeneratorConfig(seed=args.seed))
    g = f.inverse()
    rng = substream(args.seed, "ssl-demo")
    ly = np.sort(np.concatenate([[0.0, 1.0], rng.uniform(0, 1, args.labels - 2)]))
    probe = np.linspace(0, 1, 2001)
    linear = np.interp(probe, ly, g(ly))

    exact = SSLProblem(ly, g(ly), pushforward(GridDensity.uniform(1000), f))
    uy = f(rng.uniform(0, 1, args.unlabelled))
    sampled = SSLProblem.from_samples(np.column_stack([ly, g(ly)]), uy, bins=args.bins,
                                      domain=(0.0, 1.0))
    for name, pred in (("linear", linear), ("ssl, exact density", ssl_interpolate(exact, probe)),
                       (f"ssl, {args.unlabelled} samples", ssl_interpolate(sampled, probe))):
        print(f"{name:>24}: sup error {np.max(np.abs(pred - g(probe))):.4f}")


if __name__ == "__main__":
    main()
