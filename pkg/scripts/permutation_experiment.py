"""Does the true discrete function out-score its permutation-equivalent rivals?

Repeats the experiment for several random surjections and sample sizes.
"""
import argparse

import numpy as np

from igci.learning import DiscreteFunction, empirical_y_distribution, permutation_equivalence_experiment
from igci.rng import substream


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=200)
    ap.add_argument("--l", type=int, default=20)
    ap.add_argument("--functions", type=int, default=20)
    ap.add_argument("--permutations", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    for n in (100, 1000, 10_000):
        fracs = []
        for i in range(args.functions):
            f = DiscreteFunction.random_surjection(args.k, args.l, substream(args.seed, "fn", i))
            p_y = empirical_y_distribution(f, n, seed=args.seed + i)
            fracs.append(permutation_equivalence_experiment(f, p_y, args.permutations, seed=i))
        fracs = np.array(fracs)
        print(f"n={n:>6}: win fraction mean {fracs.mean():.3f}, min {fracs.min():.3f}")


if __name__ == "__main__":
    main()
