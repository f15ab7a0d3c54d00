"""Sampled fault words against the exact density, with z-scores per outcome.

    python scripts/montecarlo_check.py --samples 100000 --seed 7
"""

import argparse
import math
import time

import numpy as np

from faultygrover.density import evolve_density, success_probs
from faultygrover.ensemble import batch_probs, sample_batch
from faultygrover.reduced_state import SearchSpace


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=256)
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--p", type=float, default=0.5)
    parser.add_argument("--t", type=int, default=40)
    parser.add_argument("--samples", type=int, default=100_000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    space = SearchSpace(args.n, args.k, args.p)
    start = time.perf_counter()
    probs = batch_probs(space, sample_batch(space, args.t, args.samples, args.seed))
    elapsed = time.perf_counter() - start
    exact = success_probs(evolve_density(space, args.t), space)
    emp = probs.mean(axis=0)
    se = probs.std(axis=0, ddof=1) / math.sqrt(len(probs))
    for name, e, x, s in zip(("unmarked", "nonfaulty", "faulty"), emp, exact, se):
        z = (e - x) / s if s > 0 else 0.0
        print(f"{name:>10}  empirical {e:.6f}  exact {x:.6f}  se {s:.2e}  z {z:+.2f}")
    print(f"{args.samples} trajectories in {elapsed:.2f}s; normalization spread "
          f"{np.ptp(probs.sum(axis=1)):.1e}")


if __name__ == "__main__":
    main()
