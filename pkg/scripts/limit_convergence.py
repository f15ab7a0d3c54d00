"""Trace distance to the equal-weight limit and crossing times across n.

    python scripts/limit_convergence.py --ns 32 64 128 --p 0.5
"""

import argparse

from faultygrover.cli import converge_to_limit
from faultygrover.density import success_probs
from faultygrover.reduced_state import SearchSpace


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--ns", type=int, nargs="+", default=[32, 64, 128, 256])
    parser.add_argument("--k", type=int, default=3)
    parser.add_argument("--ps", type=float, nargs="+", default=[0.25, 0.5, 0.75])
    args = parser.parse_args()

    print(f"{'n':>5} {'p':>5} {'t<1e-1':>7} {'t<1e-2':>7} {'t<1e-3':>7} {'t/n':>6}  weights")
    for p in args.ps:
        for n in args.ns:
            space = SearchSpace(n, args.k, p)
            crossings, t_stop, rho, dist = converge_to_limit(space)
            weights = " ".join(f"{w:.4f}" for w in success_probs(rho, space))
            c = [crossings[th] for th in sorted(crossings, reverse=True)]
            ratio = f"{c[-1] / n:6.2f}" if c[-1] is not None else "   n/a"
            print(f"{n:>5} {p:>5.2f} {c[0]!s:>7} {c[1]!s:>7} {c[2]!s:>7} {ratio}  {weights}")


if __name__ == "__main__":
    main()
