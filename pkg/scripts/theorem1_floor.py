"""Success probability at 1.25x the Grover time for k >= 3 (1.34x for k = 2).

    python scripts/theorem1_floor.py --n 4096
"""

import argparse

from faultygrover.cli import grover_steps
from faultygrover.density import evolve_density, success_probs
from faultygrover.geometry import SEARCH_FLOOR, SEARCH_FLOOR_K2
from faultygrover.reduced_state import SearchSpace


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=4096)
    parser.add_argument("--ks", type=int, nargs="+", default=[2, 3, 4, 8])
    parser.add_argument("--ps", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.7, 0.9])
    args = parser.parse_args()

    print(f"{'k':>3} {'p':>5} {'t':>5} {'p_marked':>9} {'floor':>7}")
    for k in args.ks:
        factor, floor = (1.34, SEARCH_FLOOR_K2) if k == 2 else (1.25, SEARCH_FLOOR)
        for p in args.ps:
            space = SearchSpace(args.n, k, p)
            t = grover_steps(factor, space)
            marked = sum(success_probs(evolve_density(space, t), space)[1:])
            flag = "" if marked >= floor - 0.01 else "  below"
            print(f"{k:>3} {p:>5.2f} {t:>5} {marked:>9.5f} {floor:>7.4f}{flag}")
    print(f"floor cos^2(pi/8) = {SEARCH_FLOOR:.6f}, k=2 floor cos^2(0.17pi) = {SEARCH_FLOOR_K2:.6f}")


if __name__ == "__main__":
    main()
