"""Meridian gap over inclinations, the threshold inclination and the fault set-back.

    python scripts/geometry_bounds.py
"""

import math

from faultygrover import geometry


def main():
    report = geometry.theorem1_constants()
    print(f"sup gap(3pi/8, A) over grid  {report.sup_gap_3pi8 / math.pi:.6f} pi  (bound 0.25 pi)")
    print(f"gap(3pi/8, 0.1953pi)         {report.sup_gap_at_A / math.pi:.6f} pi")
    print(f"gap(0.33pi, pi/4)            {report.gap_033 / math.pi:.6f} pi  (quoted as about 0.34 pi)")
    print(f"threshold A*                 {report.a_threshold / math.pi:.6f} pi")
    print(f"c_err(pi/6, pi/4)            {geometry.fault_displacement(math.pi / 6, math.pi / 4) / math.pi:.6f} pi")
    for A in (0.1 * math.pi, geometry.A_THRESHOLD, math.pi / 4):
        rep = geometry.check_corollary_one(A)
        print(f"worst set-back at A={A / math.pi:.4f}pi  {rep.worst_c_err / math.pi:.6f} pi "
              f"(a={rep.worst_a / math.pi:.4f}pi, {'ok' if rep.passed else 'violated'})")
    print()
    print(f"{'A/pi':>7} {'gap/pi':>9}")
    for A in geometry.a_grid(math.pi / 4, step=0.01 * math.pi):
        print(f"{A / math.pi:7.3f} {geometry.meridian_gap(3 * math.pi / 8, float(A)) / math.pi:9.5f}")


if __name__ == "__main__":
    main()
