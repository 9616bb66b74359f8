"""Grid estimates of the Lebesgue constant against ln(m1+1) ln(m2+1).

Usage: python scripts/lebesgue_growth.py [--max-m1 31] [--factor 8]
"""
import argparse
import math
import time

from lissphere.analysis import GridSpec, lebesgue_estimate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-m1", type=int, default=31)
    ap.add_argument("--factor", type=int, default=8, help="grid points per unit of max(m) and axis")
    args = ap.parse_args()
    print(f"{'m':>9} {'estimate':>10} {'ratio':>8} {'seconds':>8}")
    m1 = 3
    while m1 <= args.max_m1:
        m = (m1, m1 + 1)
        t0 = time.perf_counter()
        lam = lebesgue_estimate(m, GridSpec.for_degree(m, args.factor))
        ratio = lam / (math.log(m[0] + 1) * math.log(m[1] + 1))
        print(f"{str(m):>9} {lam:>10.4f} {ratio:>8.4f} {time.perf_counter() - t0:>8.2f}")
        m1 = 2 * m1 + 1


if __name__ == "__main__":
    main()
