"""Sup-norm interpolation errors of the Gaussian-pair function for m = (3,4), (7,8), ..., (39,40).

Usage: python scripts/reproduce_error_table.py [--n-theta 1001] [--n-phi 2000]
"""
import argparse
import time

from lissphere.analysis import REFERENCE_ERRORS, GridSpec, cartesian_sampler, convergence_table
from lissphere.rotation import gaussian_pair


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-theta", type=int, default=1001)
    ap.add_argument("--n-phi", type=int, default=2000)
    args = ap.parse_args()
    grid = GridSpec(args.n_theta, args.n_phi)
    t0 = time.perf_counter()
    rows = convergence_table(cartesian_sampler(gaussian_pair), REFERENCE_ERRORS, grid)
    print(f"{'m':>9} {'#nodes':>7} {'sup error':>22} {'reference':>22} {'rel. diff':>10}")
    for r in rows:
        ref = REFERENCE_ERRORS[tuple(r.m)]
        print(f"{str(tuple(r.m)):>9} {r.node_count:>7} {r.sup_error:>22.14f} {ref:>22.14f} {r.sup_error / ref - 1:>10.2e}")
    print(f"grid {grid.n_theta} x {grid.n_phi}, {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
