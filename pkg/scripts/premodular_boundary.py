#!/usr/bin/env python3
"""Scan |Z^(n)| over interior (r, s) samples crossed with lattice
parameters on the fundamental-domain boundary, and report the smallest
value found.  The family is expected to stay bounded away from zero
there; the scan is the empirical check.

Usage:
    python scripts/premodular_boundary.py 2 --threads 4
"""

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from tvspec import (
    boundary_nonvanishing_scan,
    boundary_tau_samples,
    rs_grid_default,
)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("n", type=int, choices=(1, 2, 3, 4), help="family index")
    ap.add_argument("--rs", type=int, nargs=2, default=(20, 20),
                    metavar=("NR", "NS"), help="(r, s) grid (default 20 20)")
    ap.add_argument("--tau-count", type=int, default=60,
                    help="boundary samples per arc piece (default 60)")
    ap.add_argument("--floor", type=float, default=1e-8)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args(argv)

    rs = rs_grid_default(args.rs[0], args.rs[1])
    taus = boundary_tau_samples(args.tau_count)
    print(f"Z^({args.n}): {len(rs)} (r, s) samples x {len(taus)} boundary tau "
          f"= {len(rs) * len(taus)} evaluations")

    t0 = time.perf_counter()
    if args.threads > 1:
        with ThreadPoolExecutor(args.threads) as pool:
            out = boundary_nonvanishing_scan(args.n, rs_grid=rs, tau_grid=taus,
                                             floor=args.floor, mapper=pool.map)
    else:
        out = boundary_nonvanishing_scan(args.n, rs_grid=rs, tau_grid=taus,
                                         floor=args.floor)
    dt = time.perf_counter() - t0

    r, s, tau = out["argmin"]
    print(f"min |Z^({args.n})| = {out['min_abs']:.6e}")
    print(f"  at (r, s) = ({r:.6f}, {s:.6f}), tau = {tau:.6f}")
    print(f"  floor {args.floor:.1e}: "
          f"{'clear' if out['passed'] else 'VIOLATED'}  ({dt:.1f}s)")
    return 0 if out["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
