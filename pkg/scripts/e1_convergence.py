"""Chord intersections of C(t0) and C(t0+eps) as eps shrinks.

Prints the distance of the raw chord points and of the Richardson limit to
the envelope points at t0, for Examples 1, 2 and 4.  Example 2 has no real
chord points at any scale: neighbouring circles of that family are disjoint.
"""

import argparse

import numpy as np

from minkenv.discriminant import NoConvergence, compare_sets, e1_intersections, e1_limit
from minkenv.envelope import creative_solve, envelope_branches
from minkenv.fixtures import fixture
from minkenv.pipeline import build_family

PARAMS = {1: 1.0, 2: 0.5, 4: -1.0}


def main(argv=None):
    ap = argparse.ArgumentParser(description="E1 chord convergence table")
    ap.add_argument("--eps", type=float, nargs="+", default=[1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4])
    args = ap.parse_args(argv)
    for n, t0 in PARAMS.items():
        fam = build_family(fixture(n).config)
        e2 = np.concatenate([b.trace(np.array([t0])) for b in envelope_branches(creative_solve(fam))])
        print(f"Example {n}, t0 = {t0}")
        for eps in args.eps:
            pts = e1_intersections(fam, t0, eps)
            if not pts:
                print(f"  eps={eps:8.1e}  no real intersection")
                continue
            d = compare_sets(np.array(pts), e2).hausdorff
            print(f"  eps={eps:8.1e}  {len(pts)} point(s), distance to envelope {d:.3e}")
        try:
            lim = e1_limit(fam, t0, 1e-3)
            d = compare_sets(np.array(lim.points), e2).hausdorff
            orders = ", ".join(f"{o:.2f}" for o in lim.orders)
            print(f"  Richardson limit from eps0=1e-3: distance {d:.3e}, orders [{orders}]")
        except NoConvergence as exc:
            print(f"  Richardson limit: {exc}")


if __name__ == "__main__":
    main()
