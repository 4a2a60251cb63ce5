"""Tangency residual <f', f - a> with f' from grid differences versus a local stencil.

Second-order grid differences leave an O(h^2) residual that exceeds 1e-6 on
Examples 2 and 4 at n = 601; re-evaluating the branch on a five-point stencil
with a step far below h does not.
"""

import numpy as np

from minkenv.core import minkowski_dot
from minkenv.envelope import creative_solve, envelope_branches, envelope_verify, grid_derivative
from minkenv.fixtures import fixture
from minkenv.pipeline import build_family


def main():
    print(f"{'example':>7} {'branch':>6} {'2nd-order grid':>15} {'4th-order grid':>15} {'local stencil':>14}")
    for n in (1, 2, 4, 5):
        fam = build_family(fixture(n).config)
        h = fam.frame.h
        for b in envelope_branches(creative_solve(fam)):
            d = b.points - fam.frame.a
            g2 = np.gradient(b.points, h, axis=0, edge_order=2)
            r2 = np.max(np.abs(minkowski_dot(g2, d)))
            r4 = np.max(np.abs(minkowski_dot(grid_derivative(b.points, h), d)))
            rl = envelope_verify(b, fam).max_tangency_residual
            print(f"{n:>7} {b.branch_id:>6} {r2:>15.2e} {r4:>15.2e} {rl:>14.2e}")


if __name__ == "__main__":
    main()
