"""Run the five built-in families and write their CSV/SVG output.

    python scripts/reproduce_examples.py --out-dir out/examples
"""

import argparse
import sys
from dataclasses import replace

from minkenv.fixtures import ALL, fixture
from minkenv.output import write_outputs
from minkenv.pipeline import analyze


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="out/examples")
    ap.add_argument("--samples", type=int, default=601)
    args = ap.parse_args(argv)

    ok = True
    print(f"{'example':>7}  {'class':<16} {'branches':>8}  {'D slices':<30} result")
    for n in ALL:
        fx = fixture(n, n_samples=args.samples)
        res = analyze(fx.config, expected_class=fx.expected_class)
        kinds = {}
        for sl in res.slices:
            kinds[str(sl.kind)] = kinds.get(str(sl.kind), 0) + 1
        slices = ", ".join(f"{v} {k}" for k, v in sorted(kinds.items()))
        print(f"{n:>7}  {str(res.count.kind):<16} {len(res.branches):>8}  {slices:<30} "
              f"{'PASS' if res.passed else 'FAIL ' + res.first_failure.name}")
        write_outputs(res, args.out_dir, True, True)
        ok &= res.passed
    print(f"outputs in {args.out_dir}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
