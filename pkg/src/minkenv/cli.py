"""Command-line front end.

    minkenv example <n>      built-in family n = 1..5
    minkenv run <config>     analyse a family from a config file
    minkenv compare <config> E1 / E2 / D distances only
    minkenv render <config>  analyse and always write the SVG
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import config as config_mod
from .config import ConfigError, FamilyConfig
from .dual import DomainError
from .fixtures import fixture
from .frontal import FrontalError
from .output import write_outputs
from .pipeline import analyze, compare

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INPUT = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--samples", type=int, help="grid size (overrides the config)")
    p.add_argument("--out-dir", help="directory for CSV/SVG output")
    p.add_argument("--csv", action="store_true", help="write <name>.csv")
    p.add_argument("--svg", action="store_true", help="write <name>.svg")
    p.add_argument("--tol", type=float, default=1.0, help="scale every pass/fail tolerance")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="minkenv", description="Envelopes of pseudo-circle families "
                                 "in the Minkowski plane.")
    sub = ap.add_subparsers(dest="command", required=True)
    ex = sub.add_parser("example", parents=[common], help="run a built-in family")
    ex.add_argument("n", type=int, choices=range(1, 6), metavar="n", help="1..5")
    for name, text in (("run", "run the full pipeline on a config"),
                       ("compare", "E1/E2/D distances only"),
                       ("render", "run the pipeline and write the SVG")):
        sp = sub.add_parser(name, parents=[common], help=text)
        sp.add_argument("config", help="path to a key = value config file")
    return ap


def _apply_flags(cfg: FamilyConfig, args) -> FamilyConfig:
    kw = {}
    if args.samples is not None:
        kw["n_samples"] = args.samples
    if args.out_dir is not None:
        kw["out_dir"] = args.out_dir
    if args.csv:
        kw["csv"] = True
    if args.svg or args.command == "render":
        kw["svg"] = True
    return replace(cfg, **kw).validate() if kw else cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not args.tol > 0:
        print("error: --tol must be positive", file=sys.stderr)
        return EXIT_INPUT
    expected = None
    try:
        if args.command == "example":
            fx = fixture(args.n)
            cfg, expected = fx.config, fx.expected_class
        else:
            cfg = config_mod.load(args.config)
        cfg = _apply_flags(cfg, args)
        if args.command == "compare":
            cmp = compare(cfg, tol_scale=args.tol)
            print(cmp.report())
            return EXIT_OK if cmp.passed else EXIT_CHECK_FAILED
        res = analyze(cfg, tol_scale=args.tol, expected_class=expected)
    except (ConfigError, DomainError, FrontalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(res.report())
    try:
        for path in write_outputs(res, cfg.out_dir, cfg.csv, cfg.svg):
            print(f"wrote {path}")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK if res.passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
