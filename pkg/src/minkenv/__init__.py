"""Envelopes of pseudo-circle families in the Minkowski plane."""

from .core import MVec2, PseudoCircleSpec, minkowski_dot
from .discriminant import compare_sets, decompose_D, discriminant_at, discriminant_set, e1_limit
from .envelope import (
    CountClass, PseudoCircleFamily, count_classification, creative_solve, envelope_branches,
    envelope_verify,
)
from .expr import parse
from .frontal import CurveSpec, build_frame

__all__ = [
    "MVec2", "PseudoCircleSpec", "minkowski_dot", "parse", "CurveSpec", "build_frame",
    "PseudoCircleFamily", "creative_solve", "envelope_branches", "envelope_verify",
    "count_classification", "CountClass", "discriminant_at", "discriminant_set", "e1_limit",
    "compare_sets", "decompose_D",
]
