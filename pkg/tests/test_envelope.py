import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minkenv.envelope import (
    CountClass, EnvelopeCurve, NonPositiveRadius, NotCreative, PseudoCircleFamily, bump,
    count_classification, creative_residual, creative_solve, envelope_branches, envelope_verify,
    nutilde_on_grid, uncountable_witnesses,
)
from minkenv.core import minkowski_dot
from minkenv.frontal import CurveSpec, build_frame

from conftest import branches, family


def _by_value(curves, t_index):
    return sorted(tuple(c.points[t_index]) for c in curves)


def test_example1_branches():
    fam = family(1)
    sol = creative_solve(fam)
    assert fam.case_sign == -1
    assert np.allclose(sol.theta, 0.0, atol=1e-12)
    bs = envelope_branches(sol)
    t = fam.t
    plus = np.column_stack([2 * t**3, 2 * np.sqrt(1 + t**6)])
    got = sorted(bs, key=lambda c: c.points[300, 1])
    assert np.max(np.abs(got[0].points)) <= 1e-9
    assert np.max(np.abs(got[1].points - plus)) <= 1e-9


def test_example2_unique_branch():
    fam = family(2)
    sol = creative_solve(fam)
    assert np.all(sol.theta == 0.0)
    bs = envelope_branches(sol)
    assert len(bs) == 1
    t = fam.t
    f = np.column_stack([np.cosh(t) + (2 - t) * np.sinh(t), np.sinh(t) + (2 - t) * np.cosh(t)])
    assert np.max(np.abs(bs[0].points - f)) <= 1e-9
    p = bs[0].trace(np.array([0.0]))[0]
    assert p == pytest.approx([1.0, 2.0], abs=1e-12)


def test_example3_not_creative():
    sol = creative_solve(family(3))
    assert isinstance(sol, NotCreative) and not sol
    assert abs(sol.r_prime) < abs(sol.beta)
    assert count_classification(family(3)).kind is CountClass.NO_ENVELOPE


def test_example4_points_at_minus_one():
    pts = sorted((tuple(b.trace(np.array([-1.0]))[0]) for b in branches(4)), key=lambda p: p[1])
    assert pts[0] == pytest.approx((0.5, -5 / 6), abs=1e-9)
    assert pts[1] == pytest.approx((0.5, 7 / 6), abs=1e-9)


def test_example4_matches_closed_form():
    t = family(4).t
    s = np.sqrt(-t * (t + 2))
    want = [np.column_stack([t**2 / 2 + k * (t + 1) / s, t**2 / 2 + t**3 / 3 + k / s]) for k in (1, -1)]
    got = [b.points for b in branches(4)]
    for w in want:
        assert min(np.max(np.abs(g - w)) for g in got) <= 1e-9 * np.max(np.abs(w))


@pytest.mark.parametrize("n", [1, 2, 4, 5])
def test_branches_verify(n):
    for b in branches(n):
        rep = envelope_verify(b, family(n), 1e-6)
        assert rep.passed, rep


@pytest.mark.parametrize("n", [1, 2, 4, 5])
def test_creative_identity_and_unit_norm(n):
    fam = family(n)
    sol = creative_solve(fam)
    for br in sol.branches:
        assert creative_residual(sol, br) <= 1e-8
        nt = nutilde_on_grid(sol, br)
        assert np.max(np.abs(minkowski_dot(nt, nt) - fam.sigma)) <= 1e-9


def test_case_minus_one_branch_symmetry():
    fam = family(4)
    sol = creative_solve(fam)
    plus, minus = (nutilde_on_grid(sol, b) for b in sol.branches)
    assert np.max(np.abs(plus - minus - 2 * np.cosh(sol.theta)[:, None] * fam.frame.nu)) <= 1e-9


def test_corrupted_curve_fails_verification():
    fam = family(2)
    b = branches(2)[0]
    bad = EnvelopeCurve(b.t, b.points + [0.0, 0.01], 0, fam)
    rep = envelope_verify(bad, fam, 1e-6)
    assert not rep.passed
    d = b.points - fam.frame.a
    assert rep.max_membership_residual == pytest.approx(np.max(np.abs(0.02 * d[:, 1] + 1e-4)), rel=1e-6)


def test_classification():
    assert count_classification(family(1)).kind is CountClass.EXACTLY_TWO
    assert count_classification(family(2)).kind is CountClass.UNIQUE
    assert count_classification(family(4)).kind is CountClass.EXACTLY_TWO
    assert count_classification(family(5)).kind is CountClass.UNCOUNTABLY_MANY


def test_witnesses_distinct_and_valid():
    fam = family(5)
    ws = uncountable_witnesses(creative_solve(fam))
    assert len(ws) == 3
    for w in ws:
        assert envelope_verify(w, fam, 1e-6).passed
    for i in range(3):
        for j in range(i + 1, 3):
            assert np.max(np.linalg.norm(ws[i].points - ws[j].points, axis=-1)) > 0.1


def test_no_witnesses_without_flat_interval():
    assert uncountable_witnesses(creative_solve(family(1))) == []


def test_bump():
    t = np.linspace(-1, 3, 401)
    b = bump(t, 0.0, 2.0)
    assert b.max() == pytest.approx(1.0)
    assert np.all(b[(t <= 0) | (t >= 2)] == 0)


def test_nonpositive_radius():
    with pytest.raises(NonPositiveRadius):
        PseudoCircleFamily.build(family(2).frame, "t", 1)


def test_equal_rate_case_gives_unique():
    # timelike frontal a = (cosh, sinh), |r'| = |beta| = 1 for r = 5 + t
    fr = family(2).frame
    fam = PseudoCircleFamily.build(fr, "5+t", 1)
    assert count_classification(fam).kind is CountClass.UNIQUE


def test_strict_inequality_gives_two():
    fam = PseudoCircleFamily.build(family(2).frame, "9-2*t", 1)
    assert count_classification(fam).kind is CountClass.EXACTLY_TWO
    assert len(envelope_branches(creative_solve(fam))) == 2


@settings(max_examples=15, deadline=None)
@given(st.floats(0.5, 3.0), st.floats(-0.9, 0.9))
def test_case_minus_one_never_unique(r0, slope):
    # sigma = -1 on the timelike frontal of Example 2 gives case_sign = -1
    spec = CurveSpec.from_text("cosh(t)", "sinh(t)", "cosh(t)", "sinh(t)", t_min=-1.0, t_max=1.0,
                               n_samples=101)
    fam = PseudoCircleFamily.build(build_frame(spec), f"{r0 + 1.0!r}+{slope!r}*t", -1)
    assert fam.case_sign == -1
    assert count_classification(fam).kind is CountClass.EXACTLY_TWO
