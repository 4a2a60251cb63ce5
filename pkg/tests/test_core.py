import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from minkenv.core import (
    CausalCharacter, LightlikeInput, MVec2, PseudoCircleSpec, causal_character, causal_signs,
    circle_residual, minkowski_dot, normalize_unit, swap,
)

coord = st.floats(-1e3, 1e3, allow_nan=False)
vec = st.tuples(coord, coord)


def test_dot_signature():
    assert minkowski_dot((1, 0), (1, 0)) == -1.0
    assert minkowski_dot((0, 1), (0, 1)) == 1.0
    assert minkowski_dot((2, 3), (5, 7)) == -10 + 21


def test_dot_broadcasts():
    u = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.allclose(minkowski_dot(u, (1.0, 1.0)), [1.0, 1.0])


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        minkowski_dot((math.nan, 0), (0, 0))
    with pytest.raises(ValueError):
        minkowski_dot((1, 2, 3), (1, 2, 3))


@given(vec, vec)
def test_dot_symmetric(u, v):
    assert minkowski_dot(u, v) == minkowski_dot(v, u)


def test_causal_character():
    assert causal_character((0, 1)) is CausalCharacter.SPACELIKE
    assert causal_character((1, 0)) is CausalCharacter.TIMELIKE
    assert causal_character((1, 1)) is CausalCharacter.LIGHTLIKE
    assert CausalCharacter.TIMELIKE.epsilon == -1
    assert list(causal_signs([[0, 1], [1, 0], [2, 2]])) == [1, -1, 0]


def test_normalize_lightlike_raises():
    with pytest.raises(LightlikeInput):
        normalize_unit((3.0, -3.0))


@given(vec)
def test_normalize_unit(v):
    q = minkowski_dot(v, v)
    if abs(q) <= 1e-6:
        return
    w, char = normalize_unit(v)
    assert minkowski_dot(w, w) == pytest.approx(char.epsilon, abs=1e-9)


@given(vec)
def test_swap_is_orthogonal_with_opposite_character(v):
    w = swap(MVec2(*v))
    assert isinstance(w, MVec2)
    assert minkowski_dot(v, w) == 0.0
    assert minkowski_dot(w, w) == -minkowski_dot(v, v)


def test_mvec_arithmetic():
    a, b = MVec2(1.0, 2.0), MVec2(0.5, -1.0)
    assert a + b == MVec2(1.5, 1.0)
    assert a - b == MVec2(0.5, 3.0)
    assert a * 2 == MVec2(2.0, 4.0)
    assert -a == MVec2(-1.0, -2.0)


@pytest.mark.parametrize("sigma", [1, -1])
def test_pseudo_circle_samples_lie_on_circle(sigma):
    spec = PseudoCircleSpec(MVec2(0.3, -1.0), 1.7, sigma)
    for sheet in spec.sample():
        assert np.max(np.abs(circle_residual(spec, sheet))) < 1e-11


def test_pseudo_circle_validation():
    with pytest.raises(ValueError):
        PseudoCircleSpec(MVec2(0, 0), 0.0, 1)
    with pytest.raises(ValueError):
        PseudoCircleSpec(MVec2(0, 0), 1.0, 2)


def test_circle_residual_value():
    spec = PseudoCircleSpec(MVec2(0, 1), 1.0, 1)
    assert circle_residual(spec, (0, 2)) == 0.0
    assert circle_residual(spec, (0, 1)) == -1.0
