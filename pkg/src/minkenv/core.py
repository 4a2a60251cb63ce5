"""Minkowski-plane linear algebra.

The plane carries the indefinite product <x, y> = -x1*y1 + x2*y2; the first
coordinate is the timelike axis.  Every function here accepts either a single
vector (``MVec2`` or any length-2 sequence) or a stacked ``(..., 2)`` array, so
the same code serves both pointwise checks and whole sample grids.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

#: Absolute threshold on |<v, v>| below which a vector counts as lightlike.
TAU_LIGHT = 1e-10


class LightlikeInput(ValueError):
    """Raised when a lightlike vector is passed where a unit vector is needed."""


class MVec2(NamedTuple):
    x1: float
    x2: float

    def __add__(self, other):  # type: ignore[override]
        return MVec2(self.x1 + other[0], self.x2 + other[1])

    def __sub__(self, other):
        return MVec2(self.x1 - other[0], self.x2 - other[1])

    def __mul__(self, s):  # type: ignore[override]
        return MVec2(self.x1 * s, self.x2 * s)

    __rmul__ = __mul__

    def __neg__(self):
        return MVec2(-self.x1, -self.x2)


class CausalCharacter(enum.Enum):
    SPACELIKE = 1
    TIMELIKE = -1
    LIGHTLIKE = 0

    @property
    def epsilon(self) -> int:
        return self.value

    @classmethod
    def from_epsilon(cls, eps: int) -> "CausalCharacter":
        return cls(int(eps))


@dataclass(frozen=True)
class PseudoCircleSpec:
    """S^1_1(P, r) when ``sigma == +1``, H^1(P, -r) when ``sigma == -1``."""

    center: MVec2
    radius: float
    sigma: int = 1

    def __post_init__(self):
        if not (np.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"pseudo-circle radius must be positive, got {self.radius!r}")
        if self.sigma not in (1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma!r}")
        object.__setattr__(self, "center", MVec2(*_finite(self.center)))

    def sample(self, half_width: float = 3.0, n: int = 201) -> list[np.ndarray]:
        """Both branches of the pseudo-circle as ``(n, 2)`` polylines.

        ``half_width`` bounds the hyperbolic parameter.
        """
        u = np.linspace(-half_width, half_width, n)
        ch, sh = self.radius * np.cosh(u), self.radius * np.sinh(u)
        c = np.asarray(self.center)
        if self.sigma == 1:
            sheets = [np.stack([sh, ch], -1), np.stack([sh, -ch], -1)]
        else:
            sheets = [np.stack([ch, sh], -1), np.stack([-ch, sh], -1)]
        return [c + s for s in sheets]


def _finite(v) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ValueError(f"expected trailing dimension 2, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinates are not admitted")
    return arr


def _out(arr):
    if np.ndim(arr) == 0:
        return float(arr)
    return arr


def minkowski_dot(u, v):
    """Pseudo-scalar product -u1*v1 + u2*v2 (broadcasts over leading axes)."""
    u, v = _finite(u), _finite(v)
    return _out(-u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1])


def causal_character(v) -> CausalCharacter:
    q = minkowski_dot(v, v)
    if np.ndim(q) != 0:
        raise ValueError("causal_character takes a single vector; use causal_signs for arrays")
    if q > TAU_LIGHT:
        return CausalCharacter.SPACELIKE
    if q < -TAU_LIGHT:
        return CausalCharacter.TIMELIKE
    return CausalCharacter.LIGHTLIKE


def causal_signs(v) -> np.ndarray:
    """Vectorised epsilon (+1, -1 or 0) for a stack of vectors."""
    q = np.asarray(minkowski_dot(v, v))
    return np.where(q > TAU_LIGHT, 1, np.where(q < -TAU_LIGHT, -1, 0))


def normalize_unit(v) -> tuple[MVec2, CausalCharacter]:
    char = causal_character(v)
    if char is CausalCharacter.LIGHTLIKE:
        raise LightlikeInput(f"cannot normalise lightlike vector {tuple(np.asarray(v))}")
    arr = _finite(v)
    w = arr / np.sqrt(abs(minkowski_dot(arr, arr)))
    return MVec2(float(w[0]), float(w[1])), char


def swap(v):
    """The Minkowski-orthogonal partner (x2, x1); <v, swap(v)> = 0 exactly."""
    arr = np.asarray(v, dtype=float)
    out = arr[..., ::-1].copy()
    if isinstance(v, MVec2):
        return MVec2(float(out[0]), float(out[1]))
    return out


def circle_residual(spec: PseudoCircleSpec, p):
    """<p - P, p - P> - sigma*r^2; zero exactly on the pseudo-circle."""
    d = _finite(p) - np.asarray(spec.center)
    return _out(np.asarray(minkowski_dot(d, d)) - spec.sigma * spec.radius**2)
