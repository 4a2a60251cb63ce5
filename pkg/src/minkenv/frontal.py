"""Frontals (a, nu) in the Minkowski plane and their curvature pair (ell, beta).

The frame is evaluated on a uniform grid that is inset by half a step from the
ends of the open parameter interval.  Derivatives of ``a`` and of a supplied
``nu`` come from dual numbers; only the regular-curve fallback (no ``nu``
given) needs a finite difference, because ``nu`` is then built from ``a'``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import causal_signs, minkowski_dot, swap
from .dual import sqrt as dsqrt
from .expr import ExprAst, eval_dual, parse

DEFAULT_SAMPLES = 601
TOL_FRENET = 1e-6


class FrontalError(ValueError):
    pass


class LightlikeFrame(FrontalError):
    pass


class LegendreViolation(FrontalError):
    pass


class MixedCausalCharacter(FrontalError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    ax: ExprAst
    ay: ExprAst
    nux: ExprAst | None = None
    nuy: ExprAst | None = None
    t_min: float = -1.0
    t_max: float = 1.0
    n_samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if not self.t_min < self.t_max:
            raise ValueError(f"empty parameter interval ({self.t_min}, {self.t_max})")
        if self.n_samples < 16:
            raise ValueError("n_samples must be at least 16")
        if (self.nux is None) != (self.nuy is None):
            raise ValueError("supply both components of nu or neither")

    @classmethod
    def from_text(cls, ax: str, ay: str, nux: str | None = None, nuy: str | None = None, **kw):
        return cls(parse(ax), parse(ay),
                   parse(nux) if nux is not None else None,
                   parse(nuy) if nuy is not None else None, **kw)

    @property
    def has_nu(self) -> bool:
        return self.nux is not None

    def grid(self) -> np.ndarray:
        h = (self.t_max - self.t_min) / self.n_samples
        return np.linspace(self.t_min + h / 2, self.t_max - h / 2, self.n_samples)


@dataclass(frozen=True, eq=False)
class FrontalFrame:
    """Per-sample frame data; vectors are stored as ``(n, 2)`` arrays."""

    spec: CurveSpec
    t: np.ndarray
    a: np.ndarray
    a_prime: np.ndarray
    nu: np.ndarray
    nu_prime: np.ndarray
    mu: np.ndarray
    ell: np.ndarray
    beta: np.ndarray
    eps_nu: int
    eps_mu: int
    h: float = field(default=0.0)

    def __len__(self):
        return len(self.t)

    def at(self, t) -> "FrontalFrame":
        """The same frame evaluated at arbitrary parameters (no grid checks)."""
        return _evaluate(self.spec, np.atleast_1d(np.asarray(t, dtype=float)), expect_eps=self.eps_nu)

    def boundary_distance(self, t=None) -> np.ndarray:
        t = self.t if t is None else np.asarray(t)
        return np.minimum(t - self.spec.t_min, self.spec.t_max - t)


def _pair(x: ExprAst, y: ExprAst, t):
    return eval_dual(x, t), eval_dual(y, t)


def _unit_tangent(spec: CurveSpec, t: np.ndarray) -> np.ndarray:
    dx, dy = _pair(spec.ax, spec.ay, t)
    ap = np.stack([dx.der, dy.der], -1)
    return ap / np.sqrt(np.abs(minkowski_dot(ap, ap)))[..., None]


def _fallback_nu_prime(spec: CurveSpec, t: np.ndarray) -> np.ndarray:
    # mu' by a 5-point difference of the AD unit tangent; nu' is its swap
    d = np.minimum(t - spec.t_min, spec.t_max - t)
    step = np.minimum(1e-4 * (1.0 + np.abs(t)), 1e-3 * d)[..., None]
    s = step[..., 0]
    mu_p = (_unit_tangent(spec, t - 2 * s) - 8 * _unit_tangent(spec, t - s)
            + 8 * _unit_tangent(spec, t + s) - _unit_tangent(spec, t + 2 * s)) / (12 * step)
    return swap(mu_p)


def _evaluate(spec: CurveSpec, t: np.ndarray, expect_eps: int | None = None) -> FrontalFrame:
    ax, ay = _pair(spec.ax, spec.ay, t)
    a = np.stack([ax.val, ay.val], -1)
    a_prime = np.stack([ax.der, ay.der], -1)
    if spec.has_nu:
        nx, ny = _pair(spec.nux, spec.nuy, t)
        raw = np.stack([nx.val, ny.val], -1)
        signs = causal_signs(raw)
        if np.any(signs == 0):
            i = int(np.argmax(signs == 0))
            raise LightlikeFrame(f"nu is lightlike at t={t[i]:.6g}")
        eps_nu = int(signs[0])
        if np.any(signs != eps_nu):
            i = int(np.argmax(signs != eps_nu))
            raise MixedCausalCharacter(f"nu changes causal character at t={t[i]:.6g}")
        norm = dsqrt((ny * ny - nx * nx) * eps_nu)
        ux, uy = nx / norm, ny / norm
        nu = np.stack([ux.val, uy.val], -1)
        nu_prime = np.stack([ux.der, uy.der], -1)
    else:
        signs = causal_signs(a_prime)
        if np.any(signs == 0):
            i = int(np.argmax(signs == 0))
            raise LightlikeFrame(f"a' is lightlike (or zero) at t={t[i]:.6g}; supply nu")
        eps_mu = int(signs[0])
        if np.any(signs != eps_mu):
            i = int(np.argmax(signs != eps_mu))
            raise MixedCausalCharacter(f"a' changes causal character at t={t[i]:.6g}")
        mu = a_prime / np.sqrt(np.abs(minkowski_dot(a_prime, a_prime)))[..., None]
        nu = swap(mu)
        nu_prime = _fallback_nu_prime(spec, t)
        eps_nu = -eps_mu
    if expect_eps is not None and eps_nu != expect_eps:
        raise MixedCausalCharacter("causal character differs from the sampled frame")
    eps_mu = -eps_nu
    mu = swap(nu)
    ell = eps_mu * minkowski_dot(mu, nu_prime)
    beta = eps_mu * minkowski_dot(mu, a_prime)
    return FrontalFrame(spec, t, a, a_prime, nu, nu_prime, mu,
                        np.asarray(ell), np.asarray(beta), eps_nu, eps_mu)


def legendre_tolerance(frame: FrontalFrame) -> float:
    return 1e-8 * (1.0 + float(np.max(np.linalg.norm(frame.a_prime, axis=-1))))


def build_frame(spec: CurveSpec) -> FrontalFrame:
    """Sample the frame {mu, nu} and curvature (ell, beta) on the CurveSpec grid."""
    t = spec.grid()
    frame = _evaluate(spec, t)
    frame = replace(frame, h=(spec.t_max - spec.t_min) / spec.n_samples)
    if spec.has_nu:
        leg = np.abs(minkowski_dot(frame.a_prime, frame.nu))
        tol = legendre_tolerance(frame)
        if np.any(leg > tol):
            i = int(np.argmax(leg))
            raise LegendreViolation(
                f"<a', nu> = {leg[i]:.3g} at t={t[i]:.6g} exceeds tolerance {tol:.3g}")
    return frame


class IndexOutOfRange(IndexError):
    pass


def curvature_at(frame: FrontalFrame, i: int) -> tuple[float, float]:
    if not 0 <= i < len(frame):
        raise IndexOutOfRange(f"sample index {i} outside 0..{len(frame) - 1}")
    return float(frame.ell[i]), float(frame.beta[i])


def runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of True as inclusive (start, end) index pairs."""
    m = np.concatenate([[False], np.asarray(mask, bool), [False]])
    edges = np.flatnonzero(np.diff(m.astype(int)))
    return [(int(s), int(e) - 1) for s, e in zip(edges[::2], edges[1::2])]


def density_run_limit(n: int) -> float:
    """Longest run of zeros still compatible with 'nonzero on a dense set'."""
    return max(2.0, n / 200.0)


@dataclass(frozen=True)
class SingularSet:
    index_ranges: list[tuple[int, int]]
    intervals: list[tuple[float, float]]
    dense_nonzero: bool

    def __len__(self):
        return len(self.index_ranges)


def singular_set(frame: FrontalFrame, tol_beta: float = 1e-8) -> SingularSet:
    if tol_beta <= 0:
        raise ValueError("tol_beta must be positive")
    ranges = runs(np.abs(frame.beta) <= tol_beta)
    limit = density_run_limit(len(frame))
    dense = all(e - s + 1 <= limit for s, e in ranges)
    return SingularSet(ranges, [(float(frame.t[s]), float(frame.t[e])) for s, e in ranges], dense)


def _local_step(frame: FrontalFrame) -> np.ndarray:
    h = frame.h if frame.h > 0 else (frame.spec.t_max - frame.spec.t_min) / frame.spec.n_samples
    return 1e-3 * np.minimum(h, frame.boundary_distance())


def local_derivative(fn, t: np.ndarray, step: np.ndarray) -> np.ndarray:
    """Five-point central difference of a vector function ``fn(t) -> (n, 2)``."""
    s = step[..., None]
    return (fn(t - 2 * step) - 8 * fn(t - step) + 8 * fn(t + step) - fn(t + 2 * step)) / (12 * s)


def frenet_residuals(frame: FrontalFrame) -> dict[str, float]:
    """Sup-norm residuals of nu' = ell*mu, mu' = ell*nu and a' = beta*mu.

    nu' and mu' are measured by finite differences of the re-evaluated frame,
    independently of the dual-number derivatives stored on the frame.
    """
    step = _local_step(frame)
    nu_p = local_derivative(lambda s: frame.at(s).nu, frame.t, step)
    mu_p = local_derivative(lambda s: frame.at(s).mu, frame.t, step)
    ell = frame.ell[:, None]
    return {
        "nu": float(np.max(np.abs(nu_p - ell * frame.mu))),
        "mu": float(np.max(np.abs(mu_p - ell * frame.nu))),
        "a": float(np.max(np.abs(frame.a_prime - frame.beta[:, None] * frame.mu))),
    }


def frame_invariants(frame: FrontalFrame) -> dict[str, float]:
    """Sup-norm deviations of the unit/orthogonality/Legendre identities."""
    return {
        "nu_unit": float(np.max(np.abs(minkowski_dot(frame.nu, frame.nu) - frame.eps_nu))),
        "mu_unit": float(np.max(np.abs(minkowski_dot(frame.mu, frame.mu) - frame.eps_mu))),
        "orthogonal": float(np.max(np.abs(minkowski_dot(frame.mu, frame.nu)))),
        "legendre": float(np.max(np.abs(minkowski_dot(frame.a_prime, frame.nu)))),
    }
