"""Discriminant (D) and limiting-intersection (E1) envelopes of a pseudo-circle family.

With F(p, t) = <p - a(t), p - a(t)> - sigma*r(t)^2, both constructions reduce to
intersecting a straight line with one pseudo-circle: F_t = 0 is affine in p, and
so is the difference F(., t0) - F(., t0 + eps).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .core import MVec2, PseudoCircleSpec, minkowski_dot
from .envelope import PseudoCircleFamily
from .frontal import runs

TOL_D = 1e-9
DOUBLE_ROOT_RTOL = 1e-12
# five Richardson table entries below this count as already converged
CONVERGED_ATOL = 1e-9


class SliceKind(enum.Enum):
    TWO_POINTS = "TwoPoints"
    ONE_POINT = "OnePoint"
    EMPTY = "Empty"
    WHOLE_CIRCLE = "WholeCircle"

    def __str__(self):
        return self.value


@dataclass(eq=False)
class DiscriminantSlice:
    t: float
    kind: SliceKind
    points: tuple[MVec2, ...] = ()
    circle: PseudoCircleSpec | None = None
    polylines: list[np.ndarray] = field(default_factory=list)


@dataclass(frozen=True)
class SetComparison:
    sup_AtoB: float
    sup_BtoA: float
    hausdorff: float


class DegenerateChord(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class EmptyInput(ValueError):
    pass


def _family_at(fam: PseudoCircleFamily, t: float):
    fr = fam.frame.at(t)
    r, rp = fam.radius_at(t)
    return fr.a[0], fr.a_prime[0], float(r[0]), float(rp[0])


def slice_scale(r: float, a_prime) -> float:
    return 1.0 + r * r + float(np.dot(a_prime, a_prime))


def F_eval(fam: PseudoCircleFamily, p, t: float) -> tuple[float, float]:
    """F and dF/dt at point p and parameter t."""
    a, ap, r, rp = _family_at(fam, t)
    d = np.asarray(p, float) - a
    F = minkowski_dot(d, d) - fam.sigma * r * r
    Ft = -2.0 * minkowski_dot(d, ap) - 2.0 * fam.sigma * r * rp
    return float(F), float(Ft)


def intersect_line_pseudocircle(alpha: float, gamma: float, kappa: float,
                                center, radius: float, sigma: int) -> list[MVec2]:
    """Real points of {alpha*x1 + gamma*x2 + kappa = 0} on {<x - P, x - P> = sigma*r^2}.

    The line is parametrised by the coordinate whose coefficient is smaller in
    magnitude, so the solve never divides by a near-zero coefficient.  When the
    line is parallel to an asymptote the quadratic term vanishes and the single
    remaining root (if any) is returned.
    """
    c = np.asarray(center, float)
    if alpha == 0.0 and gamma == 0.0:
        raise DegenerateChord("line coefficients vanish")
    k0 = kappa + alpha * c[0] + gamma * c[1]
    if abs(alpha) >= abs(gamma):
        k, m = -gamma / alpha, -k0 / alpha
        A, B, C = 1.0 - k * k, -2.0 * k * m, -(m * m + sigma * radius**2)

        def to_point(s):
            return MVec2(float(c[0] + k * s + m), float(c[1] + s))
    else:
        k, m = -alpha / gamma, -k0 / gamma
        A, B, C = k * k - 1.0, 2.0 * k * m, m * m - sigma * radius**2

        def to_point(s):
            return MVec2(float(c[0] + s), float(c[1] + k * s + m))
    # C is formed by cancellation between m^2 and r^2, so judge the
    # discriminant against the size of those terms, not against C itself
    term_scale = B * B + 4.0 * abs(A) * (m * m + radius**2)
    return [to_point(s) for s in _real_roots(A, B, C, term_scale)]


def _real_roots(A: float, B: float, C: float, term_scale: float | None = None) -> list[float]:
    if abs(A) <= 4 * np.finfo(float).eps:
        return [] if B == 0.0 else [-C / B]
    disc = B * B - 4.0 * A * C
    if term_scale is None:
        term_scale = max(B * B, abs(4.0 * A * C))
    if abs(disc) <= DOUBLE_ROOT_RTOL * term_scale:
        return [-B / (2.0 * A)]
    if disc < 0:
        return []
    q = -0.5 * (B + np.copysign(np.sqrt(disc), B))
    if q == 0.0:
        return [0.0]
    return sorted([q / A, C / q])


def discriminant_at(fam: PseudoCircleFamily, t: float) -> DiscriminantSlice:
    """Solve F = F_t = 0 at a single parameter."""
    a, ap, r, rp = _family_at(fam, t)
    s = fam.sigma
    # F_t = alpha*x1 + gamma*x2 + kappa
    alpha, gamma = 2.0 * ap[0], -2.0 * ap[1]
    kappa = 2.0 * minkowski_dot(a, ap) - 2.0 * s * r * rp
    tol = TOL_D * slice_scale(r, ap)
    circle = PseudoCircleSpec(MVec2(float(a[0]), float(a[1])), r, s)
    if max(abs(alpha), abs(gamma), abs(kappa)) <= tol:
        return DiscriminantSlice(float(t), SliceKind.WHOLE_CIRCLE, (), circle)
    if max(abs(alpha), abs(gamma)) <= tol:
        return DiscriminantSlice(float(t), SliceKind.EMPTY, (), circle)
    pts = intersect_line_pseudocircle(alpha, gamma, kappa, a, r, s)
    kind = {0: SliceKind.EMPTY, 1: SliceKind.ONE_POINT, 2: SliceKind.TWO_POINTS}[len(pts)]
    return DiscriminantSlice(float(t), kind, tuple(pts), circle)


def discriminant_set(fam: PseudoCircleFamily, grid=None, circle_width: float = 3.0,
                     circle_samples: int = 201) -> list[DiscriminantSlice]:
    """One slice per grid parameter (the family's own grid by default)."""
    grid = fam.t if grid is None else np.asarray(grid, float)
    out = []
    for t in grid:
        sl = discriminant_at(fam, float(t))
        if sl.kind is SliceKind.WHOLE_CIRCLE:
            sl.polylines = sl.circle.sample(circle_width, circle_samples)
        out.append(sl)
    return out


def e1_intersections(fam: PseudoCircleFamily, t0: float, eps: float) -> list[MVec2]:
    """Real points of C(t0) intersected with C(t0 + eps)."""
    if eps == 0:
        raise ValueError("eps must be non-zero")
    a0, ap0, r0, _ = _family_at(fam, t0)
    a1, _, r1, _ = _family_at(fam, t0 + eps)
    delta = a1 - a0
    w = delta / eps
    # (F(., t0) - F(., t0+eps))/eps in centred coordinates v = p - a0:
    #   2<v, w> - <delta, delta>/eps + sigma*(r1 - r0)*(r1 + r0)/eps
    alpha, gamma = -2.0 * w[0], 2.0 * w[1]
    const = -minkowski_dot(delta, delta) / eps + fam.sigma * (r1 - r0) * (r1 + r0) / eps
    tol = TOL_D * slice_scale(r0, ap0)
    if max(abs(alpha), abs(gamma), abs(const)) <= tol:
        raise DegenerateChord(f"C({t0:.6g}) and C({t0 + eps:.6g}) coincide")
    if max(abs(alpha), abs(gamma)) <= tol:
        return []
    kappa = const - alpha * a0[0] - gamma * a0[1]
    return intersect_line_pseudocircle(alpha, gamma, kappa, a0, r0, fam.sigma)


@dataclass(frozen=True)
class E1Limit:
    t0: float
    points: list[MVec2]
    orders: list[float]
    scales: tuple[float, ...]
    passed: bool


def _match(levels: list[np.ndarray]) -> list[np.ndarray]:
    """Order each level's points so row k follows one trajectory.

    Assignment minimises the summed second difference, i.e. nearest neighbour
    to the linear prediction from the two coarser scales.
    """
    from itertools import permutations

    base = levels[0]
    best, best_cost = None, np.inf
    for p1 in permutations(range(len(base))):
        for p2 in permutations(range(len(base))):
            l1, l2 = levels[1][list(p1)], levels[2][list(p2)]
            cost = np.sum(np.linalg.norm(base - 2 * l1 + l2, axis=-1)) + \
                np.sum(np.linalg.norm(base - l1, axis=-1))
            if cost < best_cost:
                best, best_cost = [base, l1, l2], cost
    return best


def e1_limit(fam: PseudoCircleFamily, t0: float, eps0: float = 1e-3,
             min_order: float = 0.9) -> E1Limit:
    """Extrapolate chord intersections at eps0, eps0/2, eps0/4 to eps -> 0.

    Uses the full Richardson table for an expansion in integer powers of eps
    and reports the observed order log2(|P(e) - P(e/2)| / |P(e/2) - P(e/4)|).
    """
    sl = discriminant_at(fam, t0)
    if sl.kind is SliceKind.WHOLE_CIRCLE:
        raise ValueError(f"t0={t0:.6g} is a whole-circle parameter")
    scales = (eps0, eps0 / 2, eps0 / 4)
    levels = [np.array(e1_intersections(fam, t0, e), float).reshape(-1, 2) for e in scales]
    counts = {len(l) for l in levels}
    if counts == {0}:
        raise NoConvergence(f"no real chord intersections near t0={t0:.6g} at any scale")
    if len(counts) != 1:
        raise NoConvergence(f"intersection count changes across scales: {[len(l) for l in levels]}")
    p0, p1, p2 = _match(levels)
    r1a, r1b = 2 * p1 - p0, 2 * p2 - p1
    limit = (4 * r1b - r1a) / 3
    d01 = np.linalg.norm(p0 - p1, axis=-1)
    d12 = np.linalg.norm(p1 - p2, axis=-1)
    scale = 1.0 + np.linalg.norm(p2, axis=-1)
    orders = []
    for a, b, s in zip(d01, d12, scale):
        if a <= CONVERGED_ATOL * s and b <= CONVERGED_ATOL * s:
            orders.append(float("inf"))
        elif b == 0 or a == 0:
            orders.append(float("nan"))
        else:
            orders.append(float(np.log2(a / b)))
    passed = all(o >= min_order for o in orders)
    if not passed:
        raise NoConvergence(f"observed orders {orders} below {min_order} at t0={t0:.6g}")
    return E1Limit(float(t0), [MVec2(*map(float, q)) for q in limit], orders, scales, passed)


def compare_sets(A, B, chunk: int = 2048) -> SetComparison:
    """Directed sup-min distances and Hausdorff distance (Euclidean, brute force)."""
    A = np.asarray(A, float).reshape(-1, 2)
    B = np.asarray(B, float).reshape(-1, 2)
    if len(A) == 0 or len(B) == 0:
        raise EmptyInput("compare_sets needs two non-empty point clouds")

    def directed(X, Y):
        worst = 0.0
        for i in range(0, len(X), chunk):
            d = np.linalg.norm(X[i:i + chunk, None, :] - Y[None, :, :], axis=-1)
            worst = max(worst, float(np.max(np.min(d, axis=1))))
        return worst

    ab, ba = directed(A, B), directed(B, A)
    return SetComparison(ab, ba, max(ab, ba))


@dataclass(eq=False)
class DDecomposition:
    regular_part: np.ndarray
    regular_t: np.ndarray
    singular_circles: list[PseudoCircleSpec]
    singular_t: list[tuple[float, float]]


def decompose_D(fam: PseudoCircleFamily,
                slices: list[DiscriminantSlice] | None = None) -> DDecomposition:
    """Split D into its point part and the whole circles at singular parameters."""
    slices = discriminant_set(fam) if slices is None else slices
    pts, ts = [], []
    for sl in slices:
        for p in sl.points:
            pts.append(p)
            ts.append(sl.t)
    whole = np.array([sl.kind is SliceKind.WHOLE_CIRCLE for sl in slices])
    circles, spans = [], []
    for s, e in runs(whole):
        circles.append(slices[(s + e) // 2].circle)
        spans.append((slices[s].t, slices[e].t))
    return DDecomposition(np.array(pts, float).reshape(-1, 2), np.array(ts, float),
                          circles, spans)
