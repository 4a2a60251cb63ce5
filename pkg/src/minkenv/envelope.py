"""Creativity, envelope construction and envelope counting for pseudo-circle families.

A family is C(a(t), sigma*r(t)) = {x : <x - a, x - a> = sigma*r^2}.  It creates an
envelope exactly when a unit field nu~ with <nu~, nu~> = sigma solves

    r' + sigma * beta * <nu~, mu> = 0,

and every envelope is then f = a + r*nu~.  Writing nu~ in the frame {mu, nu}
with a hyperbolic angle theta leaves two cases, selected by
``case_sign = sigma * eps_mu``:

* ``+1``: nu~ = s_mu*cosh(theta)*mu + s_nu*sinh(theta)*nu, cosh(theta) = |r'/beta|
* ``-1``: nu~ = sinh(theta)*mu + s_nu*cosh(theta)*nu,      sinh(theta) = r'/beta
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import minkowski_dot
from .expr import ExprAst, eval_dual, parse
from .frontal import (FrontalFrame, density_run_limit, local_derivative, runs,
                      singular_set)

TOL_CR = 1e-8
TOL_MERGE = 1e-9
TOL_ENV = 1e-6
WITNESS_AMPLITUDES = (0.0, 1.0, 2.0)


class NonPositiveRadius(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PseudoCircleFamily:
    frame: FrontalFrame
    r_expr: ExprAst
    sigma: int
    r: np.ndarray
    r_prime: np.ndarray

    @classmethod
    def build(cls, frame: FrontalFrame, r: ExprAst | str, sigma: int = 1) -> "PseudoCircleFamily":
        if sigma not in (1, -1):
            raise ValueError("sigma must be +1 or -1")
        expr = parse(r) if isinstance(r, str) else r
        d = eval_dual(expr, frame.t)
        if np.any(d.val <= 0):
            i = int(np.argmax(d.val <= 0))
            raise NonPositiveRadius(f"radius must be positive; r({frame.t[i]:.6g}) = {d.val[i]:.6g}")
        return cls(frame, expr, sigma, np.asarray(d.val), np.asarray(d.der))

    @property
    def eps_nutilde(self) -> int:
        return self.sigma

    @property
    def case_sign(self) -> int:
        return self.sigma * self.frame.eps_mu

    @property
    def t(self) -> np.ndarray:
        return self.frame.t

    def radius_at(self, t) -> tuple[np.ndarray, np.ndarray]:
        d = eval_dual(self.r_expr, np.atleast_1d(np.asarray(t, dtype=float)))
        return np.asarray(d.val), np.asarray(d.der)

    def tol_eq(self) -> float:
        return 1e-7 * (1.0 + float(np.max(np.abs(self.frame.beta))))


@dataclass(frozen=True)
class NotCreative:
    index: int
    t: float
    beta: float
    r_prime: float
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True)
class BranchDescriptor:
    nu_sign: int
    amplitude: float = 0.0
    label: str = ""


@dataclass(eq=False)
class CreativeSolution:
    family: PseudoCircleFamily
    theta: np.ndarray
    mu_sign: np.ndarray
    feasible: np.ndarray
    underdetermined: np.ndarray
    degenerate: np.ndarray
    branches: list[BranchDescriptor]
    flat_intervals: list[tuple[float, float]] = field(default_factory=list)

    @property
    def case_sign(self) -> int:
        return self.family.case_sign


def _theta_closed_form(case_sign: int, beta, rp, tol_eq: float):
    """Per-sample theta, mu-sign, feasibility and degeneracy masks."""
    beta, rp = np.asarray(beta, float), np.asarray(rp, float)
    zero_b = np.abs(beta) <= TOL_CR
    zero_r = np.abs(rp) <= TOL_CR
    under = zero_b & zero_r
    safe_beta = np.where(zero_b, 1.0, beta)
    q = np.where(zero_b, 0.0, rp / safe_beta)
    if case_sign == 1:
        feasible = under | (~zero_b & (np.abs(q) >= 1.0 - TOL_CR))
        snap = ~zero_b & (np.abs(np.abs(rp) - np.abs(beta)) <= tol_eq)
        theta = np.where(snap, 0.0, np.arccosh(np.maximum(1.0, np.abs(q))))
        mu_sign = -np.sign(rp * beta)
        degenerate = snap
    else:
        feasible = ~zero_b | zero_r
        theta = np.arcsinh(q)
        mu_sign = np.ones_like(q)
        degenerate = np.zeros_like(under)
    return theta, mu_sign, feasible, under, degenerate


def _fill_underdetermined(t, theta, mu_sign, under):
    theta, mu_sign = theta.copy(), mu_sign.copy()
    known = ~under
    if not np.any(known):
        theta[:] = 0.0
        mu_sign[:] = 1.0
        return theta, mu_sign
    theta[under] = np.interp(t[under], t[known], theta[known])
    idx = np.flatnonzero(known)
    nearest = idx[np.clip(np.searchsorted(idx, np.flatnonzero(under)), 0, len(idx) - 1)]
    mu_sign[under] = mu_sign[nearest]
    mu_sign[mu_sign == 0] = 1.0
    return theta, mu_sign


def creative_solve(fam: PseudoCircleFamily) -> CreativeSolution | NotCreative:
    """Solve the creative condition sample by sample."""
    fr = fam.frame
    theta, mu_sign, feasible, under, degenerate = _theta_closed_form(
        fam.case_sign, fr.beta, fam.r_prime, fam.tol_eq())
    if not np.all(feasible):
        i = int(np.argmin(feasible))
        if fam.case_sign == 1:
            why = "cosh(theta) = |r'/beta| < 1" if abs(fr.beta[i]) > TOL_CR else "beta = 0 but r' != 0"
        else:
            why = "beta = 0 but r' != 0"
        return NotCreative(i, float(fr.t[i]), float(fr.beta[i]), float(fam.r_prime[i]), why)
    theta, mu_sign = _fill_underdetermined(fr.t, theta, mu_sign, under)
    flats = [(float(fr.t[s]), float(fr.t[e])) for s, e in runs(under)
             if e - s + 1 > density_run_limit(len(fr))]
    return CreativeSolution(
        family=fam, theta=theta, mu_sign=mu_sign, feasible=feasible,
        underdetermined=under, degenerate=degenerate,
        branches=[BranchDescriptor(1, label="+"), BranchDescriptor(-1, label="-")],
        flat_intervals=flats)


def _nutilde(case_sign, theta, mu_sign, nu_sign, mu, nu):
    ch, sh = np.cosh(theta)[..., None], np.sinh(theta)[..., None]
    if case_sign == 1:
        return mu_sign[..., None] * ch * mu + nu_sign * sh * nu
    return sh * mu + nu_sign * ch * nu


def bump(t, lo: float, hi: float):
    """C-infinity bump supported on (lo, hi), equal to 1 at the midpoint."""
    t = np.asarray(t, float)
    u = (2.0 * t - lo - hi) / (hi - lo)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


def _theta_offset(sol: CreativeSolution, branch: BranchDescriptor, t):
    if branch.amplitude == 0.0:
        return 0.0
    return branch.amplitude * sum(bump(t, lo, hi) for lo, hi in sol.flat_intervals)


def nutilde_on_grid(sol: CreativeSolution, branch: BranchDescriptor) -> np.ndarray:
    fr = sol.family.frame
    theta = sol.theta + _theta_offset(sol, branch, fr.t)
    return _nutilde(sol.case_sign, theta, sol.mu_sign, branch.nu_sign, fr.mu, fr.nu)


def nutilde_at(sol: CreativeSolution, branch: BranchDescriptor, t):
    """nu~ re-solved at arbitrary parameters; returns (frame, r, nu~)."""
    fam = sol.family
    t = np.atleast_1d(np.asarray(t, float))
    fr = fam.frame.at(t)
    r, rp = fam.radius_at(t)
    theta, mu_sign, _, under, _ = _theta_closed_form(sol.case_sign, fr.beta, rp, fam.tol_eq())
    if np.any(under):
        grid = fam.frame.t
        theta[under] = np.interp(t[under], grid, sol.theta)
        j = np.clip(np.searchsorted(grid, t[under]), 0, len(grid) - 1)
        mu_sign[under] = sol.mu_sign[j]
    mu_sign[mu_sign == 0] = 1.0
    theta = theta + _theta_offset(sol, branch, t)
    return fr, r, _nutilde(sol.case_sign, theta, mu_sign, branch.nu_sign, fr.mu, fr.nu)


def creative_residual(sol: CreativeSolution, branch: BranchDescriptor) -> float:
    """Sup of |r' + sigma*beta*<nu~, mu>| on the grid."""
    fam = sol.family
    nt = nutilde_on_grid(sol, branch)
    res = fam.r_prime + fam.sigma * fam.frame.beta * minkowski_dot(nt, fam.frame.mu)
    return float(np.max(np.abs(res)))


@dataclass(eq=False)
class EnvelopeCurve:
    t: np.ndarray
    points: np.ndarray
    branch_id: int
    family: PseudoCircleFamily | None = None
    label: str = ""
    trace: Callable[[np.ndarray], np.ndarray] | None = None

    def __len__(self):
        return len(self.t)


def _curve(sol: CreativeSolution, branch: BranchDescriptor, branch_id: int) -> EnvelopeCurve:
    fam = sol.family
    pts = fam.frame.a + fam.r[:, None] * nutilde_on_grid(sol, branch)

    def trace(t):
        fr, r, nt = nutilde_at(sol, branch, t)
        return fr.a + r[:, None] * nt

    return EnvelopeCurve(fam.frame.t.copy(), pts, branch_id, fam, branch.label, trace)


def envelope_branches(sol: CreativeSolution) -> list[EnvelopeCurve]:
    """Every distinct branch f = a + r*nu~; coincident branches are merged."""
    out: list[EnvelopeCurve] = []
    for br in sol.branches:
        cand = _curve(sol, br, len(out))
        if any(np.max(np.abs(cand.points - c.points)) <= TOL_MERGE for c in out):
            continue
        out.append(cand)
    return out


def uncountable_witnesses(sol: CreativeSolution,
                          amplitudes=WITNESS_AMPLITUDES) -> list[EnvelopeCurve]:
    """Distinct envelopes that differ only where beta vanishes on an interval.

    Each witness adds ``amplitude * bump`` to theta over every flat interval.
    Returns an empty list when beta has no such interval.
    """
    if not sol.flat_intervals:
        return []
    return [_curve(sol, BranchDescriptor(1, a, f"w{k}"), k) for k, a in enumerate(amplitudes)]


@dataclass(frozen=True)
class VerifyReport:
    max_membership_residual: float
    max_tangency_residual: float
    tol: float
    passed: bool


def grid_derivative(points: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order differences on a uniform grid (one-sided at both ends)."""
    f = np.asarray(points, float)
    n = len(f)
    if n < 5:
        raise ValueError("need at least 5 samples")
    d = np.empty_like(f)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / 12.0
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / 12.0
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / 12.0
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / 12.0
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / 12.0
    return d / h


def envelope_verify(env: EnvelopeCurve, fam: PseudoCircleFamily | None = None,
                    tol_env: float = TOL_ENV) -> VerifyReport:
    """Check f(t) in C(t) and <f'(t), f(t) - a(t)> = 0 on every sample.

    f' comes from a five-point difference of the re-evaluated branch when the
    curve carries a ``trace``, otherwise from fourth-order grid differences.
    """
    fam = fam if fam is not None else env.family
    if fam is None:
        raise ValueError("no family to verify against")
    fr = fam.frame
    if len(env) != len(fr) or not np.allclose(env.t, fr.t, rtol=0, atol=1e-12):
        raise ValueError("envelope samples do not match the family grid")
    d = env.points - fr.a
    membership = np.abs(minkowski_dot(d, d) - fam.sigma * fam.r**2)
    if env.trace is not None:
        step = 1e-3 * np.minimum(fr.h, fr.boundary_distance())
        fp = local_derivative(env.trace, env.t, step)
    else:
        fp = grid_derivative(env.points, fr.h)
    tangency = np.abs(minkowski_dot(fp, d))
    m, tg = float(np.max(membership)), float(np.max(tangency))
    return VerifyReport(m, tg, tol_env, m <= tol_env and tg <= tol_env)


class CountClass(enum.Enum):
    NO_ENVELOPE = "NoEnvelope"
    UNIQUE = "Unique"
    EXACTLY_TWO = "ExactlyTwo"
    UNCOUNTABLY_MANY = "UncountablyMany"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CountResult:
    kind: CountClass
    evidence: dict

    def __str__(self):
        return str(self.kind)


def count_classification(fam: PseudoCircleFamily,
                         sol: CreativeSolution | NotCreative | None = None) -> CountResult:
    """Number of envelopes from the density of beta != 0 and |r'| versus |beta|."""
    sol = creative_solve(fam) if sol is None else sol
    if isinstance(sol, NotCreative):
        return CountResult(CountClass.NO_ENVELOPE,
                           {"creative": False, "witness_t": sol.t, "reason": sol.reason})
    fr = fam.frame
    sing = singular_set(fr, TOL_CR)
    ev = {"creative": True, "case_sign": fam.case_sign, "dense_nonzero_beta": sing.dense_nonzero,
          "singular_intervals": sing.intervals}
    if not sing.dense_nonzero:
        return CountResult(CountClass.UNCOUNTABLY_MANY, ev)
    if fam.case_sign == -1:
        return CountResult(CountClass.EXACTLY_TWO, ev)
    tol = fam.tol_eq()
    nonzero = np.abs(fr.beta) > TOL_CR
    gap = np.abs(fam.r_prime) - np.abs(fr.beta)
    equal = nonzero & (np.abs(gap) <= tol)
    strict = nonzero & (gap > tol)
    equal_dense = all(e - s + 1 <= density_run_limit(len(fr)) for s, e in runs(~equal))
    ev.update(equal_on_dense_set=equal_dense, strict_inequality_somewhere=bool(np.any(strict)))
    if np.any(strict):
        ev["strict_t"] = float(fr.t[int(np.argmax(strict))])
        return CountResult(CountClass.EXACTLY_TWO, ev)
    if equal_dense:
        return CountResult(CountClass.UNIQUE, ev)
    # unreachable for a feasible solution; keep the two-branch reading
    return CountResult(CountClass.EXACTLY_TWO, ev)
