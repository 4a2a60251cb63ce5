"""End-to-end analysis of one family: frame, envelopes, discriminant, checks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import ConfigError, FamilyConfig
from .core import minkowski_dot
from .discriminant import (
    TOL_D, DDecomposition, DegenerateChord, DiscriminantSlice, NoConvergence, SliceKind,
    compare_sets, decompose_D, discriminant_at, discriminant_set, e1_limit, F_eval, slice_scale,
)
from .dual import DomainError
from .envelope import (
    TOL_CR, TOL_ENV, TOL_MERGE, CountClass, CountResult, CreativeSolution, EnvelopeCurve,
    NonPositiveRadius, NotCreative, PseudoCircleFamily, count_classification, creative_residual,
    creative_solve, envelope_branches, envelope_verify, grid_derivative, uncountable_witnesses,
)
from .expr import eval_dual, parse
from .frontal import (
    TOL_FRENET, CurveSpec, FrontalFrame, build_frame, frame_invariants, frenet_residuals,
    legendre_tolerance, singular_set,
)

TOL_UNIT = 1e-9
E1_EPS0 = 1e-3
E1_PARAMS = 20


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


@dataclass(eq=False)
class Analysis:
    config: FamilyConfig
    family: PseudoCircleFamily
    solution: CreativeSolution | NotCreative
    count: CountResult
    branches: list[EnvelopeCurve]
    witnesses: list[EnvelopeCurve]
    slices: list[DiscriminantSlice]
    decomposition: DDecomposition
    checks: list[Check] = field(default_factory=list)
    summary: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def report(self) -> str:
        cfg = self.config
        lines = [
            f"family: {cfg.name}",
            f"  a = ({cfg.ax}, {cfg.ay}), r = {cfg.r}, sigma = {cfg.sigma:+d}",
            f"  t in ({cfg.t_min:g}, {cfg.t_max:g}), n = {len(self.family.t)}",
            f"  frontal: {'spacelike' if self.family.frame.eps_nu == -1 else 'timelike'}, "
            f"case_sign = {self.family.case_sign:+d}",
            f"summary: {self.summary}",
            "checks:",
        ]
        lines += [f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in self.checks]
        fail = self.first_failure
        lines.append("result: PASS" if fail is None else f"result: FAIL (first failing check: {fail.name})")
        return "\n".join(lines)


def _fmt_t(t: float) -> str:
    return f"{0.0 if abs(t) < 1e-12 else t:.4g}"


def _locate_domain_error(cfg: FamilyConfig, exc: DomainError) -> DomainError:
    grid = CurveSpec.from_text(cfg.ax, cfg.ay, t_min=cfg.t_min, t_max=cfg.t_max,
                               n_samples=cfg.n_samples).grid()
    for key in ("ax", "ay", "nux", "nuy", "r"):
        text = getattr(cfg, key)
        if text is None:
            continue
        try:
            eval_dual(parse(text), grid)
        except DomainError as inner:
            src, line = cfg.where(key)
            where = f"{src}:{line}" if line is not None else src
            return DomainError(f"{where}: {key} = {text}: {inner}")
    return DomainError(f"{cfg.source}: {exc}")


def build_family(cfg: FamilyConfig) -> PseudoCircleFamily:
    spec = CurveSpec.from_text(cfg.ax, cfg.ay, cfg.nux, cfg.nuy, t_min=cfg.t_min,
                               t_max=cfg.t_max, n_samples=cfg.n_samples)
    try:
        frame = build_frame(spec)
        return PseudoCircleFamily.build(frame, cfg.r, cfg.sigma)
    except NonPositiveRadius as exc:
        raise ConfigError(str(exc), *cfg.where("r")) from None
    except DomainError as exc:
        raise _locate_domain_error(cfg, exc) from None


def _frame_checks(frame: FrontalFrame, s: float) -> list[Check]:
    inv = frame_invariants(frame)
    unit = max(inv["nu_unit"], inv["mu_unit"], inv["orthogonal"])
    leg_tol = legendre_tolerance(frame) * s
    fr = frenet_residuals(frame)
    worst = max(fr.values())
    return [
        Check("frame.invariants", unit <= TOL_UNIT * s and inv["legendre"] <= leg_tol,
              f"unit/orthogonality {unit:.2e} (tol {TOL_UNIT * s:.0e}), "
              f"legendre {inv['legendre']:.2e} (tol {leg_tol:.1e})"),
        Check("frame.frenet", worst <= TOL_FRENET * s,
              f"max residual {worst:.2e} (tol {TOL_FRENET * s:.0e})"),
    ]


def _envelope_checks(fam, sol, branches, witnesses, count, s) -> list[Check]:
    creative = not isinstance(sol, NotCreative)
    out = [Check("envelope.existence_iff_creative", creative == bool(branches),
                 f"creative={creative}, branches={len(branches)}")]
    if not creative:
        out.append(Check("envelope.not_creative", True,
                         f"witness t={_fmt_t(sol.t)}: {sol.reason}"))
        return out
    worst_cr, worst_unit = 0.0, 0.0
    for br in sol.branches:
        worst_cr = max(worst_cr, creative_residual(sol, br))
    for env in branches + witnesses:
        nt = (env.points - fam.frame.a) / fam.r[:, None]
        worst_unit = max(worst_unit, float(np.max(np.abs(minkowski_dot(nt, nt) - fam.sigma))))
    out.append(Check("envelope.creative_condition", worst_cr <= TOL_CR * s and worst_unit <= TOL_UNIT * s,
                     f"creative residual {worst_cr:.2e}, unit residual {worst_unit:.2e}"))
    for env in branches:
        rep = envelope_verify(env, fam, TOL_ENV * s)
        out.append(Check(f"envelope.branch{env.branch_id}.verify", rep.passed,
                         f"membership {rep.max_membership_residual:.2e}, "
                         f"tangency {rep.max_tangency_residual:.2e} (tol {rep.tol:.0e})"))
    kind = count.kind
    expected_n = {CountClass.UNIQUE: 1, CountClass.EXACTLY_TWO: 2}.get(kind)
    if expected_n is not None:
        out.append(Check("classification.branch_count", len(branches) == expected_n,
                         f"{kind} with {len(branches)} merged branch(es)"))
    if kind is CountClass.UNCOUNTABLY_MANY:
        reps = [envelope_verify(w, fam, TOL_ENV * s) for w in witnesses]
        gaps = [float(np.max(np.linalg.norm(u.points - v.points, axis=-1)))
                for i, u in enumerate(witnesses) for v in witnesses[i + 1:]]
        ok = len(witnesses) >= 3 and all(r.passed for r in reps) and min(gaps, default=0) > TOL_MERGE
        out.append(Check("classification.witnesses", ok,
                         f"{len(witnesses)} witnesses, all verify={all(r.passed for r in reps)}, "
                         f"min pairwise sup distance {min(gaps, default=0):.3g}"))
    return out


def _discriminant_checks(fam, slices, dec, branches, s) -> list[Check]:
    worst = 0.0
    for sl in slices:
        if not sl.points:
            continue
        fr = fam.frame.at(sl.t)
        r, _ = fam.radius_at(sl.t)
        scale = slice_scale(float(r[0]), fr.a_prime[0])
        for p in sl.points:
            F, Ft = F_eval(fam, p, sl.t)
            worst = max(worst, max(abs(F), abs(Ft)) / scale)
    out = [Check("discriminant.residuals", worst <= TOL_D * s,
                 f"max |F|, |F_t| over scale {worst:.2e} (tol {TOL_D * s:.0e})")]

    if branches:
        # every envelope sample must appear in the slice at the same t
        gap = 0.0
        for i, sl in enumerate(slices):
            for env in branches:
                f = env.points[i]
                if sl.kind is SliceKind.WHOLE_CIRCLE:
                    d = f - np.asarray(sl.circle.center)
                    err = abs(float(minkowski_dot(d, d)) - sl.circle.sigma * sl.circle.radius**2)
                elif sl.points:
                    err = min(float(np.linalg.norm(f - np.asarray(p))) for p in sl.points)
                else:
                    err = np.inf
                gap = max(gap, err / (1.0 + float(np.linalg.norm(f))))
        tol = 1e-6 * s
        out.append(Check("discriminant.contains_envelopes", gap <= tol,
                         f"max relative distance {gap:.2e} (tol {tol:.0e})"))

    if branches and len(dec.regular_part):
        env_pts = np.concatenate([b.points for b in branches])
        h = fam.frame.h
        fmax = max(float(np.max(np.linalg.norm(grid_derivative(b.points, h), axis=-1)))
                   for b in branches)
        bound = 2.0 * fmax * h * s
        cmp = compare_sets(dec.regular_part, env_pts)
        out.append(Check("discriminant.regular_part_matches_envelopes", cmp.hausdorff <= bound,
                         f"hausdorff {cmp.hausdorff:.2e} (bound 2*max|f'|*h = {bound:.2e})"))

    sing = singular_set(fam.frame, TOL_CR)
    inside = all(any(lo - fam.frame.h <= t0 and t1 <= hi + fam.frame.h for lo, hi in sing.intervals)
                 for t0, t1 in dec.singular_t)
    out.append(Check("discriminant.circles_at_singular_points", inside,
                     f"{len(dec.singular_circles)} whole-circle cluster(s), "
                     f"{len(sing.intervals)} singular interval(s)"))
    return out


def _describe_circle(c) -> str:
    x, y = (0.0 if abs(v) < 1e-12 else v for v in c.center)
    return f"pseudo-circle(center=({x:.4g}, {y:.4g}), r={c.radius:.4g}, sigma={c.sigma:+d})"


def _summary(sol, count, slices, dec) -> str:
    parts = ["NotCreative" if isinstance(sol, NotCreative) else "Creative",
             f"classification {count.kind}"]
    kinds = {sl.kind for sl in slices}
    if len(kinds) == 1 and next(iter(kinds)) in (SliceKind.EMPTY, SliceKind.WHOLE_CIRCLE):
        parts.append(f"D slices all {next(iter(kinds))}")
    else:
        head = "envelopes" if not isinstance(sol, NotCreative) else "regular points"
        circles = [f"{_describe_circle(c)} at t={_fmt_t(0.5 * (a + b))}"
                   for c, (a, b) in zip(dec.singular_circles, dec.singular_t)]
        parts.append("D = " + " ∪ ".join([head] + circles))
    return "; ".join(parts)


def analyze(cfg: FamilyConfig, tol_scale: float = 1.0, expected_class: str | None = None) -> Analysis:
    if tol_scale <= 0:
        raise ValueError("tolerance scale must be positive")
    fam = build_family(cfg)
    sol = creative_solve(fam)
    count = count_classification(fam, sol)
    creative = not isinstance(sol, NotCreative)
    branches = envelope_branches(sol) if creative else []
    witnesses = uncountable_witnesses(sol) if creative else []
    slices = discriminant_set(fam)
    dec = decompose_D(fam, slices)
    res = Analysis(cfg, fam, sol, count, branches, witnesses, slices, dec)
    res.checks += _frame_checks(fam.frame, tol_scale)
    res.checks += _envelope_checks(fam, sol, branches, witnesses, count, tol_scale)
    res.checks += _discriminant_checks(fam, slices, dec, branches, tol_scale)
    if expected_class is not None:
        res.checks.append(Check("classification.expected", str(count.kind) == expected_class,
                                f"got {count.kind}, expected {expected_class}"))
    res.summary = _summary(sol, count, slices, dec)
    return res


@dataclass(eq=False)
class Comparison:
    config: FamilyConfig
    t0: np.ndarray
    checks: list[Check]
    e1_vs_d: float
    e1_vs_e2: float | None
    d_vs_e2: float | None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def report(self) -> str:
        def f(x):
            return "n/a" if x is None or not np.isfinite(x) else f"{x:.3e}"
        lines = [f"family: {self.config.name}",
                 f"  E1 parameters: {len(self.t0)} in ({self.t0.min():.4g}, {self.t0.max():.4g})"
                 if len(self.t0) else "  E1 parameters: none",
                 f"  max dist E1 -> D slice:   {f(self.e1_vs_d)}",
                 f"  max dist E1 -> E2 branch: {f(self.e1_vs_e2)}",
                 f"  hausdorff D regular vs E2: {f(self.d_vs_e2)}",
                 "checks:"]
        lines += [f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}" for c in self.checks]
        fail = self.first_failure
        lines.append("result: PASS" if fail is None else f"result: FAIL (first failing check: {fail.name})")
        return "\n".join(lines)


def e1_parameters(fam: PseudoCircleFamily, count: int = E1_PARAMS, eps0: float = E1_EPS0) -> np.ndarray:
    """Deterministic regular parameters in the central 80% of the domain."""
    fr = fam.frame
    lo, hi = fr.t[0] + 0.1 * (fr.t[-1] - fr.t[0]), fr.t[-1] - 0.1 * (fr.t[-1] - fr.t[0])
    cand = np.linspace(lo, hi - eps0, 4 * count)
    keep = [t for t in cand if discriminant_at(fam, float(t)).kind is not SliceKind.WHOLE_CIRCLE]
    keep = np.array(keep)
    if len(keep) <= count:
        return keep
    return keep[np.linspace(0, len(keep) - 1, count).round().astype(int)]


def _pointwise_gap(A, B) -> float:
    A, B = np.asarray(A, float).reshape(-1, 2), np.asarray(B, float).reshape(-1, 2)
    if len(A) == 0 and len(B) == 0:
        return 0.0
    if len(A) == 0 or len(B) == 0:
        return np.inf
    return compare_sets(A, B).hausdorff


def compare(cfg: FamilyConfig, tol_scale: float = 1.0, eps0: float = E1_EPS0) -> Comparison:
    """E1 limits against D slices and E2 branches at regular parameters."""
    fam = build_family(cfg)
    sol = creative_solve(fam)
    branches = envelope_branches(sol) if not isinstance(sol, NotCreative) else []
    ts = e1_parameters(fam, eps0=eps0)
    tol = (10 * eps0**2 + 1e-9) * tol_scale
    checks: list[Check] = []
    worst_d, worst_e2 = 0.0, 0.0
    failure = None
    for t0 in ts:
        try:
            lim = e1_limit(fam, float(t0), eps0)
        except (NoConvergence, DegenerateChord) as exc:
            failure = failure or f"t0={t0:.4g}: {exc}"
            worst_d = worst_e2 = np.inf
            continue
        worst_d = max(worst_d, _pointwise_gap(lim.points, discriminant_at(fam, float(t0)).points))
        if branches:
            e2 = np.concatenate([b.trace(np.array([t0])) for b in branches])
            worst_e2 = max(worst_e2, _pointwise_gap(lim.points, e2))
    if len(ts) == 0:
        failure = "no regular parameters available"
    if failure:
        checks.append(Check("e1.convergence", False, failure))
    else:
        checks.append(Check("e1.convergence", True, f"{len(ts)} parameters, order >= 0.9 at all"))
    checks.append(Check("e1.matches_discriminant", worst_d <= tol,
                        f"max distance {worst_d:.2e} (tol {tol:.1e})"))
    d_vs_e2 = None
    if branches:
        checks.append(Check("e1.matches_envelopes", worst_e2 <= tol,
                            f"max distance {worst_e2:.2e} (tol {tol:.1e})"))
        dec = decompose_D(fam)
        if len(dec.regular_part):
            env_pts = np.concatenate([b.points for b in branches])
            d_vs_e2 = compare_sets(dec.regular_part, env_pts).hausdorff
    return Comparison(cfg, ts, checks, worst_d, worst_e2 if branches else None, d_vs_e2)
