"""CSV and SVG emission for an analysed family."""

from __future__ import annotations

import csv
import io
from pathlib import Path
from xml.etree import ElementTree as ET

import numpy as np

from .core import PseudoCircleSpec
from .envelope import EnvelopeCurve
from .pipeline import Analysis

CSV_COLUMNS = ("object_type", "branch_id", "t", "x", "y")
SVG_SIZE = 800
SVG_MARGIN = 0.05
DASH = "6 4"
ENVELOPE_COLORS = ("#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e")


def _num(v: float) -> str:
    return "%.17g" % v


def csv_rows(res: Analysis):
    fam = res.family
    for t, p in zip(fam.t, fam.frame.a):
        yield "center", 0, t, p[0], p[1]
    for env in res.branches + _witness_curves(res):
        for t, p in zip(env.t, env.points):
            yield "envelope", env.branch_id, t, p[0], p[1]
    for sl in res.slices:
        for k, p in enumerate(sl.points):
            yield "discriminant", k, sl.t, p[0], p[1]
    for c, (t0, t1) in zip(res.decomposition.singular_circles, res.decomposition.singular_t):
        for sheet, poly in enumerate(c.sample()):
            for p in poly:
                yield "circle", sheet, 0.5 * (t0 + t1), p[0], p[1]


def _witness_curves(res: Analysis) -> list[EnvelopeCurve]:
    """Witnesses numbered after the regular branches."""
    base = len(res.branches)
    return [EnvelopeCurve(w.t, w.points, base + k, w.family, w.label) for k, w in enumerate(res.witnesses)]


def to_csv(res: Analysis) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for kind, bid, t, x, y in csv_rows(res):
        w.writerow((kind, int(bid), _num(t), _num(x), _num(y)))
    return buf.getvalue()


def read_csv(path_or_text) -> dict[str, dict[int, np.ndarray]]:
    """Rows grouped as {object_type: {branch_id: array of (t, x, y)}}."""
    text = Path(path_or_text).read_text() if isinstance(path_or_text, Path) else path_or_text
    out: dict[str, dict[int, list]] = {}
    for row in csv.DictReader(io.StringIO(text)):
        out.setdefault(row["object_type"], {}).setdefault(int(row["branch_id"]), []).append(
            (float(row["t"]), float(row["x"]), float(row["y"])))
    return {k: {b: np.array(v) for b, v in d.items()} for k, d in out.items()}


class _Viewport:
    def __init__(self, pts: np.ndarray):
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        span = np.maximum(hi - lo, 1e-9)
        lo, hi = lo - SVG_MARGIN * span, hi + SVG_MARGIN * span
        self.scale = SVG_SIZE / float(np.max(hi - lo))
        self.mid = 0.5 * (lo + hi)
        self.lo, self.hi = lo, hi

    def __call__(self, p: np.ndarray) -> np.ndarray:
        q = (np.asarray(p, float) - self.mid) * self.scale
        return np.column_stack([SVG_SIZE / 2 + q[:, 0], SVG_SIZE / 2 - q[:, 1]])

    def extent_from(self, center) -> float:
        corners = np.array([[x, y] for x in (self.lo[0], self.hi[0]) for y in (self.lo[1], self.hi[1])])
        return float(np.max(np.abs(corners - np.asarray(center, float))))


def _path(points: np.ndarray) -> str:
    return " ".join(f"{'M' if i == 0 else 'L'}{x:.2f},{y:.2f}" for i, (x, y) in enumerate(points))


def _circle_paths(view: _Viewport, c: PseudoCircleSpec) -> list[str]:
    # extend each sheet just past the visible box
    reach = max(view.extent_from(c.center), c.radius)
    half = float(np.arccosh(max(1.0, 2.0 * reach / c.radius))) + 0.25
    return [_path(view(poly)) for poly in c.sample(half_width=half, n=241)]


def to_svg(res: Analysis) -> str:
    fam = res.family
    clouds = [fam.frame.a] + [e.points for e in res.branches + res.witnesses]
    if len(res.decomposition.regular_part):
        clouds.append(res.decomposition.regular_part)
    pts = np.concatenate(clouds)
    if not res.branches and not len(res.decomposition.regular_part):
        r = float(np.max(fam.r))
        pts = np.concatenate([pts, pts + [r, r], pts - [r, r]])
    view = _Viewport(pts[np.all(np.isfinite(pts), axis=1)])

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(SVG_SIZE),
                     height=str(SVG_SIZE), viewBox=f"0 0 {SVG_SIZE} {SVG_SIZE}")
    defs = ET.SubElement(svg, "defs")
    clip = ET.SubElement(defs, "clipPath", id="frame")
    ET.SubElement(clip, "rect", x="0", y="0", width=str(SVG_SIZE), height=str(SVG_SIZE))
    ET.SubElement(svg, "rect", x="0", y="0", width=str(SVG_SIZE), height=str(SVG_SIZE), fill="white")
    body = ET.SubElement(svg, "g", {"clip-path": "url(#frame)", "fill": "none"})

    family = ET.SubElement(body, "g", {"class": "family", "stroke": "#b3b3b3", "stroke-width": "0.7"})
    k = max(1, len(res.slices) // 20)
    for sl in res.slices[::k]:
        for d in _circle_paths(view, sl.circle):
            ET.SubElement(family, "path", d=d)

    singular = ET.SubElement(body, "g", {"class": "singular", "stroke": "#333333",
                                         "stroke-width": "1.2", "stroke-dasharray": DASH})
    for c in res.decomposition.singular_circles:
        for d in _circle_paths(view, c):
            ET.SubElement(singular, "path", d=d)

    ET.SubElement(body, "path", {"class": "center", "d": _path(view(fam.frame.a)),
                                 "stroke": "black", "stroke-width": "2"})
    if len(res.decomposition.regular_part):
        dots = ET.SubElement(body, "g", {"class": "discriminant", "fill": "#e67e22"})
        for x, y in view(res.decomposition.regular_part):
            ET.SubElement(dots, "circle", cx=f"{x:.2f}", cy=f"{y:.2f}", r="1.2")
    for env in res.branches + _witness_curves(res):
        color = ENVELOPE_COLORS[env.branch_id % len(ENVELOPE_COLORS)]
        screen = view(env.points)
        if np.ptp(screen, axis=0).max() < 1.0:
            # a constant branch is a single point
            ET.SubElement(body, "circle", {"class": "envelope", "cx": f"{screen[0, 0]:.2f}",
                                           "cy": f"{screen[0, 1]:.2f}", "r": "4", "fill": color})
            continue
        ET.SubElement(body, "path", {"class": "envelope", "d": _path(screen),
                                     "stroke": color, "stroke-width": "2"})
    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"


def write_outputs(res: Analysis, out_dir, csv_flag: bool, svg_flag: bool) -> list[Path]:
    out = Path(out_dir)
    written = []
    if csv_flag or svg_flag:
        out.mkdir(parents=True, exist_ok=True)
    if csv_flag:
        p = out / f"{res.config.name}.csv"
        p.write_text(to_csv(res))
        written.append(p)
    if svg_flag:
        p = out / f"{res.config.name}.svg"
        p.write_text(to_svg(res))
        written.append(p)
    return written
