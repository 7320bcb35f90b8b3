"""Plain-text SVG figures: chords, pencils, five-pencil webs, the
quadrilateral split and metric balls."""
import math

import numpy as np

from .convex_domain import ShapeClass
from .geom_core import HomPoint
from .hilbert_metric import metric_ball
from .webs_isometry import five_poles, pencil_lines, quad_patches

STYLE = """
.domain { fill: #e8e8e8; stroke: #222; stroke-width: 1.2; }
.chord { stroke: #555; stroke-width: 0.9; fill: none; }
.ray { stroke: #aaa; stroke-width: 0.6; fill: none; }
.diagonal { stroke: #222; stroke-width: 1.0; fill: none; }
.patch { fill: #bdbdbd; stroke: none; }
.ball { stroke: #1f4e99; stroke-width: 1.1; fill: none; }
.point { fill: #000; }
.pole { fill: #000; stroke: #fff; stroke-width: 1.5; }
text { font-family: serif; font-size: 14px; }
"""


def _fmt(v):
    return f"{v:.3f}"


class Canvas:
    def __init__(self, lo, hi, size=480, margin=28):
        lo = np.asarray(lo, dtype=np.float64)
        hi = np.asarray(hi, dtype=np.float64)
        span = max(float(np.max(hi - lo)), 1e-12)
        self.scale = (size - 2 * margin) / span
        self.lo = lo
        self.margin = margin
        self.width = int(math.ceil((hi[0] - lo[0]) * self.scale + 2 * margin))
        self.height = int(math.ceil((hi[1] - lo[1]) * self.scale + 2 * margin))
        self.items = []

    def xy(self, p):
        x = self.margin + (p[0] - self.lo[0]) * self.scale
        y = self.height - self.margin - (p[1] - self.lo[1]) * self.scale
        return _fmt(x), _fmt(y)

    def _pts(self, P):
        return " ".join(",".join(self.xy(p)) for p in P)

    def polygon(self, P, cls):
        self.items.append(f'<polygon class="{cls}" points="{self._pts(P)}"/>')

    def polyline(self, P, cls, closed=False):
        P = np.asarray(P)
        if closed:
            P = np.vstack([P, P[:1]])
        self.items.append(f'<polyline class="{cls}" points="{self._pts(P)}"/>')

    def line(self, p, q, cls):
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        self.items.append(f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')

    def dot(self, p, cls="point", r=3.0):
        x, y = self.xy(p)
        self.items.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="{r:.1f}"/>')

    def label(self, p, text, dx=6, dy=-6):
        x, y = self.xy(p)
        self.items.append(f'<text x="{_fmt(float(x) + dx)}" y="{_fmt(float(y) + dy)}">{text}</text>')

    def render(self):
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">')
        return "\n".join([head, f"<style>{STYLE}</style>", *self.items, "</svg>"]) + "\n"


def _bounds(*point_sets):
    P = np.vstack([np.asarray(s, dtype=np.float64).reshape(-1, 2) for s in point_sets])
    return P.min(axis=0), P.max(axis=0)


def _domain_shape(canvas, domain):
    canvas.polygon(domain.outline(256), "domain")


def chord_figure(domain, x=None, y=None):
    c = domain.center
    if x is None or y is None:
        u = np.array([math.cos(0.15), math.sin(0.15)])
        e0, e1 = domain.line_chord(c, u)
        x = c + 0.55 * (e0 - c)
        y = c + 0.45 * (e1 - c)
    ch = domain.chord_endpoints(x, y)
    canvas = Canvas(*_bounds(domain.outline(256)))
    _domain_shape(canvas, domain)
    canvas.line(ch.xbar, ch.ybar, "chord")
    for p, name in ((ch.xbar, "x̄"), (x, "x"), (y, "y"), (ch.ybar, "ȳ")):
        canvas.dot(p)
        canvas.label(p, name)
    return canvas.render()


def default_pole(domain):
    return domain.center + 0.9 * domain.diameter * np.array([math.cos(0.1), math.sin(0.1)])


def pencil_figure(domain, pole=None, n=12):
    A = default_pole(domain) if pole is None else np.asarray(pole, dtype=np.float64)
    chords = pencil_lines(HomPoint.from_affine(A), domain, n)
    canvas = Canvas(*_bounds(domain.outline(256), A[None]))
    _domain_shape(canvas, domain)
    for ch in chords:
        canvas.line(A, ch.xbar, "ray")
        canvas.line(ch.xbar, ch.ybar, "chord")
    canvas.dot(A, "pole", 3.5)
    canvas.label(A, "A")
    return canvas.render()


def web_figure(domain, lines_per_pole=6):
    poles = five_poles(domain)
    canvas = Canvas(*_bounds(domain.outline(256), poles))
    _domain_shape(canvas, domain)
    for A in poles:
        for ch in pencil_lines(HomPoint.from_affine(A), domain, lines_per_pole):
            canvas.line(ch.xbar, ch.ybar, "chord")
    for k, A in enumerate(poles):
        canvas.dot(A, "pole", 3.5)
        canvas.label(A, f"A{k + 1}")
    return canvas.render()


def quad_figure(domain):
    tris, M = quad_patches(domain)
    canvas = Canvas(*_bounds(domain.outline(256)))
    _domain_shape(canvas, domain)
    for t in tris[:2]:
        canvas.polygon(np.array(t), "patch")
    A, B, C, D = (t[0] for t in tris)
    canvas.line(A, C, "diagonal")
    canvas.line(B, D, "diagonal")
    for p, name in zip((A, B, C, D, M), "ABCDM"):
        canvas.dot(p)
        canvas.label(p, name)
    return canvas.render()


def ball_figure(domain, center=None, radii=(0.5, 1.0, 1.5), n_directions=96):
    c = domain.center if center is None else np.asarray(center, dtype=np.float64)
    canvas = Canvas(*_bounds(domain.outline(256)))
    _domain_shape(canvas, domain)
    for r in radii:
        canvas.polyline(metric_ball(domain, c, r, n_directions), "ball", closed=True)
    canvas.dot(c)
    return canvas.render()


FIGURES = {
    "chord": chord_figure,
    "pencil": pencil_figure,
    "web5": web_figure,
    "quad": quad_figure,
    "ball": ball_figure,
}


def figure(kind, domain, **kwargs):
    if kind not in FIGURES:
        raise ValueError(f"unknown figure kind {kind!r}")
    if kind == "quad" and domain.classify_shape() is not ShapeClass.QUADRILATERAL:
        raise ValueError("the quad figure needs a quadrilateral domain")
    return FIGURES[kind](domain, **kwargs)

