"""Deterministic SVG rendering of coding geometry.

Draws the unit square, the digit-space hexagon, the fundamental-domain
polygon and labeled kernel points into a standalone SVG 1.1 document.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .qfield import QuadExt

_SCALE = 160.0
_MARGIN = 24.0


def _approx(v) -> float:
    if isinstance(v, QuadExt):
        return float(v.approx(20))
    return float(Fraction(v))


def _fmt(x: float) -> str:
    return f"{x:.4f}"


class SvgCanvas:
    """Minimal fixed-viewport SVG writer with y pointing up."""

    def __init__(self, xs: Sequence[float], ys: Sequence[float]) -> None:
        self.min_x, self.max_x = min(xs), max(xs)
        self.min_y, self.max_y = min(ys), max(ys)
        self.width = (self.max_x - self.min_x) * _SCALE + 2 * _MARGIN
        self.height = (self.max_y - self.min_y) * _SCALE + 2 * _MARGIN
        self.body: list[str] = []

    def _pt(self, x: float, y: float) -> tuple[float, float]:
        return (
            _MARGIN + (x - self.min_x) * _SCALE,
            self.height - (_MARGIN + (y - self.min_y) * _SCALE),
        )

    def polygon(self, pts: Iterable[tuple[float, float]], stroke: str, fill: str = "none", width: float = 1.5) -> None:
        mapped = " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in (self._pt(x, y) for x, y in pts))
        self.body.append(
            f'<polygon points="{mapped}" fill="{fill}" stroke="{stroke}" stroke-width="{_fmt(width)}"/>'
        )

    def dot(self, x: float, y: float, label: str, color: str = "#c0392b") -> None:
        px, py = self._pt(x, y)
        self.body.append(f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="3.5" fill="{color}"/>')
        self.body.append(
            f'<text x="{_fmt(px + 5)}" y="{_fmt(py - 5)}" font-size="11" font-family="monospace">{label}</text>'
        )

    def comment(self, text: str) -> None:
        self.body.append(f"<!-- {text} -->")

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
            f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">'
        )
        return head + "\n" + "\n".join(self.body) + "\n</svg>\n"


def render_coding_plot(domain_vertices, pi_vertices, kernel_points, area_note: str) -> str:
    """Compose the standard plot: unit square, both polygons, kernel dots."""
    dom = [(_approx(x), _approx(y)) for x, y in domain_vertices]
    piv = [(_approx(x), _approx(y)) for x, y in pi_vertices]
    square = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]
    xs = [p[0] for p in dom + piv + square]
    ys = [p[1] for p in dom + piv + square]
    canvas = SvgCanvas(xs, ys)
    canvas.comment(area_note)
    canvas.polygon(square, stroke="#2c3e50", width=1.0)
    canvas.polygon(piv, stroke="#7f8c8d", width=1.0)
    canvas.polygon(dom, stroke="#2980b9", width=2.0)
    labels = "OABCDEFGHIJKLMNPQRSTUVWXYZ"
    for i, (x, y) in enumerate(kernel_points):
        name = labels[i] if i < len(labels) else f"P{i}"
        canvas.dot(_approx(x), _approx(y), f"{name}({x},{y})")
    return canvas.render()
