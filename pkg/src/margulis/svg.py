"""Deterministic SVG output for disk-model pictures.

Coordinates are written with a fixed number of decimals and elements in the
order they are added, so equal inputs give byte-identical files.
"""

from __future__ import annotations

from xml.sax.saxutils import quoteattr

import numpy as np

from .frames import BoundaryPoint

DECIMALS = 5


def _num(x: float) -> str:
    s = f"{float(x):.{DECIMALS}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class Canvas:
    """Unit-disk picture mapped to a square of ``size`` pixels (y axis up)."""

    def __init__(self, size: int = 600, margin: float = 1.1):
        self.size = size
        self.margin = margin
        self.items: list[str] = []

    def _xy(self, x, y):
        half = self.size / 2.0
        scale = half / self.margin
        return half + scale * x, half - scale * y

    def _scale(self, r):
        return r * self.size / (2.0 * self.margin)

    def _attrs(self, cls, style):
        out = f' class={quoteattr(cls)}' if cls else ""
        for k, v in style.items():
            out += f" {k.replace('_', '-')}={quoteattr(str(v))}"
        return out

    def circle(self, x, y, r, cls="", **style):
        cx, cy = self._xy(x, y)
        self.items.append(
            f'<circle{self._attrs(cls, style)} cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(self._scale(r))}"/>'
        )

    def line(self, p, q, cls="", **style):
        x1, y1 = self._xy(*p)
        x2, y2 = self._xy(*q)
        self.items.append(
            f'<line{self._attrs(cls, style)} x1="{_num(x1)}" y1="{_num(y1)}" '
            f'x2="{_num(x2)}" y2="{_num(y2)}"/>'
        )

    def polyline(self, points, cls="", **style):
        pts = " ".join(f"{_num(a)},{_num(b)}" for a, b in (self._xy(x, y) for x, y in points))
        self.items.append(f'<polyline{self._attrs(cls, style)} points="{pts}"/>')

    def text(self, x, y, label, cls="", **style):
        cx, cy = self._xy(x, y)
        safe = label.replace("&", "&amp;").replace("<", "&lt;")
        self.items.append(f'<text{self._attrs(cls, style)} x="{_num(cx)}" y="{_num(cy)}">{safe}</text>')

    def render(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
            f'viewBox="0 0 {self.size} {self.size}">\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.render())


def klein(p) -> tuple[float, float]:
    """Klein-model coordinates of a point of H^2 or a boundary point."""
    if isinstance(p, BoundaryPoint):
        return p.xi1, p.xi2
    p = np.asarray(p, dtype=float)
    return float(p[0] / p[2]), float(p[1] / p[2])


def arc_points(center_angle: float, radius: float, steps: int = 48):
    th = np.linspace(center_angle - radius, center_angle + radius, steps)
    return list(zip(np.cos(th), np.sin(th)))
