"""Minimal SVG scatter figures with overlay guide curves.

Points are drawn as short round-capped strokes batched into path elements,
which keeps files tractable for clouds of a few hundred thousand points.
Guide overlays mirror the usual figure conventions: the two ellipse
boundaries, the annulus circles, the dashed diamond, and the hole boundary
with a thicker stroke.
"""

from xml.sax.saxutils import escape

import numpy as np

from .transfer import RegionParams, hole_boundary_radius, rho_curve

POINT_LIMIT = 200000


class SvgFigure:
    def __init__(self, size=900, xmax=2.0, margin=45):
        self.size = size
        self.xmax = float(xmax)
        self.margin = margin
        self.scale = (size - 2 * margin) / (2 * self.xmax)
        self.body = []

    def _xy(self, z):
        x = self.margin + (z.real + self.xmax) * self.scale
        y = self.margin + (self.xmax - z.imag) * self.scale
        return x, y

    def add_points(self, pts, color="#1f3a93", width=1.5, limit=POINT_LIMIT):
        """Scatter a complex array; deterministic stride thinning beyond
        `limit` (full data belongs in the CSV, not the figure)."""
        pts = np.asarray(pts, dtype=complex).ravel()
        if limit and len(pts) > limit:
            stride = int(np.ceil(len(pts) / limit))
            pts = pts[::stride]
        for k in range(0, len(pts), 10000):
            blk = pts[k:k + 10000]
            frags = []
            for z in blk:
                x, y = self._xy(z)
                frags.append(f"M{x:.2f} {y:.2f}v0")
            self.body.append(
                f'<path d="{"".join(frags)}" stroke="{color}" '
                f'stroke-width="{width}" stroke-linecap="round" fill="none"/>')

    def add_polyline(self, pts, color="#444444", width=1.0, dashed=False,
                     closed=False):
        pts = np.asarray(pts, dtype=complex).ravel()
        frags = []
        for i, z in enumerate(pts):
            x, y = self._xy(z)
            frags.append(f"{'M' if i == 0 else 'L'}{x:.2f} {y:.2f}")
        if closed:
            frags.append("Z")
        dash = ' stroke-dasharray="7 5"' if dashed else ""
        self.body.append(
            f'<path d="{"".join(frags)}" stroke="{color}" '
            f'stroke-width="{width}"{dash} fill="none"/>')

    def add_axes(self):
        g = "#cccccc"
        x0, y0 = self._xy(-self.xmax + 0j)
        x1, y1 = self._xy(self.xmax + 0j)
        self.body.append(f'<line x1="{x0:.1f}" y1="{(y0 + y1) / 2:.1f}" '
                         f'x2="{x1:.1f}" y2="{(y0 + y1) / 2:.1f}" stroke="{g}"/>')
        self.body.append(f'<line x1="{(x0 + x1) / 2:.1f}" y1="{self.margin}" '
                         f'x2="{(x0 + x1) / 2:.1f}" y2="{self.size - self.margin}" '
                         f'stroke="{g}"/>')
        for t in np.arange(-np.floor(self.xmax), np.floor(self.xmax) + 0.5):
            x, y = self._xy(t - 1j * self.xmax)
            self.body.append(f'<text x="{x:.1f}" y="{self.size - self.margin + 16}" '
                             f'font-size="11" text-anchor="middle" fill="#666">'
                             f'{t:g}</text>')
            x, y = self._xy(-self.xmax + 1j * t)
            self.body.append(f'<text x="{self.margin - 6}" y="{y + 4:.1f}" '
                             f'font-size="11" text-anchor="end" fill="#666">'
                             f'{t:g}</text>')

    def write(self, path, command=None, title=None):
        with open(path, "w") as f:
            f.write('<?xml version="1.0" encoding="UTF-8"?>\n')
            f.write(f'<svg xmlns="http://www.w3.org/2000/svg" '
                    f'width="{self.size}" height="{self.size}" '
                    f'viewBox="0 0 {self.size} {self.size}">\n')
            if command:
                # a desc element, not an XML comment: command lines contain
                # "--", which is forbidden inside comments
                f.write(f"<desc>command: {escape(command)}</desc>\n")
            f.write(f'<rect width="{self.size}" height="{self.size}" '
                    f'fill="white"/>\n')
            f.write(f'<rect x="{self.margin}" y="{self.margin}" '
                    f'width="{self.size - 2 * self.margin}" '
                    f'height="{self.size - 2 * self.margin}" fill="none" '
                    f'stroke="#888"/>\n')
            if title:
                f.write(f'<text x="{self.size / 2}" y="28" font-size="15" '
                        f'text-anchor="middle">{title}</text>\n')
            for el in self.body:
                f.write(el + "\n")
            f.write("</svg>\n")


def _polar(theta, r):
    return r * np.exp(1j * theta)


def add_overlays(fig, names, sigma):
    """Draw the requested guide curves: 'annulus', 'diamond', 'hole',
    'ellipses' (comma-separated names accepted)."""
    if isinstance(names, str):
        names = [s for s in names.split(",") if s]
    names = set(names)
    unknown = names - {"annulus", "diamond", "hole", "ellipses"}
    if unknown:
        raise ValueError(f"unknown overlays: {sorted(unknown)}")
    params = RegionParams(sigma)
    th = np.linspace(0, 2 * np.pi, 721)
    if "annulus" in names:
        for r in (params.annulus_inner, params.annulus_outer):
            if r > 0:
                fig.add_polyline(_polar(th, r), color="#777777", width=1.0)
    if "diamond" in names:
        d = params.diamond_bound
        fig.add_polyline(np.array([d, 1j * d, -d, -1j * d]),
                         color="#aa5500", width=1.0, dashed=True, closed=True)
    if sigma < 1.0 and "ellipses" in names:
        fig.add_polyline(_polar(th, rho_curve(0, "+", th, sigma)),
                         color="#2e7d32", width=1.0)
        fig.add_polyline(_polar(th, rho_curve(0, "-", th, sigma)),
                         color="#2e7d32", width=1.0)
    if sigma < 1.0 and "hole" in names:
        fig.add_polyline(_polar(th, hole_boundary_radius(th, sigma)),
                         color="#c62828", width=2.5)


def cloud_figure(cloud, overlays=(), xmax=None):
    """Standard figure for a spectrum cloud."""
    pts = cloud.points
    if xmax is None:
        reach = 1.0 + cloud.sigma
        if len(pts):
            reach = max(reach, float(np.abs(pts.real).max()),
                        float(np.abs(pts.imag).max()))
        xmax = 1.08 * reach
    fig = SvgFigure(xmax=xmax)
    fig.add_axes()
    if overlays:
        add_overlays(fig, overlays, cloud.sigma)
    fig.add_points(pts)
    return fig
