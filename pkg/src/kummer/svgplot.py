"""Small native SVG renderer: polylines, scatter dots, bars, axes.

No plotting dependency; output is deterministic for identical input.
"""

from __future__ import annotations

from math import floor, log10

WIDTH = 640
HEIGHT = 480
MARGIN_L = 64
MARGIN_R = 16
MARGIN_T = 20
MARGIN_B = 44


def _ticks(lo: float, hi: float, target: int = 5):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** floor(log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = step * (floor(lo / step) + 1)
    out = []
    t = first
    while t < hi - 1e-12 * span:
        out.append(t)
        t += step
    return out


def _fmt_tick(t: float) -> str:
    if t == 0:
        return "0"
    if abs(t) >= 1e4 or abs(t) < 1e-3:
        return f"{t:.1e}"
    return f"{t:.6g}"


class SvgCanvas:
    """Fixed-viewport data-to-pixel canvas writing SVG primitives."""

    def __init__(self, xlim, ylim, title="", xlabel="", ylabel=""):
        self.xlim = xlim
        self.ylim = ylim
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
            f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        ]
        self._frame(title, xlabel, ylabel)

    def _x(self, x):
        x0, x1 = self.xlim
        frac = (x - x0) / (x1 - x0) if x1 > x0 else 0.5
        return MARGIN_L + frac * (WIDTH - MARGIN_L - MARGIN_R)

    def _y(self, y):
        y0, y1 = self.ylim
        frac = (y - y0) / (y1 - y0) if y1 > y0 else 0.5
        return HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)

    def _frame(self, title, xlabel, ylabel):
        x0, y0 = MARGIN_L, HEIGHT - MARGIN_B
        x1, y1 = WIDTH - MARGIN_R, MARGIN_T
        self.parts.append(
            f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
            'fill="none" stroke="black" stroke-width="1"/>'
        )
        for t in _ticks(*self.xlim):
            px = self._x(t)
            self.parts.append(
                f'<line x1="{px:.2f}" y1="{y0}" x2="{px:.2f}" y2="{y0 + 5}" stroke="black"/>'
            )
            self.parts.append(
                f'<text x="{px:.2f}" y="{y0 + 18}" font-size="11" '
                f'text-anchor="middle">{_fmt_tick(t)}</text>'
            )
        for t in _ticks(*self.ylim):
            py = self._y(t)
            self.parts.append(
                f'<line x1="{x0 - 5}" y1="{py:.2f}" x2="{x0}" y2="{py:.2f}" stroke="black"/>'
            )
            self.parts.append(
                f'<text x="{x0 - 8}" y="{py + 4:.2f}" font-size="11" '
                f'text-anchor="end">{_fmt_tick(t)}</text>'
            )
        if title:
            self.parts.append(
                f'<text x="{(x0 + x1) / 2}" y="14" font-size="13" '
                f'text-anchor="middle">{title}</text>'
            )
        if xlabel:
            self.parts.append(
                f'<text x="{(x0 + x1) / 2}" y="{HEIGHT - 6}" font-size="12" '
                f'text-anchor="middle">{xlabel}</text>'
            )
        if ylabel:
            self.parts.append(
                f'<text x="14" y="{(y0 + y1) / 2}" font-size="12" text-anchor="middle" '
                f'transform="rotate(-90 14 {(y0 + y1) / 2})">{ylabel}</text>'
            )

    def polyline(self, xs, ys, color="steelblue", width=1.2):
        pts = []
        for x, y in zip(xs, ys):
            if x != x or y != y:  # NaN breaks the line
                if len(pts) > 1:
                    self._emit_line(pts, color, width)
                pts = []
                continue
            pts.append(f"{self._x(x):.2f},{self._y(y):.2f}")
        if len(pts) > 1:
            self._emit_line(pts, color, width)

    def _emit_line(self, pts, color, width):
        self.parts.append(
            f'<polyline points="{" ".join(pts)}" fill="none" '
            f'stroke="{color}" stroke-width="{width}"/>'
        )

    def scatter(self, xs, ys, color="steelblue", radius=1.2):
        for x, y in zip(xs, ys):
            self.parts.append(
                f'<circle cx="{self._x(x):.2f}" cy="{self._y(y):.2f}" '
                f'r="{radius}" fill="{color}"/>'
            )

    def bars(self, edges, heights, color="lightsteelblue"):
        base = self._y(max(self.ylim[0], 0.0))
        for i, h in enumerate(heights):
            x0 = self._x(edges[i])
            x1 = self._x(edges[i + 1])
            y = self._y(h)
            self.parts.append(
                f'<rect x="{x0:.2f}" y="{min(y, base):.2f}" width="{x1 - x0:.2f}" '
                f'height="{abs(base - y):.2f}" fill="{color}" stroke="none"/>'
            )

    def save(self, path):
        with open(path, "w") as fh:
            fh.write("\n".join(self.parts))
            fh.write("\n</svg>\n")


def _finite_limits(values, pad=0.05):
    lo = min(values)
    hi = max(values)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    span = hi - lo
    return lo - pad * span, hi + pad * span


def plot_sweep(table, path):
    """Eigenvalue fan over eps with fixed-point energies overlaid."""
    all_vals = [v for row in table.scaled_levels for v in row]
    xs = table.eps_values
    canvas = SvgCanvas(
        _finite_limits(xs), _finite_limits(all_vals),
        title=f"(m,n)=({table.spec.m},{table.spec.n})  N={table.spec.N}",
        xlabel="eps", ylabel="scaled energy",
    )
    for i, eps in enumerate(xs):
        canvas.scatter([eps] * len(table.scaled_levels[i]), table.scaled_levels[i],
                       color="steelblue", radius=0.9)
    for i, eps in enumerate(xs):
        canvas.scatter([eps] * len(table.fixed_point_energies[i]),
                       table.fixed_point_energies[i], color="crimson", radius=1.6)
    canvas.save(path)


def plot_potentials(spec, p_grid, u_lo, u_hi, path, energy=None):
    canvas = SvgCanvas(
        _finite_limits(p_grid), _finite_limits(list(u_lo) + list(u_hi)),
        title=f"potential curves  (m,n)=({spec.m},{spec.n})  eps={spec.eps:g}",
        xlabel="p", ylabel="energy",
    )
    canvas.polyline(p_grid, u_lo, color="crimson")
    canvas.polyline(p_grid, u_hi, color="steelblue")
    if energy is not None:
        canvas.polyline([p_grid[0], p_grid[-1]], [energy, energy], color="gray")
    canvas.save(path)


def plot_dos(spec, hist, centers, curve, path):
    finite = [v for v in curve if v == v]
    top = max(list(hist.density) + finite) if finite else max(hist.density)
    canvas = SvgCanvas(
        (hist.bin_edges[0], hist.bin_edges[-1]), (0.0, 1.08 * top),
        title=f"density of states  (m,n)=({spec.m},{spec.n})  N={spec.N}  eps={spec.eps:g}",
        xlabel="scaled energy", ylabel="density",
    )
    canvas.bars(hist.bin_edges, hist.density)
    canvas.polyline(centers, curve, color="crimson", width=1.6)
    canvas.save(path)


def plot_levels(xs, series, path, title="", xlabel="", ylabel="", colors=None):
    """Several y-series against a common x (trajectories, comparisons)."""
    flat = [v for ys in series for v in ys]
    canvas = SvgCanvas(_finite_limits(xs), _finite_limits(flat),
                       title=title, xlabel=xlabel, ylabel=ylabel)
    palette = colors or ["steelblue", "crimson", "seagreen", "darkorange"]
    for i, ys in enumerate(series):
        canvas.polyline(xs, ys, color=palette[i % len(palette)])
    canvas.save(path)


def plot_shape_profile(spec, p_grid, r_vals, path):
    """Silhouette of the surface of revolution: +-r(p) against p."""
    canvas = SvgCanvas(
        _finite_limits([-v for v in r_vals] + list(r_vals)), (-0.55, 0.55),
        title=f"surface silhouette  (m,n)=({spec.m},{spec.n})",
        xlabel="radius", ylabel="p",
    )
    canvas.polyline(r_vals, p_grid, color="steelblue")
    canvas.polyline([-v for v in r_vals], p_grid, color="steelblue")
    canvas.save(path)
