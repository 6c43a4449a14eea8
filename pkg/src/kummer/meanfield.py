"""Classical limit: Kummer-shape geometry, fixed points, trajectories.

The mean-field state s = (sx, sy, sz) moves on the surface
sx^2 + sy^2 = r^2(sz) with r(p) = r0 (1/2+p)^(m/2) (1/2-p)^(n/2),
driven by dsx/dt = -eps*sy, dsy/dt = eps*sx - v*f(sz), dsz/dt = v*sy.
The structure functions f and g satisfy dg/dp = 2 f and g = -r^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, nan, pi, sin, sqrt

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq, minimize_scalar

from .model import ModelSpec

DEGENERATE_TOL = 1e-10  # |eps^2 + v^2 f'| below this is a bifurcation point


def _shape_prefactor(spec: ModelSpec) -> float:
    m, n = spec.m, spec.n
    return float(m) ** (2 - n) * float(n) ** (2 - m)


def radius_coefficient(spec: ModelSpec) -> float:
    """r0 = 1/sqrt(m^(n-2) n^(m-2)), the scale of the surface radius."""
    return 1.0 / sqrt(float(spec.m) ** (spec.n - 2) * float(spec.n) ** (spec.m - 2))


def _check_domain(p):
    p = np.asarray(p, dtype=float)
    if np.any(p < -0.5) or np.any(p > 0.5):
        raise ValueError("p must lie in [-1/2, 1/2]")
    return p


def radius(spec: ModelSpec, p):
    """Surface radius r(p) = r0 (1/2+p)^(m/2) (1/2-p)^(n/2) on [-1/2, 1/2]."""
    p = _check_domain(p)
    x = np.maximum(0.5 + p, 0.0)
    y = np.maximum(0.5 - p, 0.0)
    out = radius_coefficient(spec) * x ** (spec.m / 2.0) * y ** (spec.n / 2.0)
    return float(out) if out.ndim == 0 else out


def radius_deriv(spec: ModelSpec, p):
    """dr/dp; infinite at a pole whose mode index is 1."""
    p = _check_domain(p)
    m, n = spec.m, spec.n
    x = np.maximum(0.5 + p, 0.0)
    y = np.maximum(0.5 - p, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = radius_coefficient(spec) * (
            (m / 2.0) * x ** (m / 2.0 - 1.0) * y ** (n / 2.0)
            - (n / 2.0) * x ** (m / 2.0) * y ** (n / 2.0 - 1.0)
        )
    return float(out) if out.ndim == 0 else out


def classical_commutator(spec: ModelSpec, p):
    """Structure function f with {sx, sy} = f(sz); a polynomial, total in p."""
    p = np.asarray(p, dtype=float)
    m, n = spec.m, spec.n
    x = 0.5 + p
    y = 0.5 - p
    out = 0.5 * _shape_prefactor(spec) * (
        n * x**m * y ** (n - 1) - m * x ** (m - 1) * y**n
    )
    return float(out) if out.ndim == 0 else out


def classical_casimir(spec: ModelSpec, p):
    """Structure function g with C = sx^2 + sy^2 + g(sz); equals -r^2 on domain."""
    p = np.asarray(p, dtype=float)
    out = -_shape_prefactor(spec) * (0.5 + p) ** spec.m * (0.5 - p) ** spec.n
    return float(out) if out.ndim == 0 else out


def classical_commutator_deriv(spec: ModelSpec, p):
    """df/dp, with vanishing-coefficient terms dropped before evaluation."""
    p = np.asarray(p, dtype=float)
    m, n = spec.m, spec.n
    x = 0.5 + p
    y = 0.5 - p
    out = 2.0 * m * n * x ** (m - 1) * y ** (n - 1)
    if n >= 2:
        out = out - n * (n - 1) * x**m * y ** (n - 2)
    if m >= 2:
        out = out - m * (m - 1) * x ** (m - 2) * y**n
    out = 0.5 * _shape_prefactor(spec) * out
    return float(out) if out.ndim == 0 else out


def casimir_value(spec: ModelSpec, state) -> float:
    """C(s) = sx^2 + sy^2 + g(sz); zero on the physical surface."""
    sx, sy, sz = state
    return float(sx * sx + sy * sy + classical_casimir(spec, sz))


def potentials(spec: ModelSpec, p):
    """Momentum potential curves U-(p) <= U+(p) bounding the energy at p."""
    r = radius(spec, p)
    base = np.asarray(p, dtype=float) * spec.eps
    lo, hi = base - spec.v * r, base + spec.v * r
    if np.asarray(p).ndim == 0:
        return float(lo), float(hi)
    return lo, hi


def _commutator_coeffs(spec: ModelSpec) -> np.ndarray:
    """Ascending polynomial coefficients of f."""
    m, n = spec.m, spec.n
    xp, yp = np.array([0.5, 1.0]), np.array([0.5, -1.0])
    term = n * npoly.polymul(npoly.polypow(xp, m), npoly.polypow(yp, n - 1))
    term2 = m * npoly.polymul(npoly.polypow(xp, m - 1), npoly.polypow(yp, n))
    deg = max(len(term), len(term2))
    out = np.zeros(deg)
    out[: len(term)] += term
    out[: len(term2)] -= term2
    return 0.5 * _shape_prefactor(spec) * out


def _casimir_coeffs(spec: ModelSpec) -> np.ndarray:
    """Ascending polynomial coefficients of g."""
    xp, yp = np.array([0.5, 1.0]), np.array([0.5, -1.0])
    out = npoly.polymul(npoly.polypow(xp, spec.m), npoly.polypow(yp, spec.n))
    return -_shape_prefactor(spec) * out


@dataclass(frozen=True)
class FixedPoint:
    """Stationary point of the classical flow (sy = 0 always)."""

    p: float
    q: float  # 0 or pi for interior points, nan at a pole
    sx: float
    energy: float
    stability: str  # 'center', 'saddle' or 'degenerate'
    rate: float  # rotation frequency omega (center) or exponent lambda (saddle)
    location: str  # 'interior', 'south_pole' or 'north_pole'


def _classify(spec: ModelSpec, p: float):
    jac = spec.eps**2 + spec.v**2 * classical_commutator_deriv(spec, p)
    if jac > DEGENERATE_TOL:
        return "center", sqrt(jac)
    if jac < -DEGENERATE_TOL:
        return "saddle", sqrt(-jac)
    return "degenerate", 0.0


def _reduced_residual(spec: ModelSpec, p):
    """Fixed-point condition v^2 f^2 = eps^2 r^2 with pole factors removed.

    The common power of (1/2 +- p) shared by f^2 and r^2 is divided out,
    so pole roots (handled by rule) never appear and mode indices of 1
    stay polynomial.
    """
    p = np.asarray(p, dtype=float)
    m, n = spec.m, spec.n
    x = 0.5 + p
    y = 0.5 - p
    am = m if m >= 2 else 0
    an = n if n >= 2 else 0
    c = 0.5 * _shape_prefactor(spec)
    r0sq = _shape_prefactor(spec)
    lin = n * x - m * y
    term_f = (spec.v * c) ** 2 * x ** (2 * m - 2 - am) * y ** (2 * n - 2 - an) * lin**2
    term_r = spec.eps**2 * r0sq * x ** (m - am) * y ** (n - an)
    return term_f - term_r


def _interior_roots(spec: ModelSpec, grid_size: int = 4096):
    """All roots of the reduced fixed-point condition in the open interval."""
    if spec.eps == 0.0:
        # stationary requires f(p) = 0; the only interior zero is n*x = m*y
        p_star = (spec.m - spec.n) / (2.0 * (spec.m + spec.n))
        return [p_star], []

    pts = list(np.linspace(-0.5, 0.5, grid_size))
    for k in range(1, 27):  # cluster towards the poles for near-pole roots
        offset = 0.5 - 4.0**-k
        pts.extend((-offset, offset))
    pts = np.unique(np.array(pts))
    vals = _reduced_residual(spec, pts)

    roots = []
    for i in range(len(pts) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(pts[i])
        elif a * b < 0.0:
            roots.append(brentq(lambda t: _reduced_residual(spec, t), pts[i], pts[i + 1], xtol=1e-15, rtol=8.9e-16))
    if vals[-1] == 0.0:
        roots.append(pts[-1])

    # tangent (double) roots: local minima of |residual| that reach zero
    degenerate = []
    scale = np.maximum.accumulate(np.abs(vals))[-1] + 1e-300
    for i in range(1, len(pts) - 1):
        if abs(vals[i]) <= abs(vals[i - 1]) and abs(vals[i]) <= abs(vals[i + 1]):
            # grid-sampled residual near a tangency is quadratically
            # suppressed, not zero; the post-polish test is the gate
            if abs(vals[i]) > 1e-5 * scale:
                continue
            if any(abs(pts[i] - r) < 2 * (pts[i + 1] - pts[i - 1]) for r in roots):
                continue
            res = minimize_scalar(
                lambda t: abs(_reduced_residual(spec, t)),
                bounds=(pts[i - 1], pts[i + 1]),
                method="bounded",
                options={"xatol": 1e-14},
            )
            if abs(res.fun) <= 1e-10 * scale:
                degenerate.append(float(res.x))

    interior = [r for r in roots if -0.5 < r < 0.5]
    return sorted(interior), sorted(degenerate)


def find_fixed_points(spec: ModelSpec) -> list:
    """All fixed points: interior roots plus the poles demanded by m, n > 1.

    Interior points carry sx = (v/eps) f(p) (or sx = +-r for eps = 0);
    energies are E = v*sx + eps*p.  Stability follows the sign of
    eps^2 + v^2 f'(p).
    """
    out = []
    if spec.m > 1:
        kind, rate = _classify(spec, -0.5)
        out.append(FixedPoint(-0.5, nan, 0.0, -spec.eps / 2.0, kind, rate, "south_pole"))
    if spec.n > 1:
        kind, rate = _classify(spec, 0.5)
        out.append(FixedPoint(0.5, nan, 0.0, spec.eps / 2.0, kind, rate, "north_pole"))

    simple, degenerate = _interior_roots(spec)
    if spec.eps == 0.0:
        for p in simple:
            r = radius(spec, p)
            kind, rate = _classify(spec, p)
            out.append(FixedPoint(p, 0.0, r, spec.v * r, kind, rate, "interior"))
            out.append(FixedPoint(p, pi, -r, -spec.v * r, kind, rate, "interior"))
    else:
        seen = []
        for p in simple + degenerate:
            if any(abs(p - s) < 1e-11 for s in seen):
                continue
            seen.append(p)
            sx = (spec.v / spec.eps) * classical_commutator(spec, p)
            q = 0.0 if sx >= 0.0 else pi
            energy = spec.v * sx + spec.eps * p
            kind, rate = _classify(spec, p)
            out.append(FixedPoint(p, q, sx, energy, kind, rate, "interior"))

    out.sort(key=lambda fp: fp.p)
    limit = min(spec.m + spec.n, 6)
    if len(out) > limit:
        raise RuntimeError(f"found {len(out)} fixed points, expected at most {limit}")
    return out


@dataclass(frozen=True)
class BifurcationEvent:
    eps_critical: float
    kind: str  # 'saddle_node' or 'transcritical'
    location: float | str  # inflection p value, or pole name
    energy: float


def inflection_points(spec: ModelSpec) -> list:
    """Interior inflection points of r(p), from the closed-form quadratic.

    r'' = 0 reduces to m(m-2)(1/2-p)^2 - 2mn(1/4-p^2) + n(n-2)(1/2+p)^2 = 0.
    Each candidate is confirmed by a sign change of r'' measured with
    second differences.
    """
    m, n = spec.m, spec.n
    a = (m + n) * (m + n - 2)
    b = (n - m) * (m + n - 2)
    c = ((m - n) ** 2 - 2 * (m + n)) / 4.0
    if a == 0:
        cands = [-c / b] if b != 0 else []
    else:
        disc = b * b - 4 * a * c
        if disc < 0:
            cands = []
        else:
            cands = [(-b - sqrt(disc)) / (2 * a), (-b + sqrt(disc)) / (2 * a)]
    out = []
    h = 1e-5
    for p in sorted(cands):
        if not -0.5 + h < p < 0.5 - h:
            continue
        dd = lambda t: radius(spec, t - h) - 2 * radius(spec, t) + radius(spec, t + h)
        if dd(p - 2 * h) * dd(p + 2 * h) < 0:
            out.append(float(p))
    return out


def classify_bifurcations(spec: ModelSpec) -> list:
    """Critical eps values where the fixed-point count changes.

    Saddle-node events occur at the inflection points of r with
    eps_c = +-v r'(p); transcritical events exist only for a mode index
    of exactly 2, at eps_c = +-v 2^(1-n/2) (south) or +-v 2^(1-m/2) (north).
    """
    events = []
    for p in inflection_points(spec):
        slope = radius_deriv(spec, p)
        if abs(slope) < 1e-14:
            continue
        for sign in (1.0, -1.0):
            eps_c = sign * spec.v * slope
            energy = (spec.v**2 / eps_c) * classical_commutator(spec, p) + eps_c * p
            events.append(BifurcationEvent(eps_c, "saddle_node", p, energy))
    if spec.m == 2:
        for sign in (1.0, -1.0):
            eps_c = sign * spec.v * 2.0 ** (1.0 - spec.n / 2.0)
            events.append(BifurcationEvent(eps_c, "transcritical", "south_pole", -eps_c / 2.0))
    if spec.n == 2:
        for sign in (1.0, -1.0):
            eps_c = sign * spec.v * 2.0 ** (1.0 - spec.m / 2.0)
            events.append(BifurcationEvent(eps_c, "transcritical", "north_pole", eps_c / 2.0))
    events.sort(key=lambda ev: (abs(ev.eps_critical), ev.eps_critical))
    return events


@dataclass(frozen=True)
class TrajectoryRecord:
    times: np.ndarray
    states: np.ndarray  # (samples, 3) rows of (sx, sy, sz)
    drift_h: float  # max |H(t) - H(0)| over every step taken
    drift_c: float  # max |C(t) - C(0)|


def integrate_trajectory(spec: ModelSpec, initial, t_end: float, dt: float,
                         stride: int = 1) -> TrajectoryRecord:
    """Fixed-step 4th-order Runge-Kutta integration on the Kummer surface.

    The initial point must satisfy C(s) = 0 within 1e-10.  Conservation
    of H and C is tracked at every step; states are stored every
    `stride` steps.
    """
    sx, sy, sz = (float(c) for c in initial)
    if abs(casimir_value(spec, (sx, sy, sz))) > 1e-10:
        raise ValueError("initial point does not lie on the C = 0 surface")
    if dt <= 0 or t_end <= 0:
        raise ValueError("t_end and dt must be positive")

    eps, v = spec.eps, spec.v
    fc = _commutator_coeffs(spec)[::-1]  # descending for Horner
    gc = _casimir_coeffs(spec)[::-1]

    def fval(z):
        acc = 0.0
        for c in fc:
            acc = acc * z + c
        return acc

    def gval(z):
        acc = 0.0
        for c in gc:
            acc = acc * z + c
        return acc

    h0 = v * sx + eps * sz
    c0 = sx * sx + sy * sy + gval(sz)
    steps = int(round(t_end / dt))
    times = [0.0]
    states = [(sx, sy, sz)]
    drift_h = 0.0
    drift_c = 0.0
    for k in range(1, steps + 1):
        ax1, ay1, az1 = -eps * sy, eps * sx - v * fval(sz), v * sy
        x2, y2, z2 = sx + 0.5 * dt * ax1, sy + 0.5 * dt * ay1, sz + 0.5 * dt * az1
        ax2, ay2, az2 = -eps * y2, eps * x2 - v * fval(z2), v * y2
        x3, y3, z3 = sx + 0.5 * dt * ax2, sy + 0.5 * dt * ay2, sz + 0.5 * dt * az2
        ax3, ay3, az3 = -eps * y3, eps * x3 - v * fval(z3), v * y3
        x4, y4, z4 = sx + dt * ax3, sy + dt * ay3, sz + dt * az3
        ax4, ay4, az4 = -eps * y4, eps * x4 - v * fval(z4), v * y4
        sx += dt * (ax1 + 2 * ax2 + 2 * ax3 + ax4) / 6.0
        sy += dt * (ay1 + 2 * ay2 + 2 * ay3 + ay4) / 6.0
        sz += dt * (az1 + 2 * az2 + 2 * az3 + az4) / 6.0
        drift_h = max(drift_h, abs(v * sx + eps * sz - h0))
        drift_c = max(drift_c, abs(sx * sx + sy * sy + gval(sz) - c0))
        if k % stride == 0 or k == steps:
            times.append(k * dt)
            states.append((sx, sy, sz))
    return TrajectoryRecord(np.array(times), np.array(states), drift_h, drift_c)


def surface_point(spec: ModelSpec, p: float, angle: float):
    """Point (sx, sy, sz) on the surface at height p and azimuth angle."""
    r = radius(spec, p)
    return (r * cos(angle), r * sin(angle), p)


def kummer_mesh(spec: ModelSpec, n_theta: int, n_p: int) -> np.ndarray:
    """Surface-of-revolution sample grid, shape (n_p, n_theta, 3).

    Rows sweep p from the south to the north pole (both included, so
    tips and cusps are present); columns sweep the azimuth over a full
    turn with the seam repeated.
    """
    if n_theta < 2 or n_p < 2:
        raise ValueError("mesh resolutions must be >= 2")
    p = np.linspace(-0.5, 0.5, n_p)
    theta = np.linspace(0.0, 2.0 * pi, n_theta)
    r = radius(spec, p)
    mesh = np.empty((n_p, n_theta, 3))
    mesh[:, :, 0] = r[:, None] * np.cos(theta)[None, :]
    mesh[:, :, 1] = r[:, None] * np.sin(theta)[None, :]
    mesh[:, :, 2] = p[:, None]
    return mesh


@dataclass(frozen=True)
class KummerGeometry:
    """Shape data for one (m, n) pair: the radius profile and its scale."""

    spec: ModelSpec

    @property
    def r0(self) -> float:
        return radius_coefficient(self.spec)

    def radius(self, p):
        return radius(self.spec, p)

    def pole_slopes(self):
        """(south, north) slope of r; infinite for a mode index of 1."""
        south = float("inf") if self.spec.m == 1 else (
            2.0 ** (1.0 - self.spec.n / 2.0) if self.spec.m == 2 else 0.0
        )
        north = float("inf") if self.spec.n == 1 else (
            2.0 ** (1.0 - self.spec.m / 2.0) if self.spec.n == 2 else 0.0
        )
        return south, north
