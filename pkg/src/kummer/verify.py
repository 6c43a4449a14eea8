"""Cross-module invariant suite backing the `verify` CLI command.

Each check returns (name, passed, detail).  Checks are deterministic:
random samples use a fixed seed.
"""

from __future__ import annotations

import dataclasses
from math import pi

import numpy as np

from . import algebra, meanfield, quantum, semiclassics
from .model import ModelSpec


def _rel(err, scale):
    return err / max(scale, 1e-300)


def check_structure_symmetry(spec: ModelSpec):
    """Mode swap sends F(z) to -F(-z) and G(z) to G(-z)."""
    swapped = spec.mirrored()
    rng = np.random.RandomState(7)
    zs = rng.uniform(-spec.z_max, spec.z_max, 64)
    worst = 0.0
    for z in zs:
        f1 = algebra.commutator_poly(spec, z)
        f2 = -algebra.commutator_poly(swapped, -z)
        g1 = algebra.casimir_poly(spec, z)
        g2 = algebra.casimir_poly(swapped, -z)
        scale = max(abs(f1), abs(g1), 1.0)
        worst = max(worst, abs(f1 - f2) / scale, abs(g1 - g2) / scale)
    return "structure polynomial mode-swap symmetry", worst < 1e-12, f"max rel {worst:.2e}"


def check_structure_degree(spec: ModelSpec):
    """F has degree m+n-1 and G degree m+n (finite-difference order)."""

    def degree_of(fn, max_deg):
        h = 0.5
        vals = np.array([fn(k * h) for k in range(max_deg + 2)])
        for deg in range(max_deg + 1):
            diffs = np.diff(vals, deg + 1)
            scale = np.max(np.abs(vals)) + 1e-300
            if np.max(np.abs(diffs)) < 1e-8 * scale:
                return deg
        return max_deg + 1

    want_f = spec.m + spec.n - 1
    want_g = spec.m + spec.n
    got_f = degree_of(lambda z: algebra.commutator_poly(spec, z), want_f + 2)
    got_g = degree_of(lambda z: algebra.casimir_poly(spec, z), want_g + 2)
    ok = got_f == want_f and got_g == want_g
    return "structure polynomial degrees", ok, f"deg F={got_f} (want {want_f}), deg G={got_g} (want {want_g})"


def check_completion_identity(spec: ModelSpec):
    """Casimir completion reproduces the difference identity for k <= 3."""
    rng = np.random.RandomState(11)
    worst = 0.0
    for _ in range(8):
        alpha = rng.uniform(-2, 2, 4)
        worst = max(worst, algebra.completion_residual(alpha, np.linspace(-10, 10, 41)))
    return "Casimir completion difference identity", worst < 1e-12, f"max residual {worst:.2e}"


def check_commutators(spec: ModelSpec):
    res = quantum.commutator_residuals(spec)
    worst = max(res["sz_sx"], res["sy_sz"], res["sx_sy"])
    ok = worst < 1e-10 and res["casimir"] < 1e-9
    return (
        "matrix commutators and Casimir scalarity",
        ok,
        f"comm {worst:.2e}, casimir {res['casimir']:.2e} (value {res['casimir_value']:.3e})",
    )


def check_ladder_identity(spec: ModelSpec):
    """Ladder strengths equal the weighted ladder product at shifted argument."""
    c = (spec.n**spec.n * spec.m**spec.m) / float(spec.N) ** (spec.m + spec.n - 2)
    worst = 0.0
    for mu in range(spec.dim + 1):
        direct = quantum.ladder_strength(spec, mu)
        via_product = c * algebra.ladder_product(spec, spec.sz_value(mu) - 1.0)
        worst = max(worst, abs(direct - via_product) / max(abs(direct), 1.0))
    return "ladder strength vs ladder product", worst < 1e-10, f"max rel {worst:.2e}"


def check_classical_identities(spec: ModelSpec):
    rng = np.random.RandomState(3)
    ps = rng.uniform(-0.5, 0.5, 1000)
    g = meanfield.classical_casimir(spec, ps)
    r = meanfield.radius(spec, ps)
    err_gr = np.max(np.abs(g + r * r)) / max(np.max(np.abs(g)), 1e-300)
    h = 1e-6
    dg = (meanfield.classical_casimir(spec, np.clip(ps + h, -0.5, 0.5))
          - meanfield.classical_casimir(spec, np.clip(ps - h, -0.5, 0.5))) / (2 * h)
    f2 = 2.0 * meanfield.classical_commutator(spec, ps)
    err_df = np.max(np.abs(dg - f2)) / max(np.max(np.abs(f2)), 1e-300)
    ok = err_gr < 1e-10 and err_df < 1e-7  # central difference limits err_df
    return "classical identities g = -r^2 and dg/dp = 2f", ok, f"g+r^2 {err_gr:.2e}, dg-2f {err_df:.2e}"


def check_pole_slopes(spec: ModelSpec):
    geo = meanfield.KummerGeometry(spec)
    south, north = geo.pole_slopes()
    h = 1e-10
    ok = True
    detail = []
    for pole, expect in ((-0.5, south), (0.5, north)):
        num = abs(meanfield.radius(spec, pole + (h if pole < 0 else -h))) / h
        if expect == float("inf"):
            ok &= num > 1e3
        elif expect == 0.0:
            ok &= num < 1e-3
        else:
            num = abs(meanfield.radius(spec, pole + (1e-8 if pole < 0 else -1e-8))) / 1e-8
            ok &= abs(num - expect) < 1e-4
        detail.append(f"{num:.3g} vs {expect}")
    return "pole slope rules of the radius", bool(ok), "; ".join(detail)


def check_spectrum_bounds(spec: ModelSpec):
    fps = meanfield.find_fixed_points(spec)
    emin = min(fp.energy for fp in fps)
    emax = max(fp.energy for fp in fps)
    scaled = quantum.eigen_spectrum(spec).scaled_eigenvalues
    eta = spec.eta
    ok = scaled.min() >= emin - 3 * eta and scaled.max() <= emax + 3 * eta
    return (
        "scaled spectrum within classical band (3 eta slack)",
        bool(ok),
        f"[{scaled.min():.4f},{scaled.max():.4f}] vs [{emin:.4f},{emax:.4f}]",
    )


def check_nondegeneracy(spec: ModelSpec):
    raw = quantum.eigen_spectrum(spec).raw_eigenvalues
    gap = np.min(np.diff(raw)) if len(raw) > 1 else 1.0
    return "nondegenerate spectrum", bool(gap > 0), f"min gap {gap:.3e}"


def check_fixed_point_count(spec: ModelSpec):
    limit = min(spec.m + spec.n, 6)
    worst = 0
    for eps in np.linspace(-3, 3, 61):
        fps = meanfield.find_fixed_points(spec.with_eps(float(eps)))
        worst = max(worst, len(fps))
    return "fixed point count bound min(m+n, 6)", worst <= limit, f"max {worst} (limit {limit})"


def check_poincare_index(spec: ModelSpec):
    """Index sum is invariant across saddle-node events, steps at transcritical."""

    def index_sum(eps):
        total = 0
        for fp in meanfield.find_fixed_points(spec.with_eps(eps)):
            if fp.stability == "center":
                total += 1
            elif fp.stability == "saddle":
                total -= 1
        return total

    # events sharing one eps_c act together (both poles can bifurcate at once)
    groups = {}
    for ev in meanfield.classify_bifurcations(spec):
        key = round(ev.eps_critical, 9)
        groups.setdefault(key, []).append(ev)
    ok = True
    detail = []
    for eps_c, events in sorted(groups.items()):
        lo = index_sum(eps_c * 0.98)
        hi = index_sum(eps_c * 1.02)
        step = abs(hi - lo)
        want = sum(1 for ev in events if ev.kind == "transcritical")
        ok &= step == want
        detail.append(f"{eps_c:+.4f}: {lo}->{hi} (want step {want})")
    return "Poincare index across bifurcations", bool(ok), "; ".join(detail) or "no events"


def check_action_period(spec: ModelSpec):
    """dS/dE matches the orbit period away from saddle energies."""
    fps = meanfield.find_fixed_points(spec)
    energies = sorted(fp.energy for fp in fps)
    emin, emax = energies[0], energies[-1]
    worst = 0.0
    for frac in (0.31, 0.57, 0.83):
        e = emin + frac * (emax - emin)
        if any(abs(e - fp.energy) < 2e-3 * (emax - emin) for fp in fps):
            continue
        tps = semiclassics.turning_points(spec, e)
        h = 1e-6 * (emax - emin)

        def s_tot(x):
            t = semiclassics.turning_points(spec, x)
            return sum(
                semiclassics.action_area(spec, x, i) for i in range(len(t.regions))
            )

        deriv = (s_tot(e + h) - s_tot(e - h)) / (2 * h)
        period = semiclassics.orbit_period(spec, e)
        worst = max(worst, abs(deriv - period) / period)
    return "action derivative equals orbit period", worst < 1e-6, f"max rel {worst:.2e}"


def check_action_monotonic(spec: ModelSpec):
    fps = meanfield.find_fixed_points(spec)
    emin = min(fp.energy for fp in fps)
    emax = max(fp.energy for fp in fps)
    grid = emin + (emax - emin) * np.linspace(1e-4, 1.0 - 1e-4, 41)
    vals = []
    for e in grid:
        try:
            t = semiclassics.turning_points(spec, float(e))
            vals.append(
                sum(semiclassics.action_area(spec, float(e), i) for i in range(len(t.regions)))
            )
        except ValueError:
            vals.append(np.nan)
    vals = np.array(vals)
    good = ~np.isnan(vals)
    diffs = np.diff(vals[good])
    ok = np.all(diffs > -1e-9) and vals[good][0] < vals[good][-1]
    return (
        "total phase-space area increases across the band",
        bool(ok),
        f"S spans [{np.nanmin(vals):.4f}, {np.nanmax(vals):.4f}] of 2pi={2 * pi:.4f}",
    )


def check_eigen_residual(spec: ModelSpec):
    if spec.dim > 200:
        small = dataclasses.replace(spec, N=min(spec.N, 160 * spec.m * spec.n))
    else:
        small = spec
    res = quantum.eigen_residual(small)
    return "eigenpair residual spot check", res < 1e-10, f"max rel residual {res:.2e}"


def check_trajectory(spec: ModelSpec):
    start = meanfield.surface_point(spec, 0.1337, 0.71)
    rec = meanfield.integrate_trajectory(spec, start, 10.0, 1e-3)
    ok = rec.drift_h < 1e-10 and rec.drift_c < 1e-10
    return "trajectory conserves H and C (t=10)", bool(ok), f"dH {rec.drift_h:.2e}, dC {rec.drift_c:.2e}"


def check_classical_limit(spec: ModelSpec):
    """eta-scaled commutator diagonal converges to f with O(1/N) error."""
    errs = []
    ns = []
    base = spec.m * spec.n
    start = max(spec.N // base, 20)
    for mult in (start, 2 * start):
        s = dataclasses.replace(spec, N=mult * base)
        eta = s.eta
        worst = 0.0
        for mu in range(s.dim):
            z = s.sz_value(mu)
            worst = max(
                worst,
                abs(eta * algebra.commutator_poly(s, z)
                    - meanfield.classical_commutator(s, eta * z)),
            )
        errs.append(worst)
        ns.append(s.N)
    if max(errs) < 1e-14:  # undeformed algebra: the limit is exact
        return "classical limit error decays like 1/N", True, "exact at machine precision"
    rate = np.log(errs[0] / errs[1]) / np.log(ns[1] / ns[0])
    ok = 0.7 <= rate <= 1.3
    return "classical limit error decays like 1/N", bool(ok), f"rate {rate:.3f}, errs {errs[0]:.2e}->{errs[1]:.2e}"


ALL_CHECKS = (
    check_structure_symmetry,
    check_structure_degree,
    check_completion_identity,
    check_commutators,
    check_ladder_identity,
    check_classical_identities,
    check_pole_slopes,
    check_spectrum_bounds,
    check_nondegeneracy,
    check_fixed_point_count,
    check_poincare_index,
    check_action_period,
    check_action_monotonic,
    check_eigen_residual,
    check_trajectory,
    check_classical_limit,
)


def run_all(spec: ModelSpec):
    """Run every invariant check; returns a list of (name, ok, detail)."""
    results = []
    for check in ALL_CHECKS:
        try:
            results.append(check(spec))
        except Exception as exc:  # a crashed check is a failed check
            results.append((check.__name__, False, f"raised {type(exc).__name__}: {exc}"))
    return results
