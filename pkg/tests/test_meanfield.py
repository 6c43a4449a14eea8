import numpy as np
import pytest
from math import pi, sqrt

from kummer import meanfield
from kummer.model import ModelSpec


class TestRadius:
    def test_teardrop_midpoint(self):
        assert meanfield.radius(ModelSpec(2, 1, 8), 0.0) == pytest.approx(0.5, abs=1e-15)

    def test_pair_tunneling_closed_form(self):
        spec = ModelSpec(2, 2, 16)
        for p in (-0.4, 0.0, 0.31):
            assert meanfield.radius(spec, p) == pytest.approx(0.25 - p * p, rel=1e-14)

    def test_triple_conversion_closed_form(self):
        spec = ModelSpec(3, 3, 36)
        assert meanfield.radius(spec, 0.0) == pytest.approx(1.0 / 24, rel=1e-14)
        for p in (-0.2, 0.45):
            want = (0.25 - p * p) ** 1.5 / 3.0
            assert meanfield.radius(spec, p) == pytest.approx(want, rel=1e-13)

    def test_bloch_sphere(self):
        spec = ModelSpec(1, 1, 6)
        for p in (-0.5, -0.1, 0.5):
            assert meanfield.radius(spec, p) == pytest.approx(sqrt(max(0.25 - p * p, 0)), abs=1e-15)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            meanfield.radius(ModelSpec(2, 1, 8), 0.6)
        with pytest.raises(ValueError):
            meanfield.potentials(ModelSpec(2, 1, 8), -0.50001)


class TestStructureFunctions:
    def test_closed_forms_2_1(self):
        spec = ModelSpec(2, 1, 8)
        ps = np.linspace(-0.5, 0.5, 7)
        assert np.allclose(
            meanfield.classical_commutator(spec, ps), -0.25 + ps + 3 * ps**2, atol=1e-14
        )
        # linear coefficient -1/2 pinned by g = -r^2 with
        # r^2 = 2(1/2+p)^2(1/2-p) = 1/4 + p/2 - p^2 - 2p^3 and by dg/dp = 2f
        assert np.allclose(
            meanfield.classical_casimir(spec, ps),
            -0.25 - 0.5 * ps + ps**2 + 2 * ps**3,
            atol=1e-14,
        )

    def test_closed_form_2_2(self):
        spec = ModelSpec(2, 2, 8)
        for p in (-0.3, 0.1, 0.5):
            assert meanfield.classical_commutator(spec, p) == pytest.approx(
                2 * p * (0.25 - p * p), abs=1e-14
            )

    def test_bloch_case(self):
        spec = ModelSpec(1, 1, 6)
        for p in (-0.4, 0.0, 0.2):
            assert meanfield.classical_commutator(spec, p) == pytest.approx(p, abs=1e-15)
            assert meanfield.classical_casimir(spec, p) == pytest.approx(p * p - 0.25, abs=1e-15)

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 1), (4, 3)])
    def test_derivative_and_radius_identities(self, m, n):
        # dg/dp = 2 f and g = -r^2 at 1000 seeded random points
        spec = ModelSpec(m, n, 8 * m * n)
        rng = np.random.RandomState(17)
        ps = rng.uniform(-0.5, 0.5, 1000)
        g = meanfield.classical_casimir(spec, ps)
        r = meanfield.radius(spec, ps)
        assert np.max(np.abs(g + r * r)) < 1e-10 * max(np.max(np.abs(g)), 1e-30)
        h = 1e-7
        inner = rng.uniform(-0.49, 0.49, 1000)
        dg = (
            meanfield.classical_casimir(spec, inner + h)
            - meanfield.classical_casimir(spec, inner - h)
        ) / (2 * h)
        f2 = 2 * meanfield.classical_commutator(spec, inner)
        assert np.max(np.abs(dg - f2)) < 1e-6

    def test_analytic_commutator_derivative(self):
        for spec in (ModelSpec(2, 1, 8), ModelSpec(4, 3, 24), ModelSpec(1, 1, 4)):
            h = 1e-6
            for p in (-0.3, 0.05, 0.4):
                num = (
                    meanfield.classical_commutator(spec, p + h)
                    - meanfield.classical_commutator(spec, p - h)
                ) / (2 * h)
                assert meanfield.classical_commutator_deriv(spec, p) == pytest.approx(
                    num, rel=1e-8, abs=1e-8
                )


class TestPotentials:
    def test_join_at_poles(self):
        spec = ModelSpec(3, 2, 30, eps=0.7, v=1.3)
        for p, want in ((0.5, 0.35), (-0.5, -0.35)):
            lo, hi = meanfield.potentials(spec, p)
            assert lo == pytest.approx(want, abs=1e-15)
            assert hi == pytest.approx(want, abs=1e-15)

    def test_teardrop_values(self):
        lo, hi = meanfield.potentials(ModelSpec(2, 1, 8, eps=0.5, v=1.0), 0.0)
        assert (lo, hi) == (pytest.approx(-0.5), pytest.approx(0.5))

    def test_double_well_structure_4_1(self):
        # two separated minima in the lower curve for moderate eps
        spec = ModelSpec(4, 1, 16, eps=0.5, v=1.0)
        ps = np.linspace(-0.5, 0.5, 2001)
        lo, _ = meanfield.potentials(spec, ps)
        interior_max = ps[np.argmax(lo[(ps > -0.49) & (ps < 0.3)])]
        du = np.diff(lo)
        sign_changes = np.sum(np.abs(np.diff(np.sign(du))) > 1)
        assert sign_changes >= 2  # rise, barrier max, well min, rise


class TestFixedPoints:
    def test_pair_tunneling_criterion_values(self):
        fps = meanfield.find_fixed_points(ModelSpec(2, 2, 160, eps=0.6, v=1.0))
        interior = [fp for fp in fps if fp.location == "interior"]
        assert len(interior) == 2
        for fp in interior:
            assert abs(fp.p) == pytest.approx(0.3, abs=1e-12)
            assert abs(fp.sx) == pytest.approx(0.16, abs=1e-12)
            assert abs(fp.energy) == pytest.approx(0.34, abs=1e-12)
            assert fp.stability == "center"
        poles = [fp for fp in fps if fp.location.endswith("pole")]
        assert all(fp.stability == "saddle" for fp in poles)

    def test_teardrop_criterion_values(self):
        fps = meanfield.find_fixed_points(ModelSpec(2, 1, 80, eps=0.5, v=1.0))
        ps = sorted(fp.p for fp in fps)
        assert ps[0] == pytest.approx(-0.5, abs=0)
        assert ps[1] == pytest.approx(0.0, abs=1e-10)
        assert ps[2] == pytest.approx(5.0 / 18.0, abs=1e-10)
        by_p = {round(fp.p, 6): fp for fp in fps}
        assert by_p[-0.5].energy == pytest.approx(-0.25, abs=1e-14)
        assert by_p[0.0].energy == pytest.approx(-0.5, abs=1e-12)
        assert by_p[round(5 / 18, 6)].energy == pytest.approx(
            (1.0 / 0.5) * meanfield.classical_commutator(ModelSpec(2, 1, 80), 5 / 18)
            + 0.5 * 5 / 18,
            rel=1e-12,
        )

    def test_triple_case_roots(self):
        fps = meanfield.find_fixed_points(ModelSpec(3, 3, 360, eps=0.1, v=1.0))
        interior = sorted(fp.p for fp in fps if fp.location == "interior")
        disc = sqrt(1 - 0.64)
        want = sorted(
            [s * sqrt((1 + t * disc) / 8) for s in (1, -1) for t in (1, -1)]
        )
        assert np.allclose(interior, want, atol=1e-10)

    def test_bloch_sphere_fixed_points(self):
        eps, v = 0.6, 0.8
        fps = meanfield.find_fixed_points(ModelSpec(1, 1, 20, eps=eps, v=v))
        assert len(fps) == 2
        omega = sqrt(eps * eps + v * v)
        for fp in fps:
            assert fp.stability == "center"
            assert fp.rate == pytest.approx(omega, rel=1e-12)
            assert abs(fp.energy) == pytest.approx(omega / 2, rel=1e-12)
            assert abs(fp.p) == pytest.approx(eps / (2 * omega), rel=1e-10)

    def test_zero_eps_special_case(self):
        fps = meanfield.find_fixed_points(ModelSpec(2, 1, 80, eps=0.0, v=1.0))
        interior = [fp for fp in fps if fp.location == "interior"]
        assert len(interior) == 2
        p_star = (2 - 1) / (2 * (2 + 1))
        r_star = meanfield.radius(ModelSpec(2, 1, 80), p_star)
        energies = sorted(fp.energy for fp in interior)
        assert energies[0] == pytest.approx(-r_star, rel=1e-12)
        assert energies[1] == pytest.approx(r_star, rel=1e-12)

    def test_degenerate_at_critical_eps(self):
        fps = meanfield.find_fixed_points(ModelSpec(3, 3, 360, eps=0.125, v=1.0))
        degenerate = [fp for fp in fps if fp.stability == "degenerate"]
        assert len(degenerate) == 2
        for fp in degenerate:
            assert abs(fp.p) == pytest.approx(1 / (2 * sqrt(2)), abs=1e-6)

    @pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 3), (4, 4)])
    def test_count_bound_over_eps_grid(self, m, n):
        spec = ModelSpec(m, n, 4 * m * n)
        limit = min(m + n, 6)
        for eps in np.linspace(-3, 3, 121):
            fps = meanfield.find_fixed_points(spec.with_eps(float(eps)))
            assert len(fps) <= limit
            for fp in fps:
                if fp.location == "interior" and spec.with_eps(eps).eps != 0:
                    # tangency consistency: |sx| <= r with equality at extrema
                    r = meanfield.radius(spec, fp.p)
                    assert abs(fp.sx) <= r + 1e-8


class TestBifurcations:
    def test_teardrop_transcritical(self):
        events = meanfield.classify_bifurcations(ModelSpec(2, 1, 8, v=1.0))
        assert len(events) == 2
        for ev in events:
            assert ev.kind == "transcritical"
            assert ev.location == "south_pole"
            assert abs(ev.eps_critical) == pytest.approx(sqrt(2), abs=1e-10)

    def test_pair_tunneling_both_poles(self):
        events = meanfield.classify_bifurcations(ModelSpec(2, 2, 8, v=1.0))
        assert len(events) == 4
        assert {ev.location for ev in events} == {"south_pole", "north_pole"}
        assert all(abs(ev.eps_critical) == pytest.approx(1.0, abs=1e-12) for ev in events)

    def test_triple_saddle_node_and_cusp_energy(self):
        events = meanfield.classify_bifurcations(ModelSpec(3, 3, 18, v=1.0))
        assert len(events) == 4
        for ev in events:
            assert ev.kind == "saddle_node"
            assert abs(ev.eps_critical) == pytest.approx(0.125, abs=1e-10)
            assert abs(ev.location) == pytest.approx(1 / (2 * sqrt(2)), abs=1e-10)
            assert abs(ev.energy) == pytest.approx(1 / (12 * sqrt(2)), abs=1e-10)

    def test_no_events_on_bloch_sphere(self):
        assert meanfield.classify_bifurcations(ModelSpec(1, 1, 4, v=1.0)) == []

    def test_events_sorted_by_magnitude(self):
        events = meanfield.classify_bifurcations(ModelSpec(3, 2, 12, v=1.0))
        mags = [abs(ev.eps_critical) for ev in events]
        assert mags == sorted(mags)
        kinds = {ev.kind for ev in events}
        assert kinds == {"saddle_node", "transcritical"}


class TestPoleSlopes:
    @pytest.mark.parametrize(
        "m,n,south,north",
        [
            (2, 1, sqrt(2), float("inf")),
            (2, 2, 1.0, 1.0),
            (2, 4, 0.5, None),
            (1, 1, float("inf"), float("inf")),
            (3, 3, 0.0, 0.0),
        ],
    )
    def test_slope_rules(self, m, n, south, north):
        spec = ModelSpec(m, n, 8 * m * n)
        geo = meanfield.KummerGeometry(spec)
        got_south, got_north = geo.pole_slopes()
        assert got_south == south
        if north is not None:
            assert got_north == north
        h = 1e-9
        num = meanfield.radius(spec, -0.5 + h) / h
        if south == float("inf"):
            assert num > 1e3
        else:
            assert num == pytest.approx(south, abs=1e-3)


class TestTrajectory:
    def test_stationary_at_center(self):
        spec = ModelSpec(2, 1, 80, eps=0.5, v=1.0)
        fp = [f for f in meanfield.find_fixed_points(spec) if f.p == pytest.approx(0.0, abs=1e-9)][0]
        rec = meanfield.integrate_trajectory(spec, (fp.sx, 0.0, fp.p), 5.0, 1e-3)
        assert np.max(np.abs(rec.states - rec.states[0])) < 1e-9
        assert rec.drift_h < 1e-13 and rec.drift_c < 1e-13

    def test_bloch_precession_period(self):
        # eps = 0 rotation about the x-axis with period 2*pi/v
        v = 1.0
        spec = ModelSpec(1, 1, 20, eps=0.0, v=v)
        rec = meanfield.integrate_trajectory(spec, (0.0, 0.0, 0.5), 2 * pi / v, 1e-4, stride=1)
        # closed-form rotation about the x axis, compared at the landed times
        want = np.stack([
            np.zeros_like(rec.times),
            -0.5 * np.sin(v * rec.times),
            0.5 * np.cos(v * rec.times),
        ], axis=1)
        assert np.max(np.abs(rec.states - want)) < 1e-9

    def test_off_surface_rejected(self):
        spec = ModelSpec(2, 1, 80)
        with pytest.raises(ValueError):
            meanfield.integrate_trajectory(spec, (0.4, 0.0, 0.0), 1.0, 1e-3)

    def test_conservation_medium_run(self):
        spec = ModelSpec(3, 3, 90, eps=0.1, v=1.0)
        start = meanfield.surface_point(spec, 0.2, 1.1)
        rec = meanfield.integrate_trajectory(spec, start, 20.0, 1e-3)
        assert rec.drift_h < 1e-11
        assert rec.drift_c < 1e-11

    def test_states_stay_on_surface(self):
        spec = ModelSpec(2, 2, 32, eps=0.3, v=1.0)
        rec = meanfield.integrate_trajectory(
            spec, meanfield.surface_point(spec, -0.17, 2.0), 10.0, 1e-3, stride=50
        )
        worst = max(abs(meanfield.casimir_value(spec, s)) for s in rec.states)
        assert worst < 1e-11


class TestMesh:
    def test_sphere_mesh(self):
        mesh = meanfield.kummer_mesh(ModelSpec(1, 1, 4), 9, 17)
        assert mesh.shape == (17, 9, 3)
        radii = np.hypot(mesh[:, :, 0], mesh[:, :, 1])
        want = np.sqrt(np.maximum(0.25 - mesh[:, :, 2] ** 2, 0))
        assert np.allclose(radii, want, atol=1e-14)

    def test_teardrop_tip_and_smooth_top(self):
        mesh = meanfield.kummer_mesh(ModelSpec(2, 1, 8), 5, 41)
        radii = np.hypot(mesh[:, :, 0], mesh[:, :, 1])
        assert np.allclose(radii[0], 0.0, atol=1e-15)  # south tip
        assert np.allclose(radii[-1], 0.0, atol=1e-15)  # north pole
        # tip is linear, smooth pole is sqrt-like: compare shell growth
        u = mesh[1, 0, 2] + 0.5
        south_growth = radii[1, 0] / u
        assert south_growth == pytest.approx(sqrt(2) * sqrt(1 - u), rel=1e-12)

    def test_both_poles_cusped(self):
        mesh = meanfield.kummer_mesh(ModelSpec(3, 3, 18), 5, 81)
        radii = np.hypot(mesh[:, :, 0], mesh[:, :, 1])
        dp = mesh[1, 0, 2] - mesh[0, 0, 2]
        assert radii[1, 0] / dp < 0.1  # zero slope at cusp
        assert radii[-2, 0] / dp < 0.1

    def test_resolution_validation(self):
        with pytest.raises(ValueError):
            meanfield.kummer_mesh(ModelSpec(1, 1, 4), 1, 16)
        with pytest.raises(ValueError):
            meanfield.kummer_mesh(ModelSpec(1, 1, 4), 16, 1)
