import io

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qmix.combine import QTriple, pdelta_from_q
from qmix.linkage import (
    LinkageConfig,
    config_deltas,
    LinkageSpec,
    b0,
    grashof,
    orbit_count,
    orbit_count_bruteforce,
    orbit_trace,
    solve_configs,
    write_orbit_csv,
)

UNIFORM = (1 / 3, 1 / 3, 1 / 3)


def uniform_spec():
    spec, assignment = LinkageSpec.from_weights(UNIFORM)
    return spec


class TestCriticalLength:
    def test_special_point(self):
        # at c = 2/3 the crossover length coincides with c itself
        assert abs(b0(2 / 3) - 2 / 3) < 1e-14

    def test_frozen_value(self):
        assert abs(b0(0.8) - 0.5123105625617661) < 1e-15

    def test_interpolates_monotone(self):
        cs = np.linspace(1 / np.sqrt(3) + 1e-3, 1 - 1e-3, 50)
        vals = np.array([b0(c) for c in cs])
        assert (np.diff(vals) < 0).all()

    def test_threshold_flips_orbit_count(self):
        c = 0.8
        for eps, expect in ((-1e-3, 1), (1e-3, 2)):
            b = b0(c) + eps
            a2 = 1 - c * c - b * b
            spec, _ = LinkageSpec.from_weights((a2, b * b, c * c))
            assert orbit_count(spec) == expect


class TestGrashof:
    def test_double_crank(self):
        assert grashof(0.1, 0.6, 0.7935, 1.0)

    def test_not_double_crank(self):
        assert not grashof(0.5, 0.6, 0.6245, 1.0)

    def test_equality_excluded(self):
        # a + d = b + c exactly: boundary case counts as non-Grashof
        assert not grashof(0.2, 0.5, 0.7, 1.0)

    def test_requires_sorted(self):
        with pytest.raises(ValueError):
            grashof(0.6, 0.1, 0.7935, 1.0)


class TestOrbitCount:
    def test_uniform_single(self):
        assert orbit_count(uniform_spec()) == 1

    def test_grashof_pair(self):
        # a = 0, b = 0.6, c = 0.8 gives the two-loop regime
        spec, _ = LinkageSpec.from_weights((0.0, 0.36, 0.64))
        assert orbit_count(spec) == 2

    def test_balanced_edge_is_single(self):
        # b == c == 2/3 sits exactly on the threshold: strict inequality
        # keeps it a single component
        spec, _ = LinkageSpec.from_weights((1 / 9, 4 / 9, 4 / 9))
        assert orbit_count(spec) == 1


class TestSpecValidation:
    def test_weights_must_normalize(self):
        with pytest.raises(ValueError):
            LinkageSpec.from_weights((0.5, 0.5, 0.5))

    def test_sorted_sides(self):
        spec, assignment = LinkageSpec.from_weights((0.64, 0.06, 0.30))
        a, b, c = spec.a, spec.b, spec.c
        assert a <= b <= c
        assert abs(a * a + b * b + c * c - 1) < 1e-10
        # assignment maps sorted slots back to the original inputs
        lengths = np.sqrt([0.64, 0.06, 0.30])
        assert_allclose(np.array([a, b, c]), np.sort(lengths), atol=1e-12)
        # assignment keeps the user's slot order
        assert_allclose(assignment, lengths, atol=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            LinkageSpec.from_weights((-0.1, 0.55, 0.55))


class TestSolveConfigs:
    def test_uniform_generic_two_solutions(self):
        cfgs = solve_configs(uniform_spec(), theta=0.3)
        assert len(cfgs) == 2
        for cfg in cfgs:
            q = QTriple(cfg.q1, cfg.q2, cfg.q3)
            assert abs(sum(q.as_array()) - 1) < 1e-8

    def test_mirror_pair_about_chord(self):
        cfgs = solve_configs(uniform_spec(), theta=0.3)
        a, b = cfgs
        w = 1 - a.q1
        mirror = lambda z: w * w * np.conj(z) / abs(w) ** 2
        assert abs(mirror(a.q2) - b.q2) < 1e-9
        assert abs(mirror(a.q3) - b.q3) < 1e-9

    def test_mirror_is_conjugate_at_zero_crank(self):
        cfgs = solve_configs(uniform_spec(), theta=0.0)
        a, b = cfgs
        assert abs(np.conj(a.q2) - b.q2) < 1e-9

    def test_uniform_tangency(self):
        # the uniform triangle closes in a line exactly at theta = pi/2
        cfgs = solve_configs(uniform_spec(), theta=np.pi / 2)
        assert len(cfgs) == 1
        # the two moving bars fold onto the chord
        assert abs(np.imag(cfgs[0].q2 * np.conj(cfgs[0].q3))) < 1e-7
        assert abs(cfgs[0].q2 - cfgs[0].q3) < 1e-7

    def test_no_solution_region(self):
        # uniform upper window is free above cos(theta) = 2/sqrt(3) > 1, so
        # only the lower bound can cut; past pi/2 nothing closes
        cfgs = solve_configs(uniform_spec(), theta=2.0)
        assert cfgs == []

    def test_closure_and_norm(self):
        rng = np.random.default_rng(1)
        for _ in range(40):
            w = rng.dirichlet([1, 1, 1])
            spec, _ = LinkageSpec.from_weights(tuple(w))
            for theta in rng.uniform(-np.pi, np.pi, size=4):
                for cfg in solve_configs(spec, theta=theta):
                    qa = np.array([cfg.q1, cfg.q2, cfg.q3])
                    assert abs(qa.sum() - 1) < 1e-8
                    assert abs((np.abs(qa) ** 2).sum() - 1) < 1e-8

    def test_zero_bar(self):
        spec, _ = LinkageSpec.from_weights((0.0, 0.5, 0.5))
        cfgs = solve_configs(spec, theta=0.0)
        assert len(cfgs) >= 1
        for cfg in cfgs:
            assert abs(cfg.q1) < 1e-9


class TestOrbitTrace:
    def test_uniform_single_loop(self):
        orbits = orbit_trace(uniform_spec(), steps=1200)
        assert len(orbits) == 1

    def test_uniform_nested_count(self):
        orbits = orbit_trace(uniform_spec(), steps=1200)
        hits = 0
        for cfg in orbits[0]:
            d = config_deltas(cfg)
            hits += int(min(abs(np.cos(x)) for x in d) < 1e-6)
        assert hits == 12

    def test_constraints_hold_everywhere(self):
        orbits = orbit_trace(uniform_spec(), steps=240)
        for loop in orbits:
            for cfg in loop:
                qa = cfg.as_array()
                assert abs(qa.sum() - 1) < 1e-8
                assert abs((np.abs(qa) ** 2).sum() - 1) < 1e-8

    def test_angle_gaps_bounded(self):
        steps = 240
        orbits = orbit_trace(uniform_spec(), steps=steps)
        max_gap = 2 * np.pi * 3 / steps
        for loop in orbits:
            angles = np.array([[np.angle(z) for z in cfg.as_array()]
                               for cfg in loop])
            wrapped = np.concatenate([angles, angles[:1]], axis=0)
            diffs = np.diff(wrapped, axis=0)
            diffs = (diffs + np.pi) % (2 * np.pi) - np.pi
            assert np.abs(diffs).max() <= max_gap + 1e-9

    def test_two_loop_regime_conjugate_pairs(self):
        spec, _ = LinkageSpec.from_weights((0.01, 0.36, 0.63))
        orbits = orbit_trace(spec, steps=400)
        assert len(orbits) == 2
        # the loops are complex-conjugate mirrors of each other
        pts0 = np.array([cfg.as_array() for cfg in orbits[0]])
        pts1 = np.array([cfg.as_array() for cfg in orbits[1]])
        for row in pts0[:: max(1, len(pts0) // 25)]:
            d = np.abs(pts1 - np.conj(row)[None, :]).max(axis=1).min()
            assert d < 0.05

    def test_point_orbit_all_weight_on_one(self):
        spec, assignment = LinkageSpec.from_weights((1.0, 0.0, 0.0))
        orbits = orbit_trace(spec, steps=100, assignment=assignment)
        assert len(orbits) == 1
        assert len(orbits[0]) == 1
        assert_allclose(orbits[0][0].as_array(), [1, 0, 0], atol=1e-9)

    def test_point_orbits_zero_first_weight(self):
        spec, _ = LinkageSpec.from_weights((0.0, 0.5, 0.5))
        orbits = orbit_trace(spec, steps=100)
        assert len(orbits) == 2
        for loop in orbits:
            assert len(loop) == 1
            assert abs(loop[0].q1) < 1e-9

    def test_step_floor(self):
        with pytest.raises(ValueError):
            orbit_trace(uniform_spec(), steps=6)


class TestBruteforceCount:
    def test_uniform(self):
        assert orbit_count_bruteforce(uniform_spec(), resolution=400) == 1

    def test_grashof(self):
        spec, _ = LinkageSpec.from_weights((0.01, 0.36, 0.63))
        assert orbit_count_bruteforce(spec, resolution=400) == 2

    def test_degenerate_two_equal(self):
        spec, _ = LinkageSpec.from_weights((0.0, 0.5, 0.5))
        # the zero bar collapses the torus components onto each other in the
        # (t1, t2) picture: both point configs come from one residual curve
        assert orbit_count_bruteforce(spec, resolution=360) >= 1

    def test_resolution_floor(self):
        with pytest.raises(ValueError):
            orbit_count_bruteforce(uniform_spec(), resolution=100)

    def test_agrees_with_analytic_samples(self):
        rng = np.random.default_rng(2)
        for _ in range(6):
            w = rng.dirichlet([2, 2, 2])
            if min(w) < 0.02:
                continue
            spec, _ = LinkageSpec.from_weights(tuple(w))
            if abs(spec.b - b0(spec.c)) < 1e-3:
                continue
            assert orbit_count_bruteforce(spec, resolution=400) == orbit_count(spec)


class TestCsvExport:
    def test_header_and_rows(self):
        orbits = orbit_trace(uniform_spec(), steps=120)
        buf = io.StringIO()
        write_orbit_csv(orbits, buf)
        lines = buf.getvalue().splitlines()
        header = lines[0].split(",")
        assert header == ["step", "orbit", "re_q1", "im_q1", "re_q2", "im_q2",
                          "re_q3", "im_q3", "delta12", "delta23", "delta31",
                          "nested"]
        assert len(lines) == 1 + sum(len(o) for o in orbits)

    def test_step_restarts_per_orbit(self):
        spec, _ = LinkageSpec.from_weights((0.01, 0.36, 0.63))
        orbits = orbit_trace(spec, steps=200)
        buf = io.StringIO()
        write_orbit_csv(orbits, buf)
        rows = [ln.split(",") for ln in buf.getvalue().splitlines()[1:]]
        starts = [int(r[0]) for r in rows if r[1] == "1"]
        assert starts[0] == 0

    def test_nested_flags(self):
        orbits = orbit_trace(uniform_spec(), steps=1200)
        buf = io.StringIO()
        write_orbit_csv(orbits, buf)
        rows = [ln.split(",") for ln in buf.getvalue().splitlines()[1:]]
        assert sum(int(r[-1]) for r in rows) == 12

    def test_path_output(self, tmp_path):
        orbits = orbit_trace(uniform_spec(), steps=60)
        out = tmp_path / "trace.csv"
        write_orbit_csv(orbits, out)
        assert out.read_text().startswith("step,orbit,")

    def test_extra_columns(self):
        orbits = orbit_trace(uniform_spec(), steps=60)
        buf = io.StringIO()
        write_orbit_csv(orbits, buf, extra=lambda cfg: {"w1": abs(cfg.q1) ** 2})
        lines = buf.getvalue().splitlines()
        assert lines[0].endswith(",w1")
        first = lines[1].split(",")
        assert abs(float(first[-1]) - 1 / 3) < 1e-6


class TestDeltasAgainstPDelta:
    def test_matches_reference_conversion(self):
        orbits = orbit_trace(uniform_spec(), steps=120)
        for cfg in orbits[0][::10]:
            q = QTriple(cfg.q1, cfg.q2, cfg.q3)
            if min(q.weights()) < 1e-6:
                continue
            pd = pdelta_from_q(q)
            d = config_deltas(cfg)
            for mine, ref in zip(d, pd.deltas):
                assert abs((mine - ref + np.pi) % (2 * np.pi) - np.pi) < 1e-7
