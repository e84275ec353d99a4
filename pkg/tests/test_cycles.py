"""Valley geometry, rapid-decay cycle construction, and continuation."""

import cmath
import math

import pytest

from expperiods.cohomology import FiberType, ProblemSpec, fiber_basis
from expperiods.cycles import (
    CycleBasis,
    cycle_basis,
    track_cycles,
    valley_config,
)
from expperiods.errors import AtSingularT, RankZero, SingularProximity
from expperiods.singular import singular_set
from expperiods.symbolic import parse_laurent

TWO_PI = 2.0 * math.pi


def make(fiber, g, label=""):
    return ProblemSpec(fiber=fiber, g=parse_laurent(g), label=label)


AIRY = make(FiberType.AFFINE_LINE, "u^3/3 - t*u", "airy")
BESSEL = make(FiberType.PUNCTURED_LINE, "(t/2)*(u - u^-1)", "bessel")
GAUSSIAN = make(FiberType.AFFINE_LINE, "-t*u^2", "gaussian")
LINEAR = make(FiberType.AFFINE_LINE, "t*u", "linear")


def eval_g(spec, t, u):
    return spec.g.eval(t, u)


class TestValleyConfig:
    def test_airy_three_valleys(self):
        cfg = valley_config(AIRY, 0.0)
        centers = [s.center for s in cfg.at_infinity]
        assert centers == pytest.approx([math.pi / 3, math.pi, 5 * math.pi / 3])
        assert all(s.half_width == pytest.approx(math.pi / 6) for s in cfg.at_infinity)
        assert cfg.at_zero == ()

    def test_gaussian_two_valleys(self):
        cfg = valley_config(GAUSSIAN, 1.0)
        assert [s.center for s in cfg.at_infinity] == pytest.approx([0.0, math.pi])

    def test_bessel_valleys_both_ends(self):
        cfg = valley_config(BESSEL, 1.0)
        assert [s.center for s in cfg.at_infinity] == pytest.approx([math.pi])
        assert [s.center for s in cfg.at_zero] == pytest.approx([0.0])

    def test_centers_are_decay_directions(self):
        # Re g must be very negative along each valley center ray
        for spec, t in ((AIRY, 0.5 + 0.2j), (GAUSSIAN, 2.0), (BESSEL, 1.0 + 1.0j)):
            cfg = valley_config(spec, t)
            for s in cfg.at_infinity:
                u = 200.0 * cmath.exp(1j * s.center)
                assert eval_g(spec, t, u).real < -100.0
            for s in cfg.at_zero:
                u = 1e-4 * cmath.exp(1j * s.center)
                assert eval_g(spec, t, u).real < -100.0

    def test_singular_t_rejected(self):
        with pytest.raises(AtSingularT):
            valley_config(GAUSSIAN, 0.0)
        with pytest.raises(AtSingularT):
            valley_config(BESSEL, 0.0)

    def test_sector_membership(self):
        cfg = valley_config(AIRY, 0.0)
        s0 = cfg.at_infinity[0]
        assert s0.contains(math.pi / 3)
        assert s0.contains(math.pi / 3 + TWO_PI)  # wrap-around
        assert not s0.contains(math.pi)


class TestCycleBasis:
    def test_counts_match_rank(self):
        for spec in (AIRY, BESSEL, GAUSSIAN):
            basis = cycle_basis(spec, 1.0)
            assert basis.rank == fiber_basis(spec).rank

    def test_rank_zero_raises(self):
        with pytest.raises(RankZero):
            cycle_basis(LINEAR, 1.0)

    def test_airy_first_cycle_is_classical_thimble(self):
        basis = cycle_basis(AIRY, 0.0)
        c0 = basis.cycles[0]
        # from the 5*pi/3 valley to the pi/3 valley (continued upward by 2*pi)
        assert c0.start.index == 2 and c0.end.index == 0
        assert cmath.phase(c0.nodes[0]) == pytest.approx(-math.pi / 3)
        assert cmath.phase(c0.nodes[-1]) == pytest.approx(math.pi / 3)

    def test_endpoints_decay(self):
        for spec, t in ((AIRY, 1.0), (GAUSSIAN, 1.0 + 2.0j), (BESSEL, 0.5)):
            basis = cycle_basis(spec, t, tol=1e-12)
            for cyc in basis.cycles:
                if cyc.closed:
                    continue
                for node in (cyc.nodes[0], cyc.nodes[-1]):
                    # far below the design tolerance, with margin
                    assert eval_g(spec, t, node).real < math.log(1e-12)

    def test_bessel_structure(self):
        basis = cycle_basis(BESSEL, 1.0)
        kinds = [(c.start.kind, c.end.kind, c.closed) for c in basis.cycles]
        assert kinds == [
            ("valley_zero", "valley_inf", False),
            ("interior", "interior", True),
        ]
        loop = basis.cycles[1]
        assert loop.nodes[0] == loop.nodes[-1]
        # counterclockwise winding number one around the puncture
        winding = sum(
            cmath.phase(b / a) for a, b in zip(loop.nodes, loop.nodes[1:])
        )
        assert winding == pytest.approx(TWO_PI)

    def test_punctured_cycles_avoid_origin(self):
        basis = cycle_basis(BESSEL, 2.0)
        for cyc in basis.cycles:
            assert min(abs(z) for z in cyc.nodes) > 1e-12

    def test_polyline_angular_resolution(self):
        basis = cycle_basis(AIRY, 0.0)
        for cyc in basis.cycles:
            for a, b in zip(cyc.nodes, cyc.nodes[1:]):
                if a != b:
                    assert abs(cmath.phase(b / a)) <= math.pi / 8 + 1e-9

    def test_serialization_round_trip(self):
        for spec, t in ((AIRY, 1.0 + 0.3j), (BESSEL, 1.0)):
            basis = cycle_basis(spec, t)
            data = basis.to_json_dict()
            back = CycleBasis.from_json_dict(data)
            assert back == basis


class TestTracking:
    def test_trivial_path_is_identity(self):
        basis = cycle_basis(GAUSSIAN, 1.0)
        moved = track_cycles(GAUSSIAN, basis, [1.0, 1.0])
        assert moved == basis

    def test_path_must_start_at_basis_point(self):
        basis = cycle_basis(GAUSSIAN, 1.0)
        with pytest.raises(ValueError):
            track_cycles(GAUSSIAN, basis, [2.0, 1.0])

    def test_step_composition(self):
        # one leg and the same leg split in two give identical angles
        basis = cycle_basis(AIRY, 1.0)
        one = track_cycles(AIRY, basis, [1.0, 1.0 + 1.0j])
        mid = track_cycles(AIRY, basis, [1.0, 1.0 + 0.5j])
        two = track_cycles(AIRY, mid, [1.0 + 0.5j, 1.0 + 1.0j])
        for c1, c2 in zip(one.cycles, two.cycles):
            for n1, n2 in zip(c1.skeleton, c2.skeleton):
                assert n1.angle == pytest.approx(n2.angle, abs=1e-12)

    def test_gaussian_full_loop_rotates_cycle_by_pi(self):
        # lc = -t turns by 2*pi; the d=2 valleys rotate by -pi
        basis = cycle_basis(GAUSSIAN, 1.0)
        loop = [cmath.exp(2j * math.pi * k / 24) for k in range(25)]
        moved = track_cycles(GAUSSIAN, basis, loop)
        for n0, n1 in zip(basis.cycles[0].skeleton, moved.cycles[0].skeleton):
            assert n1.angle - n0.angle == pytest.approx(-math.pi)

    def test_bessel_full_loop_winds_families_oppositely(self):
        basis = cycle_basis(BESSEL, 1.0)
        loop = [cmath.exp(2j * math.pi * k / 24) for k in range(25)]
        moved = track_cycles(BESSEL, basis, loop)
        conn = moved.cycles[0]  # the zero-to-infinity path
        base = basis.cycles[0]
        deltas = [n1.angle - n0.angle for n0, n1 in zip(base.skeleton, conn.skeleton)]
        # zero-family nodes advance by +2*pi, infinity-family nodes by -2*pi
        assert deltas[0] == pytest.approx(TWO_PI)
        assert deltas[-1] == pytest.approx(-TWO_PI)
        # the loop cycle never moves
        assert moved.cycles[1].nodes == basis.cycles[1].nodes

    def test_hard_singularity_blocks_path(self):
        basis = cycle_basis(GAUSSIAN, 1.0)
        sigma = singular_set(GAUSSIAN)
        with pytest.raises(SingularProximity):
            track_cycles(GAUSSIAN, basis, [1.0, -1.0], singular=sigma)

    def test_soft_ball_does_not_block(self):
        # Airy's t = 0 ball is only a critical-point degeneration
        basis = cycle_basis(AIRY, 1.0)
        sigma = singular_set(AIRY)
        moved = track_cycles(AIRY, basis, [1.0, -1.0], singular=sigma)
        assert moved.t == -1.0

    def test_radii_refresh_with_parameter(self):
        basis = cycle_basis(GAUSSIAN, 1.0)
        far = track_cycles(GAUSSIAN, basis, [1.0, 4.0])
        fresh = cycle_basis(GAUSSIAN, 4.0)
        assert far.cycles[0].r_inf == pytest.approx(fresh.cycles[0].r_inf)
        assert far.cycles[0].r_inf < basis.cycles[0].r_inf
