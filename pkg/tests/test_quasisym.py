import cmath
import math

import pytest

from segal._oracles import dilatation_fd
from segal.errors import DomainError, InvalidPhi, NonMonotone
from segal.quasisym import (
    CircleDiffeo,
    SampledIncreasingFunction,
    bump,
    circle_identity,
    circle_rotation,
    corner_dilatation,
    corner_map,
    corner_transform,
    half_angle_piecewise,
    half_angle_smooth,
    qs_bound,
    sampled_exp,
    sampled_identity,
    sampled_slope_break,
    smooth_twist,
)

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# sampled functions and qs_bound


class TestSampledIncreasingFunction:
    def test_rejects_short(self):
        with pytest.raises(NonMonotone):
            SampledIncreasingFunction((0.0, 1.0), (0.0, 1.0))

    def test_rejects_length_mismatch(self):
        with pytest.raises(NonMonotone):
            SampledIncreasingFunction((0.0, 0.5, 1.0), (0.0, 1.0))

    def test_rejects_non_monotone_xs(self):
        with pytest.raises(NonMonotone):
            SampledIncreasingFunction((0.0, 0.5, 0.5), (0.0, 1.0, 2.0))

    def test_rejects_decreasing_ys(self):
        with pytest.raises(NonMonotone):
            SampledIncreasingFunction((0.0, 0.5, 1.0), (0.0, 2.0, 1.0))

    def test_inverted_swaps(self):
        h = sampled_exp(1.0, 16)
        g = h.inverted()
        assert g.xs == h.ys and g.ys == h.xs


class TestQsBound:
    def test_identity_exact_one(self):
        assert qs_bound(sampled_identity(128)) == 1.0

    def test_affine_exact_one(self):
        h = SampledIncreasingFunction.from_callable(lambda x: 3.0 * x - 2.0, -1.0, 1.0, 64)
        assert qs_bound(h) == pytest.approx(1.0, abs=1e-12)

    def test_slope_break_exact_two(self):
        assert qs_bound(sampled_slope_break(2.0, 128)) == 2.0

    def test_slope_break_exact_half_slope(self):
        # slope 1/2 on the right gives the same distortion from the 1/rho side
        assert qs_bound(sampled_slope_break(0.5, 128)) == 2.0

    def test_exp_reaches_window_width(self):
        t_max = 1.0
        k = qs_bound(sampled_exp(t_max, 128))
        assert k >= math.exp(t_max) * (1.0 - 1e-6)
        # no sampled triple can exceed e^{t_max} for this grid
        assert k <= math.exp(t_max) * (1.0 + 1e-6)

    def test_inversion_symmetry(self):
        # symmetric triples of h^{-1} are images of triples of h with
        # reciprocal ratios only in the affine case; for the broken line the
        # bound is still attained at the kink from either side
        h = sampled_slope_break(3.0, 64)
        assert qs_bound(h.inverted()) == pytest.approx(qs_bound(h), abs=1e-12)

    def test_at_least_one(self):
        h = SampledIncreasingFunction((0.0, 1.0, 3.0), (0.0, 1.0, 3.0))
        assert qs_bound(h) >= 1.0


# ---------------------------------------------------------------------------
# circle diffeomorphisms


class TestCircleDiffeo:
    def test_identity_winding(self):
        phi = circle_identity()
        assert phi.angle(TWO_PI + 0.5) == pytest.approx(TWO_PI + 0.5)

    def test_rotation_moves_basepoint(self):
        phi = circle_rotation(0.7)
        w = phi(1.0 + 0.0j)
        assert abs(w - cmath.exp(0.7j)) < 1e-12

    def test_rejects_wrong_winding(self):
        with pytest.raises(InvalidPhi):
            CircleDiffeo(lambda t: 2.0 * t, lambda t: 2.0)

    def test_rejects_non_increasing(self):
        with pytest.raises(InvalidPhi):
            CircleDiffeo(
                lambda t: t + 0.8 * math.sin(2.0 * t),
                lambda t: 1.0 + 1.6 * math.cos(2.0 * t),
            )

    def test_piecewise_profile_nodes(self):
        phi = half_angle_piecewise()
        assert phi.psi(0.0) == 0.0
        assert phi.psi(math.pi) == pytest.approx(0.5 * math.pi)
        assert phi.psi(1.5 * math.pi) == pytest.approx(math.pi)
        assert phi.psi(TWO_PI) == pytest.approx(TWO_PI)

    def test_smooth_profile_joins(self):
        phi = half_angle_smooth()
        assert phi.psi(TWO_PI) == pytest.approx(TWO_PI, abs=1e-12)
        # first derivative continuous across theta = pi
        assert phi.dpsi(math.pi - 1e-12) == pytest.approx(0.5)
        assert phi.dpsi(math.pi + 1e-9) == pytest.approx(0.5, abs=1e-8)

    def test_circle_point_stays_on_circle(self):
        phi = half_angle_smooth()
        for k in range(8):
            w = phi(cmath.exp(1j * (0.1 + k * 0.77)))
            assert abs(abs(w) - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# corner map


class TestCornerMap:
    def test_rejects_profiles_not_half_angle_above(self):
        with pytest.raises(InvalidPhi):
            corner_transform(circle_identity())
        with pytest.raises(InvalidPhi):
            corner_transform(circle_rotation(0.3))

    def test_right_angle_at_minus_one(self):
        sigma = corner_transform(half_angle_piecewise())
        assert abs(sigma(-1.0 + 0.0j) - 1j) < 1e-12
        assert abs(sigma(1.0 + 0.0j) - 1.0) < 1e-12

    def test_upper_half_plane_to_first_quadrant(self):
        sigma = corner_transform(half_angle_piecewise())
        for k in range(32):
            z = 2.0 * cmath.exp(1j * (math.pi * (k + 0.5) / 32))
            w = sigma(z)
            assert w.real >= -1e-12 and w.imag >= -1e-12

    def test_radial_scaling(self):
        sigma = corner_transform(half_angle_smooth())
        z = cmath.exp(1j * 2.2)
        assert abs(sigma(4.0 * z) - 2.0 * sigma(z)) < 1e-12
        assert abs(abs(sigma(4.0 * z)) - 2.0) < 1e-12

    def test_origin_fixed(self):
        sigma = corner_transform(half_angle_piecewise())
        assert sigma(0.0 + 0.0j) == 0.0

    def test_piecewise_dilatation_exact(self):
        phi = half_angle_piecewise()
        k_true = corner_dilatation(phi)
        assert k_true == 4.0
        # for this profile the bound max(max'/2, 2/min') coincides
        lo, hi = phi.derivative_range()
        assert max(0.5 * hi, 2.0 / lo) == k_true

    def test_smooth_dilatation_exact(self):
        assert corner_dilatation(half_angle_smooth()) == 5.0

    def test_corner_map_returns_images_and_k(self):
        images, k = corner_map(half_angle_piecewise(), [1.0, -1.0, 4.0j])
        assert k == 4.0
        assert abs(images[0] - 1.0) < 1e-12
        assert abs(images[1] - 1j) < 1e-12
        assert abs(images[2] - 2.0 * cmath.exp(0.25j * math.pi)) < 1e-12

    @pytest.mark.parametrize(
        "builder", [half_angle_piecewise, half_angle_smooth], ids=["piecewise", "smooth"]
    )
    def test_fd_dilatation_matches(self, builder):
        # sample sector midpoints so no finite-difference stencil straddles
        # a slope break of the profile
        phi = builder()
        sigma = corner_transform(phi)
        k_true = corner_dilatation(phi)
        worst = 0.0
        for j in range(256):
            theta = TWO_PI * (j + 0.5) / 256
            worst = max(worst, dilatation_fd(sigma, cmath.exp(1j * theta), 1e-6))
        assert worst == pytest.approx(k_true, rel=0.05)
        assert worst <= k_true * (1.0 + 1e-4)


# ---------------------------------------------------------------------------
# bump and twist


class TestBump:
    def test_endpoints_bitwise(self):
        assert bump(0.0) == 0.0
        assert bump(1.0) == 1.0

    def test_midpoint(self):
        assert bump(0.5) == 0.5

    def test_monotone(self):
        vals = [bump(j / 64) for j in range(65)]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_flat_near_ends(self):
        # exp(-1/t) underflows for t this small, so the tails are exact
        assert bump(1e-3) == 0.0
        assert bump(1.0 - 1e-3) == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            bump(-0.1)
        with pytest.raises(DomainError):
            bump(1.1)


class TestSmoothTwist:
    def test_bad_radii(self):
        with pytest.raises(DomainError):
            smooth_twist(circle_identity(), 2.0, 1.0)

    def test_boundary_exact_at_nodes(self):
        twist, report = smooth_twist(half_angle_smooth(), 1.0, 2.0)
        assert report.inner_max_dev == 0.0
        assert report.outer_max_dev == 0.0

    def test_jacobian_positive(self):
        _, report = smooth_twist(half_angle_smooth(), 1.0, 2.0)
        assert report.min_jacobian > 0.0

    def test_endpoint_flatness(self):
        _, report = smooth_twist(half_angle_smooth(), 1.0, 2.0)
        assert report.endpoint_flatness < 1e-8

    def test_rotation_is_rigid(self):
        twist, report = smooth_twist(circle_rotation(0.9), 1.0, 2.0)
        assert report.rigid_rotation
        assert report.phase == pytest.approx(0.9)
        # every circle of the annulus is rotated rigidly
        for r in (1.0, 1.3, 1.7, 2.0):
            base = twist.angle(r, 0.0)
            for t in (0.5, 2.0, 5.0):
                assert twist.angle(r, t) - t == pytest.approx(base, abs=1e-12)

    def test_generic_profile_not_rigid(self):
        _, report = smooth_twist(half_angle_smooth(), 1.0, 2.0)
        assert not report.rigid_rotation

    def test_radius_preserved(self):
        twist, _ = smooth_twist(half_angle_piecewise(), 0.5, 3.0)
        for z in (0.5 + 0.0j, 1.2j, -2.0 + 0.1j):
            if 0.5 <= abs(z) <= 3.0:
                assert abs(abs(twist(z)) - abs(z)) < 1e-12

    def test_restriction_composes(self):
        # at the inner rim the twists restrict to their circle maps, so
        # composing two twists there composes the maps
        phi1 = circle_rotation(0.4)
        phi2 = half_angle_smooth()
        t1, _ = smooth_twist(phi1, 1.0, 2.0)
        t2, _ = smooth_twist(phi2, 1.0, 2.0)
        for theta in (0.0, 1.0, 2.5):
            w = t2(t1(cmath.exp(1j * theta)) / abs(t1(cmath.exp(1j * theta))))
            expected = cmath.exp(1j * phi2.angle(phi1.angle(theta)))
            assert abs(w - expected) < 1e-10

    def test_midradius_interpolates(self):
        twist, _ = smooth_twist(half_angle_smooth(), 1.0, 2.0)
        # half way through the second stage the angle is a strict blend
        r = 1.75
        a = twist.angle(r, 2.0)
        lo = min(half_angle_smooth().angle(2.0) - twist.phase, 2.0)
        hi = max(half_angle_smooth().angle(2.0) - twist.phase, 2.0)
        assert lo - 1e-12 <= a <= hi + 1e-12

    def test_jacobian_degenerate_guard(self):
        # a profile with tiny positive slope stays valid; the twist keeps
        # the angular derivative positive throughout
        twist, report = smooth_twist(half_angle_piecewise(), 1.0, 2.0)
        assert report.min_jacobian > 0.4
