import math

import numpy as np
import pytest

from segal.errors import (
    CurveEscape,
    DomainError,
    InternalInconsistency,
    InversionFailure,
    NonMonotone,
    OutOfWindow,
)
from segal.flattening import (
    INFINITE,
    BoundaryGlueMap,
    OrderPair,
    base_structure_field,
    flatten_step,
    glue_identity,
    glue_linear,
    glue_sine,
    next_structure_field,
    order_sequence,
    order_step,
    structure_field_chain,
    tau_minus1,
    verify_orders,
)


# ---------------------------------------------------------------------------
# order recursion


class TestOrderRecursion:
    def test_first_six_pairs(self):
        assert order_sequence(5) == [
            OrderPair(INFINITE, 0),
            OrderPair(1, 2),
            OrderPair(3, 2),
            OrderPair(3, 4),
            OrderPair(5, 4),
            OrderPair(5, 6),
        ]

    def test_first_step_uses_doubling_branch(self):
        assert order_step(OrderPair(INFINITE, 0)) == OrderPair(1, 2)

    def test_later_steps_take_m_plus_one(self):
        seq = order_sequence(40)
        for k in range(1, 40):
            assert seq[k + 1].n == seq[k].m + 1

    def test_min_order_monotone(self):
        seq = order_sequence(100)
        mins = [p.min_order for p in seq]
        assert all(a <= b for a, b in zip(mins, mins[1:]))

    def test_min_order_grows_linearly(self):
        seq = order_sequence(100)
        for k in range(2, 101):
            assert seq[k].min_order >= k / 2

    def test_exceeds_twenty_within_45_steps(self):
        seq = order_sequence(45)
        assert any(p.min_order > 20 for p in seq)

    def test_validation(self):
        with pytest.raises(InternalInconsistency):
            OrderPair(0, 1)
        with pytest.raises(InternalInconsistency):
            OrderPair(2.5, 0)
        with pytest.raises(InternalInconsistency):
            OrderPair(1, -1)
        with pytest.raises(DomainError):
            order_sequence(-1)


# ---------------------------------------------------------------------------
# glue maps and the horizontal reparametrization


class TestGlueMap:
    def test_sine_valid(self):
        g = glue_sine(0.1)
        assert g.derivative_floor() > 0.8

    def test_rejects_unit_amplitude(self):
        with pytest.raises(NonMonotone):
            glue_sine(1.0)

    def test_rejects_decreasing(self):
        with pytest.raises(NonMonotone):
            BoundaryGlueMap(
                rho=lambda x: -np.asarray(x, dtype=float),
                drho=lambda x: -np.ones_like(np.asarray(x, dtype=float)),
            )

    def test_rejects_negative_slope(self):
        with pytest.raises(NonMonotone):
            glue_linear(-1.0)

    def test_rejects_empty_window(self):
        with pytest.raises(DomainError):
            glue_identity(x_lo=1.0, x_hi=0.0)


class TestTauMinus1:
    def test_identity(self):
        g = glue_identity()
        pts = [(0.3, 0.2), (-1.0, 0.9)]
        assert tau_minus1(g, pts) == pts

    def test_boundary_formula(self):
        g = glue_sine(0.1)
        ((u, v),) = tau_minus1(g, [(0.5, 0.0)])
        assert v == 0.0
        assert u == pytest.approx(0.5 + 0.1 * math.sin(0.5), abs=1e-15)

    def test_vertical_lines_stay_vertical(self):
        g = glue_sine(0.1)
        out = tau_minus1(g, [(0.4, 0.1), (0.4, 0.7)])
        assert out[0][0] == out[1][0]
        assert out[0][1] == 0.1 and out[1][1] == 0.7

    def test_out_of_window(self):
        g = glue_identity()
        with pytest.raises(OutOfWindow):
            tau_minus1(g, [(5.0, 0.1)])
        with pytest.raises(OutOfWindow):
            tau_minus1(g, [(0.0, -0.1)])
        with pytest.raises(OutOfWindow):
            tau_minus1(g, [(0.0, 2.0)])


# ---------------------------------------------------------------------------
# structure fields


def closed_form_next(g, x, y):
    """First transported field: (-a, 1 + a^2) with a = y rho''/rho'."""
    a = y * float(g.d2rho(x)) / float(g.drho(x))
    return (-a, 1.0 + a * a)


class TestStructureFields:
    def test_base_field_values(self):
        g = glue_sine(0.1)
        v = base_structure_field(g).at(0.3, 0.7)
        assert v[0] == 0.0
        assert v[1] == pytest.approx(1.0 + 0.1 * math.cos(0.3), abs=1e-15)

    def test_first_step_matches_closed_form(self):
        g = glue_sine(0.1)
        v0 = next_structure_field(base_structure_field(g))
        for x, y in [(0.3, 0.2), (-0.8, 0.5), (1.1, 0.05), (0.0, 0.9)]:
            got = v0.at(x, y)
            want = closed_form_next(g, x, y)
            assert got[0] == pytest.approx(want[0], abs=1e-8)
            assert got[1] == pytest.approx(want[1], abs=1e-8)

    def test_generic_flow_route_agrees_with_exact_flow(self):
        g = glue_sine(0.1)
        base = base_structure_field(g)
        base_no_exact = type(base)(func=base.func, depth=0, exact_flow=None)
        via_exact = next_structure_field(base)
        via_rk4 = next_structure_field(base_no_exact, n_steps=512)
        for x, y in [(0.25, 0.3), (-0.6, 0.8)]:
            a = via_exact.at(x, y)
            b = via_rk4.at(x, y)
            assert a[0] == pytest.approx(b[0], abs=1e-9)
            assert a[1] == pytest.approx(b[1], abs=1e-9)

    def test_boundary_row_is_vertical_unit(self):
        g = glue_sine(0.1)
        v0 = next_structure_field(base_structure_field(g))
        v = v0.at(0.4, 0.0)
        assert v[0] == pytest.approx(0.0, abs=1e-12)
        assert v[1] == pytest.approx(1.0, abs=1e-12)

    def test_chain_depths(self):
        g = glue_sine(0.1)
        fields = structure_field_chain(g, 2, n_steps_by_level={2: 64})
        assert [f.depth for f in fields] == [0, 1, 2]


# ---------------------------------------------------------------------------
# flatten_step


class TestFlattenStep:
    def test_standard_field_gives_identity(self):
        chart = flatten_step(
            lambda pts: np.column_stack(
                [np.zeros(len(pts)), np.ones(len(pts))]
            ),
            nx=33,
            ny=33,
        )
        assert chart.report.boundary_max_dev == 0.0
        assert chart.report.pushforward_max_dev < 1e-9
        x, t = chart.delta(0.3, 0.5)
        assert x == pytest.approx(0.3, abs=1e-9)
        assert t == pytest.approx(0.5, abs=1e-9)

    def test_vertical_field_closed_form(self):
        g = glue_sine(0.1)
        chart = flatten_step(base_structure_field(g))
        assert chart.report.boundary_max_dev == 0.0
        assert chart.report.min_jacobian > 0.5
        for u, v in [(0.3, 0.5), (-0.7, 0.8), (1.0, 0.25)]:
            x, t = chart.delta(u, v)
            assert x == pytest.approx(u, abs=1e-6)
            assert t == pytest.approx(v / float(g.drho(u)), abs=1e-6)

    def test_pushforward_is_vertical_unit(self):
        g = glue_sine(0.1)
        chart = flatten_step(base_structure_field(g))
        assert chart.report.pushforward_max_dev < 1e-3

    def test_forward_grid_row_zero(self):
        g = glue_sine(0.1)
        chart = flatten_step(base_structure_field(g), nx=17, ny=9)
        for i in range(17):
            u, v = chart.forward(i, 0)
            assert v == 0.0
            assert u == pytest.approx(chart.xs[i], abs=1e-15)

    def test_horizontal_escape(self):
        tilted = lambda pts: np.column_stack(
            [np.full(len(pts), -2.0), np.ones(len(pts))]
        )
        with pytest.raises(CurveEscape):
            flatten_step(tilted, nx=17, ny=9)

    def test_vertical_escape(self):
        fast = lambda pts: np.column_stack(
            [np.zeros(len(pts)), np.full(len(pts), 3.0)]
        )
        with pytest.raises(CurveEscape):
            flatten_step(fast, nx=9, ny=9, y_cap_factor=2.0)

    def test_degenerate_second_component(self):
        bad = lambda pts: np.column_stack([np.zeros(len(pts)), pts[:, 0]])
        with pytest.raises(DomainError):
            flatten_step(bad, nx=9, ny=9)

    def test_folding_grid_detected(self):
        squeeze = lambda pts: np.column_stack(
            [-3.0 * np.tanh(50.0 * (pts[:, 0] - 0.3)), np.ones(len(pts))]
        )
        with pytest.raises(InversionFailure):
            flatten_step(squeeze, nx=33, ny=17)

    def test_delta_outside_certified_rectangle(self):
        g = glue_sine(0.1)
        chart = flatten_step(base_structure_field(g), nx=17, ny=9)
        with pytest.raises(OutOfWindow):
            chart.delta(5.0, 0.5)


# ---------------------------------------------------------------------------
# order verification


class TestVerifyOrders:
    def test_identity_all_infinite(self):
        report = verify_orders(glue_identity(), 1)
        assert report.all_ok
        for fit in report.fits:
            assert fit.fitted_m == INFINITE
            assert fit.fitted_n == INFINITE

    def test_linear_all_infinite(self):
        report = verify_orders(glue_linear(2.0), 1)
        assert report.all_ok
        assert report.fits[1].fitted_m == INFINITE
        assert report.fits[1].fitted_n == INFINITE

    def test_sine_level_zero_orders(self):
        report = verify_orders(glue_sine(0.1), 0)
        assert report.all_ok
        fit = report.fits[0]
        assert fit.predicted == OrderPair(1, 2)
        assert abs(fit.fitted_m - 1.0) <= 0.25
        assert abs(fit.fitted_n - 2.0) <= 0.25

    def test_sine_level_one_orders(self):
        report = verify_orders(glue_sine(0.1), 1)
        assert report.all_ok
        fit = report.fits[1]
        assert fit.predicted == OrderPair(3, 2)
        assert abs(fit.fitted_m - 3.0) <= 0.25
        assert abs(fit.fitted_n - 2.0) <= 0.25

    def test_rejects_large_k(self):
        with pytest.raises(DomainError):
            verify_orders(glue_sine(0.1), 3)
