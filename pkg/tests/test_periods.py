"""Period frames, numeric periods, monodromy tracking, action extension."""

import math

import numpy as np
import pytest

from tfib import symplab as sl
from tfib import zlat
from tfib.periods import (
    action_chart,
    action_extension_check,
    closed_form_frame,
    closedness_defect,
    monodromy_from_frame,
    numeric_periods,
    positive_a0,
)
from tfib.periods.extension import psi_focus_focus
from tfib import numerics


def test_focus_focus_frame_forms():
    frame = closed_form_frame("focus_focus")
    lam2 = frame.forms[1].covector(np.array([0.3, 0.4]))
    assert np.allclose(lam2, [0.0, 2.0 * math.pi])


def test_generic_frame_l3_is_db3():
    frame = closed_form_frame("generic")
    lam3 = frame.forms[2].covector(np.array([0.3, 0.4, -0.7]))
    assert np.allclose(lam3, [0.0, 0.0, 1.0])


def test_thin_leg_slice_frame_coefficient():
    frame = closed_form_frame("thin_leg_slice")
    lam2 = frame.forms[1].covector(np.array([0.0, 0.0, 0.3]))
    assert np.isclose(lam2[1], -1.0)  # coefficient of db2 at b2 = 0
    lam3 = frame.forms[2].covector(np.array([0.0, 0.0, 0.3]))
    assert np.isclose(lam3[2], -math.exp(0.6))


def test_frame_rejects_nonvanishing_correction():
    with pytest.raises(ValueError):
        closed_form_frame("focus_focus", q=lambda b: 1.0)
    with pytest.raises(ValueError):
        closed_form_frame("positive", h=lambda b: 2.0)


def test_frames_closed():
    rng = np.random.default_rng(1)
    ff = closed_form_frame("focus_focus", q=lambda b: 0.1 * b[0] * b[1])
    pts2 = np.stack([rng.uniform(0.3, 1.0, 20), rng.uniform(0.2, 0.8, 20)], axis=-1)
    assert closedness_defect(ff, pts2) < 1e-6
    pos = closed_form_frame("positive")
    pts3 = np.stack([
        rng.uniform(0.5, 1.0, 15),
        rng.uniform(0.4, 0.9, 15),
        rng.uniform(-0.9, -0.4, 15),
    ], axis=-1)
    assert closedness_defect(pos, pts3) < 1e-6


def test_monodromy_focus_focus_radii_two_orders():
    frame = closed_form_frame("focus_focus")
    for r in (0.01, 0.1, 1.0):
        assert monodromy_from_frame(frame, frame.loops["loop"](r)) == zlat.T_NODE


def test_monodromy_generic():
    frame = closed_form_frame("generic", h=lambda b: 0.05 * b[0] * b[2])
    for r in (0.1, 1.0):
        loop = frame.loops["loop"](r, b3=0.4)
        assert monodromy_from_frame(frame, loop) == zlat.T_GENERIC


def test_monodromy_positive_triple():
    frame = closed_form_frame("positive")
    for r in (0.1, 1.0):
        got = tuple(
            monodromy_from_frame(frame, frame.loops[g](r))
            for g in ("g1", "g2", "g3")
        )
        assert got == zlat.POSITIVE_TRIPLE


def test_monodromy_trivial_loop():
    frame = closed_form_frame("focus_focus")

    def loop(t):
        t = np.asarray(t)
        return np.stack([np.full(t.shape, 0.5), np.full(t.shape, 0.2)], axis=-1)

    assert monodromy_from_frame(frame, loop) == zlat.identity(2)


def test_monodromy_rejects_loop_through_discriminant():
    frame = closed_form_frame("focus_focus")

    def loop(t):  # passes through the origin
        t = np.asarray(t)
        return np.stack([0.5 * np.cos(2 * np.pi * t) - 0.5,
                         0.5 * np.sin(2 * np.pi * t)], axis=-1)

    with pytest.raises((ValueError, RuntimeError)):
        monodromy_from_frame(frame, loop)


def test_numeric_periods_sm_ff_orbit():
    model = sl.make_model("sm_ff")
    res = numeric_periods(model, [0.2, 0.4])
    assert np.allclose(res.covectors["s1_orbit"], [0.0, 2.0 * math.pi], atol=1e-4)
    assert res.fibre_defect < 1e-7


def test_numeric_periods_generic():
    model = sl.make_model("generic")
    for b in ([0.15, 0.3, -0.2], [-0.1, 0.1, 0.25]):
        res = numeric_periods(model, b)
        assert np.allclose(res.covectors["e3"], [0.0, 0.0, 1.0], atol=1e-4)
        assert np.allclose(
            res.covectors["s1_orbit"], [0.0, 2.0 * math.pi, 0.0], atol=1e-4
        )


def test_numeric_periods_thin_leg_slice():
    model = sl.make_model("thin_legs")
    b = [0.3, -0.2, -0.15]
    res = numeric_periods(model, b)
    want2 = -math.exp(2 * b[1])
    want3 = -math.exp(2 * b[2])
    assert abs(res.covectors["red_v1"][1] - want2) < 0.01 * abs(want2)
    assert abs(res.covectors["red_v2"][2] - want3) < 0.01 * abs(want3)
    # cross coefficients vanish
    assert abs(res.covectors["red_v1"][2]) < 1e-6
    assert abs(res.covectors["red_v2"][1]) < 1e-6


def test_numeric_periods_rejects_bad_cycle():
    model = sl.make_model("thin_legs")
    with pytest.raises(ValueError):
        # base point whose torus leaves the plain-amoeba branch
        numeric_periods(model, [0.3, 0.05, 0.1])


def test_ff_chart_derivative_matches_frame():
    """d psi_j equals the assigned period form on the branch."""
    frame = closed_form_frame("focus_focus")
    chart = action_chart("focus_focus", branch=2)
    for b in ([0.4, 0.1], [-0.3, 0.2], [0.1, -0.5]):
        grad = numerics.jacobian(lambda x: psi_focus_focus(x, branch=2), np.array(b))
        lam1 = frame.forms[0].covector(np.array(b))
        lam2 = frame.forms[1].covector(np.array(b))
        assert np.allclose(grad[0], lam1, atol=1e-6)
        assert np.allclose(grad[1], lam2, atol=1e-9)
    assert chart(np.array([0.4, 0.1]))[1] == pytest.approx(2 * math.pi * 0.1)


def test_extension_focus_focus_limit_zero():
    chart = action_chart("focus_focus")
    report = action_extension_check(chart, lambda s: [(1.0 - s) * 0.5, 0.0])
    assert abs(report.limit) < 1e-4


def test_extension_generic_recovers_tau():
    chart = action_chart("generic", h=lambda b: b[2])
    for t0 in (0.3, 0.7):
        report = action_extension_check(
            chart,
            lambda s, t0=t0: [(1 - s) * 0.3, (1 - s) * 0.2, t0 + (1 - s) * 0.1],
        )
        assert abs(report.limit - t0) < 1e-4


def test_extension_positive_recovers_h_on_edge():
    chart = action_chart("positive", h=lambda b: 0.5 * b[2])
    report = action_extension_check(
        chart, lambda s: [(1 - s) * 0.3, (1 - s) * 0.1, -0.8 - (1 - s) * 0.1]
    )
    assert abs(report.limit - (-0.4)) < 1e-4


def test_extension_detects_divergence():
    bad = action_chart(
        "focus_focus",
        q=lambda b: math.log(max(math.hypot(b[0], b[1]), 1e-300)),
    )
    with pytest.raises(ValueError):
        action_extension_check(bad, lambda s: [(1 - s) * 0.5, 0.0])


def test_positive_a0_odd_symmetry():
    rng = np.random.default_rng(12)
    pts = rng.uniform(-1.0, 1.0, size=(25, 3))
    for b in pts:
        flipped = np.array([-b[0], b[1], b[2]])
        assert abs(positive_a0(b) + positive_a0(flipped)) < 1e-6
    assert positive_a0([0.0, 0.5, 0.3]) == 0.0


def test_monodromy_of_double_and_reversed_loops():
    frame = closed_form_frame("focus_focus")
    base = frame.loops["loop"](0.5)
    got = monodromy_from_frame(frame, lambda t: base((2.0 * np.asarray(t)) % 1.0))
    assert got == zlat.mat_mul(zlat.T_NODE, zlat.T_NODE)
    reverse = lambda t: base(1.0 - np.asarray(t))
    assert monodromy_from_frame(frame, reverse) == zlat.inverse(zlat.T_NODE)
