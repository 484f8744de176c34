import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pathsim.relativity import (
    L_BS1,
    R_BS1,
    R_BS3,
    ApparatusGeometry,
    BoostFrame,
    IntervalClass,
    Ordering,
    SpacetimeEvent,
    boost,
    find_frames_I1_I2,
    interval_class,
    ordering,
    preset_geometry,
    simultaneity_velocity,
)

O = SpacetimeEvent(0, 0, "o")
velocities = st.floats(-0.99, 0.99)
coords = st.floats(-100, 100)


def test_boost_example():
    b = boost(SpacetimeEvent(1, 0), BoostFrame(0.6))
    assert (b.t, b.x) == pytest.approx((1.25, -0.75), abs=1e-15)


def test_identity_boost():
    e = SpacetimeEvent(3.5, -2.0)
    assert boost(e, 0.0) == e


@pytest.mark.parametrize("v", [1.0, -1.0, 1.5])
def test_superluminal_frame_rejected(v):
    with pytest.raises(ValueError):
        BoostFrame(v)


def test_interval_invariance_random():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        t1, x1, t2, x2 = rng.uniform(-50, 50, 4)
        v = rng.uniform(-0.99, 0.99)
        a, b = SpacetimeEvent(t1, x1), SpacetimeEvent(t2, x2)
        before = interval_class(a, b)[1]
        after = interval_class(boost(a, v), boost(b, v))[1]
        assert abs(before - after) <= 1e-12 * max(1.0, abs(before))


@given(coords, coords, velocities, velocities)
def test_boost_composition(t, x, v1, v2):
    e = SpacetimeEvent(t, x)
    two = boost(boost(e, v1), v2)
    one = boost(e, (v1 + v2) / (1 + v1 * v2))
    assert two.t == pytest.approx(one.t, abs=1e-9)
    assert two.x == pytest.approx(one.x, abs=1e-9)


@pytest.mark.parametrize(
    "t, x, cls, value",
    [
        (0, 10, IntervalClass.SPACELIKE, -100),
        (5, 10, IntervalClass.SPACELIKE, -75),
        (10, 5, IntervalClass.TIMELIKE, 75),
        (3, 3, IntervalClass.LIGHTLIKE, 0),
    ],
)
def test_interval_class(t, x, cls, value):
    assert interval_class(O, SpacetimeEvent(t, x)) == (cls, value)


def test_simultaneity_velocity():
    assert simultaneity_velocity(O, SpacetimeEvent(0, 10)) == 0
    v = simultaneity_velocity(O, SpacetimeEvent(5, 10))
    assert v == 0.5
    assert boost(SpacetimeEvent(5, 10), v).t - boost(O, v).t == pytest.approx(0, abs=1e-12)
    assert simultaneity_velocity(O, O) == 0


@pytest.mark.parametrize("other", [SpacetimeEvent(10, 5), SpacetimeEvent(4, 4)])
def test_no_simultaneity_frame(other):
    with pytest.raises(ValueError, match="no simultaneity frame"):
        simultaneity_velocity(O, other)


def test_ordering_examples():
    e2 = SpacetimeEvent(5, 10)
    assert ordering(O, e2, 0.0) is Ordering.BEFORE
    assert ordering(O, e2, 0.8) is Ordering.AFTER
    assert ordering(O, e2, simultaneity_velocity(O, e2)) is Ordering.SIMULTANEOUS


@given(coords, coords, coords, coords)
def test_spacelike_pairs_realize_every_order(t1, x1, t2, x2):
    a, b = SpacetimeEvent(t1, x1), SpacetimeEvent(t2, x2)
    cls, value = interval_class(a, b)
    if cls is not IntervalClass.SPACELIKE or value > -1e-3:
        return
    vs = list(np.linspace(-0.999, 0.999, 41)) + [simultaneity_velocity(a, b)]
    seen = {ordering(a, b, v) for v in vs}
    assert seen == set(Ordering)


@given(coords, coords, coords, coords)
def test_timelike_order_invariant(t1, x1, t2, x2):
    a, b = SpacetimeEvent(t1, x1), SpacetimeEvent(t2, x2)
    cls, value = interval_class(a, b)
    if cls is not IntervalClass.TIMELIKE or value < 1e-3:
        return
    seen = {ordering(a, b, v) for v in np.linspace(-0.99, 0.99, 41)}
    assert len(seen) == 1


def test_default_frames():
    g = preset_geometry("paper-default")
    f1, f2 = find_frames_I1_I2(g)
    assert f1.v == 0.0 and f2.v == 0.75
    assert ordering(g[R_BS1], g[L_BS1], f1) is Ordering.SIMULTANEOUS
    assert ordering(g[R_BS3], g[L_BS1], f1) is Ordering.AFTER
    assert ordering(g[R_BS3], g[L_BS1], f2) is Ordering.BEFORE


def test_frames_mirror_geometry():
    g = ApparatusGeometry([SpacetimeEvent(0, 0, L_BS1), SpacetimeEvent(0, -10, R_BS1), SpacetimeEvent(4, -10, R_BS3)])
    f1, f2 = find_frames_I1_I2(g)
    assert f2.v == pytest.approx((-0.4 - 1) / 2)
    assert ordering(g[R_BS3], g[L_BS1], f2) is Ordering.BEFORE


def test_frames_reject_timelike():
    g = ApparatusGeometry([SpacetimeEvent(0, 0, L_BS1), SpacetimeEvent(0, 10, R_BS1), SpacetimeEvent(20, 10, R_BS3)])
    with pytest.raises(ValueError, match=r"R@BS3'.*timelike"):
        find_frames_I1_I2(g)


def test_frames_need_stage3_event():
    g = ApparatusGeometry([SpacetimeEvent(0, 0, L_BS1), SpacetimeEvent(0, 10, R_BS1)])
    with pytest.raises(ValueError, match="lacks"):
        find_frames_I1_I2(g)


def test_geometry_requires_labels():
    with pytest.raises(ValueError, match="required"):
        ApparatusGeometry([SpacetimeEvent(0, 0, L_BS1)])
    with pytest.raises(ValueError, match="preset"):
        preset_geometry("nope")


def test_non_finite_event():
    with pytest.raises(ValueError):
        SpacetimeEvent(math.inf, 0)
