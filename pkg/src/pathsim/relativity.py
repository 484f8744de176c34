"""1+1D Minkowski kinematics (c = 1) for ordering the beam-splitter crossings."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType

ORDER_TOL = 1e-12
LIGHTLIKE_TOL = 1e-12

L_BS1 = "L@BS1"
R_BS1 = "R@BS1'"
R_BS3 = "R@BS3'"
EVENT_LABELS = (L_BS1, R_BS1, R_BS3)


@dataclass(frozen=True)
class SpacetimeEvent:
    t: float
    x: float
    label: str = ""

    def __post_init__(self):
        if not (math.isfinite(self.t) and math.isfinite(self.x)):
            raise ValueError(f"event {self.label!r} has non-finite coordinates")


@dataclass(frozen=True)
class BoostFrame:
    v: float

    def __post_init__(self):
        if not abs(self.v) < 1:
            raise ValueError(f"boost velocity must satisfy |v| < 1, got {self.v}")

    @property
    def gamma(self) -> float:
        return 1 / math.sqrt(1 - self.v * self.v)


class IntervalClass(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    LIGHTLIKE = "lightlike"


class Ordering(Enum):
    BEFORE = "before"
    SIMULTANEOUS = "simultaneous"
    AFTER = "after"


class ApparatusGeometry:
    """Labelled events; ``L@BS1`` and ``R@BS1'`` are required, ``R@BS3'`` optional."""

    def __init__(self, events, name: str | None = None):
        if not isinstance(events, dict):
            events = {e.label: e for e in events}
        missing = [lab for lab in (L_BS1, R_BS1) if lab not in events]
        if missing:
            raise ValueError(f"geometry lacks required event(s): {', '.join(missing)}")
        self.events = MappingProxyType(
            {lab: SpacetimeEvent(e.t, e.x, lab) for lab, e in events.items()}
        )
        self.name = name

    def __getitem__(self, label: str) -> SpacetimeEvent:
        try:
            return self.events[label]
        except KeyError:
            raise KeyError(f"geometry has no event {label!r}") from None

    def __contains__(self, label) -> bool:
        return label in self.events

    def __eq__(self, other) -> bool:
        return isinstance(other, ApparatusGeometry) and dict(self.events) == dict(other.events)

    def __repr__(self) -> str:
        body = ", ".join(f"{lab}=({e.t}, {e.x})" for lab, e in self.events.items())
        return f"ApparatusGeometry({body})"


# Lab frame: L crosses BS1 at the origin; R crosses BS1' simultaneously 10
# units away and reaches BS3' 5 time units later.  Invented numbers chosen so
# both R events are spacelike to L@BS1.
PRESETS = {
    "paper-default": {
        L_BS1: SpacetimeEvent(0.0, 0.0, L_BS1),
        R_BS1: SpacetimeEvent(0.0, 10.0, R_BS1),
        R_BS3: SpacetimeEvent(5.0, 10.0, R_BS3),
    },
}


def preset_geometry(name: str = "paper-default") -> ApparatusGeometry:
    try:
        return ApparatusGeometry(dict(PRESETS[name]), name=name)
    except KeyError:
        raise ValueError(f"unknown geometry preset {name!r}") from None


def boost(e: SpacetimeEvent, f: BoostFrame | float) -> SpacetimeEvent:
    if not isinstance(f, BoostFrame):
        f = BoostFrame(f)
    g, v = f.gamma, f.v
    return SpacetimeEvent(g * (e.t - v * e.x), g * (e.x - v * e.t), e.label)


def interval_class(e1: SpacetimeEvent, e2: SpacetimeEvent) -> tuple[IntervalClass, float]:
    dt, dx = e2.t - e1.t, e2.x - e1.x
    value = dt * dt - dx * dx
    if abs(value) < LIGHTLIKE_TOL:
        return IntervalClass.LIGHTLIKE, value
    return (IntervalClass.TIMELIKE if value > 0 else IntervalClass.SPACELIKE), value


def simultaneity_velocity(e1: SpacetimeEvent, e2: SpacetimeEvent) -> float:
    """Velocity of the frame in which ``e1`` and ``e2`` happen at the same time."""
    dt, dx = e2.t - e1.t, e2.x - e1.x
    if dt == 0 and dx == 0:
        return 0.0
    cls, _ = interval_class(e1, e2)
    if cls is not IntervalClass.SPACELIKE:
        raise ValueError(
            f"no simultaneity frame: {e1.label or e1} and {e2.label or e2} are {cls.value}"
        )
    return dt / dx


def ordering(e1: SpacetimeEvent, e2: SpacetimeEvent, f: BoostFrame | float) -> Ordering:
    """Whether ``e1`` happens before, with, or after ``e2`` in frame ``f``."""
    t1, t2 = boost(e1, f).t, boost(e2, f).t
    if abs(t1 - t2) <= ORDER_TOL:
        return Ordering.SIMULTANEOUS
    return Ordering.BEFORE if t1 < t2 else Ordering.AFTER


def has_crossed(geometry: ApparatusGeometry, label: str, f: BoostFrame | float) -> bool:
    """True if event ``label`` is at or before ``L@BS1`` in frame ``f``."""
    return ordering(geometry[label], geometry[L_BS1], f) is not Ordering.AFTER


def find_frames_I1_I2(g: ApparatusGeometry) -> tuple[BoostFrame, BoostFrame]:
    """Frames where, as L crosses BS1, R has just crossed BS1' (first) or already BS3' (second).

    The second velocity is the midpoint between the ``R@BS3'`` simultaneity
    velocity and the light cone on R's side.  Both frames are checked by
    direct ordering, not by trusting the formula.
    """
    if R_BS3 not in g:
        raise ValueError(f"geometry lacks {R_BS3}; no frame can have R past stage 3")
    origin = g[L_BS1]
    for label in (R_BS1, R_BS3):
        cls, value = interval_class(origin, g[label])
        if cls is not IntervalClass.SPACELIKE:
            raise ValueError(
                f"{L_BS1} and {label} are {cls.value}-separated (interval {value:g}); "
                "their order is the same in every frame"
            )
    v1 = simultaneity_velocity(origin, g[R_BS1])
    v3 = simultaneity_velocity(origin, g[R_BS3])
    toward_r = math.copysign(1.0, g[R_BS3].x - origin.x)
    v2 = (v3 + toward_r) / 2
    f1, f2 = BoostFrame(v1), BoostFrame(v2)

    if ordering(g[R_BS1], origin, f1) is not Ordering.SIMULTANEOUS:
        raise RuntimeError(f"frame v={v1} does not make {R_BS1} simultaneous with {L_BS1}")
    if ordering(g[R_BS3], origin, f1) is not Ordering.AFTER:
        raise ValueError(f"in frame v={v1}, {R_BS3} is not later than {L_BS1}")
    if ordering(g[R_BS3], origin, f2) is not Ordering.BEFORE:
        raise RuntimeError(f"frame v={v2} does not put {R_BS3} before {L_BS1}")
    return f1, f2
