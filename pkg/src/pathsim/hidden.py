"""Deterministic outcome models for the L photon.

Realism here means the clicking detector is fixed before measurement.  The
"full" packet is the one whose detector clicks, so a model is simply a
function returning +1 (c/e detector) or -1 (d/f detector).  Local models
see only local settings.  Nonlocal ones also see the remote phases that R
has already passed, and that set depends on the reference frame.
"""
from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from .angles import Angle
from .engine import Scenario, run_scenario
from .relativity import R_BS1, R_BS3, ApparatusGeometry, BoostFrame, has_crossed
from .state import JointState, marginal

NO_SIGNALING_TOL = 1e-9


@dataclass(frozen=True)
class LocalDeterministicModel:
    """Outcome tables ``a[i]`` for L setting ``i`` and ``b[j]`` for R setting ``j``."""

    a: tuple[int, int]
    b: tuple[int, int]

    def __post_init__(self):
        if any(v not in (-1, 1) for v in (*self.a, *self.b)):
            raise ValueError("outcomes must be +1 or -1")

    def correlation(self, i: int, j: int) -> int:
        return self.a[i] * self.b[j]

    def chsh(self) -> int:
        e = self.correlation
        return e(0, 0) + e(0, 1) + e(1, 0) - e(1, 1)


def all_local_strategies() -> list[LocalDeterministicModel]:
    return [
        LocalDeterministicModel((a1, a2), (b1, b2))
        for a1, a2, b1, b2 in itertools.product((1, -1), repeat=4)
    ]


def enumerate_local_chsh_bound(settings_l=(0.0, 0.0), settings_r=(0.0, 0.0)) -> float:
    """Max ``|S|`` over all 16 deterministic strategies.

    A deterministic table assigns an outcome per setting *index*, so the
    numerical settings only label the rows; the bound is 2 for any choice.
    """
    if len(settings_l) != 2 or len(settings_r) != 2:
        raise ValueError("need exactly two settings per side")
    return float(max(abs(m.chsh()) for m in all_local_strategies()))


def mixture_chsh(weights) -> float:
    """CHSH value of a convex mixture of the 16 strategies (weights in enumeration order)."""
    w = np.asarray(weights, dtype=float)
    strategies = all_local_strategies()
    if w.shape != (len(strategies),) or np.any(w < 0):
        raise ValueError("need 16 non-negative weights")
    w = w / w.sum()
    return float(sum(wk * m.chsh() for wk, m in zip(w, strategies)))


AvailablePhases = Mapping[str, Angle]


@dataclass(frozen=True)
class NonlocalOutcomeModel:
    """``outcome(local_setting, available, lam) -> +1 | -1``.

    ``available`` maps phase names (``phi1``, ``phi3``) to values for the
    remote elements R has passed in the frame under consideration.
    """

    spec: str
    func: Callable[[float, AvailablePhases, float], int] = field(compare=False)

    def outcome(self, local_setting: Angle, available: AvailablePhases, lam: Angle) -> int:
        result = self.func(float(local_setting), dict(available), float(lam))
        if result not in (-1, 1):
            raise ValueError(f"model {self.spec!r} returned {result!r}, expected +1 or -1")
        return result


def _sign(x: float) -> int:
    return 1 if x >= 0 else -1


def threshold_model(
    w_local: float = 1.0, w_phi1: float = 1.0, w_phi3: float = 1.0, name: str = "threshold"
) -> NonlocalOutcomeModel:
    """``sign(cos(w_local*local + w_phi1*phi1 + w_phi3*phi3 + lam))``, sign(0) = +1.

    A phase that R has not yet passed contributes nothing.
    """
    weights = {"phi1": float(w_phi1), "phi3": float(w_phi3)}

    def f(local, available, lam):
        total = w_local * local + lam
        total += sum(weights[k] * float(v) for k, v in available.items())
        return _sign(math.cos(total))

    spec = f"{name}(local={w_local:g}, phi1={w_phi1:g}, phi3={w_phi3:g})"
    return NonlocalOutcomeModel(spec, f)


def sum_threshold_model() -> NonlocalOutcomeModel:
    """``sign(cos(local + sum of available remote phases + lam))``."""
    return threshold_model(1.0, 1.0, 1.0, name="sum-threshold")


def local_model() -> NonlocalOutcomeModel:
    """Ignores remote phases entirely."""
    return threshold_model(1.0, 0.0, 0.0, name="local")


MODELS = {
    "local": local_model,
    "sum-threshold": sum_threshold_model,
    "threshold": threshold_model,
}


def make_model(name: str, **params) -> NonlocalOutcomeModel:
    """Build a shipped model; only ``threshold`` takes weights (``w_local``, ``w_phi1``, ``w_phi3``)."""
    if name not in MODELS:
        raise ValueError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
    if params and name != "threshold":
        raise ValueError(f"model {name!r} takes no weights, got {sorted(params)}")
    return MODELS[name](**params)


def available_remote_phases(
    s: Scenario, frame: BoostFrame, geometry: ApparatusGeometry
) -> dict[str, Angle]:
    """Remote phases R has passed at the moment L crosses BS1, in ``frame``.

    Returned as ``{"phi1": ...}``, ``{"phi1": ..., "phi3": ...}`` or ``{}``.
    When R is detected at stage 1 it never reaches BS3', so ``phi3`` is
    never available.
    """
    for label in (R_BS1,) + ((R_BS3,) if s.detect_r == 3 else ()):
        if label not in geometry:
            raise ValueError(f"geometry lacks event {label}")
    if s.detect_r == 3 and has_crossed(geometry, R_BS3, frame):
        return {"phi1": s.phi1, "phi3": s.phi3}
    if has_crossed(geometry, R_BS1, frame):
        return {"phi1": s.phi1}
    return {}


@dataclass(frozen=True)
class AmbiguityReport:
    frame1_phases: dict
    frame2_phases: dict
    outcome1: int
    outcome2: int

    @property
    def ambiguous(self) -> bool:
        return self.outcome1 != self.outcome2


def ambiguity_check(
    model: NonlocalOutcomeModel,
    s: Scenario,
    frame1: BoostFrame,
    frame2: BoostFrame,
    geometry: ApparatusGeometry,
    lam: Angle = 0.0,
    local_setting: Angle = 0.0,
) -> AmbiguityReport:
    """Evaluate L's predetermined outcome under each frame's view of R's history."""
    p1 = available_remote_phases(s, frame1, geometry)
    p2 = available_remote_phases(s, frame2, geometry)
    return AmbiguityReport(
        p1, p2, model.outcome(local_setting, p1, lam), model.outcome(local_setting, p2, lam)
    )


def max_marginal_deviation(states) -> float:
    """``max |P_L(mode) - 1/2|`` over the states; rejects unnormalized input."""
    worst = 0.0
    for st in states:
        if not isinstance(st, JointState):
            raise TypeError(f"expected JointState, got {type(st).__name__}")
        st.require_normalized()
        worst = max(worst, max(abs(p - 0.5) for p in marginal(st, "L").values()))
    return worst


def no_signaling_certificate(phi1_grid, phi3_grid) -> tuple[bool, float]:
    """Check L's marginal is 1/2-1/2 for both (1,1) and (1,3) runs over the grid."""
    phi1_grid, phi3_grid = list(phi1_grid), list(phi3_grid)
    if not phi1_grid or not phi3_grid:
        raise ValueError("grids must be nonempty")
    states = (
        run_scenario(Scenario(p1, p3, 1, dr))
        for p1 in phi1_grid
        for p3 in phi3_grid
        for dr in (1, 3)
    )
    dev = max_marginal_deviation(states)
    return dev < NO_SIGNALING_TOL, dev
