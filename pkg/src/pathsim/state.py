"""Two-photon path states stored as sparse amplitude tables.

Each photon lives in one *layer* of two path modes at a time: ``a/b`` at the
source, ``c/d`` after the first beam splitter, ``e/f`` after the third.  The
L photon uses unprimed letters, the R photon primed ones.  A
:class:`JointState` maps ``(L mode, R mode)`` pairs to complex amplitudes;
the two sides may sit in different layers (one photon detected early, the
other late).
"""
from __future__ import annotations

import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from types import MappingProxyType

import numpy as np

from .angles import Angle, unit_phase

NORM_TOL = 1e-9
UNITARY_TOL = 1e-9

SIDES = ("L", "R")


class Layer(Enum):
    SOURCE = ("a", "b")
    STAGE1 = ("c", "d")
    STAGE3 = ("e", "f")

    @property
    def letters(self) -> tuple[str, str]:
        return self.value

    @classmethod
    def of(cls, letter: str) -> Layer:
        for layer in cls:
            if letter in layer.value:
                return layer
        raise ValueError(f"unknown mode letter {letter!r}")


@dataclass(frozen=True, order=True)
class Mode:
    letter: str
    side: str

    def __post_init__(self):
        Layer.of(self.letter)
        if self.side not in SIDES:
            raise ValueError(f"side must be 'L' or 'R', got {self.side!r}")

    @property
    def layer(self) -> Layer:
        return Layer.of(self.letter)

    @property
    def index(self) -> int:
        """Position within the layer: 0 for a/c/e, 1 for b/d/f."""
        return self.layer.letters.index(self.letter)

    def __str__(self) -> str:
        return self.letter + ("'" if self.side == "R" else "")

    def __repr__(self) -> str:
        return f"Mode({self})"


def mode(label: str) -> Mode:
    """``mode("c")`` is an L mode, ``mode("c'")`` the matching R mode."""
    if label.endswith("'"):
        return Mode(label[:-1], "R")
    return Mode(label, "L")


def layer_modes(layer: Layer, side: str) -> tuple[Mode, Mode]:
    return tuple(Mode(letter, side) for letter in layer.letters)


Pair = tuple[Mode, Mode]


def _check_finite(z: complex, where) -> None:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite amplitude {z!r} at {where}")


class JointState:
    """Normalized amplitude table over ``(L mode, R mode)`` pairs.

    Instances are immutable; every operation returns a new state.
    """

    __slots__ = ("_amps",)

    def __init__(self, amplitudes: Mapping[Pair, complex]):
        amps = {}
        for (ml, mr), z in amplitudes.items():
            if ml.side != "L" or mr.side != "R":
                raise ValueError(f"pair ({ml}, {mr}) is not an (L, R) pair")
            z = complex(z)
            _check_finite(z, (ml, mr))
            amps[(ml, mr)] = z
        if not amps:
            raise ValueError("empty state")
        self._amps = MappingProxyType(dict(sorted(amps.items())))
        for side in SIDES:
            self.layer(side)
        n = self.norm_squared()
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: sum |amp|^2 = {n!r}")

    @classmethod
    def _unchecked(cls, amplitudes: Mapping[Pair, complex]) -> JointState:
        # Bypasses validation; only for building deliberately corrupt inputs.
        obj = cls.__new__(cls)
        obj._amps = MappingProxyType(dict(amplitudes))
        return obj

    @property
    def amplitudes(self) -> Mapping[Pair, complex]:
        return self._amps

    def __getitem__(self, pair) -> complex:
        if isinstance(pair[0], str):
            pair = (mode(pair[0]), mode(pair[1]))
        return self._amps.get(pair, 0j)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._amps)

    def __len__(self) -> int:
        return len(self._amps)

    def __repr__(self) -> str:
        body = ", ".join(f"|{l}>|{r}>: {z:.6g}" for (l, r), z in self._amps.items())
        return f"JointState({body})"

    def norm_squared(self) -> float:
        return math.fsum(abs(z) ** 2 for z in self._amps.values())

    def require_normalized(self) -> None:
        n = self.norm_squared()
        if abs(n - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: sum |amp|^2 = {n!r}")

    def layer(self, side: str) -> Layer:
        """The single layer occupied by ``side``'s photon."""
        pos = SIDES.index(side)
        layers = {pair[pos].layer for pair in self._amps}
        if len(layers) != 1:
            names = sorted(l.name for l in layers)
            raise ValueError(f"side {side} spans several layers: {names}")
        return layers.pop()


def make_entangled_source() -> JointState:
    """``(|a>|a'> + |b>|b'>)/sqrt(2)``."""
    s = 1 / math.sqrt(2)
    return JointState({(mode("a"), mode("a'")): s, (mode("b"), mode("b'")): s})


def apply_phase(state: JointState, target: Mode, angle: Angle) -> JointState:
    """Multiply every amplitude whose ``target.side`` entry is ``target`` by ``e^{i angle}``."""
    active = state.layer(target.side)
    if target.layer is not active:
        raise ValueError(
            f"phase target {target} is in layer {target.layer.name}, "
            f"but side {target.side} is in layer {active.name}"
        )
    factor = unit_phase(angle)
    pos = SIDES.index(target.side)
    return JointState(
        {pair: (z * factor if pair[pos] == target else z) for pair, z in state.amplitudes.items()}
    )


def unitary_deviation(matrix) -> float:
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    return float(np.max(np.abs(m @ m.conj().T - np.eye(2))))


def apply_single_side_unitary(
    state: JointState, side: str, matrix, in_layer: Layer, out_layer: Layer
) -> JointState:
    """Act with a 2x2 unitary on one photon.

    ``matrix[i, j]`` is the amplitude for input mode ``j`` of ``in_layer`` to
    go to output mode ``i`` of ``out_layer``.
    """
    m = np.asarray(matrix, dtype=complex)
    dev = unitary_deviation(m)
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary: max |U U^dagger - I| = {dev:.3g}")
    active = state.layer(side)
    if active is not in_layer:
        raise ValueError(
            f"element expects side {side} in layer {in_layer.name}, found {active.name}"
        )
    pos = SIDES.index(side)
    outs = layer_modes(out_layer, side)
    new: dict[Pair, complex] = {}
    for pair, z in state.amplitudes.items():
        j = pair[pos].index
        for i, out in enumerate(outs):
            key = (out, pair[1]) if pos == 0 else (pair[0], out)
            new[key] = new.get(key, 0j) + complex(m[i, j]) * z
    return JointState(new)


class Distribution(Mapping):
    """Immutable outcome -> probability map summing to one."""

    def __init__(self, probs: Mapping):
        self._p = dict(probs)
        for k, p in self._p.items():
            if not (-NORM_TOL <= p <= 1 + NORM_TOL):
                raise ValueError(f"probability {p!r} for {k} outside [0, 1]")
        total = math.fsum(self._p.values())
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}")

    def __getitem__(self, key) -> float:
        return self._p[key]

    def __iter__(self):
        return iter(self._p)

    def __len__(self) -> int:
        return len(self._p)

    def __repr__(self) -> str:
        body = ", ".join(f"{_label(k)}: {p:.6g}" for k, p in self._p.items())
        return f"Distribution({body})"


def _label(key) -> str:
    if isinstance(key, tuple):
        return "(" + ", ".join(str(k) for k in key) + ")"
    return str(key)


def joint_probabilities(state: JointState) -> Distribution:
    state.require_normalized()
    return Distribution({pair: abs(z) ** 2 for pair, z in state.amplitudes.items()})


def marginal(state: JointState, side: str) -> Distribution:
    pos = SIDES.index(side)
    out: dict[Mode, float] = {}
    for pair, p in joint_probabilities(state).items():
        out[pair[pos]] = out.get(pair[pos], 0.0) + p
    return Distribution(dict(sorted(out.items())))


def overlap(s1: JointState, s2: JointState) -> complex:
    """``<s1|s2>``."""
    for side in SIDES:
        if s1.layer(side) is not s2.layer(side):
            raise ValueError(
                f"layer mismatch on side {side}: {s1.layer(side).name} vs {s2.layer(side).name}"
            )
    a2 = s2.amplitudes
    return sum((z.conjugate() * a2.get(pair, 0j) for pair, z in s1.amplitudes.items()), 0j)


def equal_up_to_global_phase(s1: JointState, s2: JointState, tol: float = 1e-9) -> bool:
    try:
        return abs(overlap(s1, s2)) >= 1 - tol
    except ValueError:
        return False


def canonical_phase(state: JointState) -> JointState:
    """Rotate the global phase so the first nonzero amplitude is real and positive."""
    for z in state.amplitudes.values():
        if abs(z) > 1e-12:
            rot = abs(z) / z
            return JointState({pair: w * rot for pair, w in state.amplitudes.items()})
    return state


def global_phase(s1: JointState, s2: JointState) -> complex:
    """Unit complex ``g`` with ``s2 ~= g * s1`` (meaningful when they agree up to phase)."""
    ov = overlap(s1, s2)
    return ov / abs(ov) if abs(ov) > 0 else 1 + 0j


__all__ = [
    "Distribution",
    "JointState",
    "Layer",
    "Mode",
    "apply_phase",
    "apply_single_side_unitary",
    "canonical_phase",
    "equal_up_to_global_phase",
    "global_phase",
    "joint_probabilities",
    "layer_modes",
    "make_entangled_source",
    "marginal",
    "mode",
    "overlap",
    "unitary_deviation",
]
