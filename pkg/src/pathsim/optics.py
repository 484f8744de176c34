"""Beam splitters, restore elements, phase shifters and per-photon stage pipelines.

Beam-splitter convention
------------------------
The splitter used throughout is the symmetric 50/50 element::

    |in1> -> (|out1> + i|out2>)/sqrt(2)
    |in2> -> (i|out1> + |out2>)/sqrt(2)

Written as ``|a> -> (|c> + |d>)/sqrt(2)`` for the first row, the transform
would not be unitary.  The symmetric form is the one that yields the stage-1
amplitudes ``(1 - e^{i phi})(|cc'> - |dd'>) + i(1 + e^{i phi})(|dc'> + |cd'>)``
and whose inverse, up to a global factor ``i``, is the restore element below.
Mirrors are identity relabelings and are not modeled as elements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import Angle
from .state import (
    JointState,
    Layer,
    Mode,
    apply_phase,
    apply_single_side_unitary,
    mode,
    unitary_deviation,
)

_S = 1 / math.sqrt(2)


def beam_splitter_matrix() -> np.ndarray:
    """Symmetric 50/50 splitter; column ``j`` is the image of input mode ``j``."""
    return np.array([[_S, 1j * _S], [1j * _S, _S]], dtype=complex)


def restore_matrix() -> np.ndarray:
    """``|c> -> (|b> + i|a>)/sqrt(2)``, ``|d> -> (i|b> + |a>)/sqrt(2)``.

    ``restore_matrix() @ beam_splitter_matrix()`` is ``i * I``.
    """
    return np.array([[1j * _S, _S], [_S, 1j * _S]], dtype=complex)


@dataclass(frozen=True)
class PhaseShift:
    target: Mode
    angle: Angle

    @property
    def side(self) -> str:
        return self.target.side

    @property
    def in_layer(self) -> Layer:
        return self.target.layer

    out_layer = in_layer

    def apply(self, state: JointState) -> JointState:
        return apply_phase(state, self.target, self.angle)


@dataclass(frozen=True)
class BeamSplitter:
    side: str
    in_layer: Layer = Layer.SOURCE
    out_layer: Layer = Layer.STAGE1

    def __post_init__(self):
        if self.in_layer is self.out_layer:
            raise ValueError("beam splitter input and output layers must differ")
        if unitary_deviation(self.matrix) > 1e-12:
            raise ValueError("beam splitter matrix is not unitary")

    @property
    def matrix(self) -> np.ndarray:
        return beam_splitter_matrix()

    def apply(self, state: JointState) -> JointState:
        return apply_single_side_unitary(state, self.side, self.matrix, self.in_layer, self.out_layer)


@dataclass(frozen=True)
class Restore:
    """Inverse splitter sending the stage-1 outputs back onto the source modes."""

    side: str
    in_layer = Layer.STAGE1
    out_layer = Layer.SOURCE

    @property
    def matrix(self) -> np.ndarray:
        return restore_matrix()

    def apply(self, state: JointState) -> JointState:
        return apply_single_side_unitary(state, self.side, self.matrix, self.in_layer, self.out_layer)


OpticalElement = PhaseShift | BeamSplitter | Restore


class StagePipeline:
    """Ordered, layer-compatible elements acting on one photon."""

    def __init__(self, side: str, elements=()):
        elements = tuple(elements)
        for el in elements:
            if el.side != side:
                raise ValueError(f"element {el} acts on side {el.side}, pipeline is side {side}")
        for prev, nxt in zip(elements, elements[1:]):
            if prev.out_layer is not nxt.in_layer:
                raise ValueError(
                    f"incompatible elements: {prev} outputs {prev.out_layer.name}, "
                    f"{nxt} expects {nxt.in_layer.name}"
                )
        self.side = side
        self.elements = elements

    @property
    def in_layer(self) -> Layer | None:
        return self.elements[0].in_layer if self.elements else None

    @property
    def out_layer(self) -> Layer | None:
        return self.elements[-1].out_layer if self.elements else None

    def __add__(self, other: StagePipeline) -> StagePipeline:
        return StagePipeline(self.side, self.elements + other.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, StagePipeline) and (self.side, self.elements) == (other.side, other.elements)

    def __repr__(self) -> str:
        return f"StagePipeline({self.side}, {list(self.elements)})"

    def apply(self, state: JointState) -> JointState:
        for el in self.elements:
            state = el.apply(state)
        return state


def stage1_pipeline(phi1: Angle) -> tuple[StagePipeline, StagePipeline]:
    left = StagePipeline("L", [BeamSplitter("L", Layer.SOURCE, Layer.STAGE1)])
    right = StagePipeline(
        "R", [PhaseShift(mode("b'"), phi1), BeamSplitter("R", Layer.SOURCE, Layer.STAGE1)]
    )
    return left, right


def restore_pipeline(side: str) -> StagePipeline:
    return StagePipeline(side, [Restore(side)])


def stage3_pipeline(phi3: Angle) -> tuple[StagePipeline, StagePipeline]:
    left = StagePipeline("L", [BeamSplitter("L", Layer.SOURCE, Layer.STAGE3)])
    right = StagePipeline(
        "R", [PhaseShift(mode("b'"), phi3), BeamSplitter("R", Layer.SOURCE, Layer.STAGE3)]
    )
    return left, right


def apply_pipelines(state: JointState, *pipelines: StagePipeline) -> JointState:
    for p in pipelines:
        state = p.apply(state)
    return state
