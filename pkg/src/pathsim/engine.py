"""Full experiment runs: analytic states, correlations, CHSH and seeded sampling.

Each photon is detected either right after the first splitter (stage 1,
outputs ``c/d``) or after restore + second splitter (stage 3, outputs
``e/f``).  Phase shifters only sit on R's ``b'`` arm, so when R is detected
at stage 1 the stage-3 phase never enters.

Sampling
--------
Events are drawn by inverse CDF over the outcome pairs in lexicographic
order.  Uniforms come in blocks of :data:`BLOCK_SIZE`; block ``k`` uses a
PCG64 bit generator seeded with ``SeedSequence(seed, spawn_key=(k,))`` and
maps each raw 64-bit word ``w`` to ``(w >> 11) * 2**-53``.  Only the bit
generator's raw stream is used, so the event sequence depends on neither
``Generator`` method internals nor on how blocks are scheduled.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .angles import Angle
from .optics import StagePipeline, apply_pipelines, restore_pipeline, stage1_pipeline, stage3_pipeline
from .state import Distribution, JointState, joint_probabilities, make_entangled_source

BLOCK_SIZE = 1 << 16
STAGES = (1, 3)

_SIGN = {"c": 1, "e": 1, "d": -1, "f": -1}


@dataclass(frozen=True)
class Scenario:
    phi1: Angle = 0.0
    phi3: Angle = 0.0
    detect_l: int = 1
    detect_r: int = 1

    def __post_init__(self):
        if self.detect_l not in STAGES or self.detect_r not in STAGES:
            raise ValueError(
                f"detection stages must be 1 or 3, got L={self.detect_l}, R={self.detect_r}"
            )


@dataclass(frozen=True)
class DetectionRecord:
    outcome_l: str
    outcome_r: str
    count: int = 1

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")

    def as_dict(self) -> dict:
        return {"L": self.outcome_l, "R": self.outcome_r + "'", "count": self.count}


@dataclass(frozen=True)
class CorrelationRow:
    phi1: Angle
    phi3: Angle
    e: float


@dataclass(frozen=True)
class CorrelationTable:
    rows: tuple[CorrelationRow, ...]

    def __post_init__(self):
        for r in self.rows:
            if abs(r.e) > 1 + 1e-9:
                raise ValueError(f"correlation {r.e} outside [-1, 1]")

    def __len__(self) -> int:
        return len(self.rows)

    def values(self) -> np.ndarray:
        return np.array([r.e for r in self.rows])


def pipelines_for(s: Scenario) -> tuple[StagePipeline, StagePipeline]:
    left1, right1 = stage1_pipeline(s.phi1)
    left3, right3 = stage3_pipeline(s.phi3)
    left, right = left1, right1
    if s.detect_l == 3:
        left = left + restore_pipeline("L") + left3
    if s.detect_r == 3:
        right = right + restore_pipeline("R") + right3
    return left, right


def run_scenario(s: Scenario) -> JointState:
    """Joint state on the chosen detection surfaces.

    (1, 1) gives the stage-1 state exactly; (1, 3) gives the mixed-stage state
    exactly, including its global factor ``i``; (3, 3) differs from the usual
    printed stage-3 form by a global ``-1`` (one factor ``i`` per restore).
    """
    left, right = pipelines_for(s)
    return apply_pipelines(make_entangled_source(), left, right)


def outcome_sign(letter: str) -> int:
    try:
        return _SIGN[letter]
    except KeyError:
        raise ValueError(f"{letter!r} is not a detector output mode") from None


def correlation_from(dist: Distribution) -> float:
    return math.fsum(outcome_sign(l.letter) * outcome_sign(r.letter) * p for (l, r), p in dist.items())


def correlation(s: Scenario) -> float:
    """``E = sum sign(L) sign(R) P``, with c/e -> +1 and d/f -> -1 on both sides."""
    return correlation_from(joint_probabilities(run_scenario(s)))


def chsh(phi1_a: Angle, phi1_b: Angle, phi3_a: Angle, phi3_b: Angle, *, detect=(1, 3)) -> float:
    def e(p1, p3):
        return correlation(Scenario(p1, p3, *detect))

    return e(phi1_a, phi3_a) + e(phi1_a, phi3_b) + e(phi1_b, phi3_a) - e(phi1_b, phi3_b)


def correlation_matrix(phi1_grid, phi3_grid, *, detect=(1, 3)) -> np.ndarray:
    return np.array(
        [[correlation(Scenario(p1, p3, *detect)) for p3 in phi3_grid] for p1 in phi1_grid]
    )


def chsh_grid_max(phi1_grid, phi3_grid, *, detect=(1, 3)) -> float:
    """Largest ``|S|`` over all setting quadruples drawn from the grids."""
    e = correlation_matrix(phi1_grid, phi3_grid, detect=detect)
    # S[i, j, k, l] = E[i,k] + E[i,l] + E[j,k] - E[j,l]
    s = (
        e[:, None, :, None]
        + e[:, None, None, :]
        + e[None, :, :, None]
        - e[None, :, None, :]
    )
    return float(np.max(np.abs(s)))


def sweep(grid, template: Scenario, variable: str = "phi1") -> CorrelationTable:
    """Correlation along a grid of one phase, the other held at its template value."""
    grid = list(grid)
    if not grid:
        raise ValueError("sweep grid is empty")
    if variable not in ("phi1", "phi3"):
        raise ValueError(f"cannot sweep {variable!r}")
    rows = []
    for value in grid:
        s = replace(template, **{variable: value})
        rows.append(CorrelationRow(s.phi1, s.phi3, correlation(s)))
    return CorrelationTable(tuple(rows))


def _block_uniforms(seed: int, block: int, size: int) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(block,))
    raw = np.random.PCG64(ss).random_raw(size)
    return (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53


def sample_indices(probs, n: int, seed: int, workers: int | None = None) -> np.ndarray:
    """``n`` inverse-CDF draws from ``probs`` (in the given order)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    cdf = np.cumsum(np.asarray(probs, dtype=float))
    cdf /= cdf[-1]
    sizes = [min(BLOCK_SIZE, n - start) for start in range(0, n, BLOCK_SIZE)]

    def draw(k: int) -> np.ndarray:
        u = _block_uniforms(seed, k, sizes[k])
        return np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(draw, range(len(sizes))))
    else:
        blocks = [draw(k) for k in range(len(sizes))]
    return np.concatenate(blocks)


def sample_events(s: Scenario, n: int, seed: int, workers: int | None = None) -> list[DetectionRecord]:
    """``n`` independent detection events, one record (count 1) per event."""
    dist = joint_probabilities(run_scenario(s))
    outcomes = sorted(dist)
    idx = sample_indices([dist[o] for o in outcomes], n, seed, workers)
    records = [DetectionRecord(l.letter, r.letter) for l, r in outcomes]
    return [records[i] for i in idx]


def tally(events, s: Scenario | None = None) -> list[DetectionRecord]:
    """Aggregate events into one record per outcome pair, in lexicographic order.

    With a scenario, every possible outcome pair appears (zero counts included).
    """
    counts = Counter()
    for e in events:
        counts[(e.outcome_l, e.outcome_r)] += e.count
    keys = set(counts)
    if s is not None:
        keys |= {(l.letter, r.letter) for l, r in run_scenario(s)}
    return [DetectionRecord(l, r, counts.get((l, r), 0)) for l, r in sorted(keys)]
