"""Simulation of a three-stage path-entangled two-photon interferometer."""

__version__ = "0.1.0"

from importlib.resources import files

from .angles import PiMultiple, parse_angle, unit_phase
from .engine import (
    CorrelationTable,
    DetectionRecord,
    Scenario,
    chsh,
    chsh_grid_max,
    correlation,
    run_scenario,
    sample_events,
    sweep,
    tally,
)
from .optics import beam_splitter_matrix, restore_matrix, stage1_pipeline, stage3_pipeline, restore_pipeline
from .state import (
    Distribution,
    JointState,
    Mode,
    apply_phase,
    apply_single_side_unitary,
    canonical_phase,
    equal_up_to_global_phase,
    joint_probabilities,
    make_entangled_source,
    marginal,
    mode,
    overlap,
)


def shipped_experiments() -> dict:
    """Name -> path of the bundled ``.exp`` files."""
    root = files("pathsim") / "experiments"
    return {p.name: p for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".exp")}
