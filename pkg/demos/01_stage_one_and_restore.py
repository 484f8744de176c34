"""Stage one, then undo it.

Send the entangled pair through the first splitters with a phase on the
right arm, look at the outcome table, then put each photon through the
restoring splitter and check that we are back at the phased source.
"""
import math

from pathsim import make_entangled_source, mode, overlap, apply_phase, joint_probabilities
from pathsim.optics import apply_pipelines, restore_pipeline, stage1_pipeline

# %% the source
src = make_entangled_source()
print("source:")
for key, amp in src.amplitudes.items():
    print("  ", key, amp)

# %% first splitters
phi = math.pi / 3
left, right = stage1_pipeline(phi)
out = apply_pipelines(src, left, right)
for (l, r), p in joint_probabilities(out).items():
    print(f"P({l}, {r}) = {p:.4f}")

# the two coincidence classes trade weight as phi moves
for phi in (0.0, math.pi / 2, math.pi):
    left, right = stage1_pipeline(phi)
    p = joint_probabilities(apply_pipelines(src, left, right))
    same, cross = p[(mode("c"), mode("c'"))], p[(mode("c"), mode("d'"))]
    print(f"phi={phi:.3f}  P(c,c')={same:.3f}  P(c,d')={cross:.3f}")

# %% restore
left, right = stage1_pipeline(phi)
back = apply_pipelines(src, left + restore_pipeline("L"), right + restore_pipeline("R"))
target = apply_phase(src, mode("b'"), phi)
print("|<target|restored>| =", abs(overlap(target, back)))
