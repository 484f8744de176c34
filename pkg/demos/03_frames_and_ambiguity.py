"""Two observers, two orderings.

In the rest frame the right photon meets its first splitter at the same
moment the left one does.  A fast enough frame puts the right photon's third
splitter first.  A model that reads the remote phases it can "see" then gives
different answers for the same run.
"""
import math

import numpy as np

from pathsim import Scenario
from pathsim.hidden import ambiguity_check, available_remote_phases, no_signaling_certificate, sum_threshold_model
from pathsim.relativity import L_BS1, boost, find_frames_I1_I2, ordering, preset_geometry

g = preset_geometry("paper-default")
f1, f2 = find_frames_I1_I2(g)
print("frames:", f1.v, f2.v)

# %% event coordinates in each frame
for frame in (f1, f2):
    print(f"v = {frame.v}")
    for label, ev in g.events.items():
        b = boost(ev, frame.v)
        print(f"  {label:7s} t'={b.t:+.3f} x'={b.x:+.3f}  {ordering(ev, g[L_BS1], frame).value}")

# %% what the left photon could know
s = Scenario(0.0, math.pi, 1, 3)
for frame in (f1, f2):
    print(frame.v, available_remote_phases(s, frame, g))

report = ambiguity_check(sum_threshold_model(), s, f1, f2, g, lam=0.0)
print("outcomes", report.outcome1, report.outcome2, "ambiguous:", report.ambiguous)

# the statistics themselves stay blind to the remote phases
grid = np.linspace(0, 2 * math.pi, 50)
print("no-signaling:", no_signaling_certificate(grid, grid))
