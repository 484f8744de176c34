"""Third stage, correlations and the CHSH combination.

The correlation only cares about phi1 + phi3.  Picking the usual four
settings pushes |S| to 2 sqrt 2, while no deterministic local strategy gets
past 2.
"""
import math

import numpy as np

from pathsim import Scenario, chsh, chsh_grid_max, correlation
from pathsim.hidden import all_local_strategies, enumerate_local_chsh_bound

# %% correlation along the diagonal
for total in np.linspace(0, 2 * math.pi, 9):
    e_a = correlation(Scenario(total, 0.0, 1, 3))
    e_b = correlation(Scenario(0.3, total - 0.3, 1, 3))
    print(f"phi1+phi3={total:5.3f}  E={e_a:+.6f}  shifted={e_b:+.6f}  -cos={-math.cos(total):+.6f}")

# %% CHSH
S = chsh(0.0, math.pi / 2, -math.pi / 4, math.pi / 4)
print("S =", S, " 2*sqrt(2) =", 2 * math.sqrt(2))

grid = np.linspace(0, 2 * math.pi, 24, endpoint=False)
print("max |S| on a 24^4 grid:", chsh_grid_max(grid, grid))

# %% local strategies
print(len(all_local_strategies()), "deterministic strategies")
print("best local |S|:", enumerate_local_chsh_bound((0.0, math.pi / 2), (-math.pi / 4, math.pi / 4)))
