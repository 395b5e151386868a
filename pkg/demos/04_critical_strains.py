"""Critical strains by bisection on the smallest eigenvalue.

A coarse grid locates a bracket for each model, then bisection narrows it
to 1e-10.  Finite chains (N = 64) and the large-N limit are both shown.
"""

import numpy as np

from eamchain import ToyFamilyParams, critical_strain, emit_report, find_bracket, make_toy_potentials, sweep_strains

grid = np.linspace(0.2, 1.6, 141)
for params in [(4.0, 3.0, 1.0), (0.7, 0.5, 4.0), (0.7, 3.0, 1.0)]:
    p = make_toy_potentials(ToyFamilyParams(*params))
    print(f"alpha, beta, c = {params}")
    for N in (64, None):
        line = []
        for model in ("atomistic", "volume", "reconstruction"):
            br = find_bracket(p, model, grid, N)
            rep = critical_strain(p, model, br, tol=1e-10, N=N)
            line.append(f"{model[:5]} {rep.F_crit:.9f} ({rep.iterations} its)")
        label = "N = 64 " if N else "N -> oo"
        print(f"  {label}: " + "   ".join(line))

p = make_toy_potentials(ToyFamilyParams())
rows = sweep_strains(p, np.linspace(1.14, 1.16, 5))
print("\nsweep near the default family's instability:")
print(emit_report(rows, fmt="csv"))
