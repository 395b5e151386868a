"""Newton equilibria of the loaded chain.

A sinusoidal dead load is applied at a stable strain; each model converges
quadratically.  Past the critical strain the projected Hessian is no
longer positive definite and the solver says so.
"""

import numpy as np

from eamchain import (
    ChainConfig,
    DeadLoads,
    Deformation,
    SingularHessian,
    ToyFamilyParams,
    equilibrium_solve,
    make_toy_potentials,
)

p = make_toy_potentials(ToyFamilyParams())
cfg = ChainConfig(32, 1.0)
f = DeadLoads(0.5 * np.sin(np.pi * cfg.indices() / cfg.N))

for model in ("atomistic", "volume", "reconstruction"):
    hist = []
    y = equilibrium_solve(model, f, Deformation.uniform(cfg), p, tol=1e-12, history=hist)
    u = y.displacement
    print(f"{model:15s} residuals " + " ".join(f"{h:.1e}" for h in hist) + f"   max |u| = {np.abs(u).max():.3e}")

cfg = ChainConfig(32, 1.2)
try:
    equilibrium_solve("atomistic", DeadLoads(1e-3 * np.sin(np.pi * cfg.indices() / cfg.N)),
                      Deformation.uniform(cfg), p)
except SingularHessian as exc:
    print(f"\nF = 1.2: {exc}")
