"""Dense Hessians at uniform strain are diagonal in the Fourier basis.

For each model the Hessian of the periodic chain is assembled numerically
and its generalized eigenvalues relative to ||Du||^2 are computed with
the in-house Jacobi solver.  They are then paired with the closed-form
symbols lambda(s_k).
"""

import time

from eamchain import ModelKind, ToyFamilyParams, coefficients, make_toy_potentials, verify_diagonalization

p = make_toy_potentials(ToyFamilyParams())
F = 1.0
c = coefficients(p, F)
print(f"F = {F}: A = {c.A:.6f}  B = {c.B:.6f}  C = {c.C:.6f}  D = {c.D:.6f}  B~ = {c.B_tilde:.6f}")

for N in (4, 16, 64):
    for model in ModelKind:
        t0 = time.perf_counter()
        rep = verify_diagonalization(model, p, F, N)
        dt = time.perf_counter() - t0
        print(f"N={N:3d} {model.value:15s} {rep.dimension:4d} eigenvalues  "
              f"max mismatch {rep.max_abs_mismatch:.1e}  multiplicities ok {rep.multiplicity_ok}  ({dt:.2f}s)")

rep = verify_diagonalization("atomistic", p, F, 4)
print("\nN = 4 atomistic spectrum (k, s_k, analytic, numeric):")
for k, s, a, n in zip(rep.k, rep.s, rep.analytic, rep.numeric):
    print(f"  {k}  {s:.6f}  {a:.12f}  {n:.12f}")
