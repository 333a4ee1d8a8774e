"""One circle, minimal prescription: the matrix element and its unique zero.

The 1x1 principal matrix vanishes at E = mu by construction, rises as the
energy drops, and its zero is exactly the bound-state energy.
"""
import numpy as np

from curvebound import (
    Circle,
    Euclidean3,
    assemble,
    derivative_matrix,
    family_geometry,
    ground_state_energy,
    resample_arclength,
)

circle = resample_arclength(Circle(center=(0, 0, 0), radius=1.0, normal=(0, 0, 1)), 64)
fam = family_geometry([circle], Euclidean3(), [0.0])

print("Phi(E) for a unit circle, mu = 0, m = 1:")
for E in (-0.9, -0.5, -0.2, -0.05, 0.0):
    M = assemble(fam, E)
    print(f"  E = {E:6.2f}   Phi = {M.entries[0, 0]: .10f}   err <= {M.err[0, 0]:.1e}")

D = derivative_matrix(fam, -0.2)
print(f"\ndPhi/dE at E = -0.2: {D[0, 0]:.10f}  (negative, so the zero is unique)")

gs = ground_state_energy(fam)
print(f"\nground state: E_gr = {gs.E_gr:.10f}  status = {gs.status}  "
      f"iterations = {gs.iterations}")

print("\nshifting mu moves the bound state with it:")
for mu in (-0.5, 0.25, 0.5):
    g = ground_state_energy(family_geometry([circle], Euclidean3(), [mu]))
    print(f"  mu = {mu:5.2f}   E_gr = {g.E_gr: .10f}")
