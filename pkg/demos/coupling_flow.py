"""Running coupling: beta function by two routes, flow, pole, scale identity."""
import math

import numpy as np

from curvebound import (
    Circle,
    FlowPoleError,
    beta,
    flow_coupling,
    flow_profile,
    ode_flow_values,
    resample_arclength,
    rg_invariance_residual,
)

print("beta function, quadrature against the closed form -lambda^2/(4 pi):")
print(f"{'lambda':>8} {'quadrature':>16} {'closed form':>16} {'gap':>10}")
for lam in (0.5, 1.0, 2.0, 4.0):
    q = beta(lam)
    c = beta(lam, method="closed_form")
    print(f"{lam:8.2f} {q:16.10f} {c:16.10f} {abs(q - c):10.2e}")

print("\ncoupling along the flow (lambda = 2 at tau = 1):")
prof = flow_profile(2.0, 0.25, 4.0, 9)
ode = ode_flow_values(2.0, prof.tau_grid)
print(f"{'tau':>8} {'lambda(tau)':>14} {'beta':>12} {'ode gap':>10}")
for t, lam, b, o in zip(prof.tau_grid, prof.lambda_values, prof.beta_values, ode):
    print(f"{t:8.4f} {lam:14.8f} {b:12.6f} {abs(lam - o) / lam:10.2e}")
print(f"worst closed-form vs ODE residual: {prof.closed_form_residual:.3e}")

print("\nthe flow blows up toward the infrared:")
lam0 = 30.0
tau_c = math.exp(-4.0 * math.pi / lam0)
print(f"  lambda = {lam0} has its pole at tau* = {tau_c:.6f}")
try:
    flow_coupling(lam0, 0.9 * tau_c)
except FlowPoleError as exc:
    print(f"  flow_coupling at 0.9 tau*: {exc} (tau_critical = {exc.tau_critical:.6f})")

print("\nscaling identity on a unit circle (E = 0, m = 1, mu = 0.5, lambda = 1):")
circle = resample_arclength(Circle(center=(0.0, 0.0, 0.0), radius=1.0), 64)
for tau in (0.5, 1.0, 2.0):
    r = rg_invariance_residual(circle, 0.0, 1.0, 0.5, 1.0, tau)
    print(f"  tau = {tau:4.1f}   relative residual = {r:.3e}")
