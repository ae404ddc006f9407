"""
Hard-edge limit of the smallest eigenvalue
==========================================

Zoomed in at the origin on the scale y = 4 N^3 x (fixed trace) or y = 4 N x
(no constraint), both ensembles approach the same limiting law.  For complex
matrices it is a Bessel determinant; for real matrices with odd nu a Bessel
Pfaffian, and closed forms for nu = 0 and 2.
"""

import math

import numpy as np

from spectra import MicroDist, convergence_probe, kappa, micro_p, micro_q

for beta, nu in [(2, 0), (2, 2), (1, 0), (1, 1), (1, 3), (1, 5)]:
    qs = ", ".join(f"{micro_q(beta, nu, y):.6f}" for y in (0.5, 2, 8))
    print(f"beta={beta} nu={nu}:  Q(0.5, 2, 8) = {qs}")

# the density is minus the derivative of the gap probability
y, h = 3.0, 1e-5
fd = -(micro_q(1, 5, y + h) - micro_q(1, 5, y - h)) / (2 * h)
print(f"\n-Q'(3) = {fd:.10f}   P(3) = {micro_p(1, 5, 3.0):.10f}")

# the Dirac picture uses s = sqrt(y)
d = MicroDist(1, 0, "s")
print(f"Dirac density at s=0: {d.p(0.0)}, at s=1: {d.p(1.0):.8f}")

# first moments of the limiting law, in units where they are O(1)
print("\nkappa/4:")
print(f"  beta=2 nu=0 : {kappa(1, 0, 2) / 4:.9f}")
print(f"  beta=1 nu=0 : {kappa(1, 0, 1) / 4:.9f}")
print(f"  beta=1 nu=1 : {kappa(1, 1, 1) / 4:.9f}")
print(f"  beta=1 nu=3 : {kappa(1, 3, 1) / 4:.9f}  (e^2 - 1 = {math.e ** 2 - 1:.9f})")

# finite-N densities rescaled to y, against the limit
print("\nsup-gap on y in [1, 16] for beta=1, nu=0:")
for row in convergence_probe(0, [8, 16, 32], np.linspace(1, 16, 61)):
    print(f"  N={row['N']:<3} fixed trace {row['gap_FT']:.3e}   unconstrained {row['gap_WL']:.3e}")
