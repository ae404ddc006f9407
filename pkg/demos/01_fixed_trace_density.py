"""
Smallest Schmidt eigenvalue at finite N
=======================================

A random pure state of a bipartite system with dimensions N <= M has N
Schmidt eigenvalues that sum to one.  Their joint law is the real
Wishart-Laguerre ensemble restricted to unit trace.  This script looks at the
density of the smallest one.
"""

import math

import numpy as np

from spectra import EnsembleParams, ftwl_density, ftwl_moment, ftwl_normalization
from spectra.ftwl import density_curve, ftwl_cdf

# N = M = 2 has a closed form that makes a good first check
p = EnsembleParams.from_nu(2, 0)
for x in (0.05, 0.125, 0.25, 0.4):
    closed = (1 - 2 * x) / math.sqrt(x * (1 - x))
    print(f"N=2 nu=0  x={x:<6} library={ftwl_density(p, x):.12f}  closed={closed:.12f}")

# the density lives on [0, 1/N] and integrates to one for every nu
for nu in range(4):
    p = EnsembleParams.from_nu(6, nu)
    print(f"N=6 nu={nu}  mass={ftwl_normalization(p):.14f}  q(1/12)={ftwl_cdf(p, 1 / 12):.6f}")

# odd nu gives polynomial-times-Beta profiles, so moments come out in closed form
print("\nN^3 <lambda_min> for nu=1 against 2/(1 + 1/N):")
for n in (2, 5, 10, 50, 100):
    scaled = n ** 3 * ftwl_moment(EnsembleParams.from_nu(n, 1), 1)
    print(f"  N={n:<4} {scaled:.10f}  {2 / (1 + 1 / n):.10f}")

# a small table of a density curve, as one would feed to a plot
curve = density_curve(EnsembleParams.from_nu(7, 2), np.linspace(0, 0.03, 7))
for x, v in zip(curve.abscissas, curve.values):
    print(f"  x={x:.4f}  p={v:.6g}")
