"""
Two routes to the same limiting law
===================================

The limiting gap probability can also be written as a hypergeometric
function 0F1 of an m x m matrix argument proportional to the identity.  We
evaluate it two ways, by an m-fold angular integral and by the partition
series over Jack polynomials, and compare both with the Bessel route.
"""

from spectra import equivalence_report, hfma_0f1_quadrature, hfma_0f1_series, partitions_of
from spectra.hfma import jack_at_identity

print("partitions of 4:", [tuple(k) for k in partitions_of(4)])

# Jack polynomials at the identity add up to the k-th power of the trace
for alpha in (0.5, 1.0, 2.0):
    total = sum(jack_at_identity(k, alpha, 3) for k in partitions_of(4, 3))
    print(f"alpha={alpha}: sum of C_kappa(I_3) over |kappa|=4 = {total:.12f} (3^4 = 81)")

x = 2.0
quad = hfma_0f1_quadrature(4, 2, x, 2)
ser = hfma_0f1_series(0.5, 4.0, x, 2)
print(f"\n0F1 with m=2 at x={x}: angular {quad:.15f}, series {ser.value:.15f} (k <= {ser.kmax})")

ys = [0.5, 1, 2, 4, 8, 16, 25]
for beta, nu in [(2, 1), (2, 2), (2, 3), (1, 3), (1, 5)]:
    for backend in ("quadrature", "series"):
        rep = equivalence_report(beta, nu, ys, backend)
        print(f"beta={beta} nu={nu} {backend:<10} max |difference| = {rep.max_diff:.2e}")
