"""Modified Bessel functions of the first kind, I_order(z) for real z >= 0.

Three backends, chosen to be independent of each other:

* ``series``: the ascending power series, all terms positive for order > -1,
  so it is accurate to a few ulps wherever it does not overflow;
* ``trapezoid``: the periodic trapezoid rule on (1/pi) int_0^pi e^(z cos t)
  cos(n t) dt, integer orders only;
* ``closed``: the finite sinh/cosh expressions for half-integer orders.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

__all__ = ["bessel_i", "bessel_ie", "bessel_i_series", "bessel_i_trapezoid", "bessel_i_closed", "order_kind"]


def order_kind(order) -> str:
    """'integer' or 'half' for supported orders; raises ValueError otherwise."""
    q = Fraction(order).limit_denominator(4) if isinstance(order, float) else Fraction(order)
    if isinstance(order, float) and float(q) != order:
        raise ValueError(f"unsupported Bessel order {order!r}: need integer or half-integer")
    if q.denominator == 1:
        return "integer"
    if q.denominator == 2:
        return "half"
    raise ValueError(f"unsupported Bessel order {order!r}: need integer or half-integer")


def _check_z(z):
    if not z >= 0:
        raise ValueError(f"Bessel argument must be >= 0, got {z!r}")


def bessel_i_series(order, z: float) -> float:
    """Power series sum_k (z/2)^(2k+order) / (k! Gamma(k+order+1))."""
    kind = order_kind(order)
    _check_z(z)
    nu = float(order)
    if kind == "integer" and nu < 0:
        nu = -nu
    half = z / 2
    if half == 0.0:
        return 1.0 if nu == 0 else (math.inf if nu < 0 and kind == "half" else 0.0)
    # first term; 1/Gamma is finite for every half-integer argument
    log_first = nu * math.log(half)
    g = math.gamma(nu + 1) if nu + 1 < 170 else math.inf
    term = math.exp(log_first) / g if g != math.inf else math.exp(log_first - math.lgamma(nu + 1))
    q = half * half
    total = term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if abs(term) <= 1e-17 * abs(total) and k > half:
            break
        if k > 10000:
            raise ArithmeticError("Bessel series did not converge")
    return total


def bessel_i_trapezoid(order, z: float, nodes: int | None = None) -> float:
    """Periodic trapezoid rule for integer orders, spectrally convergent in ``nodes``.

    The error is relative to e^z, so small values of I_n at small z are only
    resolved in absolute terms.
    """
    if order_kind(order) != "integer":
        raise ValueError("the trapezoid backend needs an integer order")
    _check_z(z)
    n = abs(int(order))
    if nodes is None:
        nodes = 2 * (int(z) + n) + 64
    t = 2 * np.pi * np.arange(nodes) / nodes
    # e^(z cos t - z) keeps the sum bounded; the symmetric sum over [0, 2pi) is exact
    vals = np.exp(z * (np.cos(t) - 1.0)) * np.cos(n * t)
    return float(math.fsum(vals) / nodes * math.exp(z))


def bessel_i_closed(order, z: float) -> float:
    """Finite sinh/cosh form for half-integer orders n + 1/2 and -n - 1/2."""
    if order_kind(order) != "half":
        raise ValueError("the closed backend needs a half-integer order")
    _check_z(z)
    if z == 0.0:
        return 0.0 if float(order) > 0 else math.inf
    negative = float(order) < 0
    n = int(abs(float(order)) - 0.5)
    grow = decay = 0.0
    for k in range(n + 1):
        c = math.factorial(n + k) / (math.factorial(k) * math.factorial(n - k)) / (2 * z) ** k
        grow += (-1) ** k * c
        decay += c
    sign = (-1) ** n if negative else (-1) ** (n + 1)
    return (math.exp(z) * grow + sign * math.exp(-z) * decay) / math.sqrt(2 * math.pi * z)


def bessel_ie(order, z: float) -> float:
    """Exponentially scaled e^(-z) I_order(z), finite for every z >= 0."""
    _check_z(z)
    if z < 600.0:
        return bessel_i_series(order, z) * math.exp(-z)
    # Hankel asymptotic series; at z >= 600 it reaches double precision quickly
    mu = 4.0 * float(order) ** 2
    term, total = 1.0, 1.0
    for k in range(1, 40):
        term *= -(mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total / math.sqrt(2 * math.pi * z)


def bessel_i(order, z: float, backend: str = "series") -> float:
    """I_order(z); order is an integer or half-integer, z >= 0."""
    if backend == "series":
        return bessel_i_series(order, z)
    if backend == "trapezoid":
        return bessel_i_trapezoid(order, z)
    if backend == "closed":
        return bessel_i_closed(order, z)
    raise ValueError(f"unknown Bessel backend {backend!r}")
