"""0F1 hypergeometric functions of matrix argument at X = x I_m.

Two independent backends:

* an m-fold angular integral over [-pi, pi]^m evaluated with the periodic
  trapezoid rule (integer lambda and c only);
* the partition series sum_kappa C_kappa(x I_m) / (|kappa|! (b)_kappa) with
  Jack polynomials at the identity from their hook-length product formula.

The Jack parameter alpha is written ``beta`` in the public signatures, to
match the superscript of 0F1^(beta/2) used for the microscopic limits.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .ensemble import UnsupportedParameters
from .microscopic import micro_p, micro_q

__all__ = [
    "Partition",
    "partitions_of",
    "gen_pochhammer",
    "jack_at_identity",
    "hfma_0f1_quadrature",
    "hfma_0f1_series",
    "hfma_series_layers",
    "SeriesResult",
    "scalar_0f1",
    "a_constant",
    "micro_via_hfma",
    "equivalence_report",
    "EquivalenceReport",
    "MAX_QUADRATURE_M",
]

MAX_QUADRATURE_M = 3


class Partition(tuple):
    """Weakly decreasing tuple of positive parts; () is the empty partition."""

    def __new__(cls, parts=()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive, got {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be weakly decreasing, got {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    def cells(self):
        """Young-diagram cells (i, j), both 1-based."""
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def conjugate(self) -> "Partition":
        if not self:
            return Partition()
        return Partition(sum(1 for p in self if p >= j) for j in range(1, self[0] + 1))


def partitions_of(k: int, max_parts: int | None = None) -> list[Partition]:
    """All partitions of k with at most ``max_parts`` parts, in reverse lexicographic order."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    limit = k if max_parts is None else max_parts
    if limit < 0:
        raise ValueError("max_parts must be non-negative")
    out: list[Partition] = []

    def build(rest, largest, prefix):
        if rest == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == limit:
            return
        for part in range(min(rest, largest), 0, -1):
            build(rest - part, part, prefix + [part])

    build(k, k, [])
    return out


def gen_pochhammer(a: float, kappa, beta: float) -> float:
    """(a)_kappa = prod over cells (i, j) of (a - (i-1)/beta + j - 1)."""
    kappa = Partition(kappa)
    out = 1.0
    for i, j in kappa.cells():
        out *= a - (i - 1) / beta + j - 1
    return out


def _log_jack_ratio(kappa: Partition, alpha: float, m: int) -> float:
    """ln[C_kappa(I_m) / |kappa|!] = ln[alpha^k J_kappa(I_m) / j_kappa]."""
    conj = kappa.conjugate()
    out = kappa.weight * math.log(alpha)
    for i, j in kappa.cells():
        out += math.log(m - i + 1 + alpha * (j - 1))
        upper = conj[j - 1] - i + alpha * (kappa[i - 1] - j + 1)
        lower = conj[j - 1] - i + 1 + alpha * (kappa[i - 1] - j)
        out -= math.log(upper) + math.log(lower)
    return out


def jack_at_identity(kappa, alpha: float, m: int) -> float:
    """C_kappa^(alpha)(I_m); zero when kappa has more than m parts."""
    kappa = Partition(kappa)
    if len(kappa) > m:
        return 0.0
    return math.exp(_log_jack_ratio(kappa, alpha, m) + math.lgamma(kappa.weight + 1))


@functools.lru_cache(maxsize=64)
def _jack_table(alpha: float, m: int, k: int) -> tuple[tuple[Partition, float], ...]:
    # read-only table of ln[C_kappa(I_m)/k!] for each layer
    return tuple((kap, _log_jack_ratio(kap, alpha, m)) for kap in partitions_of(k, m))


def scalar_0f1(b: float, x: float, rtol: float = 1e-17) -> float:
    """Scalar 0F1(; b; x) = sum_k x^k / (k! (b)_k)."""
    term = total = 1.0
    k = 0
    while True:
        term *= x / ((k + 1) * (b + k))
        total += term
        k += 1
        if abs(term) <= rtol * abs(total) and k > abs(x):
            return total


def _b_hat_log(m: int, c: int, lam: int) -> float:
    out = 0.0
    for j in range(1, m + 1):
        out += (math.lgamma(1 + lam / 2) + math.lgamma(c + lam * (j - 1) / 2)
                - math.lgamma(1 + lam * j / 2))
    return out


def _angular_mean(m: int, c: int, lam: int, x: float, nodes: int) -> complex:
    """Mean of the integrand over an equispaced nodes^m grid on [-pi, pi)^m."""
    theta = -np.pi + 2 * np.pi * np.arange(nodes) / nodes
    one = np.exp(2 * math.sqrt(x) * np.cos(theta) + 1j * (c - 1) * theta)

    def chord(a, b):
        return np.abs(2 * np.sin((a - b) / 2)) ** lam

    if m == 1:
        return complex(one.mean())
    if m == 2:
        vdm = chord(theta[:, None], theta[None, :])
        return complex((one[:, None] * one[None, :] * vdm).mean())
    # m = 3: slice over the first angle to keep memory at nodes^2
    t2, t3 = theta[:, None], theta[None, :]
    inner_pair = one[:, None] * one[None, :] * chord(t2, t3)
    total = 0j
    for a in range(nodes):
        w = chord(theta[a], t2) * chord(theta[a], t3)
        total += one[a] * (inner_pair * w).sum()
    return total / nodes ** 3


def hfma_0f1_quadrature(lam: int, c: int, x: float, m: int, nodes: int = 256,
                        tol: float = 1e-10, max_nodes: int = 2048) -> float:
    """0F1^(2/lam)(-; c + (lam/2)(m-1); x I_m) from the angular integral.

    The node count per dimension doubles, starting from ``nodes // 2``, until
    two successive values agree to ``tol`` and at least ``nodes`` is reached.
    The imaginary part cancels by theta -> -theta symmetry and is checked.
    """
    if int(lam) != lam or int(c) != c or lam < 1 or c < 1:
        raise ValueError("the angular integral needs positive integer lambda and c")
    if m < 1:
        raise ValueError("m must be a positive integer")
    if m > MAX_QUADRATURE_M:
        raise UnsupportedParameters(
            f"m={m} is too large for the {m}-fold quadrature (max {MAX_QUADRATURE_M}); "
            "use hfma_0f1_series instead")
    if not x >= 0:
        raise ValueError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    log_pre = _b_hat_log(m, c, lam) - (c - 1) * m / 2 * math.log(x)
    n = max(8, nodes // 2)
    prev = None
    while True:
        val = math.exp(log_pre) * _angular_mean(m, c, lam, x, n)
        if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
            raise ArithmeticError(f"imaginary residual {val.imag:.3e} exceeds 1e-10")
        if prev is not None and n >= nodes and abs(val.real - prev) <= tol * abs(val.real):
            return val.real
        if 2 * n > max_nodes:
            raise ArithmeticError(f"trapezoid rule not converged at {n} nodes per dimension")
        prev = val.real
        n *= 2


class SeriesResult(NamedTuple):
    value: float
    remainder: float
    kmax: int
    converged: bool


def _layer(beta: float, b: float, x: float, m: int, k: int) -> float:
    logs, signs = [], []
    for kap, lj in _jack_table(float(beta), m, k):
        poch = gen_pochhammer(b, kap, beta)
        if poch == 0.0:
            raise ZeroDivisionError(f"(b)_kappa vanishes for kappa={tuple(kap)}")
        logs.append(lj + k * math.log(x) - math.log(abs(poch)))
        signs.append(1 if poch > 0 else -1)
    top = max(logs)
    return math.exp(top) * math.fsum(s * math.exp(v - top) for v, s in zip(logs, signs))


def hfma_series_layers(beta: float, b: float, x: float, m: int, kmax: int) -> list[float]:
    """Degree-k contributions sum_{kappa |- k} C_kappa(x I_m)/(k! (b)_kappa), k = 0..kmax."""
    if x == 0.0:
        return [1.0] + [0.0] * kmax
    return [1.0] + [_layer(beta, b, x, m, k) for k in range(1, kmax + 1)]


def hfma_0f1_series(beta: float, b: float, x: float, m: int, kmax: int = 200,
                    rtol: float = 1e-14) -> SeriesResult:
    """Partition series of 0F1^(beta)(-; b; x I_m), with beta the Jack parameter.

    Summation stops at the first complete layer below ``rtol`` of the running
    sum (kmax is capped at 200); ``remainder`` is the magnitude of that last
    layer and ``converged`` is False when kmax was reached first.
    """
    if m < 1:
        raise ValueError("m must be a positive integer")
    if not x >= 0:
        raise ValueError(f"x must be >= 0, got {x!r}")
    if x == 0.0:
        return SeriesResult(1.0, 0.0, 0, True)
    kmax = min(int(kmax), 200)
    total = 1.0
    last = 0.0
    for k in range(1, kmax + 1):
        last = _layer(beta, b, x, m, k)
        total += last
        if abs(last) < rtol * abs(total) and k > x:
            return SeriesResult(total, abs(last), k, True)
    return SeriesResult(total, abs(last), kmax, False)


def a_constant(m: int, beta: int) -> float:
    """A_{m,beta} = 4^-(m+1) (beta/2)^(2m+1) Gamma(beta/2+1) / (Gamma(m+1) Gamma(m+1+beta/2))."""
    h = beta / 2
    return math.exp(-(m + 1) * math.log(4) + (2 * m + 1) * math.log(h) + math.lgamma(h + 1)
                    - math.lgamma(m + 1) - math.lgamma(m + 1 + h))


def _m_index(beta: int, nu: int) -> int:
    m = Fraction(beta, 2) * (nu + 1) - 1
    if m.denominator != 1:
        raise UnsupportedParameters(
            f"(beta={beta}, nu={nu}) gives non-integer m={m}; for beta=1 nu must be odd")
    return int(m)


def micro_via_hfma(beta: int, nu: int, y: float, which: str = "Q", backend: str = "quadrature",
                   nodes: int = 256) -> float:
    """Q or P of the microscopic limit from the 0F1 of matrix argument.

    Q = e^(-beta y/8) 0F1^(beta/2)(-; 2m/beta; (y/4) I_m)
    P = A_{m,beta} y^m e^(-beta y/8) 0F1^(beta/2)(-; 2 + 2m/beta; (y/4) I_m)
    """
    if beta not in (1, 2):
        raise UnsupportedParameters(f"beta must be 1 or 2, got {beta}")
    if which not in ("Q", "P"):
        raise ValueError(f"which must be 'Q' or 'P', got {which!r}")
    if not y >= 0:
        raise ValueError(f"y must be >= 0, got {y!r}")
    m = _m_index(beta, nu)
    x = y / 4
    damp = math.exp(-beta * y / 8)
    if m == 0:
        f = 1.0
    elif backend == "quadrature":
        lam = 4 // beta
        c = 2 // beta if which == "Q" else 2 + 2 // beta
        f = hfma_0f1_quadrature(lam, c, x, m, nodes=nodes)
    elif backend == "series":
        b = 2 * m / beta if which == "Q" else 2 + 2 * m / beta
        f = hfma_0f1_series(beta / 2, b, x, m).value
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if which == "Q":
        return damp * f
    return a_constant(m, beta) * y ** m * damp * f


@dataclass
class EquivalenceReport:
    beta: int
    nu: int
    rows: list
    max_diff_q: float
    max_diff_p: float

    @property
    def max_diff(self) -> float:
        return max(self.max_diff_q, self.max_diff_p)


def equivalence_report(beta: int, nu: int, y_grid, backend: str = "quadrature") -> EquivalenceReport:
    """Evaluate Q and P through the 0F1 and the Bessel determinant/Pfaffian pipelines."""
    rows = []
    for y in y_grid:
        y = float(y)
        qh = micro_via_hfma(beta, nu, y, "Q", backend)
        ph = micro_via_hfma(beta, nu, y, "P", backend)
        qb = micro_q(beta, nu, y)
        pb = micro_p(beta, nu, y)
        rows.append({"y": y, "q_hfma": qh, "q_bessel": qb, "p_hfma": ph, "p_bessel": pb,
                     "diff_q": abs(qh - qb), "diff_p": abs(ph - pb)})
    return EquivalenceReport(beta, nu, rows,
                             max((r["diff_q"] for r in rows), default=0.0),
                             max((r["diff_p"] for r in rows), default=0.0))
