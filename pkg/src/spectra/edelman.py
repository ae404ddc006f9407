"""Smallest-eigenvalue density of the real (beta=1) Wishart-Laguerre ensemble.

For odd nu the density is ``x^((nu-1)/2) exp(-N x/2)`` times a polynomial
h_{N,nu}; for even nu two polynomials f, g multiply Tricomi functions.  The
polynomials for nu in {0, 1, 2, 3} have closed Laguerre forms and ship with
the library.  Larger nu needs Edelman's recursion, which plugs in through
:func:`register_coefficient_provider`.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate

from ._cdf import panel_cdf
from .ensemble import (
    EnsembleParams,
    RationalPoly,
    UnsupportedParameters,
    log_abs_fraction,
    log_gamma,
)

__all__ = [
    "CoefficientSet",
    "laguerre_poly",
    "coefficients",
    "register_coefficient_provider",
    "c_constant_log",
    "tricomi_u",
    "u1",
    "u2",
    "wl_density",
    "wl_cdf",
    "wl_cdf_interpolant",
]

LOG2 = math.log(2.0)
LOG_SQRT_PI = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class CoefficientSet:
    """Exact polynomial coefficients times a positive real scale exp(log_scale).

    ``kind`` is ``"odd"`` (only ``h`` is set) or ``"even"`` (``f`` and ``g``).
    The scale carries the sqrt(pi) and 2**N factors so the polynomials stay
    exactly rational.
    """

    n_dim: int
    nu: int
    kind: str
    log_scale: float = 0.0
    h: RationalPoly | None = None
    f: RationalPoly | None = None
    g: RationalPoly | None = None

    def __post_init__(self):
        if self.kind == "odd":
            if self.h is None or self.nu % 2 != 1:
                raise ValueError("odd coefficient set needs odd nu and h")
            bound = (self.n_dim - 1) * (self.nu - 1) // 2
            if self.h.degree > bound:
                raise ValueError(f"deg h = {self.h.degree} exceeds {bound}")
        elif self.kind == "even":
            if self.f is None or self.g is None or self.nu % 2 != 0:
                raise ValueError("even coefficient set needs even nu, f and g")
            bound = self.nu * (self.n_dim - 1) // 2
            if self.f.degree > bound or self.g.degree > bound:
                raise ValueError(f"deg f, g must not exceed {bound}")
        else:
            raise ValueError(f"kind must be 'odd' or 'even', got {self.kind!r}")

    def log_terms(self, which: str = "h") -> list[tuple[int, float, int]]:
        """(k, ln|coef_k|, sign) for every nonzero coefficient, scale included."""
        poly = getattr(self, which)
        return [(k, log_abs_fraction(q) + self.log_scale, 1 if q > 0 else -1)
                for k, q in enumerate(poly.coefficients) if q != 0]


def laguerre_poly(n: int, alpha: int, negate_arg: bool = False) -> RationalPoly:
    """Exact coefficients of L_n^(alpha)(x), or of L_n^(alpha)(-x)."""
    if n < 0:
        return RationalPoly()
    x = RationalPoly.monomial(1)
    prev, cur = RationalPoly.constant(1), RationalPoly.constant(1 + alpha) - x
    if n == 0:
        cur = prev
    for k in range(1, n):
        nxt = ((2 * k + 1 + alpha) - x) * cur - (k + alpha) * prev
        prev, cur = cur, nxt * Fraction(1, k + 1)
    return cur.compose_negate() if negate_arg else cur


def _builtin(n: int, nu: int) -> CoefficientSet | None:
    one = RationalPoly.constant(1)
    if nu == 1:
        return CoefficientSet(n, 1, "odd", 0.0, h=one)
    if nu == 3:
        scale = (n * LOG2 + log_gamma(n / 2 + 1) + log_gamma((n + 3) / 2)
                 - math.log(n * (n + 1)) - log_gamma(1.5))
        return CoefficientSet(n, 3, "odd", scale, h=laguerre_poly(n - 1, 3, True))
    if nu == 0:
        scale = (log_gamma(n) + LOG_SQRT_PI - (n - 1) * LOG2
                 - log_gamma(n / 2) - log_gamma((n + 1) / 2))
        return CoefficientSet(n, 0, "even", scale, f=one, g=RationalPoly())
    if nu == 2:
        scale = (n * LOG2 + log_gamma((n + 1) / 2) + log_gamma((n + 2) / 2)
                 - math.log(n) - LOG_SQRT_PI)
        f = laguerre_poly(n - 1, 2, True)
        if n == 1:
            g = RationalPoly()
        else:
            g = RationalPoly.monomial(1, Fraction(-2, n - 1)) * laguerre_poly(n - 2, 3, True)
        return CoefficientSet(n, 2, "even", scale, f=f, g=g)
    return None


_providers: list[Callable[[int, int], CoefficientSet | None]] = []


def register_coefficient_provider(provider: Callable[[int, int], CoefficientSet | None]) -> None:
    """Add a source of coefficients for nu beyond the built-in {0, 1, 2, 3}.

    ``provider(N, nu)`` returns a :class:`CoefficientSet` or ``None`` when it
    does not cover the pair.  Providers are consulted in registration order.
    """
    _providers.append(provider)
    coefficients.cache_clear()


@functools.lru_cache(maxsize=512)
def coefficients(n: int, nu: int) -> CoefficientSet:
    if n < 1 or nu < 0:
        raise ValueError(f"need N >= 1 and nu >= 0, got N={n}, nu={nu}")
    out = _builtin(n, nu)
    for provider in _providers:
        if out is not None:
            break
        out = provider(n, nu)
    if out is None:
        raise UnsupportedParameters(
            f"no coefficients for nu={nu}: built-in formulas cover nu in {{0,1,2,3}}; "
            "register a provider implementing Edelman's recursion for higher nu "
            "(spectra.edelman.register_coefficient_provider)")
    return out


def c_constant_log(n: int, nu: int) -> float:
    """ln c_{N,nu}, the constant shared by the odd and even density forms."""
    out = math.log(n) - n * nu / 2 * LOG2 + log_gamma((n + 1) / 2) - LOG_SQRT_PI
    for j in range(1, nu + 1):
        out += log_gamma(j / 2) - log_gamma((n + j) / 2)
    return out


def tricomi_u(a: float, b: float, z: float, rtol: float = 1e-12) -> float:
    """Confluent hypergeometric U(a, b, z) for a >= 0, z > 0 by quadrature.

    With tau = u/(1-u) the Laplace-type integral becomes
    int_0^1 u^(a-1) (1-u)^(-b) exp(-z u/(1-u)) du / Gamma(a), whose algebraic
    endpoint factors go into the QAWS weight.
    """
    if not z > 0:
        raise ValueError(f"tricomi_u requires z > 0, got {z!r}")
    if a < 0:
        raise ValueError(f"tricomi_u requires a >= 0, got {a!r}")
    if a == 0:
        return 1.0

    # QAWS needs exponents > -1; for b >= 1 the exponential tames (1-u)^(-b)
    right = -b if b < 1 else 0.0
    rest = -b - right

    def expo(u):
        if u >= 1.0:
            return 0.0
        return math.exp(rest * math.log1p(-u) - z * u / (1.0 - u))

    val = integrate.quad(expo, 0.0, 1.0, weight="alg", wvar=(a - 1.0, right),
                         epsabs=0.0, epsrel=rtol, limit=200, full_output=1)[0]
    return val / math.gamma(a) if a < 170 else math.exp(math.log(val) - log_gamma(a))


def u1(n: int, x: float) -> float:
    return tricomi_u((n - 1) / 2, -0.5, x / 2)


def u2(n: int, x: float) -> float:
    """Derivative of :func:`u1` in x."""
    if n == 1:
        return 0.0
    return -(n - 1) / 4 * tricomi_u((n + 1) / 2, 0.5, x / 2)


def _check_wl(p: EnsembleParams):
    if p.beta != 1:
        raise UnsupportedParameters("finite-N WL density is implemented for beta=1 only")


def wl_density(p: EnsembleParams, x: float) -> float:
    """Density of the smallest eigenvalue of the beta=1 WL ensemble at x > 0."""
    _check_wl(p)
    if x == 0:
        return _origin(p)
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    n, nu = p.n_dim, p.nu
    cs = coefficients(n, nu)
    base = c_constant_log(n, nu) + (nu - 1) / 2 * math.log(x) - n * x / 2 + cs.log_scale
    if cs.kind == "odd":
        poly = cs.h(x)
        if poly == 0.0:
            return 0.0
        return math.copysign(math.exp(base + (n / 2 - 1) * LOG2 + math.log(abs(poly))), poly)
    bracket = cs.f(x) * u1(n, x)
    if not cs.g.is_zero():
        bracket += cs.g(x) * u2(n, x)
    if bracket <= 0.0:
        return 0.0
    return math.exp(base - 0.5 * LOG2 + math.log(bracket))


def _origin(p: EnsembleParams) -> float:
    # x^((nu-1)/2) diverges for nu=0, is constant for nu=1 and vanishes beyond
    if p.nu == 0:
        return math.inf
    if p.nu >= 2:
        return 0.0
    cs = coefficients(p.n_dim, p.nu)
    return math.exp(c_constant_log(p.n_dim, 1) + cs.log_scale + (p.n_dim / 2 - 1) * LOG2) * cs.h(0.0)


def wl_cdf(p: EnsembleParams, x: float, rtol: float = 1e-10) -> float:
    """Gap probability q(x) = Prob[lambda_min > x] of the WL ensemble."""
    if x <= 0:
        return 1.0
    # x = w^2 removes the x^(-1/2) singularity of nu=0
    tail, _ = integrate.quad(lambda w: 2 * w * wl_density(p, w * w), math.sqrt(x), np.inf,
                             epsabs=0.0, epsrel=rtol, limit=200)
    return min(1.0, max(0.0, tail))


def wl_cdf_interpolant(p: EnsembleParams, panels: int = 96, order: int = 12):
    """Vectorised CDF F(x) = 1 - q(x) of the WL smallest eigenvalue, accepting arrays."""
    _check_wl(p)
    n = p.n_dim
    # push the right end out until the gap probability is negligible
    x_end = 8.0 / n
    while wl_cdf(p, x_end) > 1e-16:
        x_end *= 2
    w_peak = math.sqrt((p.nu + 1) ** 2 / (4.0 * n))

    def dens(x):
        return wl_density(p, x) if x > 0 else 0.0

    return panel_cdf(dens, math.sqrt(x_end), w_peak, panels, order)
