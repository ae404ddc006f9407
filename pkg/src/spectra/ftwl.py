"""Smallest eigenvalue of the fixed-trace real Wishart-Laguerre ensemble.

The fixed-trace density follows from the unconstrained one by inverting a
Laplace transform in the trace.  Each monomial of Edelman's polynomials
inverts to a Beta-type profile ``x^a (1 - N x)^b``; for even nu the Tricomi
factors turn into one-dimensional integrals over [0, 1/x - N].

All densities here are at unit trace unless the name says otherwise, and
all of them are for beta = 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from scipy import integrate

from ._cdf import panel_cdf
from .edelman import LOG2, c_constant_log, coefficients, wl_density
from .ensemble import (
    EnsembleParams,
    UnsupportedParameters,
    log_gamma,
    log_ratio_ft_wl,
    signed_log_sum,
)

__all__ = [
    "DensityCurve",
    "QUAD_RTOL",
    "ftwl_density",
    "ftwl_density_odd",
    "ftwl_density_even",
    "ftwl_density_explicit",
    "theta_integral",
    "xi_integral",
    "theta_hyp2f1",
    "xi_hyp2f1",
    "ftwl_cdf",
    "ftwl_cdf_interpolant",
    "ftwl_normalization",
    "ftwl_moment",
    "ftwl_moment_quadrature",
    "rescale_trace",
    "density_at_t",
    "laplace_relation_check",
    "density_curve",
]

# relative target of the inner tau-integrals and of the outer x-integrals
QUAD_RTOL = 1e-10


@dataclass
class DensityCurve:
    abscissas: np.ndarray
    values: np.ndarray
    params: EnsembleParams
    backend: str = "general"
    formula: str = ""
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.abscissas = np.asarray(self.abscissas, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.abscissas.shape != self.values.shape:
            raise ValueError("abscissas and values differ in shape")


def _check(p: EnsembleParams):
    if p.beta != 1:
        raise UnsupportedParameters("finite-N fixed-trace densities are implemented for beta=1 only")
    if p.n_dim < 2:
        raise ValueError("for N=1 the fixed-trace eigenvalue equals the trace; no density")


def _domain(p: EnsembleParams, x: float) -> bool:
    """True when x is inside the open support (0, 1/N); raises for x <= 0."""
    if not x > 0:
        raise ValueError(f"x must be positive, got {x!r}")
    return p.n_dim * x < 1.0


def ftwl_density_odd(p: EnsembleParams, x: float) -> float:
    """General odd-nu assembler: a finite sum of x^a (1-Nx)^b terms."""
    _check(p)
    n, nu = p.n_dim, p.nu
    if nu % 2 != 1:
        raise ValueError(f"ftwl_density_odd needs odd nu, got {nu}")
    if not _domain(p, x):
        return 0.0
    cs = coefficients(n, nu)
    lx, l1 = math.log(x), math.log1p(-n * x)
    nn = n * (n + nu)
    pre = log_ratio_ft_wl(p) + (n / 2 - 1) * LOG2 + c_constant_log(n, nu)
    logs, signs = [], []
    for k, lq, sgn in cs.log_terms("h"):
        e = (nn - 2 * k - nu - 1) / 2
        logs.append(pre + lq + (2 * k + nu + 1 - nn) / 2 * LOG2 - log_gamma(e)
                    + (k + (nu - 1) / 2) * lx + (e - 1) * l1)
        signs.append(sgn)
    return signed_log_sum(logs, signs)


def _log_tau_integral(n: int, nu: int, k: int, x: float, shifted: bool) -> float:
    """ln of the Theta_k (shifted=False) or Xi_k (shifted=True) integral, x in (0, 1/N).

    tau = T u with T = 1/x - N turns 1 - x(N + tau) into (1 - N x)(1 - u).
    For small x the factor (1 + T u)^(-N/2-1) varies on the scale u ~ 1/T, so
    the integral is taken in v = ln(1 + T u) = V s, where the integrand decays
    like exp(-v/2) or faster.  s^(a-1) and the fractional part of (1-s)^P go
    into the QAWS weight; the integer part of P stays in the smooth factor.
    """
    a = (n + 1) / 2 if shifted else (n - 1) / 2
    power = (n * (n + nu) - nu - 3 - 2 * k) / 2
    t_end = 1.0 / x - n
    if t_end <= 0.0:
        return -math.inf
    if n == 1 and not shifted:
        # tau^(a-1)/Gamma(a) -> delta(tau) as a -> 0
        return (k + (nu - 1) / 2) * math.log(x) + power * math.log1p(-n * x)
    v_end = math.log1p(t_end)
    decay = -n / 2
    # only the fractional part of P is singular at the right end
    frac = power - math.floor(power) if power >= 0 else power
    whole = power - frac
    log_ratio = math.log1p(1.0 / t_end)

    def smooth(s):
        v = v_end * s
        out = decay * v
        if v > 0.0:
            out += (a - 1) * math.log(math.expm1(v) / v)
        gap = v_end - v
        if gap > 0.0:
            log_1mu = log_ratio + math.log(-math.expm1(-gap))
            out += whole * log_1mu + frac * (log_1mu - math.log(gap))
        elif whole > 0:
            return 0.0
        else:
            out += frac * log_ratio
        return math.exp(out)

    val = integrate.quad(smooth, 0.0, 1.0, weight="alg", wvar=(a - 1.0, frac),
                         epsabs=0.0, epsrel=QUAD_RTOL * 0.1, limit=400, full_output=1)[0]
    if val <= 0.0:
        return -math.inf
    # the T^a of tau = T u cancels against the T^-a of the substitution
    out = ((k + (nu - 1) / 2) * math.log(x) - log_gamma(a) + power * math.log1p(-n * x)
           + (a + frac) * math.log(v_end) + math.log(val))
    if shifted:
        out += math.log((n - 1) / 4)
    return out


def theta_integral(p: EnsembleParams, k: int, x: float) -> float:
    """Theta_k(x) from its tau-integral representation."""
    if not _domain(p, x):
        return 0.0
    return math.exp(_log_tau_integral(p.n_dim, p.nu, k, x, False))


def xi_integral(p: EnsembleParams, k: int, x: float) -> float:
    """Xi_k(x) from its tau-integral representation; vanishes for N=1."""
    if not _domain(p, x) or p.n_dim == 1:
        return 0.0
    return math.exp(_log_tau_integral(p.n_dim, p.nu, k, x, True))


def _hyp2f1(a, b, c, z, dps=30):
    """2F1 at z < 0 via the Pfaff transform onto [0, 1)."""
    with mpmath.workdps(dps):
        a, b, c, z = (mpmath.mpf(v) for v in (a, b, c, z))
        if z >= 0:
            return mpmath.hyp2f1(a, b, c, z)
        w = z / (z - 1)
        # either parameter may be transformed; prefer a terminating series
        if mpmath.isint(c - a) and c - a <= 0:
            a, b = b, a
        return (1 - z) ** (-a) * mpmath.hyp2f1(a, c - b, c, w)


def theta_hyp2f1(p: EnsembleParams, k: int, x: float) -> float:
    """Theta_k(x) via its Gauss hypergeometric closed form (cross-check only)."""
    n, nu = p.n_dim, p.nu
    if not _domain(p, x):
        return 0.0
    nn = n * (n + nu)
    lg = log_gamma((nn - nu - 1 - 2 * k) / 2) - log_gamma((nn + n - nu - 2 - 2 * k) / 2)
    f = _hyp2f1((n - 1) / 2, n / 2 + 1, (-2 * k + (n - 1) * (n + nu + 2)) / 2, n - 1 / x)
    lp = lg + (k + (nu - n) / 2) * math.log(x) + (nn - nu + n - 4 - 2 * k) / 2 * math.log1p(-n * x)
    return float(mpmath.exp(lp) * f)


def xi_hyp2f1(p: EnsembleParams, k: int, x: float) -> float:
    """Xi_k(x) via its Gauss hypergeometric closed form (cross-check only)."""
    n, nu = p.n_dim, p.nu
    if not _domain(p, x) or n == 1:
        return 0.0
    nn = n * (n + nu)
    lg = log_gamma((nn - nu - 1 - 2 * k) / 2) - log_gamma((nn + n - nu - 2 * k) / 2)
    f = _hyp2f1((n + 1) / 2, n / 2 + 1, (-2 * k - nu + n * (1 + n + nu)) / 2, n - 1 / x)
    lp = (lg + (k - 1 + (nu - n) / 2) * math.log(x)
          + (-k + (n - 1) * (n + nu + 2) / 2) * math.log1p(-n * x))
    return float((n - 1) / 4 * mpmath.exp(lp) * f)


def ftwl_density_even(p: EnsembleParams, x: float) -> float:
    """General even-nu assembler over f_k Theta_k - g_k Xi_k."""
    _check(p)
    n, nu = p.n_dim, p.nu
    if nu % 2 != 0:
        raise ValueError(f"ftwl_density_even needs even nu, got {nu}")
    if not _domain(p, x):
        return 0.0
    cs = coefficients(n, nu)
    nn = n * (n + nu)
    pre = log_ratio_ft_wl(p) - 0.5 * LOG2 + c_constant_log(n, nu)

    def k_factor(k):
        return (nu + 1 + 2 * k - nn) / 2 * LOG2 - log_gamma((nn - nu - 1 - 2 * k) / 2)

    logs, signs = [], []
    for k, lq, sgn in cs.log_terms("f"):
        logs.append(pre + lq + k_factor(k) + _log_tau_integral(n, nu, k, x, False))
        signs.append(sgn)
    for k, lq, sgn in cs.log_terms("g"):
        logs.append(pre + lq + k_factor(k) + _log_tau_integral(n, nu, k, x, True))
        signs.append(-sgn)
    return signed_log_sum(logs, signs)


def _explicit_nu1(p, x):
    n = p.n_dim
    e = n * (n + 1) / 2
    lp = (math.log(n) + log_ratio_ft_wl(p) - e * LOG2 + (e - 2) * math.log1p(-n * x)
          - log_gamma(e - 1))
    return math.exp(lp)


def _explicit_nu3(p, x):
    n = p.n_dim
    e = n * (n + 3) / 2
    pre = log_ratio_ft_wl(p) + log_gamma(3 + n) - math.log(2 * (n + 1)) - log_gamma(n)
    total = []
    for k in range(n):
        # (1-N)_k (-1)^k = (N-1)!/(N-1-k)! > 0
        poch = log_gamma(n) - log_gamma(n - k)
        total.append(pre + poch - log_gamma(4 + k) - log_gamma(k + 1)
                     + (2 + k - e) * LOG2 - log_gamma(e - 2 - k)
                     + (1 + k) * math.log(x) + (e - 3 - k) * math.log1p(-n * x))
    return signed_log_sum(total, [1] * len(total))


def _explicit_nu0(p, x):
    n = p.n_dim
    lp = (math.log(n) + log_gamma(n) + log_gamma(n * n / 2) - (n - 1) * LOG2
          - log_gamma(n / 2) - log_gamma((n * n + n - 2) / 2)
          - n / 2 * math.log(x) + (n * n + n - 4) / 2 * math.log1p(-n * x))
    f = _hyp2f1((n + 2) / 2, (n - 1) / 2, (n * n + n - 2) / 2, n - 1 / x)
    return float(mpmath.exp(lp) * f)


def _explicit_nu2(p, x):
    # the hypergeometric functions in phi_N, psi_N are the regularized ones,
    # 2F1(a, b; c; z)/Gamma(c)
    n = p.n_dim
    z = n - 1 / x
    r = x / (1 - n * x)
    common = ((3 - n * (n + 2)) / 2 * LOG2 + (1 - n) / 2 * math.log(x)
              + (-3 + 1.5 * n + n * n / 2) * math.log1p(-n * x))
    c_last = n * n / 2 + 1.5 * n - 2
    phi = mpmath.mpf(0)
    for k in range(n):
        w = (k * LOG2 + log_gamma(n + 2) - log_gamma(k + 1) - log_gamma(n - k)
             - log_gamma(k + 3) + k * math.log(r))
        phi += mpmath.exp(w - log_gamma(c_last - k)) * _hyp2f1((n - 1) / 2, 1 + n / 2, c_last - k, z)
    psi = mpmath.mpf(0)
    for k in range(n - 1):
        w = (k * LOG2 + log_gamma(n + 2) - log_gamma(k + 1) - log_gamma(n - 1 - k)
             - log_gamma(k + 4) + k * math.log(r))
        psi += mpmath.exp(w - log_gamma(c_last - k)) * _hyp2f1((n + 1) / 2, 1 + n / 2, c_last - k, z)
    lp = (log_ratio_ft_wl(p) + log_gamma((n + 1) / 2) - 0.5 * math.log(2 * math.pi)
          + 0.5 * math.log(x) + common)
    return float(mpmath.exp(lp) * (phi + psi))


_EXPLICIT = {0: _explicit_nu0, 1: _explicit_nu1, 2: _explicit_nu2, 3: _explicit_nu3}


def ftwl_density_explicit(p: EnsembleParams, x: float) -> float:
    """Closed formulas specialised to nu = 0, 1, 2, 3 (independent of the assemblers)."""
    _check(p)
    if p.nu not in _EXPLICIT:
        raise UnsupportedParameters(f"explicit fixed-trace formulas exist for nu <= 3, got {p.nu}")
    if not _domain(p, x):
        return 0.0
    return _EXPLICIT[p.nu](p, x)


def ftwl_density(p: EnsembleParams, x: float, backend: str = "general") -> float:
    """Fixed-trace density at trace ``p.trace``; backend is "general" or "explicit"."""
    t = p.trace
    if t != 1.0:
        return density_at_t(p.with_kind("FT", 1.0), x, t, backend)
    if x == 0.0:
        return _origin(p)
    if backend == "explicit":
        return ftwl_density_explicit(p, x)
    if backend != "general":
        raise ValueError(f"unknown backend {backend!r}")
    if p.nu % 2:
        return ftwl_density_odd(p, x)
    return ftwl_density_even(p, x)


def _origin(p: EnsembleParams) -> float:
    # x^((nu-1)/2) diverges for nu=0, is constant for nu=1 and vanishes beyond
    _check(p)
    if p.nu == 0:
        return math.inf
    if p.nu >= 2:
        return 0.0
    return _explicit_nu1(p, 0.0)


def rescale_trace(x_at_t1: float, t: float) -> float:
    """Abscissa at trace t matching x_at_t1 at unit trace."""
    if not t > 0:
        raise ValueError(f"trace must be positive, got {t!r}")
    return x_at_t1 * t


def density_at_t(p: EnsembleParams, x: float, t: float, backend: str = "general") -> float:
    """p(x; t) = p(x/t; 1)/t by homogeneity of the fixed-trace jpdf."""
    if not t > 0:
        raise ValueError(f"trace must be positive, got {t!r}")
    unit = p if p.trace == 1.0 else p.with_kind(p.kind, 1.0)
    return ftwl_density(unit, x / t, backend) / t


def _integrate_density(p, a, b, weight_power=0, rtol=None):
    """int_a^b x^weight_power p(x) dx with x = w^2 to soften the origin."""
    rtol = QUAD_RTOL if rtol is None else rtol
    n = p.n_dim

    def g(w):
        x = w * w
        if x <= 0.0 or n * x >= 1.0:
            return 0.0
        return 2.0 * w * x ** weight_power * ftwl_density(p, x)

    wa, wb = math.sqrt(a), math.sqrt(b)
    # the bulk of the mass sits near x ~ 1/(4 N^3); give quad a breakpoint there
    brk = [w for w in (0.5 / n ** 1.5, 2.0 / n ** 1.5) if wa < w < wb]
    val = integrate.quad(g, wa, wb, points=brk or None, epsabs=0.0, epsrel=rtol,
                         limit=400, full_output=1)[0]
    return val


def ftwl_normalization(p: EnsembleParams) -> float:
    """int_0^{1/N} p(x) dx, which must equal one."""
    _check(p)
    return _integrate_density(p.with_kind("FT", 1.0), 0.0, 1.0 / p.n_dim)


def ftwl_cdf(p: EnsembleParams, x: float) -> float:
    """Gap probability q(x) = 1 - int_0^x p, at unit trace."""
    _check(p)
    if x <= 0.0:
        return 1.0
    x = min(x, 1.0 / p.n_dim)
    return 1.0 - _integrate_density(p.with_kind("FT", 1.0), 0.0, x)


def ftwl_cdf_interpolant(p: EnsembleParams, panels: int = 96, order: int = 12) -> Callable:
    """Vectorised CDF F(x) = 1 - q(x) at unit trace, accepting arrays.

    Panels are graded towards the origin, where the density peaks at x ~ 1/(4N^3).
    """
    _check(p)
    unit = p.with_kind("FT", 1.0)
    n = p.n_dim

    def dens(x):
        return ftwl_density(unit, x) if 0.0 < x and n * x < 1.0 else 0.0

    return panel_cdf(dens, 1.0 / math.sqrt(n), 0.5 / n ** 1.5, panels, order)


def ftwl_moment(p: EnsembleParams, ell: int) -> float:
    """<lambda_min^ell> at unit trace; closed Beta-function sum for odd nu."""
    _check(p)
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell == 0:
        return 1.0
    n, nu = p.n_dim, p.nu
    if nu % 2 == 0:
        return ftwl_moment_quadrature(p, ell)
    cs = coefficients(n, nu)
    nn = n * (n + nu)
    pre = log_ratio_ft_wl(p) + (n / 2 - 1) * LOG2 + c_constant_log(n, nu)
    logs, signs = [], []
    for k, lq, sgn in cs.log_terms("h"):
        e = (nn - 2 * k - nu - 1) / 2
        omega = ell + k + (nu + 1) / 2
        # int_0^{1/N} x^(omega-1) (1-Nx)^(e-1) dx = N^-omega B(omega, e)
        logs.append(pre + lq + (2 * k + nu + 1 - nn) / 2 * LOG2 - log_gamma(e)
                    - omega * math.log(n) + log_gamma(omega) + log_gamma(e) - log_gamma(omega + e))
        signs.append(sgn)
    return signed_log_sum(logs, signs)


def ftwl_moment_quadrature(p: EnsembleParams, ell: int) -> float:
    _check(p)
    return _integrate_density(p.with_kind("FT", 1.0), 0.0, 1.0 / p.n_dim, weight_power=ell)


def laplace_relation_check(p: EnsembleParams, x: float, s: float) -> tuple[float, float, float]:
    """Both sides of the Laplace relation between the FT and WL densities.

    lhs = int_0^inf e^(-s t) p_FT(x; t) dt by quadrature;
    rhs = (C/K) (2s)^(1 - MN/2) p_WL(2 s x).

    The transform acts on the density with its constant frozen at t = 1,
    which is t^(MN/2 - 1) times the per-trace normalised :func:`density_at_t`.
    """
    if p.beta != 1:
        raise UnsupportedParameters("Laplace relation check is implemented for beta=1")
    n, m = p.n_dim, p.m_dim
    unit = EnsembleParams(n, m, 1, "FT", 1.0)
    wl = EnsembleParams(n, m, 1, "WL")

    expo = -1 + m * n / 2

    def integrand(t):
        return math.exp(-s * t + expo * math.log(t)) * density_at_t(unit, x, t)

    # support starts at t = N x; the density at t has its peak near t ~ 4 N^3 x
    t0 = n * x
    lhs = integrate.quad(integrand, t0, np.inf, epsabs=0.0, epsrel=1e-12, limit=400,
                         full_output=1)[0]
    rhs = math.exp(log_ratio_ft_wl(unit) - expo * math.log(2 * s)) * wl_density(wl, 2 * s * x)
    return lhs, rhs, abs(lhs - rhs)


def density_curve(p: EnsembleParams, xs, backend: str = "general") -> DensityCurve:
    """Evaluate the fixed-trace density on a grid (zero outside the support)."""
    xs = np.asarray(xs, dtype=float)
    t = p.trace
    vals = [ftwl_density(p, x, backend) if x >= 0 and p.n_dim * x < t else 0.0 for x in xs]
    formula = "explicit" if backend == "explicit" else ("odd-sum" if p.nu % 2 else "theta-xi")
    return DensityCurve(xs, np.asarray(vals), p, backend, formula)
