"""Hard-edge (microscopic) limits of the smallest-eigenvalue distribution.

Everything is a function of the Wishart-scale variable y = 4 N x (WL) or
y = 4 N^3 x (fixed trace); the Dirac picture uses s = sqrt(y).  Q is the gap
probability and P = -Q' its density.

beta = 2 uses Bessel determinants for all nu; beta = 1 uses Bessel Pfaffians
for odd nu and closed forms for nu = 0, 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .bessel import bessel_ie
from .ensemble import EnsembleParams, UnsupportedParameters
from .pfaffian import pfaffian, skew_matrix

__all__ = [
    "MicroDist",
    "micro_q",
    "micro_p",
    "dirac_map",
    "pfaffian_sign",
    "pf_constant",
    "kappa",
    "kappa_beta2_nu0",
    "special_q_m1",
    "special_q_beta2_nu2",
    "convergence_probe",
    "SMALL_Y",
]

# below this y the Pfaffian forms are replaced by their limits at y = 0
SMALL_Y = 1e-12


def _check(beta: int, nu: int):
    if beta not in (1, 2):
        raise UnsupportedParameters(f"microscopic limits exist here for beta in {{1, 2}}, got {beta}")
    if int(nu) != nu or nu < 0:
        raise ValueError(f"nu must be a non-negative integer, got {nu!r}")
    if beta == 1 and nu % 2 == 0 and nu > 2:
        raise UnsupportedParameters(
            f"no closed microscopic formula for beta=1 and even nu={nu}: only nu in {{0, 2}} "
            "are known; whether a closed form exists for all even nu is an open question")


def _half_grid(m: int) -> list[Fraction]:
    return [Fraction(2 * i - 2 * m + 1, 2) for i in range(2 * m)]


def pfaffian_sign(m: int) -> int:
    """Global sign that makes the ascending-index Pfaffians positive.

    With j < k every upper entry (j - k) I_{...} is negative, so the matrix is
    -B with B entrywise positive above the diagonal, and Pf(-B) = (-1)^m Pf(B).
    """
    return -1 if m % 2 else 1


def pf_constant(m: int) -> float:
    """C_m = sqrt(pi) (2m+1)!! / (16 Gamma(m + 3/2))."""
    dfact = math.prod(range(2 * m + 1, 0, -2))
    return math.sqrt(math.pi) * dfact / (16 * math.gamma(m + 1.5))


def _log_bessel_pf(m: int, shift: int, s: float) -> tuple[float, int]:
    """(ln|Pf|, sign) with the positive-ordering sign; entries are e^s-scaled."""
    grid = _half_grid(m)
    a = skew_matrix(lambda j, k: float(j - k) * bessel_ie(int(shift + j + k), s), grid)
    pf = pfaffian_sign(m) * pfaffian(a)
    if pf == 0.0:
        return -math.inf, 0
    # Pf is homogeneous of degree m in the entries
    return m * s + math.log(abs(pf)), 1 if pf > 0 else -1


def _log_det_i(nu: int, shift: int, s: float) -> tuple[float, int]:
    if nu == 0:
        return 0.0, 1
    a = np.array([[bessel_ie(i - j + shift, s) for j in range(nu)] for i in range(nu)])
    sign, logdet = np.linalg.slogdet(a)
    return nu * s + float(logdet), int(sign)


def _signed_exp(log_abs: float, sign: int) -> float:
    return 0.0 if sign == 0 else sign * math.exp(log_abs)


def _q_beta1_nu2(y: float) -> float:
    # no closed form; integrate the density in t = w^2
    if y == 0.0:
        return 1.0
    val = integrate.quad(lambda w: 2 * w * _p_beta1_nu2(w * w), math.sqrt(y), np.inf,
                         epsabs=1e-15, epsrel=1e-13, limit=200)[0]
    return val


def _p_beta1_nu2(y: float) -> float:
    if y == 0.0:
        return 0.0
    s = math.sqrt(y)
    return ((1 + 2 / s) * bessel_ie(2, s) + bessel_ie(3, s)) * math.exp(-y / 8 + s / 2) / 8


def micro_q(beta: int, nu: int, y: float) -> float:
    """Gap probability Q_nu^(beta)(y) in the Wishart scaling."""
    _check(beta, nu)
    if not y >= 0:
        raise ValueError(f"y must be >= 0, got {y!r}")
    if y == 0.0:
        return 1.0
    s = math.sqrt(y)
    if beta == 2:
        la, sg = _log_det_i(nu, 0, s)
        return _signed_exp(la - y / 4, sg)
    if nu == 0:
        return math.exp(-y / 8 - s / 2)
    if nu == 2:
        return _q_beta1_nu2(y)
    m = (nu - 1) // 2
    if m == 0:
        return math.exp(-y / 8)
    if y < SMALL_Y:
        return 1.0
    la, sg = _log_bessel_pf(m, 1, s)
    return _signed_exp(m * math.log(2) - m / 2 * math.log(y) - y / 8 + la, sg)


def micro_p(beta: int, nu: int, y: float) -> float:
    """Density P_nu^(beta)(y) = -dQ/dy in the Wishart scaling."""
    _check(beta, nu)
    if not y >= 0:
        raise ValueError(f"y must be >= 0, got {y!r}")
    s = math.sqrt(y)
    if beta == 2:
        la, sg = _log_det_i(nu, 2, s)
        return _signed_exp(la - y / 4, sg) / 4
    if nu == 0:
        return math.inf if y == 0.0 else (1 + 2 / s) * math.exp(-y / 8 - s / 2) / 8
    if nu == 2:
        return _p_beta1_nu2(y)
    m = (nu - 1) // 2
    if m == 0:
        return math.exp(-y / 8) / 8
    if y < SMALL_Y:
        # the Pfaffian vanishes like y^(3m/2)
        return 0.0
    la, sg = _log_bessel_pf(m, 3, s)
    return _signed_exp(math.log(pf_constant(m)) - m / 2 * math.log(y) - y / 8 + la, sg)


@dataclass(frozen=True)
class MicroDist:
    """Microscopic distribution in the Wishart (``"y"``) or Dirac (``"s"``) picture."""

    beta: int
    nu: int
    picture: str = "y"

    def __post_init__(self):
        _check(self.beta, self.nu)
        if self.picture not in ("y", "s"):
            raise ValueError(f"picture must be 'y' or 's', got {self.picture!r}")

    def q(self, v: float) -> float:
        return micro_q(self.beta, self.nu, v if self.picture == "y" else v * v)

    def p(self, v: float) -> float:
        if self.picture == "y":
            return micro_p(self.beta, self.nu, v)
        if v == 0.0:
            # 2 s P(s^2) stays finite for nu = 0 where P ~ y^(-1/2)
            return 0.5 if (self.beta, self.nu) == (1, 0) else 0.0
        return 2 * v * micro_p(self.beta, self.nu, v * v)


def dirac_map(dist: MicroDist) -> MicroDist:
    """s = sqrt(y): density 2 s P(s^2), gap probability Q(s^2)."""
    return MicroDist(dist.beta, dist.nu, "s")


def _s_max(f, start: float = 1.0) -> float:
    # walk out until the integrand is below 1e-18 of the largest value seen
    grid = np.linspace(0.0, start, 9)[1:]
    peak = max(f(s) for s in grid)
    s = start
    while True:
        s *= 1.25
        v = f(s)
        peak = max(peak, v)
        if v < 1e-18 * peak:
            return s


def kappa(ell: int, nu: int, beta: int) -> float:
    """kappa = int_0^inf s^(2 ell) P_Dirac(s) ds."""
    if int(ell) != ell or ell < 1:
        raise ValueError(f"ell must be a positive integer, got {ell!r}")
    d = MicroDist(beta, nu, "s")

    def f(s):
        return s ** (2 * ell) * d.p(s)

    top = _s_max(f)
    pts = list(np.linspace(0.0, top, 9)[1:-1])
    return integrate.quad(f, 0.0, top, points=pts, epsabs=0.0, epsrel=1e-12, limit=400)[0]


def kappa_beta2_nu0(ell: int) -> float:
    """Closed form 4^ell Gamma(1 + ell) for beta = 2, nu = 0, where P = e^(-y/4)/4."""
    return 4.0 ** ell * math.gamma(1 + ell)


def special_q_m1(beta: int, y: float) -> float:
    """Q for m = 1, i.e. nu = 4/beta - 1, as a single Bessel function."""
    e = 2 / beta
    s = math.sqrt(y)
    return (2 ** (e - 1) * math.gamma(e) * math.exp(s - beta * y / 8) * y ** (0.5 - 1 / beta)
            * bessel_ie(int(e - 1), s))


def special_q_beta2_nu2(y: float) -> float:
    s = math.sqrt(y)
    return math.exp(2 * s - y / 4) * (bessel_ie(0, s) ** 2 - bessel_ie(1, s) ** 2)


def convergence_probe(nu: int, n_list, y_grid, beta: int = 1, routes=("FT", "WL")) -> list[dict]:
    """Sup-norm gap between scaled finite-N densities and the microscopic P.

    FT route: (1/4N^3) p_FT(y/4N^3); WL route: (1/4N) p_WL(y/4N).
    """
    from .edelman import wl_density
    from .ftwl import ftwl_density

    if beta != 1 or nu not in (0, 2):
        raise UnsupportedParameters("the convergence probe covers beta=1 and nu in {0, 2}")
    y_grid = np.asarray(y_grid, dtype=float)
    target = np.array([micro_p(1, nu, y) for y in y_grid])
    rows = []
    for n in n_list:
        row = {"N": int(n), "nu": nu, "max_P": float(target.max())}
        if "FT" in routes:
            p = EnsembleParams.from_nu(n, nu, 1, "FT")
            sc = 4.0 * n ** 3
            vals = np.array([ftwl_density(p, y / sc) / sc for y in y_grid])
            row["gap_FT"] = float(np.max(np.abs(vals - target)))
        if "WL" in routes:
            p = EnsembleParams.from_nu(n, nu, 1, "WL")
            sc = 4.0 * n
            vals = np.array([wl_density(p, y / sc) / sc for y in y_grid])
            row["gap_WL"] = float(np.max(np.abs(vals - target)))
        rows.append(row)
    return rows
