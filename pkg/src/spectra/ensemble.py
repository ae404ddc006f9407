"""Ensemble parameters, normalization constants and exact rational helpers.

Every Gamma-product constant is returned as a natural logarithm; the
arguments reach N(N+nu)/2 and overflow double precision long before the
constants themselves become unrepresentable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "EnsembleParams",
    "Rational",
    "RationalPoly",
    "UnsupportedParameters",
    "log_gamma",
    "log_norm_wl",
    "log_norm_ft",
    "log_ratio_ft_wl",
    "rational_ops",
]

Rational = Fraction


class UnsupportedParameters(ValueError):
    """Raised for parameter combinations without an implemented formula."""


@dataclass(frozen=True)
class EnsembleParams:
    """Wishart-Laguerre ensemble of N x N matrices built from M x N data.

    ``kind`` is ``"WL"`` for the unconstrained ensemble and ``"FT"`` for the
    fixed-trace one; ``trace`` is only used by the latter.
    """

    n_dim: int
    m_dim: int
    beta: int = 1
    kind: str = "WL"
    trace: float = 1.0

    def __post_init__(self):
        if int(self.n_dim) != self.n_dim or self.n_dim < 1:
            raise ValueError(f"n_dim must be a positive integer, got {self.n_dim!r}")
        if int(self.m_dim) != self.m_dim or self.m_dim < self.n_dim:
            raise ValueError(f"m_dim must be an integer >= n_dim, got {self.m_dim!r}")
        if self.beta not in (1, 2):
            raise ValueError(f"beta must be 1 or 2, got {self.beta!r}")
        kind = str(self.kind).upper()
        if kind not in ("WL", "FT"):
            raise ValueError(f"kind must be 'WL' or 'FT', got {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if not self.trace > 0:
            raise ValueError(f"trace must be positive, got {self.trace!r}")

    @classmethod
    def from_nu(cls, n_dim: int, nu: int, beta: int = 1, kind: str = "WL", trace: float = 1.0):
        if nu < 0:
            raise ValueError(f"nu must be non-negative, got {nu!r}")
        return cls(n_dim, n_dim + nu, beta, kind, trace)

    @property
    def nu(self) -> int:
        return self.m_dim - self.n_dim

    @property
    def m_index(self) -> Fraction:
        """Size m = (beta/2)(nu+1) - 1 of the matrix argument in the hard-edge limit."""
        return Fraction(self.beta, 2) * (self.nu + 1) - 1

    @property
    def m_is_integer(self) -> bool:
        return self.m_index.denominator == 1

    def with_kind(self, kind: str, trace: float | None = None) -> "EnsembleParams":
        return EnsembleParams(self.n_dim, self.m_dim, self.beta, kind,
                              self.trace if trace is None else trace)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"log_gamma requires x > 0, got {x!r}")
    return math.lgamma(x)


def log_norm_wl(p: EnsembleParams) -> float:
    """ln K_{N,M}: normalization of the unconstrained eigenvalue jpdf."""
    b = p.beta / 2
    n, m = p.n_dim, p.m_dim
    out = b * n * m * math.log(b)
    for j in range(1, n + 1):
        out += log_gamma(1 + b) - log_gamma(1 + b * j) - log_gamma(b * (m - n + j))
    return out


def log_norm_ft(p: EnsembleParams) -> float:
    """ln C_{N,M}: normalization of the fixed-trace jpdf at unit trace."""
    b = p.beta / 2
    n, m = p.n_dim, p.m_dim
    out = log_gamma(m * n * b) + n * log_gamma(1 + b)
    for j in range(n):
        out -= log_gamma((m - j) * b) + log_gamma(1 + (n - j) * b)
    return out


def log_ratio_ft_wl(p: EnsembleParams) -> float:
    """ln(C/K), the constant that links the two ensembles under Laplace transform."""
    return log_norm_ft(p) - log_norm_wl(p)


def rational_ops(a, b, op: str = "add") -> Fraction:
    """Exact arithmetic on two rationals; ``op`` is one of add, sub, mul, div, cmp."""
    a, b = Fraction(a), Fraction(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b == 0:
            raise ZeroDivisionError("division by the zero rational")
        return a / b
    if op == "cmp":
        return Fraction((a > b) - (a < b))
    raise ValueError(f"unknown rational op {op!r}")


class RationalPoly:
    """Polynomial with exact rational coefficients, lowest power first."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Iterable = ()):
        c = [Fraction(v) for v in coefficients]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    @classmethod
    def constant(cls, value) -> "RationalPoly":
        return cls([value])

    @classmethod
    def monomial(cls, power: int, value=1) -> "RationalPoly":
        return cls([0] * power + [value])

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self):
        return len(self._c)

    def __getitem__(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, RationalPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self == RationalPoly.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    def __repr__(self):
        return f"RationalPoly({[str(v) for v in self._c]})"

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self._c), len(other._c))
        return RationalPoly(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return RationalPoly(-v for v in self._c)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def compose_negate(self) -> "RationalPoly":
        """Coefficients of p(-x)."""
        return RationalPoly(v if k % 2 == 0 else -v for k, v in enumerate(self._c))

    def __call__(self, x: float) -> float:
        out = 0.0
        for v in reversed(self._c):
            out = out * x + float(v)
        return out

    def exact(self, x) -> Fraction:
        x = Fraction(x)
        out = Fraction(0)
        for v in reversed(self._c):
            out = out * x + v
        return out


def _as_poly(v) -> RationalPoly:
    return v if isinstance(v, RationalPoly) else RationalPoly.constant(v)


def log_abs_fraction(q: Fraction) -> float:
    """ln|q| for an arbitrarily large exact rational."""
    if q == 0:
        return -math.inf
    return math.log(abs(q.numerator)) - math.log(q.denominator)


def signed_log_sum(log_terms: Sequence[float], signs: Sequence[int]) -> float:
    """sum_k sign_k * exp(log_k), scaled by the largest term before summation."""
    finite = [lt for lt in log_terms if lt != -math.inf]
    if not finite:
        return 0.0
    top = max(finite)
    total = math.fsum(s * math.exp(lt - top) for lt, s in zip(log_terms, signs)
                      if lt != -math.inf)
    if total == 0.0:
        return 0.0
    return math.copysign(math.exp(top + math.log(abs(total))), total)
