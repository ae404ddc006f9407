"""Monte Carlo sampling of smallest eigenvalues of Wishart matrices W = X^dagger X.

Samples are produced in fixed-size chunks.  Chunk i draws from its own
stream seeded by (seed, i), so a batch depends only on (params, seed, n) and
not on how many worker processes produced it.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .ensemble import EnsembleParams

__all__ = [
    "SampleBatch",
    "rng_for_chunk",
    "gaussian_matrix",
    "gaussian_batch",
    "smallest_eig",
    "jacobi_eigvals",
    "sample_min",
    "ks_distance",
    "CHUNK",
]

CHUNK = 4096
JACOBI_TOL = 1e-12
MAX_SWEEPS = 60


@dataclass
class SampleBatch:
    """Draws of lambda_min (WL) or mu_1 = t lambda_min / sum(lambda) (FT).

    ``lam_min`` and ``lam_sum`` keep the raw eigenvalue data of every draw.
    """

    params: EnsembleParams
    seed: int
    values: np.ndarray
    lam_min: np.ndarray = field(repr=False)
    lam_sum: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.values)


def rng_for_chunk(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(chunk)])))


def gaussian_batch(p: EnsembleParams, rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` data matrices of shape (M, N).

    Real entries are N(0, 1); complex entries have N(0, 1/2) real and imaginary
    parts, so the eigenvalue weight of W is exp(-(beta/2) sum lambda).
    """
    shape = (count, p.m_dim, p.n_dim)
    if p.beta == 1:
        return rng.standard_normal(shape)
    if p.beta == 2:
        re = rng.standard_normal(shape)
        im = rng.standard_normal(shape)
        return (re + 1j * im) * math.sqrt(0.5)
    raise ValueError(f"beta must be 1 or 2, got {p.beta}")


def gaussian_matrix(p: EnsembleParams, rng: np.random.Generator) -> np.ndarray:
    return gaussian_batch(p, rng, 1)[0]


def _real_form(w: np.ndarray) -> np.ndarray:
    """Real symmetric stack; a Hermitian A + iB becomes [[A, -B], [B, A]]."""
    if not np.iscomplexobj(w):
        return np.array(w, dtype=float)
    a, b = w.real, w.imag
    top = np.concatenate([a, -b], axis=-1)
    bottom = np.concatenate([b, a], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def jacobi_eigvals(w: np.ndarray, tol: float = JACOBI_TOL) -> np.ndarray:
    """Eigenvalues of a stack of real symmetric matrices by cyclic Jacobi sweeps.

    Every rotation is applied to the whole stack at once; sweeps continue
    until each off-diagonal Frobenius norm is below tol times the matrix norm.
    A Hermitian stack returns each eigenvalue twice (real embedding).
    """
    a = _real_form(w)
    if a.ndim == 2:
        a = a[None]
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("jacobi_eigvals needs square matrices")
    n = a.shape[1]
    norm = np.sqrt((a * a).sum(axis=(1, 2)))
    offmask = ~np.eye(n, dtype=bool)
    for _ in range(MAX_SWEEPS):
        off = np.sqrt((a[:, offmask] ** 2).sum(axis=1))
        if np.all(off <= tol * norm):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                nz = apq != 0.0
                if not nz.any():
                    continue
                theta = np.where(nz, (a[:, q, q] - a[:, p, p]) / (2.0 * np.where(nz, apq, 1.0)), 0.0)
                t = np.where(nz, np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0)
                t = np.where(nz & (theta == 0.0), 1.0, t)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                c3, s3 = c[:, None], s[:, None]
                cp, cq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = c3 * cp - s3 * cq
                a[:, :, q] = s3 * cp + c3 * cq
                rp, rq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = c3 * rp - s3 * rq
                a[:, q, :] = s3 * rp + c3 * rq
    else:
        raise ArithmeticError("Jacobi sweeps did not converge")
    return np.diagonal(a, axis1=1, axis2=2).copy()


def smallest_eig(w) -> float:
    """Smallest eigenvalue of a symmetric or Hermitian matrix (cyclic Jacobi)."""
    w = np.asarray(w)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError(f"smallest_eig needs a square matrix, got shape {w.shape}")
    ev = jacobi_eigvals(w)[0]
    out = float(ev.min())
    scale = float(np.abs(ev).max()) or 1.0
    if -1e-10 * scale <= out < 0.0:
        out = 0.0
    return out


def _chunk_values(p: EnsembleParams, seed: int, chunk: int, count: int):
    x = gaussian_batch(p, rng_for_chunk(seed, chunk), count)
    w = np.conj(np.swapaxes(x, 1, 2)) @ x
    # exact symmetrization before the real embedding
    w = 0.5 * (w + np.conj(np.swapaxes(w, 1, 2)))
    ev = jacobi_eigvals(w)
    lam_min = np.maximum(ev.min(axis=1), 0.0)
    lam_sum = ev.sum(axis=1) / (2 if p.beta == 2 else 1)
    return lam_min, lam_sum


def sample_min(p: EnsembleParams, n_samples: int, seed: int, workers: int | None = 1,
               chunk: int = CHUNK) -> SampleBatch:
    """n_samples smallest eigenvalues; FT kind rescales each to trace p.trace."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    sizes = [min(chunk, n_samples - i) for i in range(0, n_samples, chunk)]
    jobs = [(p, seed, i, s) for i, s in enumerate(sizes)]
    workers = workers or os.cpu_count() or 1
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            parts = list(pool.map(_chunk_values, *zip(*jobs)))
    else:
        parts = [_chunk_values(*job) for job in jobs]
    lam_min = np.concatenate([a for a, _ in parts])
    lam_sum = np.concatenate([b for _, b in parts])
    if p.kind == "FT":
        values = p.trace * lam_min / lam_sum
    else:
        values = lam_min.copy()
    return SampleBatch(p, int(seed), values, lam_min, lam_sum)


def ks_distance(batch, analytic_cdf) -> float:
    """sup |F_emp - F| over the sorted sample, F evaluated at every draw."""
    values = batch.values if isinstance(batch, SampleBatch) else np.asarray(batch, dtype=float)
    if len(values) == 0:
        raise ValueError("empty batch")
    x = np.sort(values)
    try:
        f = np.asarray(analytic_cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([analytic_cdf(v) for v in x], dtype=float)
    n = len(x)
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(upper.max(), lower.max()))
