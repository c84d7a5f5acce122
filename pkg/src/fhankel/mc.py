"""Monte Carlo estimates of characteristic-polynomial moments over the GUE.

The matrix density is proportional to ``exp(-2N tr X^2)``, matching the
Hermite weight ``exp(-2N x^2)``; its eigenvalues fill [-1, 1] with the
semicircle profile as N grows.
"""
from __future__ import annotations

import numpy as np

from .ensembles import SymbolSpec
from .numerics import DomainError

__all__ = ["sample_gue_spectrum", "sample_gue_spectra", "mc_expectation"]

_BATCH = 2000


def _gue_batch(rng: np.random.Generator, N: int, count: int) -> np.ndarray:
    diag = rng.normal(0.0, np.sqrt(1.0 / (4 * N)), size=(count, N))
    off_sd = np.sqrt(1.0 / (8 * N))
    re = rng.normal(0.0, off_sd, size=(count, N, N))
    im = rng.normal(0.0, off_sd, size=(count, N, N))
    upper = np.triu(re + 1j * im, k=1)
    X = upper + np.conj(np.swapaxes(upper, -1, -2))
    idx = np.arange(N)
    X[:, idx, idx] = diag
    return np.linalg.eigvalsh(X)


def sample_gue_spectrum(N: int, seed: int) -> np.ndarray:
    """Eigenvalues (ascending) of one GUE matrix with density ``~ exp(-2N tr X^2)``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    return _gue_batch(np.random.default_rng(seed), N, 1)[0]


def sample_gue_spectra(N: int, count: int, seed: int, batch: int = _BATCH):
    """Yield arrays of spectra, ``batch`` at a time, from independent substreams of ``seed``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    n_batches = -(-count // batch)
    streams = np.random.SeedSequence(seed).spawn(n_batches)
    left = count
    for ss in streams:
        k = min(batch, left)
        yield _gue_batch(np.random.default_rng(ss), N, k)
        left -= k


def mc_expectation(spec: SymbolSpec, samples: int, seed: int) -> tuple:
    """Sample mean and standard error of ``prod_i prod_l |mu_i - lambda_l|^{2 q_i}``.

    Each sample is formed as a log, the batch is shifted by the largest log
    before exponentiating, and the shift is undone in the final moments, so
    large N or q cannot overflow.
    """
    if not spec.weight.is_hermite:
        raise DomainError("Monte Carlo sampling is only implemented for the Hermite weight")
    if samples < 1:
        raise DomainError("need at least one sample")
    spec = spec.active()
    if spec.m == 0:
        return 1.0, 0.0
    qs = np.array([float(x) for x in spec.q_values()])
    mus = np.array([float(x) for x in spec.mu_values()])
    logs = []
    for lam in sample_gue_spectra(spec.weight.N, samples, seed):
        d = np.abs(mus[None, :, None] - lam[:, None, :])
        with np.errstate(divide="ignore"):
            logs.append((2 * qs[None, :] * np.log(d).sum(axis=2)).sum(axis=1))
    L = np.concatenate(logs)
    shift = L.max()
    v = np.exp(L - shift)
    mean = v.mean()
    std = v.std(ddof=1) if samples > 1 else 0.0
    scale = np.exp(shift)
    return float(mean * scale), float(std / np.sqrt(samples) * scale)
