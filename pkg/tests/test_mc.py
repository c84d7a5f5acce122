import math

import numpy as np
import pytest

from fhankel import DomainError, PrecisionContext, SymbolSpec, WeightSpec, lim_F_log, mc_expectation, sample_gue_spectrum
from fhankel.mc import sample_gue_spectra

SEED = 20240501


def _spec(N, q, mu):
    return SymbolSpec(WeightSpec("hermite", N), q, mu)


def _all(N, count, seed):
    return np.concatenate(list(sample_gue_spectra(N, count, seed)))


def test_single_eigenvalue_variance():
    lam = _all(1, 200_000, SEED)[:, 0]
    # variance 1/4; the sample variance has sd ~ sqrt(2/n) / 4
    assert abs(lam.var() - 0.25) < 4 * 0.25 * math.sqrt(2 / lam.size)


def test_mean_zero():
    lam = _all(10, 100_000, SEED)
    means = lam.mean(axis=1)
    assert abs(means.mean()) < 4 * means.std(ddof=1) / math.sqrt(means.size)


def test_semicircle_histogram():
    lam = _all(100, 400, SEED).ravel()
    edges = np.linspace(-1.1, 1.1, 23)
    counts, _ = np.histogram(lam, edges)
    x = np.clip(edges, -1, 1)
    cdf = (x * np.sqrt(1 - x * x) + np.arcsin(x)) / np.pi + 0.5
    p = np.diff(cdf)
    expected = p * lam.size
    # binomial error bars, widened for eigenvalue repulsion making counts sub-binomial
    # and for the finite-N edge, where the semicircle is only approached
    sd = np.sqrt(lam.size * p * (1 - p)) + 1
    interior = (edges[:-1] > -0.9) & (edges[1:] < 0.9)
    assert np.all(np.abs(counts - expected)[interior] < 4 * sd[interior])
    assert counts[0] + counts[-1] < 0.002 * lam.size


def test_single_spectrum_sorted_and_sized():
    lam = sample_gue_spectrum(7, 3)
    assert lam.shape == (7,) and np.all(np.diff(lam) >= 0)


def test_determinism():
    a = _all(5, 3000, 99)
    b = _all(5, 3000, 99)
    c = _all(5, 3000, 100)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert np.array_equal(sample_gue_spectrum(4, 1), sample_gue_spectrum(4, 1))


def test_invalid_inputs():
    with pytest.raises(DomainError):
        sample_gue_spectrum(0, 1)
    with pytest.raises(DomainError):
        mc_expectation(_spec(3, (1,), (0,)), 0, 1)
    with pytest.raises(DomainError):
        mc_expectation(SymbolSpec(WeightSpec("laguerre", 3), (1,), ("0.5",)), 10, 1)


def test_zero_q_is_exactly_one():
    assert mc_expectation(_spec(6, (0,), ("0.1",)), 50, 1) == (1.0, 0.0)


def test_N1_matches_quarter():
    mean, se = mc_expectation(_spec(1, (1,), (0,)), 1_000_000, SEED)
    assert abs(mean - 0.25) <= 3 * se


def test_log_space_survives_large_products():
    # sample values near 1e-150 or below, whose squares leave the double range
    mean, se = mc_expectation(_spec(100, (5,), ("0.9",)), 2000, SEED)
    assert 0 < mean < 1e-100 and 0 < se < mean


@pytest.mark.slow
@pytest.mark.parametrize("N", [10, 50])
@pytest.mark.parametrize("q", [1, 2])
@pytest.mark.parametrize("mu", ["0", "0.3"])
def test_agrees_with_duality(N, q, mu):
    spec = _spec(N, (q,), (mu,))
    mean, se = mc_expectation(spec, 100_000, SEED)
    ref = float(lim_F_log(spec, PrecisionContext(128)).value())
    assert abs(mean - ref) <= 3 * se, (mean, se, ref)
