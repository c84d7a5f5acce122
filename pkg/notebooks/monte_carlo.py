"""GUE sampling against the exact characteristic-polynomial moment.

Run: python3 notebooks/monte_carlo.py   (about a minute)
"""
import numpy as np

from fhankel import PrecisionContext, SymbolSpec, WeightSpec, lim_F_log, mc_expectation
from fhankel.mc import sample_gue_spectra

lam = np.concatenate(list(sample_gue_spectra(100, 200, seed=1))).ravel()
hist, edges = np.histogram(lam, bins=10, range=(-1, 1), density=True)
mid = (edges[1:] + edges[:-1]) / 2
for x, h in zip(mid, hist):
    print(f"x={x:+.1f}  empirical {h:.3f}  semicircle {2 / np.pi * np.sqrt(1 - x * x):.3f}")

ctx = PrecisionContext(128)
for N, q, mu in ((10, 1, "0"), (10, 2, "0.3"), (30, 1, "0.3")):
    spec = SymbolSpec(WeightSpec("hermite", N), (q,), (mu,))
    mean, se = mc_expectation(spec, 50_000, seed=20240501)
    ref = float(lim_F_log(spec, ctx).value())
    print(f"N={N} q={q} mu={mu}: {mean:.5e} +- {se:.1e}  exact {ref:.5e}  z={(mean - ref) / se:+.2f}")
