"""Exact ratio against the leading large-N formula.

The Hermite case at mu = 0 shows a clean 1/N error.  Away from the centre,
and for the Laguerre weight, the 1/N coefficient oscillates with N, so the
error ratio over a single doubling can leave [0.3, 0.7] even though
N * e(N) stays bounded.

Run: python3 notebooks/ff_convergence.py
"""
import mpmath

from fhankel import PrecisionContext, SymbolSpec, WeightSpec, calH_duality, ff_log

ctx = PrecisionContext(128)


def rel_error(spec):
    with ctx.workprec():
        return abs(mpmath.expm1(calH_duality(spec, ctx).log_mag - ff_log(spec, ctx).log_value.log_mag))


for label, base in (
    ("Hermite q=1 mu=0", SymbolSpec(WeightSpec("hermite", 1), (1,), ("0",))),
    ("Laguerre a=0 q=1 mu=0.5", SymbolSpec(WeightSpec("laguerre", 1, 0), (1,), ("0.5",))),
):
    print(label)
    prev = None
    for N in (50, 100, 200, 400, 800):
        e = rel_error(base.with_N(N))
        ratio = "" if prev is None else f"  ratio {float(e / prev):.3f}"
        print(f"  N={N:4d}  e={mpmath.nstr(e, 5):>12}  N*e={float(N * e):.4f}{ratio}")
        prev = e
    # dense grid: N * e(N) oscillates instead of settling
    ne = [float(N * rel_error(base.with_N(N))) for N in range(100, 121)]
    print("  N*e(N), N = 100..120:", " ".join(f"{x:.3f}" for x in ne))
