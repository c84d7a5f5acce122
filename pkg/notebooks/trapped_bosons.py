"""Leading one-body density matrix of impenetrable bosons in a harmonic trap.

Uses the asymptotic formula at q = (1/2, 1/2), where it is conjectural.

Run: python3 notebooks/trapped_bosons.py
"""
import mpmath

from fhankel import PrecisionContext, boson_rho1_leading

ctx = PrecisionContext(96)
for N in (50, 100, 200, 400):
    v = boson_rho1_leading(N, "0.2", "-0.2", ctx)
    with ctx.workprec():
        print(f"N={N:4d}  rho1(0.2, -0.2) = {mpmath.nstr(v.value(), 12)}  "
              f"/ ((N+1)/sqrt(N)) = {mpmath.nstr(v.value() * mpmath.sqrt(N) / (N + 1), 12)}")

print("profile at N = 100, x = 0:")
for y in ("0.05", "0.1", "0.2", "0.4", "0.8"):
    v = boson_rho1_leading(100, "0", y, ctx)
    with ctx.workprec():
        print(f"  y={y:>4}  {mpmath.nstr(v.value(), 10)}")
