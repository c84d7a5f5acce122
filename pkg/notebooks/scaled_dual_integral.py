"""The dual contour integral, rescaled, against its leading saddle coefficient.

Run: python3 notebooks/scaled_dual_integral.py
"""
import mpmath

from fhankel import PrecisionContext, SymbolSpec, WeightSpec, I0_log, I_quadrature, saddle_data, scaled_I_log

ctx = PrecisionContext(128)
mu = "0.3"
w = WeightSpec("hermite", 1)
with ctx.workprec():
    sd = saddle_data(w, mu, ctx)
    print("saddle:", mpmath.nstr(sd.z_plus, 10), " a =", mpmath.nstr(sd.a, 10), " theta =", mpmath.nstr(sd.theta, 10))

I0 = I0_log(SymbolSpec(w, (1,), (mu,)), ctx)
for N in (20, 30, 40, 50, 60, 70, 80, 120, 160, 320):
    spec = SymbolSpec(w.with_N(N), (1,), (mu,))
    s = scaled_I_log(spec, I_quadrature(spec, ctx=ctx), ctx)
    with ctx.workprec():
        e = abs(mpmath.expm1(s.log_mag - I0.log_mag))
        # Im S advances with N, so the sub-leading term rotates in phase
        print(f"N={N:4d}  e={mpmath.nstr(e, 5):>11}  N*e={float(N * e):.4f}")
