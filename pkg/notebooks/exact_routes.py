"""Three exact evaluations of the same Hankel ratio, side by side.

Run: python3 notebooks/exact_routes.py
"""
import mpmath

from fhankel import (
    PrecisionContext,
    SymbolSpec,
    WeightSpec,
    I_quadrature,
    calH_duality,
    calH_oracle,
    prop1_assemble,
)

ctx = PrecisionContext(256)

for spec in (
    SymbolSpec(WeightSpec("hermite", 12), (1, 1), ("-0.3", "0.5")),
    SymbolSpec(WeightSpec("laguerre", 12, "1.5"), (2,), ("0.4",)),
):
    print(spec.weight.kind, "N =", spec.weight.N, "q =", spec.q, "mu =", spec.mu)
    oracle = calH_oracle(spec, ctx)
    dual = calH_duality(spec, ctx)
    res = I_quadrature(spec, ctx=ctx)
    contour = prop1_assemble(spec, res, ctx)
    with ctx.workprec():
        print("  moment determinant :", mpmath.nstr(oracle.log_mag, 30))
        print("  confluent duality  :", mpmath.nstr(dual.log_mag, 30))
        print("  contour quadrature :", mpmath.nstr(contour.log_mag, 30), f"({res.nodes} nodes)")
        print("  |oracle - duality| :", mpmath.nstr(abs(oracle.log_mag - dual.log_mag), 3))

# the duality route stays cheap when the moment route is long out of reach
big = SymbolSpec(WeightSpec("hermite", 5000), (2, 1), ("0.1", "0.7"))
print("N = 5000:", mpmath.nstr(calH_duality(big, ctx).log_mag, 25))
