"""End-to-end consistency checks shared by ``fhankel selfcheck`` and the test suite.

Each check returns a :class:`CheckResult`; nothing here asserts or exits.
"""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field

import mpmath
import numpy as np
from mpmath import mpf

from .asymptotics import I0_log, ff_log, universality_residual
from .contour import I_quadrature, prop1_assemble, scaled_I_log
from .duality import calH_duality, lim_F_log
from .ensembles import SymbolSpec, WeightSpec, z_selberg_log
from .hankel_oracle import calH_oracle
from .mc import mc_expectation
from .numerics import PrecisionContext, barnes_g_log

CTX = PrecisionContext(256)


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: str
    seconds: float = 0.0
    parts: list = field(default_factory=list)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key}. {self.title}: {self.detail} ({self.seconds:.1f}s)"


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _random_mus(rng: random.Random, weight: WeightSpec, m: int) -> tuple:
    lo, hi = (-0.95, 0.95) if weight.is_hermite else (0.05, 0.95)
    while True:
        mus = sorted(round(rng.uniform(lo, hi), 8) for _ in range(m))
        if all(b - a > 0.02 for a, b in zip(mus, mus[1:])):
            return tuple(repr(x) for x in mus)


def _rel(a, b) -> mpf:
    """``|exp(a - b) - 1|`` for log magnitudes."""
    with CTX.workprec():
        return abs(mpmath.expm1(a.log_mag - b.log_mag))


def _ratio_ok(errs, lo=0.3, hi=0.7):
    ratios = [float(errs[i + 1] / errs[i]) for i in range(len(errs) - 1)]
    return ratios, all(lo <= r <= hi for r in ratios)


@_timed
def check_duality_vs_oracle(seed: int = 20240501, budget: float = 60.0) -> CheckResult:
    rng = random.Random(seed)
    worst = mpf(0)
    worst_case = None
    count = 0
    t0 = time.perf_counter()
    for kind, alpha in (("hermite", 0), ("laguerre", 0), ("laguerre", "1.5")):
        for N in range(2, 9):
            for q in ((1,), (2,), (1, 1)):
                for _ in range(3):
                    w = WeightSpec(kind, N, alpha)
                    spec = SymbolSpec(w, q, _random_mus(rng, w, len(q)))
                    a = calH_oracle(spec, CTX)
                    b = calH_duality(spec, CTX)
                    with CTX.workprec():
                        d = abs(a.log_mag - b.log_mag) if a.sign == b.sign == 1 else mpf("inf")
                    count += 1
                    if d > worst or worst_case is None:
                        worst, worst_case = d, spec
    elapsed = time.perf_counter() - t0
    ok = worst < mpf(10) ** -30 and elapsed < budget
    return CheckResult(
        "1",
        "duality vs Hankel oracle",
        ok,
        f"{count} cases, max |log diff| = {mpmath.nstr(worst, 3)} (< 1e-30), {elapsed:.1f}s (< {budget:.0f}s)",
    )


def convergence_errors(spec: SymbolSpec, Ns) -> list:
    out = []
    for N in Ns:
        s = spec.with_N(N)
        out.append(_rel(calH_duality(s, CTX), ff_log(s, CTX).log_value))
    return out


def _convergence_part(label, spec, target_note) -> CheckResult:
    t0 = time.perf_counter()
    Ns = (50, 100, 200, 400)
    errs = convergence_errors(spec, Ns)
    ratios, ratio_ok = _ratio_ok(errs)
    elapsed = time.perf_counter() - t0
    ok = errs[-1] < 0.01 and ratio_ok and elapsed < 10
    detail = (
        f"{target_note}; e(N) = {', '.join(mpmath.nstr(e, 4) for e in errs)}; "
        f"e(2N)/e(N) = {', '.join(f'{r:.3f}' for r in ratios)} (in [0.3, 0.7]); e(400) < 0.01"
    )
    return CheckResult(label, "", ok, detail, elapsed)


@_timed
def check_ff_convergence() -> CheckResult:
    herm = _convergence_part("2a", SymbolSpec(WeightSpec("hermite", 50), (1,), ("0",)), "Hermite q=(1) mu=0 -> 2/pi")
    lag = _convergence_part(
        "2b", SymbolSpec(WeightSpec("laguerre", 50, 0), (1,), ("0.5",)), "Laguerre a=0 q=(1) mu=0.5"
    )
    herm.title = "FF convergence, Hermite"
    lag.title = "FF convergence, Laguerre"
    return CheckResult(
        "2",
        "FF convergence at rate 1/N",
        herm.passed and lag.passed,
        f"Hermite {'pass' if herm.passed else 'fail'}, Laguerre {'pass' if lag.passed else 'fail'}",
        parts=[herm, lag],
    )


@_timed
def check_universality(seed: int = 7, points: int = 20) -> CheckResult:
    rng = random.Random(seed)
    qs = [(1,), (2,), (1, 1), (2, 1), (1, 2)]
    worst = mpf(0)
    for k in range(points):
        kind = "hermite" if k % 2 == 0 else "laguerre"
        alpha = rng.choice([0, "1.5", "0.5", "3"]) if kind == "laguerre" else 0
        w = WeightSpec(kind, rng.randint(2, 200), alpha)
        q = rng.choice(qs)
        r = universality_residual(SymbolSpec(w, q, _random_mus(rng, w, len(q))), CTX)
        worst = max(worst, r)
    return CheckResult(
        "3", "universality identity", worst < mpf(10) ** -25, f"{points} points, max residual {mpmath.nstr(worst, 3)} (< 1e-25)"
    )


def prop1_closure(spec: SymbolSpec):
    res = I_quadrature(spec, ctx=CTX)
    a = prop1_assemble(spec, res, CTX)
    b = calH_duality(spec, CTX)
    return (_rel(a, b) if a.sign == b.sign else mpf("inf")), res


@_timed
def check_prop1_closure() -> CheckResult:
    t0 = time.perf_counter()
    details = []
    ok = True
    for spec in (
        SymbolSpec(WeightSpec("hermite", 20), (1,), ("0.4",)),
        SymbolSpec(WeightSpec("laguerre", 20, 0), (1,), ("0.5",)),
    ):
        err, res = prop1_closure(spec)
        ok &= err < 1e-8
        details.append(f"{spec.weight.kind}: rel {mpmath.nstr(err, 3)} ({res.nodes} nodes, {res.doublings} doublings)")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30
    return CheckResult("4", "contour duality closure", ok, "; ".join(details) + " (< 1e-8)")


def scaled_limit_errors(mu="0.3", Ns=(20, 40, 80)) -> list:
    out = []
    for N in Ns:
        spec = SymbolSpec(WeightSpec("hermite", N), (1,), (mu,))
        res = I_quadrature(spec, ctx=CTX)
        out.append(_rel(scaled_I_log(spec, res, CTX), I0_log(spec, CTX)))
    return out


@_timed
def check_scaled_limit() -> CheckResult:
    errs = scaled_limit_errors()
    ratios, ok = _ratio_ok(errs)
    return CheckResult(
        "5",
        "scaled dual integral -> I0",
        ok,
        f"Hermite q=(1) mu=0.3, N=20,40,80: e = {', '.join(mpmath.nstr(e, 4) for e in errs)}; "
        f"ratios {', '.join(f'{r:.3f}' for r in ratios)} (in [0.3, 0.7])",
    )


def selberg_bruteforce(p: int, nodes: int = 40) -> float:
    """``int Delta_p(x)^2 prod exp(-x_l^2) dx`` by a tensor Gauss-Hermite rule."""
    x, w = np.polynomial.hermite.hermgauss(nodes)
    grids = np.meshgrid(*([x] * p), indexing="ij")
    wts = np.ones_like(grids[0])
    for g in np.meshgrid(*([w] * p), indexing="ij"):
        wts = wts * g
    vdm = np.ones_like(grids[0])
    for a, b in itertools.combinations(range(p), 2):
        vdm = vdm * (grids[b] - grids[a]) ** 2
    return float((wts * vdm).sum())


@_timed
def check_selberg() -> CheckResult:
    z2 = z_selberg_log(2, 1, CTX)
    z3 = z_selberg_log(3, 1, CTX)
    b2 = selberg_bruteforce(2)
    b3 = selberg_bruteforce(3, 24)
    with CTX.workprec():
        e_pi = abs(z2.log_mag - mpmath.log(mpmath.pi))
        e2 = abs(mpmath.exp(z2.log_mag) / b2 - 1)
        e3 = abs(mpmath.exp(z3.log_mag) / b3 - 1)
    ok = e_pi < 1e-60 and e2 < 1e-10 and e3 < 1e-6
    return CheckResult(
        "6",
        "Gaussian Selberg integral",
        ok,
        f"|ln Z2(1) - ln pi| = {mpmath.nstr(e_pi, 3)}; 2D rel {mpmath.nstr(e2, 3)} (< 1e-10); 3D rel {mpmath.nstr(e3, 3)} (< 1e-6)",
    )


@_timed
def check_monte_carlo(samples: int = 100_000, seed: int = 20240501) -> CheckResult:
    t0 = time.perf_counter()
    spec = SymbolSpec(WeightSpec("hermite", 50), (1,), ("0.3",))
    mean, se = mc_expectation(spec, samples, seed)
    ref = float(lim_F_log(spec, CTX).value())
    z = (mean - ref) / se
    elapsed = time.perf_counter() - t0
    ok = abs(z) <= 3 and elapsed < 300
    return CheckResult(
        "7",
        "GUE Monte Carlo vs duality",
        ok,
        f"N=50 q=(1) mu=0.3, {samples} samples: mean {mean:.6e} +- {se:.2e}, reference {ref:.6e}, z = {z:+.2f} (|z| <= 3)",
    )


def glaisher_g_half(ctx: PrecisionContext = CTX) -> mpf:
    """``ln G(1/2)`` from its closed form in terms of Glaisher's constant."""
    with ctx.workprec():
        return mpmath.log(2) / 24 + mpf(1) / 8 - mpmath.log(mpmath.pi) / 4 - 3 * mpmath.log(mpmath.glaisher) / 2


@_timed
def check_special_functions() -> CheckResult:
    worst = mpf(0)
    for z in ("0.5", "1.5", "2.5", "7.3", "0.1", "3.75", "13.2", "31.9"):
        with CTX.workprec():
            zz = mpf(z)
            d = barnes_g_log(zz + 1, CTX).log_mag - barnes_g_log(zz, CTX).log_mag - mpmath.loggamma(zz)
            worst = max(worst, abs(mpmath.expm1(d)))
    asym = barnes_g_log(mpf(3) / 2, CTX).log_mag
    with CTX.workprec():
        via_half = glaisher_g_half() + mpmath.loggamma(mpf(1) / 2)
        e_half = abs(asym - via_half)
        tol = mpf(2) ** -128
    ok = worst < tol and e_half < mpf(10) ** -20
    return CheckResult(
        "8",
        "Barnes G",
        ok,
        f"max |G(z+1)/(Gamma(z)G(z)) - 1| = {mpmath.nstr(worst, 3)} (< 2^-128); "
        f"|ln G(3/2) asymptotic - Glaisher route| = {mpmath.nstr(e_half, 3)} (< 1e-20)",
    )


ALL_CHECKS = (
    check_duality_vs_oracle,
    check_ff_convergence,
    check_universality,
    check_prop1_closure,
    check_scaled_limit,
    check_selberg,
    check_monte_carlo,
    check_special_functions,
)


def run_all(report=print) -> list:
    results = []
    for chk in ALL_CHECKS:
        res = chk()
        results.append(res)
        report(res.line())
        for part in res.parts:
            report("    " + part.line())
    return results
