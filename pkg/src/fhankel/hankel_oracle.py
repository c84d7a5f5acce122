"""Exact finite-N evaluation through the Heine identity.

``H_{M,N,m,q}(mu) = M! det[a_{j+k}]`` where ``a_n`` are the moments of the
weight times the symbol polynomial.  For integer q the symbol is a
polynomial, so every moment is a finite combination of closed-form Gaussian
or Gamma moments and the only error is rounding in the determinant.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .ensembles import SymbolSpec, WeightSpec
from .numerics import (
    ConditioningError,
    LogSigned,
    PrecisionContext,
    _as_ctx,
    det_log,
    with_escalation,
)

# Hankel matrices of these weights lose roughly a constant number of bits per
# row; past this size the escalation budget cannot keep up.
MAX_ORACLE_SIZE = 40


@dataclass(frozen=True)
class MomentTable:
    weight: WeightSpec
    values: tuple
    symbol_applied: bool = False

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class SymbolPoly:
    """Ascending coefficients of ``prod_i (mu_i - x)^{2 q_i}``."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        return mpmath.polyval(list(reversed(self.coeffs)), x)


def symbol_poly(q, mu, ctx: PrecisionContext | None = None) -> SymbolPoly:
    ctx = _as_ctx(ctx)
    spec_like = SymbolSpec(WeightSpec("hermite", 1), q, mu)
    qs = spec_like.int_q()
    with ctx.workprec():
        coeffs = [mpf(1)]
        for qi, m in zip(qs, spec_like.mu_values()):
            for _ in range(2 * qi):
                # multiply by (m - x)
                nxt = [mpf(0)] * (len(coeffs) + 1)
                for k, c in enumerate(coeffs):
                    nxt[k] += m * c
                    nxt[k + 1] -= c
                coeffs = nxt
        return SymbolPoly(tuple(coeffs))


def base_moments(weight: WeightSpec, n_max: int, ctx: PrecisionContext | None = None) -> MomentTable:
    """``int x^n w_N(x) dx`` for n = 0..n_max, in closed form."""
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        N = mpf(weight.N)
        vals = []
        if weight.is_hermite:
            for n in range(n_max + 1):
                if n % 2:
                    vals.append(mpf(0))
                else:
                    s = n // 2
                    vals.append(mpmath.gamma(s + mpf(1) / 2) / (2 * N) ** (s + mpf(1) / 2))
        else:
            a = weight.alpha_mpf()
            for n in range(n_max + 1):
                vals.append(mpmath.gamma(a + n + 1) / (4 * N) ** (a + n + 1))
        return MomentTable(weight, tuple(vals), False)


def symbol_moments(
    base: MomentTable, poly: SymbolPoly, n_max: int | None = None, ctx: PrecisionContext | None = None
) -> MomentTable:
    """Moments of the weight times the symbol: ``a_n = sum_k c_k base_{n+k}``."""
    ctx = _as_ctx(ctx)
    if n_max is None:
        n_max = base.n_max - poly.degree
    if n_max < 0 or n_max + poly.degree > base.n_max:
        raise ValueError(
            f"base moments up to {base.n_max} cannot supply symbol moments up to {n_max} "
            f"for a degree-{poly.degree} symbol"
        )
    with ctx.workprec():
        vals = tuple(
            mpmath.fsum(c * base.values[n + k] for k, c in enumerate(poly.coeffs) if c)
            for n in range(n_max + 1)
        )
    return MomentTable(base.weight, vals, True)


def _hankel_rows(values, M: int):
    return [[values[j + k] for k in range(M)] for j in range(M)]


def hankel_det_log(moments: MomentTable, M: int, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln det[a_{j+k}]_{j,k<M}`` from a given table.

    Elimination is re-run at escalated precision until stable; the table
    itself is not recomputed, so its own rounding is not checked here (see
    :func:`h_multiple_integral_log` for the end-to-end version).
    """
    ctx = _as_ctx(ctx)
    if M < 0:
        raise ValueError("M must be non-negative")
    if moments.n_max < 2 * M - 2:
        raise ValueError(f"need moments up to index {2 * M - 2}, table stops at {moments.n_max}")
    rows = _hankel_rows(moments.values, M)
    return with_escalation(lambda c: det_log(rows, c), ctx, what=f"{M}x{M} Hankel determinant")


def _h_log_at(M: int, spec: SymbolSpec, ctx: PrecisionContext) -> LogSigned:
    poly = symbol_poly(spec.q, spec.mu, ctx)
    base = base_moments(spec.weight, 2 * M - 2 + poly.degree if M else poly.degree, ctx)
    mom = symbol_moments(base, poly, ctx=ctx)
    det = det_log(_hankel_rows(mom.values, M), ctx)
    with ctx.workprec():
        return det * LogSigned(1, mpmath.loggamma(M + 1))


def h_multiple_integral_log(M: int, spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln H_{M,N,m,q}(mu)``: the M-fold integral with the Fisher-Hartwig symbol."""
    ctx = _as_ctx(ctx)
    spec.int_q()
    if M > MAX_ORACLE_SIZE:
        raise ConditioningError(
            f"Hankel oracle refuses M = {M} > {MAX_ORACLE_SIZE}; use the duality route instead"
        )
    if M == 0:
        return LogSigned.one()
    return with_escalation(lambda c: _h_log_at(M, spec, c), ctx, what=f"H_{{{M},N}} moment determinant")


def calH_oracle(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln H_{N,N,m,q}(mu) / H_{N+|q|,N}`` straight from moment determinants."""
    ctx = _as_ctx(ctx)
    qs = spec.int_q()
    N = spec.weight.N
    p = sum(qs)
    num = h_multiple_integral_log(N, spec, ctx)
    den = h_multiple_integral_log(N + p, spec.empty(), ctx)
    with ctx.workprec():
        return num / den

