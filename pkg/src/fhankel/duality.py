"""Exact evaluation of the Hankel ratio through the confluent duality determinant.

For ``q`` in N^m the N-fold integral collapses onto a ``2|q| x 2|q|``
determinant of derivatives of the degree ``N .. N+2|q|-1`` orthogonal
polynomials, so the cost is linear in N (the recurrence) and the
determinant size does not grow with N.
"""
from __future__ import annotations

import mpmath
from mpmath import mpc, mpf

from .ensembles import SymbolSpec, selberg_ratio_log, zeta_log
from .numerics import (
    LogSigned,
    PrecisionContext,
    _as_ctx,
    barnes_g_log,
    det_log,
    with_escalation,
)


def _fixed(x, P: int) -> int:
    return int(mpmath.nint(mpf(x) * mpf(2) ** P))


def _poly_taylor_range(weight, x, first: int, count: int, k_max: int) -> list:
    """Taylor coefficients at x of pi_first .. pi_{first+count-1} from one recurrence pass.

    The recurrence runs on Python integers sharing one binary exponent (block
    floating point with ``prec + 32`` bits), which is several times cheaper
    than mpf arithmetic for the long runs needed at large N.  The generic mpf
    version is :func:`fhankel.numerics.orthopoly_eval_derivs`.
    """
    P = mpmath.mp.prec + 32
    N = weight.N
    X = _fixed(x, P)
    if weight.is_hermite:
        def coeffs(k):
            return 0, (k << P) // (4 * N)
    else:
        a = weight.alpha_mpf()
        A0 = _fixed(a / (4 * N), P)
        B0 = _fixed(a / (16 * N * N), P)

        def coeffs(k):
            return ((2 * k + 1) << P) // (4 * N) + A0, ((k * k) << P) // (16 * N * N) + k * B0

    prev = [0] * (k_max + 1)
    cur = [1 << P] + [0] * k_max
    E = -P  # true value = integer * 2^E
    out = []
    for k in range(first + count):
        if k >= first:
            out.append([mpf((v, E)) for v in cur])
        A, B = coeffs(k)
        XA = X - A
        nxt = [(XA * cur[s] - B * prev[s]) >> P for s in range(k_max + 1)]
        for s in range(1, k_max + 1):
            nxt[s] += cur[s - 1]
        if k % 8:
            # magnitudes move by a few bits per step; renormalise every 8 steps
            prev, cur = cur, nxt
            continue
        top = max(abs(v) for v in nxt).bit_length()
        shift = top - (P + 8)
        if shift > 0:
            nxt = [v >> shift for v in nxt]
            cur = [v >> shift for v in cur]
            E += shift
        elif shift < -16 and top:
            nxt = [v << -shift for v in nxt]
            cur = [v << -shift for v in cur]
            E += shift
        prev, cur = cur, nxt
    return out


def _exp_quadratic_taylor(c1, c2, k_max: int) -> list:
    """Taylor coefficients of exp(c1 t + c2 t^2) at t = 0."""
    f = [mpf(1)] + [mpf(0)] * k_max
    for n in range(k_max):
        f[n + 1] = (c1 * f[n] + (2 * c2 * f[n - 1] if n >= 1 else 0)) / (n + 1)
    return f


def _r_columns(weight, x, K: int, n_cols: int) -> list:
    """``n_cols`` columns ``d^l r_{N+j-1}(x)``, l = 0..n_cols-1, each of length K."""
    N = weight.N
    k_max = n_cols - 1
    polys = _poly_taylor_range(weight, x, N, K, k_max)
    if weight.is_hermite:
        # r = exp(-2N x^2) pi, and exp(-2N (x+t)^2) = exp(-2N x^2) exp(-4N x t - 2N t^2)
        g = _exp_quadratic_taylor(-4 * N * x, mpf(-2 * N), k_max)
        scale = mpmath.exp(-2 * N * x * x)
        g = [scale * c for c in g]
        polys = [[mpmath.fsum(g[s] * p[l - s] for s in range(l + 1)) for l in range(k_max + 1)] for p in polys]
    fact = [mpmath.factorial(l) for l in range(k_max + 1)]
    return [[p[l] * fact[l] for p in polys] for l in range(k_max + 1)]


def r_deriv_matrix(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> list:
    """Row j (0-based), column (block i, offset l): ``d^l/dmu^l r_{N+j}(mu_i)``.

    Blocks with ``q_i = 0`` are dropped.  The result is a list of rows.
    """
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    K = 2 * sum(qs)
    with ctx.workprec():
        cols = []
        for qi, x in zip(qs, spec.mu_values()):
            cols.extend(_r_columns(spec.weight, x, K, 2 * qi))
        return [[cols[c][j] for c in range(K)] for j in range(K)]


def _lim_F_prefactor_log(spec: SymbolSpec, ctx: PrecisionContext) -> mpf:
    qs = spec.int_q()
    mus = spec.mu_values()
    val = mpf(0)
    for j in range(len(qs)):
        for k in range(j + 1, len(qs)):
            val -= 4 * qs[j] * qs[k] * mpmath.log(abs(mus[k] - mus[j]))
    for qi, x in zip(qs, mus):
        val += 2 * qi * zeta_log(spec.weight, x, ctx).log_mag - barnes_g_log(2 * qi + 1, ctx).log_mag
    return val


def lim_F_log(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln <prod_i |det(mu_i - X)|^{2 q_i}>`` over the N x N ensemble, via the confluent limit."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    spec.int_q()
    if spec.m == 0:
        return LogSigned.one()
    spec.check_distinct()

    def compute(c: PrecisionContext) -> LogSigned:
        rows = r_deriv_matrix(spec, c)
        det = det_log(rows, c)
        with c.workprec():
            return det * LogSigned(1, _lim_F_prefactor_log(spec, c))

    return with_escalation(compute, ctx, what="confluent duality determinant")


def calH_duality(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln H_{N,N,m,q}(mu) / H_{N+|q|,N}`` for integer q, any N."""
    ctx = _as_ctx(ctx)
    p = sum(spec.int_q())
    sel = selberg_ratio_log(spec.weight, spec.weight.N, p, ctx)
    lf = lim_F_log(spec, ctx)
    with ctx.workprec():
        return sel * lf


def _log_g_ratio(b, a, ctx: PrecisionContext) -> mpf:
    """``ln G(b) / G(a)`` for ``b - a`` an integer, as a sum of log-Gammas."""
    d = int(mpmath.nint(mpf(b) - mpf(a)))
    if d >= 0:
        return mpmath.fsum(mpmath.loggamma(mpf(a) + k) for k in range(d))
    return -mpmath.fsum(mpmath.loggamma(mpf(b) + k) for k in range(-d))


def h_prefactor_log(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln |h_{N,m,q}|`` with sign, from the closed Barnes-G form.

    The Hermite form is positive; the Laguerre form carries ``(-1)^{|q|}``.
    """
    ctx = _as_ctx(ctx)
    qs = spec.int_q()
    p = sum(qs)
    s2 = sum(2 * qi * qi for qi in qs)
    N = spec.weight.N
    with ctx.workprec():
        ln2, lnpi, lnN = mpmath.log(2), mpmath.log(mpmath.pi), mpmath.log(N)
        if spec.weight.is_hermite:
            val = (
                (-p * p - mpf(3 * p) / 2 + s2) * ln2
                - mpf(3 * p) / 2 * lnpi
                + (s2 + mpf(p * p) / 2 + p * N) * lnN
                + _log_g_ratio(N + 2, N + p + 2, ctx)
            )
            return LogSigned(1, val)
        a = spec.weight.alpha_mpf()
        val = (
            (-2 * p + s2) * ln2
            - 2 * p * lnpi
            + ((a - p) * p + s2) * lnN
            + _log_g_ratio(N + 2, N + 1, ctx)
            + _log_g_ratio(N + a + 1, N + a + p + 1, ctx)
            + _log_g_ratio(N + 2 * p + 1, N + p + 2, ctx)
        )
        return LogSigned((-1) ** p, val)


def h_prefactor_definition(spec: SymbolSpec, ctx: PrecisionContext | None = None):
    """``h_{N,m,q}`` assembled factor by factor from the contour constants.

    Returns ``(magnitude, phase)`` where magnitude is a LogSigned with sign +1
    and ``phase`` is the unit complex number carried by the ``c_j`` (which
    contain ``1/i``) and the ``d_l = (-2N)^{l-1}``.
    """
    ctx = _as_ctx(ctx)
    qs = spec.int_q()
    p = sum(qs)
    N = spec.weight.N
    sel = selberg_ratio_log(spec.weight, spec.weight.N, p, ctx)
    with ctx.workprec():
        log_mag = sel.log_mag
        phase = mpc(1)
        a = spec.weight.alpha_mpf()
        for j in range(1, 2 * p + 1):
            if spec.weight.is_hermite:
                log_mag += (mpmath.log(2 * N) - mpmath.log(mpmath.pi)) / 2 - (N + j) * mpmath.log(2)
                phase *= mpc(0, -1)
            else:
                n = N + j - 1
                log_mag += mpmath.loggamma(n + 1) - n * mpmath.log(N) - (2 * N + j + a) * mpmath.log(2) - mpmath.log(mpmath.pi)
                phase *= (-1) ** n * mpc(0, -1)
        for qi in qs:
            for l in range(1, 2 * qi + 1):
                log_mag += (l - 1) * mpmath.log(2 * N)
                phase *= (-1) ** (l - 1)
        return LogSigned(1, log_mag), phase


def h0_log(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """Leading constant of ``h_{N,m,q} ~ N^{sum(2q^2 - q)} h0``."""
    ctx = _as_ctx(ctx)
    qs = spec.int_q()
    p = sum(qs)
    N = spec.weight.N
    with ctx.workprec():
        ln2, lnpi = mpmath.log(2), mpmath.log(mpmath.pi)
        val = mpmath.fsum((2 * qi * qi - 2 * qi) * ln2 - 2 * qi * lnpi for qi in qs)
        if spec.weight.is_hermite:
            return LogSigned(1, val + p * N - p * p * ln2)
        return LogSigned((-1) ** p, val)

