"""Large-N asymptotics of the Hankel ratio.

Two independent assemblies are provided.  :func:`ff_log` evaluates the
closed universal formula (valid for real ``q > -1/2``).  :func:`calH_via_I0_log`
goes through the leading saddle coefficient ``I0`` of the dual integral and
the leading constant of the prefactor ``h``; it only makes sense for integer
``q``.  The two must coincide, and :func:`universality_residual` measures the
identity that makes them coincide.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mpf

from .duality import h0_log
from .ensembles import (
    HERMITE,
    SymbolSpec,
    WeightSpec,
    _to_mpf,
    rho,
    saddle_data,
    weight_eval_log,
    z_selberg_log,
    zeta_log,
)
from .numerics import DomainError, LogSigned, PrecisionContext, _as_ctx, barnes_g_log, log_binomial

__all__ = [
    "FFResult",
    "ff_log",
    "I0_log",
    "calH_via_I0_log",
    "universality_residual",
    "boson_rho1_leading",
]


@dataclass(frozen=True)
class FFResult:
    """Leading-order ``ln H`` with its N-independent factors listed separately.

    ``per_factor_logs`` maps ``omega``, ``G``, ``vandermonde`` and ``rho`` to
    their natural-log contributions; ``log_value`` is their sum plus
    ``n_exponent * ln N``.
    """

    log_value: LogSigned
    n_exponent: mpf
    per_factor_logs: dict
    N: int

    def check_breakdown(self) -> mpf:
        """Absolute difference between ``log_value`` and the reassembled breakdown."""
        total = mpmath.fsum(self.per_factor_logs.values()) + self.n_exponent * mpmath.log(self.N)
        return abs(total - self.log_value.log_mag)


def _check_asymptotic_spec(spec: SymbolSpec):
    for qi in spec.q_values():
        if not qi > mpf(-1) / 2:
            raise DomainError(f"asymptotic formula needs every q > -1/2, got {qi}")
    spec.check_distinct()
    spec.check_interior()


def _log_vandermonde(mus, qs, power) -> mpf:
    """``power * sum_{j<k} q_j q_k ln|mu_k - mu_j|``."""
    total = mpf(0)
    for j in range(len(mus)):
        for k in range(j + 1, len(mus)):
            total += power * qs[j] * qs[k] * mpmath.log(abs(mus[k] - mus[j]))
    return total


def ff_log(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> FFResult:
    """Leading large-N form of ``ln H_{N,m,q}(mu)``, without the ``1 + O(1/N)``."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    _check_asymptotic_spec(spec)
    w = spec.weight
    with ctx.workprec():
        qs, mus = spec.q_values(), spec.mu_values()
        ln2pi = mpmath.log(2 * mpmath.pi)
        omega = -mpmath.fsum(q * weight_eval_log(w, x, ctx).log_mag for q, x in zip(qs, mus))
        g = mpmath.fsum(
            2 * barnes_g_log(q + 1, ctx).log_mag - barnes_g_log(2 * q + 1, ctx).log_mag + (q * q - q) * ln2pi
            for q in qs
        )
        vdm = _log_vandermonde(mus, qs, -2)
        rh = mpmath.fsum(q * q * mpmath.log(rho(w, x, ctx)) for q, x in zip(qs, mus))
        n_exp = mpmath.fsum(q * q - q for q in qs)
        parts = {"omega": omega, "G": g, "vandermonde": vdm, "rho": rh}
        total = mpmath.fsum(parts.values()) + n_exp * mpmath.log(w.N)
        return FFResult(LogSigned(1, total), n_exp, parts, w.N)


def _G_q0_log(spec: SymbolSpec, ctx) -> LogSigned:
    if spec.weight.is_hermite:
        return LogSigned.one()
    qs, mus = spec.int_q(), spec.mu_values()
    a = spec.weight.alpha_mpf()
    val = mpmath.fsum((2 * q * q - a * q) * mpmath.log(x) for q, x in zip(qs, mus))
    return LogSigned((-1) ** sum(qs), val)


def _H_q0_log(spec: SymbolSpec, ctx) -> LogSigned:
    qs, mus = spec.int_q(), spec.mu_values()
    val = _log_vandermonde(mus, qs, 2)
    if spec.weight.is_hermite:
        p = sum(qs)
        val += (p * p - sum(q * q for q in qs)) * mpmath.log(2)
    return LogSigned(1, val)


def _D_q0_log(spec: SymbolSpec, ctx) -> LogSigned:
    qs, mus = spec.int_q(), spec.mu_values()
    val = mpmath.fsum(2 * q * q * (mpmath.log(mpmath.pi) + mpmath.log(rho(spec.weight, x, ctx))) for q, x in zip(qs, mus))
    return LogSigned((-1) ** sum(qs), val)


def I0_log(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """Leading coefficient of the dual integral: ``I ~ N^{-sum q^2} prod e^{-2 q N Re S} I0``."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    _check_asymptotic_spec(spec)
    with ctx.workprec():
        out = LogSigned.one()
        for q, x in zip(qs, spec.mu_values()):
            sd = saddle_data(spec.weight, x, ctx)
            z = z_selberg_log(q, sd.a, ctx)
            out = out * LogSigned((-1) ** q, log_binomial(2 * q, q)) * z * z
        return out * _G_q0_log(spec, ctx) * _D_q0_log(spec, ctx) * _H_q0_log(spec, ctx)


def calH_via_I0_log(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> LogSigned:
    """Leading ``ln H`` assembled from ``h0`` and ``I0`` instead of the closed formula."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    _check_asymptotic_spec(spec)
    w = spec.weight
    i0 = I0_log(spec, ctx)
    h0 = h0_log(spec, ctx)
    with ctx.workprec():
        mus = spec.mu_values()
        val = mpmath.fsum(q * q - q for q in qs) * mpmath.log(w.N)
        for q, x in zip(qs, mus):
            sd = saddle_data(w, x, ctx)
            val += 2 * q * zeta_log(w, x, ctx).log_mag - 2 * q * w.N * sd.re_S
            val -= barnes_g_log(2 * q + 1, ctx).log_mag + mpmath.loggamma(2 * q + 1)
        val += _log_vandermonde(mus, qs, -4)
        return h0 * i0 * LogSigned(1, val)


def universality_residual(spec: SymbolSpec, ctx: PrecisionContext | None = None) -> mpf:
    """Absolute log-scale defect of the identity that turns the saddle assembly into the universal one."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    if not qs:
        return mpf(0)
    _check_asymptotic_spec(spec)
    w = spec.weight
    with ctx.workprec():
        mus = spec.mu_values()
        ln2, lnpi = mpmath.log(2), mpmath.log(mpmath.pi)
        lhs = mpf(0)
        for q, x in zip(qs, mus):
            sd = saddle_data(w, x, ctx)
            lhs += -2 * q * w.N * sd.re_S + 2 * q * zeta_log(w, x, ctx).log_mag - q * q * mpmath.log(sd.a)
        rest = _G_q0_log(spec, ctx) * _H_q0_log(spec, ctx) * h0_log(spec, ctx)
        if rest.sign != 1:
            return mpf("inf")
        lhs += rest.log_mag
        rhs = mpf(0)
        for q, x in zip(qs, mus):
            rhs += (
                -q * weight_eval_log(w, x, ctx).log_mag
                - q * q * mpmath.log(rho(w, x, ctx))
                + (2 * q * q - 2 * q) * ln2
                - (q * q + 2 * q) * lnpi
            )
        rhs += _log_vandermonde(mus, qs, 2)
        return abs(lhs - rhs)


def boson_rho1_leading(N: int, x, y, ctx: PrecisionContext | None = None) -> LogSigned:
    """Leading ``ln rho^(1)_{N+1}(x, y)`` for N+1 impenetrable bosons in a harmonic trap.

    The trap weight ``exp(-2N x^2)`` enters once through the wavefunction and
    once (inverted) through the asymptotic formula with ``q = (1/2, 1/2)``, so
    it cancels and the N-dependence is ``(N + 1) / sqrt(N)``.  Half-integer q
    lies outside the range where the formula is proved.
    """
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        half = mpf(1) / 2
        w = WeightSpec(HERMITE, N)
        if _to_mpf(x) == _to_mpf(y):
            raise DomainError("one-body density matrix asymptotics are singular on the diagonal x = y")
        ff = ff_log(SymbolSpec(w, (half, half), (x, y)), ctx)
        trap = half * (weight_eval_log(w, x, ctx).log_mag + weight_eval_log(w, y, ctx).log_mag)
        return LogSigned(1, mpmath.log(N + 1) + trap + ff.log_value.log_mag)
