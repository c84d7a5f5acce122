"""Hermite and Laguerre weights and the data attached to them.

Weights are ``exp(-2N x^2)`` on the real line and ``x^alpha exp(-4N x)`` on
the positive half-line.  Both are scaled so that the eigenvalue density of
the corresponding unitary ensemble converges to a fixed profile ``rho`` on
[-1, 1] resp. [0, 1].
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mpc, mpf

from .numerics import (
    DomainError,
    LogSigned,
    PrecisionContext,
    _as_ctx,
    barnes_g_log,
)

HERMITE = "hermite"
LAGUERRE = "laguerre"


def _to_mpf(x) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


@dataclass(frozen=True)
class WeightSpec:
    kind: str
    N: int
    alpha: object = 0

    def __post_init__(self):
        kind = str(self.kind).lower()
        if kind not in (HERMITE, LAGUERRE):
            raise DomainError(f"unknown weight kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if kind == LAGUERRE and not _to_mpf(self.alpha) > -1:
            raise DomainError(f"Laguerre weight needs alpha > -1, got {self.alpha!r}")

    @property
    def is_hermite(self) -> bool:
        return self.kind == HERMITE

    def alpha_mpf(self) -> mpf:
        return _to_mpf(self.alpha) if self.kind == LAGUERRE else mpf(0)

    def with_N(self, N: int) -> "WeightSpec":
        return WeightSpec(self.kind, N, self.alpha)

    @property
    def support(self) -> tuple:
        return (-1, 1) if self.is_hermite else (0, 1)


@dataclass(frozen=True)
class SymbolSpec:
    """Fisher-Hartwig data ``prod_i |mu_i - x|^{2 q_i}`` on top of a weight.

    ``q`` and ``mu`` are stored as given (ints, strings, floats, Fractions or
    mpf) and converted at the precision of whichever routine consumes them.
    """

    weight: WeightSpec
    q: tuple
    mu: tuple

    def __post_init__(self):
        object.__setattr__(self, "q", tuple(self.q))
        object.__setattr__(self, "mu", tuple(self.mu))
        if len(self.q) != len(self.mu):
            raise DomainError("q and mu must have the same length")

    @property
    def m(self) -> int:
        return len(self.q)

    def q_values(self) -> list:
        return [_to_mpf(x) for x in self.q]

    def mu_values(self) -> list:
        return [_to_mpf(x) for x in self.mu]

    def is_integer_q(self) -> bool:
        return all(mpmath.isint(x) and x >= 0 for x in self.q_values())

    def int_q(self) -> list:
        """``q`` as Python ints; raises if some entry is not a natural number."""
        if not self.is_integer_q():
            raise DomainError(f"exact evaluation needs q in N^m, got {self.q!r}")
        return [int(x) for x in self.q_values()]

    @property
    def q_total(self):
        """``|q|``; an int for integer q."""
        if self.is_integer_q():
            return sum(self.int_q())
        return mpmath.fsum(self.q_values())

    def active(self) -> "SymbolSpec":
        """Drop the factors with ``q_i = 0``."""
        keep = [i for i, x in enumerate(self.q_values()) if x != 0]
        return SymbolSpec(self.weight, [self.q[i] for i in keep], [self.mu[i] for i in keep])

    def with_N(self, N: int) -> "SymbolSpec":
        return SymbolSpec(self.weight.with_N(N), self.q, self.mu)

    def empty(self) -> "SymbolSpec":
        return SymbolSpec(self.weight, (), ())

    def check_distinct(self):
        mus = self.mu_values()
        for a in range(len(mus)):
            for b in range(a + 1, len(mus)):
                if mus[a] == mus[b]:
                    raise DomainError(
                        f"coincident singularities mu[{a}] = mu[{b}] = {mus[a]}; merge them by adding their q"
                    )

    def check_interior(self):
        lo, hi = self.weight.support
        for x in self.mu_values():
            if not lo < x < hi:
                raise DomainError(f"mu = {x} is not in the interior of supp rho = [{lo}, {hi}]")


@dataclass(frozen=True)
class SaddleData:
    z_plus: mpc
    S_plus: mpc
    re_S: mpf
    im_S: mpf
    a: mpf
    theta: mpf


def recurrence_coeffs(weight: WeightSpec):
    """Monic three-term recurrence coefficients ``(alpha_k, beta_k)`` as callables.

    Hermite ``exp(-2N x^2)``: alpha_k = 0, beta_k = k / (4N).
    Laguerre ``x^a exp(-4N x)``: alpha_k = (2k + a + 1) / (4N), beta_k = k (k + a) / (4N)^2.
    """
    N = mpf(weight.N)
    if weight.is_hermite:
        return (lambda k: mpf(0)), (lambda k: k / (4 * N))
    a = weight.alpha_mpf()
    return (lambda k: (2 * k + a + 1) / (4 * N)), (lambda k: k * (k + a) / (4 * N) ** 2)


def rho(weight: WeightSpec, mu, ctx: PrecisionContext | None = None) -> mpf:
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        x = _to_mpf(mu)
        lo, hi = weight.support
        if not lo <= x <= hi:
            raise DomainError(f"mu = {x} lies outside supp rho = [{lo}, {hi}]")
        if weight.is_hermite:
            return 2 / mpmath.pi * mpmath.sqrt(1 - x * x)
        if x == 0:
            return mpf("inf")
        return 2 / mpmath.pi * mpmath.sqrt(1 / x - 1)


def weight_eval_log(weight: WeightSpec, x, ctx: PrecisionContext | None = None) -> LogSigned:
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        x = _to_mpf(x)
        if weight.is_hermite:
            return LogSigned(1, -2 * weight.N * x * x)
        if not x > 0:
            raise DomainError(f"Laguerre weight is only defined for x > 0, got {x}")
        return LogSigned(1, weight.alpha_mpf() * mpmath.log(x) - 4 * weight.N * x)


def zeta_log(weight: WeightSpec, mu, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln zeta_N(mu)``: the factor pulled out of ``pi_n`` to define ``r_n``."""
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        if weight.is_hermite:
            x = _to_mpf(mu)
            return LogSigned(1, 2 * weight.N * x * x)
        return LogSigned(1, mpf(0))


def action_S(kind: str, z, mu, ctx: PrecisionContext | None = None) -> mpc:
    """Principal-branch action ``S(z, mu)`` whose saddles control the dual integral."""
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        z = mpc(z)
        x = _to_mpf(mu)
        if z == 0:
            raise DomainError("action is singular at z = 0")
        if str(kind).lower() == HERMITE:
            return 2 * x * z - mpmath.log(z) - z * z / 2
        if z == -2:
            raise DomainError("Laguerre action is singular at z = -2")
        return 2 * x * z + mpmath.log(z) - mpmath.log(z + 2)


def saddle_data(weight: WeightSpec, mu, ctx: PrecisionContext | None = None) -> SaddleData:
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        x = _to_mpf(mu)
        lo, hi = weight.support
        if not lo < x < hi:
            raise DomainError(f"saddle data needs mu in the open interval ({lo}, {hi}), got {x}")
        r = rho(weight, x, ctx)
        if weight.is_hermite:
            z = mpc(x, mpmath.sqrt(1 - x * x))
            theta = (mpmath.pi - mpmath.asin(x)) / 2
            a = mpmath.pi / 2 * r
        else:
            z = mpc(-1, mpmath.sqrt(1 / x - 1))
            theta = mpmath.pi / 4
            a = mpmath.pi * x * x * r
        S = action_S(weight.kind, z, x, ctx)
        return SaddleData(z_plus=z, S_plus=S, re_S=S.real, im_S=S.imag, a=a, theta=theta)


def opnorm_h_log(weight: WeightSpec, k: int, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln h_k`` with ``h_k`` the squared L2 norm of the monic degree-k polynomial."""
    ctx = _as_ctx(ctx)
    if k < 0:
        raise ValueError("k must be non-negative")
    with ctx.workprec():
        N = mpf(weight.N)
        if weight.is_hermite:
            # sqrt(pi) k! / (2^k (2N)^(k + 1/2))
            val = mpmath.log(mpmath.pi) / 2 + mpmath.loggamma(k + 1) - k * mpmath.log(2) - (k + mpf(1) / 2) * mpmath.log(2 * N)
        else:
            a = weight.alpha_mpf()
            val = mpmath.loggamma(k + 1) + mpmath.loggamma(k + a + 1) - (2 * k + a + 1) * mpmath.log(4 * N)
        return LogSigned(1, val)


def selberg_ratio_log(weight: WeightSpec, N: int, p: int, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln(H_{N,n} / H_{N+p,n})`` with ``H_{M,n} = M! prod_{k<M} h_k`` and n = weight.N.

    The Hankel ratio uses ``N = weight.N``; other sizes are allowed.
    """
    ctx = _as_ctx(ctx)
    if p < 0:
        raise ValueError("p must be non-negative")
    if N < 0:
        raise ValueError("N must be non-negative")
    with ctx.workprec():
        val = mpmath.loggamma(N + 1) - mpmath.loggamma(N + p + 1)
        val -= mpmath.fsum(opnorm_h_log(weight, k, ctx).log_mag for k in range(N, N + p))
        return LogSigned(1, val)


def z_selberg_log(p: int, a, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln Z_p(a)`` where ``Z_p(a) = int_{R^p} Delta_p(x)^2 prod exp(-a x_l^2) dx``."""
    ctx = _as_ctx(ctx)
    if p < 0:
        raise ValueError("p must be non-negative")
    with ctx.workprec():
        a = _to_mpf(a)
        if not a > 0:
            raise DomainError("Z_p(a) needs a > 0")
        if p == 0:
            return LogSigned(1, mpf(0))
        val = (
            mpf(p) / 2 * (mpmath.log(mpmath.pi) - (p - 1) * mpmath.log(2))
            + barnes_g_log(p + 2, ctx).log_mag
            - mpf(p * p) / 2 * mpmath.log(a)
        )
        return LogSigned(1, val)
