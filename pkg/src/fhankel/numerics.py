"""Arbitrary-precision building blocks.

Everything here runs on top of :mod:`mpmath`.  Working precision is carried
explicitly by a :class:`PrecisionContext`; functions enter it with
``ctx.workprec()`` so callers never have to touch ``mpmath.mp`` directly.

Huge or tiny positive quantities (Hankel determinants, Selberg ratios, ...)
are passed around as :class:`LogSigned` values, i.e. a sign plus a natural
log magnitude.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
from mpmath import mp, mpf

__all__ = [
    "FHankelError",
    "DomainError",
    "ConditioningError",
    "QuadratureError",
    "PrecisionContext",
    "LogSigned",
    "DerivStream",
    "log_gamma",
    "barnes_g_log",
    "log_factorial",
    "log_binomial",
    "det_log",
    "with_escalation",
    "orthopoly_eval_derivs",
]


class FHankelError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(FHankelError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConditioningError(FHankelError, ArithmeticError):
    """Precision escalation was exhausted without two runs agreeing."""


class QuadratureError(FHankelError, ArithmeticError):
    """A quadrature failed to stabilise under node refinement."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in bits plus the escalation policy.

    A determinant or cancellation-prone sum is evaluated at ``bits`` and at
    ``escalation_factor * bits``; the pair is accepted when the results agree
    to ``2**(-bits/4)``, otherwise the precision is multiplied again, at most
    ``max_rounds`` times.
    """

    bits: int = 256
    escalation_factor: int = 2
    max_rounds: int = 3

    def __post_init__(self):
        if int(self.bits) != self.bits or self.bits < 64:
            raise ValueError(f"bits must be an integer >= 64, got {self.bits!r}")
        if int(self.escalation_factor) != self.escalation_factor or self.escalation_factor < 2:
            raise ValueError("escalation_factor must be an integer >= 2")

    def workprec(self):
        return mp.workprec(self.bits)

    def escalated(self, rounds: int = 1) -> "PrecisionContext":
        return PrecisionContext(
            self.bits * self.escalation_factor**rounds, self.escalation_factor, self.max_rounds
        )

    def with_extra_bits(self, extra: int) -> "PrecisionContext":
        return PrecisionContext(self.bits + max(0, int(extra)), self.escalation_factor, self.max_rounds)

    @property
    def eps(self) -> mpf:
        return mpf(2) ** (-self.bits)


def _as_ctx(ctx: PrecisionContext | None) -> PrecisionContext:
    return PrecisionContext() if ctx is None else ctx


@dataclass(frozen=True)
class LogSigned:
    """A real number stored as ``sign * exp(log_mag)``.

    ``sign`` is -1, 0 or +1; ``log_mag`` is ignored (conventionally ``-inf``)
    when ``sign == 0``.  Arithmetic happens at the ambient mpmath precision,
    so wrap it in ``ctx.workprec()`` when the operands carry more bits.
    """

    sign: int
    log_mag: mpf = field(default_factory=lambda: mpf("-inf"))

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign!r}")

    @classmethod
    def from_value(cls, x) -> "LogSigned":
        x = mpf(x)
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, mpmath.log(abs(x)))

    @classmethod
    def from_log(cls, log_mag, sign: int = 1) -> "LogSigned":
        return cls(sign, mpf(log_mag))

    @classmethod
    def one(cls) -> "LogSigned":
        return cls(1, mpf(0))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "LogSigned") -> "LogSigned":
        if not isinstance(other, LogSigned):
            return NotImplemented
        if self.sign == 0 or other.sign == 0:
            return LogSigned(0)
        return LogSigned(self.sign * other.sign, self.log_mag + other.log_mag)

    def __truediv__(self, other: "LogSigned") -> "LogSigned":
        if not isinstance(other, LogSigned):
            return NotImplemented
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogSigned")
        if self.sign == 0:
            return LogSigned(0)
        return LogSigned(self.sign * other.sign, self.log_mag - other.log_mag)

    def __pow__(self, k: int) -> "LogSigned":
        k = int(k)
        if self.sign == 0:
            if k <= 0:
                raise ZeroDivisionError("non-positive power of zero")
            return LogSigned(0)
        return LogSigned(self.sign**k if k >= 0 else self.sign ** (-k), self.log_mag * k)

    def __neg__(self) -> "LogSigned":
        return LogSigned(-self.sign, self.log_mag)

    def value(self) -> mpf:
        if self.sign == 0:
            return mpf(0)
        return self.sign * mpmath.exp(self.log_mag)

    def __float__(self) -> float:
        return float(self.value())

    def log10_mag(self) -> mpf:
        return self.log_mag / mpmath.log(10)

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogSigned(0)"
        return f"LogSigned({self.sign:+d}, {mpmath.nstr(self.log_mag, 20)})"


@dataclass(frozen=True)
class DerivStream:
    """``values[k]`` is the k-th derivative of some function at a point."""

    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("a derivative stream needs at least the value itself")

    @property
    def k_max(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)

    def taylor(self) -> list:
        """Taylor coefficients ``f^(k)/k!``."""
        return [v / mpmath.factorial(k) for k, v in enumerate(self.values)]


# ---------------------------------------------------------------------------
# Gamma and Barnes G
# ---------------------------------------------------------------------------


def log_gamma(x, ctx: PrecisionContext | None = None) -> mpf:
    """``ln Gamma(x)`` for real ``x > 0``."""
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        x = mpf(x)
        if not x > 0:
            raise DomainError(f"log_gamma needs x > 0, got {x}")
        return mpmath.loggamma(x)


def log_factorial(n: int, ctx: PrecisionContext | None = None) -> mpf:
    return log_gamma(int(n) + 1, ctx)


def log_binomial(n: int, k: int, ctx: PrecisionContext | None = None) -> mpf:
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        return mpmath.log(mpmath.binomial(int(n), int(k)))


def _is_integer(x) -> bool:
    return mpmath.isint(mpf(x))


def _barnes_g_asymptotic(z, bits: int) -> mpf:
    """``ln G(z + 1)`` from the large-z expansion; accurate when z >~ 0.12*bits."""
    z = mpf(z)
    lz = mpmath.log(z)
    s = (
        z * z / 2 * lz
        - mpf(3) / 4 * z * z
        + z / 2 * mpmath.log(2 * mpmath.pi)
        - lz / 12
        + mpmath.zeta(-1, derivative=1)
    )
    tol = mpf(2) ** (-bits - 10)
    z2 = z * z
    zpow = z2
    k = 1
    while True:
        term = mpmath.bernoulli(2 * k + 2) / (4 * k * (k + 1) * zpow)
        s += term
        if abs(term) < tol * max(1, abs(s)):
            break
        k += 1
        zpow *= z2
        if k > 4 * bits:
            raise ConditioningError("Barnes G asymptotic series failed to converge")
    return s


def barnes_g_log(x, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln G(x)`` for real ``x > 0`` with ``G(1) = G(2) = 1``, ``G(x+1) = Gamma(x) G(x)``.

    Integer arguments use the exact product ``G(n) = prod_{k=1}^{n-2} k!``.
    Other arguments are shifted up by the functional equation until the
    asymptotic expansion is accurate to working precision.
    """
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        x = mpf(x)
        if not x > 0:
            raise DomainError(f"barnes_g_log needs x > 0, got {x}")
        if _is_integer(x):
            n = int(x)
            return LogSigned(1, mpmath.fsum(mpmath.loggamma(k + 1) for k in range(1, n - 1)))
        # G(x) = G(x + n) / prod_{k=0}^{n-1} Gamma(x + k)
        threshold = max(12, int(0.12 * ctx.bits) + 8)
        n = max(0, int(mpmath.ceil(threshold - x)))
        with mp.workprec(ctx.bits + 32):
            shifted = _barnes_g_asymptotic(x + n - 1, ctx.bits + 32)
            correction = mpmath.fsum(mpmath.loggamma(x + k) for k in range(n))
            out = shifted - correction
        return LogSigned(1, +out)


# ---------------------------------------------------------------------------
# Determinants and precision escalation
# ---------------------------------------------------------------------------


def det_log(rows: Sequence[Sequence], ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln |det A|`` and its sign by Gaussian elimination with partial pivoting.

    Accepts real entries only.  The empty matrix has determinant 1.
    """
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        a = [[mpf(v) for v in row] for row in rows]
        n = len(a)
        if any(len(r) != n for r in a):
            raise ValueError("det_log needs a square matrix")
        sign = 1
        log_mag = mpf(0)
        for c in range(n):
            p = max(range(c, n), key=lambda r: abs(a[r][c]))
            if a[p][c] == 0:
                return LogSigned(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                sign = -sign
            piv = a[c][c]
            if piv < 0:
                sign = -sign
            log_mag += mpmath.log(abs(piv))
            for r in range(c + 1, n):
                f = a[r][c] / piv
                if f:
                    row_r, row_c = a[r], a[c]
                    for k in range(c + 1, n):
                        row_r[k] -= f * row_c[k]
        return LogSigned(sign, log_mag)


def _agree(x: LogSigned, y: LogSigned, tol: mpf) -> bool:
    if x.sign != y.sign:
        return False
    if x.sign == 0:
        return True
    return abs(x.log_mag - y.log_mag) <= tol


def with_escalation(
    compute: Callable[[PrecisionContext], LogSigned],
    ctx: PrecisionContext | None = None,
    what: str = "quantity",
) -> LogSigned:
    """Run ``compute`` at increasing precision until two successive runs agree.

    Agreement means equal signs and log magnitudes within ``2**(-bits/4)`` of
    the *requested* precision.  The higher-precision result is returned,
    rounded to the requested precision.
    """
    ctx = _as_ctx(ctx)
    with ctx.workprec():
        tol = mpf(2) ** (-ctx.bits / 4)
    prev = compute(ctx)
    history = [prev]
    for r in range(1, ctx.max_rounds + 1):
        cur = compute(ctx.escalated(r))
        history.append(cur)
        with ctx.escalated(r).workprec():
            ok = _agree(prev, cur, tol)
        if ok:
            with ctx.workprec():
                return LogSigned(cur.sign, +cur.log_mag) if cur.sign else cur
        prev = cur
    raise ConditioningError(
        f"{what}: no agreement after {ctx.max_rounds} escalations from {ctx.bits} bits; "
        f"last results {history[-2]!r} vs {history[-1]!r}"
    )


# ---------------------------------------------------------------------------
# Orthogonal polynomials
# ---------------------------------------------------------------------------


def _series_mul(a: Sequence, b: Sequence, order: int) -> list:
    out = [mpf(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if not ai:
            continue
        for j in range(min(len(b), order + 1 - i)):
            out[i + j] += ai * b[j]
    return out


def monic_poly_taylor(alphas: Callable[[int], mpf], betas: Callable[[int], mpf], degree: int, x, k_max: int) -> list:
    """Taylor coefficients at ``x`` of the monic polynomial defined by
    ``p_{k+1}(x) = (x - alpha_k) p_k(x) - beta_k p_{k-1}(x)``, truncated at ``t**k_max``.
    """
    x = mpf(x)
    prev = [mpf(0)] * (k_max + 1)
    cur = [mpf(1)] + [mpf(0)] * k_max
    for k in range(degree):
        a, b = alphas(k), betas(k)
        nxt = [(x - a) * cur[s] - b * prev[s] for s in range(k_max + 1)]
        for s in range(1, k_max + 1):
            nxt[s] += cur[s - 1]
        prev, cur = cur, nxt
    return cur


def orthopoly_eval_derivs(weight, degree: int, mu, k_max: int, ctx: PrecisionContext | None = None) -> DerivStream:
    """Monic orthogonal polynomial of ``weight`` and its first ``k_max`` derivatives at ``mu``.

    Evaluated with the three-term recurrence on truncated Taylor series, so
    derivatives come out exactly (to rounding), never by differencing.
    """
    from .ensembles import recurrence_coeffs

    ctx = _as_ctx(ctx)
    if degree < 0 or k_max < 0:
        raise ValueError("degree and k_max must be non-negative")
    with ctx.workprec():
        alphas, betas = recurrence_coeffs(weight)
        coeffs = monic_poly_taylor(alphas, betas, int(degree), mu, int(k_max))
        return DerivStream(tuple(c * mpmath.factorial(k) for k, c in enumerate(coeffs)))


@lru_cache(maxsize=64)
def gauss_legendre_rule(order: int, bits: int) -> tuple:
    """Nodes and weights of the ``order``-point Gauss-Legendre rule on [-1, 1]."""
    with mp.workprec(bits + 20):
        nodes, weights = mp.gauss_quadrature(order, "legendre")
    with mp.workprec(bits):
        return tuple(+x for x in nodes), tuple(+w for w in weights)


def format_sci(x, digits: int) -> str:
    """Scientific notation with ``digits`` significant digits, e.g. ``-1.5000e+2``."""
    with mp.workprec(max(mp.prec, int(digits * 3.33) + 20)):
        x = mpf(x)
        if x == 0:
            return "0." + "0" * (digits - 1) + "e+0"
        if not mpmath.isfinite(x):
            return str(x)
        e = int(mpmath.floor(mpmath.log10(abs(x))))
        m = x / mpf(10) ** e
        s = mpmath.nstr(m, digits, strip_zeros=False, min_fixed=-math.inf, max_fixed=math.inf)
        if s.lstrip("-").startswith("10"):
            e += 1
            m = x / mpf(10) ** e
            s = mpmath.nstr(m, digits, strip_zeros=False, min_fixed=-math.inf, max_fixed=math.inf)
    return f"{s}e{e:+d}"
