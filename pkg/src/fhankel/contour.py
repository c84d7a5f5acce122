"""Direct quadrature of the 2|q|-fold dual contour integral.

The integrand is a product of one-variable factors ``exp(-N S(z, mu_i)) g(z)``
times a Laurent polynomial in the variables (squared Vandermondes inside each
block and cross factors between blocks).  Expanding that polynomial once turns
the tensor-product rule into a finite sum of products of one-dimensional
moments ``int f_i(z) z^e dz``, which is exactly what the full tensor rule
computes but at linear rather than exponential cost in the node count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import mpmath
from mpmath import mpc, mpf

from .duality import h_prefactor_definition, h_prefactor_log
from .ensembles import (
    HERMITE,
    LAGUERRE,
    SymbolSpec,
    WeightSpec,
    _to_mpf,
    action_S,
    saddle_data,
    zeta_log,
)
from .numerics import (
    DomainError,
    LogSigned,
    PrecisionContext,
    QuadratureError,
    _as_ctx,
    barnes_g_log,
    gauss_legendre_rule,
    orthopoly_eval_derivs,
)

__all__ = [
    "ContourSpec",
    "ImaginaryAxis",
    "Circle",
    "IResult",
    "action_S",
    "dual_integrand",
    "laurent_part",
    "I_quadrature",
    "prop1_assemble",
    "scaled_I_log",
    "contour_pi_check",
    "MAX_DIMENSION",
]

MAX_DIMENSION = 4
GL_ORDER = 24
MAX_DOUBLINGS = 10


@dataclass(frozen=True)
class ContourSpec:
    """Integration path: the upward imaginary axis (cut at ``+-t_max``) or a circle about 0.

    ``t_max = None`` lets the quadrature choose the cut so the discarded tails
    are below the working precision; ``nodes = None`` picks a starting
    resolution from N and mu.
    """

    kind: str
    t_max: object = None
    radius: object = 1
    nodes: int | None = None

    def __post_init__(self):
        if self.kind not in ("imaginary_axis", "circle"):
            raise DomainError(f"unknown contour kind {self.kind!r}")
        if self.kind == "circle" and not 0 < _to_mpf(self.radius) < 2:
            raise DomainError("the circle must enclose 0 but not -2: need 0 < radius < 2")
        if self.t_max is not None and not _to_mpf(self.t_max) > 0:
            raise DomainError("t_max must be positive")
        if self.nodes is not None and self.nodes < 1:
            raise DomainError("nodes must be positive")


def ImaginaryAxis(t_max=None, nodes: int | None = None) -> ContourSpec:
    return ContourSpec("imaginary_axis", t_max=t_max, nodes=nodes)


def Circle(radius=1, nodes: int | None = None) -> ContourSpec:
    return ContourSpec("circle", radius=radius, nodes=nodes)


def _default_contour(weight: WeightSpec) -> ContourSpec:
    return ImaginaryAxis() if weight.is_hermite else Circle()


def _check_contour(weight: WeightSpec, contour: ContourSpec):
    want = "imaginary_axis" if weight.is_hermite else "circle"
    if contour.kind != want:
        raise DomainError(f"{weight.kind} integrals run over the {want.replace('_', ' ')}, not a {contour.kind}")


@dataclass(frozen=True)
class IResult:
    """Outcome of :func:`I_quadrature`.

    ``imag_residue`` is ``|Im I| / |Re I|``; the exact integral is real.
    """

    value: mpc
    nodes: int
    doublings: int
    rel_change: mpf
    bits_used: int
    imag_residue: mpf
    cancellation_bits: float = field(default=0.0)

    def real_log(self) -> LogSigned:
        return LogSigned.from_value(self.value.real)


# -- the integrand ------------------------------------------------------------

def _blocks(qs):
    out, start = [], 0
    for q in qs:
        out.append(list(range(start, start + 2 * q)))
        start += 2 * q
    return out


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            c = out.get(e, 0) + ca * cb
            if c:
                out[e] = c
            else:
                out.pop(e, None)
    return out


def _binomial_diff(K: int, a: int, b: int, power: int) -> dict:
    """``z_a^power - z_b^power`` as a Laurent polynomial in K variables."""
    ea = [0] * K
    eb = [0] * K
    ea[a] = power
    eb[b] = power
    return {tuple(ea): 1, tuple(eb): -1}


def laurent_part(weight: WeightSpec, q) -> dict:
    """Integer-coefficient Laurent polynomial multiplying the one-variable factors.

    Keys are exponent tuples over all ``2|q|`` variables, blocks in order.
    """
    qs = [int(x) for x in q]
    K = 2 * sum(qs)
    delta = 1 if weight.is_hermite else -1
    poly = {(0,) * K: 1}
    blocks = _blocks(qs)
    for blk in blocks:
        for a, b in combinations(blk, 2):
            d = _binomial_diff(K, b, a, 1)
            poly = _poly_mul(poly, _poly_mul(d, d))
    for j, k in combinations(range(len(blocks)), 2):
        for lk in blocks[k]:
            for lj in blocks[j]:
                poly = _poly_mul(poly, _binomial_diff(K, lk, lj, delta))
    return poly


def _f_one(weight: WeightSpec, q: int, mu, z):
    """``exp(-N S(z, mu)) g_q(z)`` with integer powers taken exactly."""
    N = weight.N
    if weight.is_hermite:
        return mpmath.exp(-2 * N * mu * z + N * z * z / 2) * z**N
    a = weight.alpha_mpf()
    zp2 = z + 2
    return mpc(0, 1) * mpmath.exp(-2 * N * mu * z) * zp2**N * zp2**a / z ** (N + 2 * q)


def dual_integrand(spec: SymbolSpec, z, ctx: PrecisionContext | None = None) -> mpc:
    """The dual integrand at one point ``z`` of C^{2|q|}, evaluated factor by factor."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    K = 2 * sum(qs)
    if len(z) != K:
        raise DomainError(f"expected {K} contour variables, got {len(z)}")
    w = spec.weight
    with ctx.workprec():
        z = [mpc(x) for x in z]
        mus = spec.mu_values()
        delta = 1 if w.is_hermite else -1
        a = w.alpha_mpf()
        blocks = _blocks(qs)
        val = mpc(1)
        for i, blk in enumerate(blocks):
            for l in blk:
                val *= mpmath.exp(-w.N * action_S(w.kind, z[l], mus[i], ctx))
                if not w.is_hermite:
                    val *= mpc(0, 1) * (z[l] + 2) ** a / z[l] ** (2 * qs[i])
            for x, y in combinations(blk, 2):
                val *= (z[y] - z[x]) ** 2
        for j, k in combinations(range(len(blocks)), 2):
            for lk in blocks[k]:
                for lj in blocks[j]:
                    val *= z[lk] ** delta - z[lj] ** delta
        return val


# -- one-dimensional moments ----------------------------------------------------

def _auto_t_max(N: int, e_max: int, bits: int) -> mpf:
    """Cut where ``|t|^{N+e} exp(-N t^2 / 2)`` is ``2^-bits`` below its peak and ``exp(-N t^2/2) < 2^-bits``."""
    n = N + max(e_max, 0)
    peak = n / 2 * (math.log(n / N) - 1) if n else 0.0
    target = (bits + 16) * math.log(2)
    t = max(1.0, math.sqrt(2 * target / N))
    while n * math.log(t) - N * t * t / 2 > peak - target or N * t * t / 2 < target:
        t += 0.125
    return mpf(t)


def _nodes_axis(t_max, panels: int, bits: int):
    xs, ws = gauss_legendre_rule(GL_ORDER, bits)
    h = 2 * t_max / panels
    for p in range(panels):
        mid = -t_max + (p + mpf(1) / 2) * h
        for x, wt in zip(xs, ws):
            t = mid + x * h / 2
            # z = i t, dz = i dt
            yield mpc(0, t), mpc(0, wt * h / 2)


def _nodes_circle(radius, n: int):
    r = _to_mpf(radius)
    for k in range(n):
        z = r * mpmath.expjpi(mpf(2 * k) / n)
        yield z, mpc(0, 1) * z * 2 * mpmath.pi / n


def _moments(weight, q, mu, e_lo, e_hi, nodes):
    """``int f(z) z^e dz`` for e in [e_lo, e_hi], plus the sum of absolute contributions."""
    count = e_hi - e_lo + 1
    acc = [mpc(0)] * count
    mag = [mpf(0)] * count
    for z, dz in nodes:
        v = _f_one(weight, q, mu, z) * dz * z**e_lo
        for k in range(count):
            acc[k] += v
            mag[k] += abs(v)
            v *= z
    return acc, mag


def _start_resolution(weight: WeightSpec, contour: ContourSpec, mus, t_max) -> int:
    if contour.nodes is not None:
        return contour.nodes
    N = weight.N
    if weight.is_hermite:
        freq = 2 * N * max(abs(float(m)) for m in mus) + 2 * math.sqrt(N) + 1
        return max(4, math.ceil(float(t_max) * freq / GL_ORDER))
    return max(32, 2 * (N + 8))


def _evaluate(spec, qs, poly, contour, resolution, bits, t_max):
    w = spec.weight
    mus = spec.mu_values()
    blocks = _blocks(qs)
    owner = [i for i, blk in enumerate(blocks) for _ in blk]
    ranges = {}
    for exps in poly:
        for l, e in enumerate(exps):
            lo, hi = ranges.get(owner[l], (e, e))
            ranges[owner[l]] = (min(lo, e), max(hi, e))
    with mpmath.mp.workprec(bits):
        moms, mags = {}, {}
        for i, (lo, hi) in ranges.items():
            nodes = _nodes_axis(t_max, resolution, bits) if w.is_hermite else _nodes_circle(contour.radius, resolution)
            acc, mag = _moments(w, qs[i], mus[i], lo, hi, nodes)
            moms[i] = {lo + k: v for k, v in enumerate(acc)}
            mags[i] = {lo + k: v for k, v in enumerate(mag)}
        total = mpc(0)
        bound = mpf(0)
        for exps, c in poly.items():
            term = mpc(c)
            tb = mpf(abs(c))
            for l, e in enumerate(exps):
                term *= moms[owner[l]][e]
                tb *= mags[owner[l]][e]
            total += term
            bound += tb
        lost = float(mpmath.log(bound / abs(total), 2)) if total != 0 else float("inf")
        return total, lost


def I_quadrature(
    spec: SymbolSpec,
    contour: ContourSpec | None = None,
    ctx: PrecisionContext | None = None,
    rtol: float = 1e-8,
) -> IResult:
    """``I_{N,m,q}(mu)`` by a tensor rule on the contour, refined by doubling until stable.

    Gauss-Legendre panels on the imaginary axis for Hermite, the periodic
    trapezoid rule on a circle for Laguerre.  Working precision is raised by
    the number of bits lost to cancellation (measured, not guessed) so the
    quadrature error, not rounding, limits the result.
    """
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    K = 2 * sum(qs)
    if K > MAX_DIMENSION:
        raise DomainError(f"tensor quadrature is limited to 2|q| <= {MAX_DIMENSION}, got {K}")
    spec.check_distinct()
    w = spec.weight
    contour = contour or _default_contour(w)
    _check_contour(w, contour)
    if K == 0:
        return IResult(mpc(1), 0, 0, mpf(0), ctx.bits, mpf(0))
    poly = laurent_part(w, qs)
    e_max = max(max(e) for e in poly)
    mus = spec.mu_values()
    bits = ctx.bits + 32
    if w.is_hermite:
        bits += math.ceil(K * w.N * max(float(m) ** 2 for m in mus) / math.log(2))
    t_max = _to_mpf(contour.t_max) if contour.t_max is not None else _auto_t_max(w.N, e_max, bits)
    res = _start_resolution(w, contour, mus, t_max)

    prev, lost = _evaluate(spec, qs, poly, contour, res, bits, t_max)
    for d in range(1, MAX_DOUBLINGS + 1):
        if lost > bits - ctx.bits // 2:
            bits = ctx.bits + math.ceil(lost) + 32
            prev, lost = _evaluate(spec, qs, poly, contour, res, bits, t_max)
        res *= 2
        cur, lost = _evaluate(spec, qs, poly, contour, res, bits, t_max)
        with mpmath.mp.workprec(bits):
            change = abs(cur - prev) / abs(cur) if cur != 0 else mpf("inf")
        if change < rtol:
            with ctx.workprec():
                value = +cur
                residue = abs(value.imag) / abs(value.real) if value.real != 0 else mpf("inf")
            total_nodes = res * (GL_ORDER if w.is_hermite else 1)
            return IResult(value, total_nodes, d, change, bits, residue, lost)
        prev = cur
    raise QuadratureError(
        f"dual integral did not stabilise after {MAX_DOUBLINGS} doublings (last relative change {mpmath.nstr(change, 3)})"
    )


# -- assembling H from I -----------------------------------------------------------

def _prop1_constant_log(spec: SymbolSpec, ctx: PrecisionContext) -> mpf:
    qs, mus = spec.int_q(), spec.mu_values()
    val = mpf(0)
    for q, x in zip(qs, mus):
        val += 2 * q * zeta_log(spec.weight, x, ctx).log_mag
        val -= barnes_g_log(2 * q + 1, ctx).log_mag + mpmath.loggamma(2 * q + 1)
    for j, k in combinations(range(len(qs)), 2):
        val -= 4 * qs[j] * qs[k] * mpmath.log(abs(mus[k] - mus[j]))
    return val


def prop1_assemble(spec: SymbolSpec, I_value, ctx: PrecisionContext | None = None) -> LogSigned:
    """``ln H`` from a value of the dual integral and the exact prefactor ``h``.

    ``I_value`` is a complex number or an :class:`IResult`.  The sign is read
    off ``Re(phase(h) * I)`` where the phase is the one carried by the
    contour constants; for correct inputs it is +1.
    """
    ctx = _as_ctx(ctx)
    spec = spec.active()
    spec.int_q()
    if spec.m == 0:
        return LogSigned.one()
    if isinstance(I_value, IResult):
        I_value = I_value.value
    mag = h_prefactor_log(spec, ctx)
    _, phase = h_prefactor_definition(spec, ctx)
    with ctx.workprec():
        oriented = (phase * mpc(I_value)).real
        return LogSigned.from_value(oriented) * LogSigned(1, mag.log_mag + _prop1_constant_log(spec, ctx))


def scaled_I_log(spec: SymbolSpec, I_value, ctx: PrecisionContext | None = None) -> LogSigned:
    """``N^{sum q^2} prod exp(2 q N Re S) Re I``; tends to ``I0`` as N grows."""
    ctx = _as_ctx(ctx)
    spec = spec.active()
    qs = spec.int_q()
    if isinstance(I_value, IResult):
        I_value = I_value.value
    w = spec.weight
    with ctx.workprec():
        val = sum(q * q for q in qs) * mpmath.log(w.N)
        for q, x in zip(qs, spec.mu_values()):
            val += 2 * q * w.N * saddle_data(w, x, ctx).re_S
        return LogSigned.from_value(mpc(I_value).real) * LogSigned(1, val)


def _pi_contour_constant(weight: WeightSpec, j: int) -> mpc:
    N = weight.N
    if weight.is_hermite:
        return mpmath.sqrt(2 * N / mpmath.pi) / (mpc(0, 1) * mpf(2) ** (N + j))
    n = N + j - 1
    a = weight.alpha_mpf()
    return (-1) ** n * mpmath.factorial(n) / mpf(N) ** n / (mpf(2) ** (2 * N + j + a) * mpmath.pi * mpc(0, 1))


def contour_pi_check(
    weight: WeightSpec,
    j: int,
    mu,
    contour: ContourSpec | None = None,
    ctx: PrecisionContext | None = None,
    rtol: float = 1e-14,
) -> mpf:
    """Relative error between the contour representation of ``pi_{N+j-1}(mu)`` and the recurrence value."""
    ctx = _as_ctx(ctx)
    if j < 1:
        raise DomainError("j must be >= 1")
    contour = contour or _default_contour(weight)
    _check_contour(weight, contour)
    N = weight.N
    n = N + j - 1
    bits = ctx.bits + 32
    with mpmath.mp.workprec(bits):
        x = _to_mpf(mu)
        if weight.is_hermite:
            bits += math.ceil(N * float(x) ** 2 / math.log(2))

        def integrand(z):
            if weight.is_hermite:
                return mpmath.exp(-2 * N * z * x + N * z * z / 2) * z**n
            a = weight.alpha_mpf()
            return mpmath.exp(-2 * N * z * x) * (z + 2) ** (N + a) / z ** (N + 1) * (1 / z + mpf(1) / 2) ** (j - 1)

    t_max = _to_mpf(contour.t_max) if contour.t_max is not None else _auto_t_max(N, j - 1, bits)
    res = _start_resolution(weight, contour, [mu], t_max)

    def run(r):
        with mpmath.mp.workprec(bits):
            nodes = _nodes_axis(t_max, r, bits) if weight.is_hermite else _nodes_circle(contour.radius, r)
            return mpmath.fsum((integrand(z) * dz for z, dz in nodes))

    prev = run(res)
    for _ in range(MAX_DOUBLINGS):
        res *= 2
        cur = run(res)
        with mpmath.mp.workprec(bits):
            stable = abs(cur - prev) <= rtol * abs(cur)
        if stable:
            break
        prev = cur
    else:
        raise QuadratureError("contour representation of the polynomial did not stabilise")
    ref = orthopoly_eval_derivs(weight, n, mu, 0, ctx)[0]
    with ctx.workprec():
        quad = _pi_contour_constant(weight, j) * cur
        if weight.is_hermite:
            quad *= mpmath.exp(2 * N * _to_mpf(mu) ** 2)
        if ref == 0:
            return abs(quad)
        return abs(quad - ref) / abs(ref)
