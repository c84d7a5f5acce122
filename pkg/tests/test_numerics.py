import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

from fhankel import (
    DerivStream,
    DomainError,
    LogSigned,
    PrecisionContext,
    WeightSpec,
    barnes_g_log,
    log_gamma,
    opnorm_h_log,
    orthopoly_eval_derivs,
)
from fhankel.numerics import ConditioningError, det_log, format_sci, with_escalation

# ln G(3/2) frozen from mpmath.barnesg at 300 bits
LOG_G_THREE_HALVES = "0.066931888435004704274028685868184404102248304991035852966983975394219627220078"


class TestPrecisionContext:
    def test_rejects_low_bits(self):
        with pytest.raises(ValueError):
            PrecisionContext(32)

    def test_rejects_bad_factor(self):
        with pytest.raises(ValueError):
            PrecisionContext(128, escalation_factor=1)

    def test_frozen(self):
        c = PrecisionContext(128)
        with pytest.raises(Exception):
            c.bits = 64

    def test_escalated(self):
        assert PrecisionContext(100).escalated(2).bits == 400

    def test_workprec_restores(self):
        before = mp.prec
        with PrecisionContext(300).workprec():
            assert mp.prec == 300
        assert mp.prec == before


class TestLogSigned:
    def test_mul_adds_logs(self):
        a, b = LogSigned(-1, mpf(2)), LogSigned(-1, mpf(3))
        assert (a * b).sign == 1 and (a * b).log_mag == 5

    def test_zero(self):
        z = LogSigned.from_value(0)
        assert z.is_zero and (z * LogSigned.one()).is_zero
        with pytest.raises(ZeroDivisionError):
            LogSigned.one() / z

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            LogSigned(2, mpf(0))

    @given(st.floats(-1e6, 1e6).filter(lambda x: x != 0), st.floats(-1e6, 1e6).filter(lambda x: x != 0))
    def test_product_matches_floats(self, x, y):
        p = LogSigned.from_value(x) * LogSigned.from_value(y)
        assert math.isclose(float(p), x * y, rel_tol=1e-12)

    @given(st.floats(1e-3, 1e3), st.integers(-4, 4))
    def test_pow(self, x, k):
        v = LogSigned.from_value(-x) ** k
        assert math.isclose(float(v), (-x) ** k, rel_tol=1e-12)


def test_derivstream_length():
    d = DerivStream((mpf(1), mpf(2), mpf(6)))
    assert d.k_max == 2 and d.taylor()[2] == 3
    with pytest.raises(ValueError):
        DerivStream(())


class TestLogGamma:
    def test_values(self, ctx):
        assert log_gamma(1, ctx) == 0
        with mp.workprec(256):
            assert abs(log_gamma(5, ctx) - mpmath.log(24)) < mpf(2) ** -248
            assert abs(log_gamma(mpf(1) / 2, ctx) - mpmath.log(mpmath.pi) / 2) < mpf(2) ** -248

    @pytest.mark.parametrize("x", [0, -1, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestBarnesG:
    def test_small_integers(self, ctx):
        assert barnes_g_log(1, ctx).log_mag == 0
        assert barnes_g_log(2, ctx).log_mag == 0
        with ctx.workprec():
            assert abs(barnes_g_log(4, ctx).log_mag - mpmath.log(2)) < mpf(10) ** -70
            assert abs(barnes_g_log(5, ctx).log_mag - mpmath.log(12)) < mpf(10) ** -70

    @pytest.mark.parametrize("n", [3, 6, 10, 25, 60])
    def test_integer_product(self, ctx, n):
        with ctx.workprec():
            ref = mpmath.fsum(mpmath.log(mpmath.factorial(k)) for k in range(1, n - 1))
            assert abs(barnes_g_log(n, ctx).log_mag - ref) < mpf(2) ** -240

    @pytest.mark.parametrize("z", ["0.5", "1.5", "2.5", "7.3"])
    def test_recurrence(self, ctx, z):
        with ctx.workprec():
            z = mpf(z)
            d = barnes_g_log(z + 1, ctx).log_mag - barnes_g_log(z, ctx).log_mag - mpmath.loggamma(z)
            assert abs(d) < mpf(2) ** -128

    def test_three_halves_frozen(self, ctx):
        with ctx.workprec():
            assert abs(barnes_g_log(mpf(3) / 2, ctx).log_mag - mpf(LOG_G_THREE_HALVES)) < mpf(10) ** -70

    @given(st.floats(0.05, 60.0))
    def test_against_mpmath(self, x):
        c = PrecisionContext(128)
        with c.workprec():
            ref = mpmath.log(mpmath.barnesg(mpf(x)))
            assert abs(barnes_g_log(mpf(x), c).log_mag - ref) < mpf(10) ** -30 * max(1, abs(ref))

    @pytest.mark.parametrize("x", [0, -2.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            barnes_g_log(x)


class TestOrthopoly:
    def test_degree_one_hermite(self, ctx):
        d = orthopoly_eval_derivs(WeightSpec("hermite", 1), 1, "0.7", 1, ctx)
        with ctx.workprec():
            assert d[0] == mpf("0.7") and d[1] == 1

    def test_degree_two_hermite_at_zero(self, ctx):
        # <x^2> for exp(-2x^2) is 1/4, so pi_2(x) = x^2 - 1/4
        d = orthopoly_eval_derivs(WeightSpec("hermite", 1), 2, 0, 0, ctx)
        assert d[0] == mpf(-1) / 4

    def test_degree_zero_laguerre(self, ctx):
        d = orthopoly_eval_derivs(WeightSpec("laguerre", 4, "0.5"), 0, "3.3", 3, ctx)
        assert list(d.values) == [1, 0, 0, 0]

    def test_laguerre_alpha_domain(self):
        with pytest.raises(DomainError):
            WeightSpec("laguerre", 3, -1)

    @pytest.mark.parametrize("kind,alpha", [("hermite", 0), ("laguerre", 0), ("laguerre", "1.5")])
    @pytest.mark.parametrize("degree", [3, 12, 20])
    def test_derivatives_vs_finite_differences(self, ctx, kind, alpha, degree):
        w = WeightSpec(kind, 5, alpha)
        mu = mpf("0.3")
        with ctx.workprec():
            h = mpf(10) ** -12
            d = orthopoly_eval_derivs(w, degree, mu, 4, ctx)
            f = lambda x: orthopoly_eval_derivs(w, degree, x, 0, ctx)[0]
            for k in range(1, 5):
                # central k-th difference, error O(h^2)
                fd = mpmath.fsum(
                    (-1) ** j * mpmath.binomial(k, j) * f(mu + (mpf(k) / 2 - j) * h) for j in range(k + 1)
                ) / h**k
                scale = abs(d[k]) if d[k] != 0 else max(abs(d[j]) for j in range(5))
                assert abs(fd - d[k]) <= mpf(10) ** -10 * scale

    @pytest.mark.parametrize("kind,alpha", [("hermite", 0), ("laguerre", "0.5")])
    def test_moment_determinant_equals_norms(self, ctx, kind, alpha):
        from fhankel import base_moments

        w = WeightSpec(kind, 3, alpha)
        for M in range(1, 7):
            mom = base_moments(w, 2 * M - 2, ctx).values
            det = det_log([[mom[j + k] for k in range(M)] for j in range(M)], ctx)
            with ctx.workprec():
                ref = mpmath.fsum(opnorm_h_log(w, k, ctx).log_mag for k in range(M))
                assert abs(det.log_mag - ref) < mpf(2) ** -128


class TestDetAndEscalation:
    def test_det_sign(self, ctx):
        d = det_log([[0, 1], [1, 0]], ctx)
        assert d.sign == -1 and abs(d.log_mag) < 1e-70

    def test_singular(self, ctx):
        assert det_log([[1, 2], [2, 4]], ctx).is_zero

    def test_escalation_gives_up(self):
        calls = []

        def unstable(c):
            calls.append(c.bits)
            return LogSigned(1, mpf(c.bits))

        with pytest.raises(ConditioningError):
            with_escalation(unstable, PrecisionContext(64, max_rounds=2))
        assert calls == [64, 128, 256]

    def test_escalation_accepts_stable(self):
        r = with_escalation(lambda c: LogSigned(1, mpf(3)), PrecisionContext(64))
        assert r.log_mag == 3


@pytest.mark.parametrize(
    "x,digits,expect",
    [(mpf(-150), 5, "-1.5000e+2"), (mpf(0), 3, "0.00e+0"), (mpf("9.9999"), 3, "1.00e+1"), (mpf("nan"), 3, "nan")],
)
def test_format_sci(x, digits, expect):
    assert format_sci(x, digits) == expect


def test_format_sci_keeps_precision():
    with mp.workprec(256):
        x = mpmath.pi / 7
    s = format_sci(x, 70)
    with mp.workprec(256):
        assert abs(mpf(s) - x) < mpf(10) ** -68
