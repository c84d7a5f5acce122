import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from mpmath import mp, mpf

from fhankel import (
    DomainError,
    SymbolSpec,
    WeightSpec,
    action_S,
    h_multiple_integral_log,
    opnorm_h_log,
    rho,
    saddle_data,
    selberg_ratio_log,
    weight_eval_log,
    z_selberg_log,
    zeta_log,
)
from fhankel.ensembles import recurrence_coeffs

interior_h = st.floats(-0.99, 0.99)
interior_l = st.floats(0.01, 0.99)


def test_weight_validation():
    with pytest.raises(DomainError):
        WeightSpec("jacobi", 3)
    with pytest.raises(DomainError):
        WeightSpec("hermite", 0)
    assert WeightSpec("Hermite", 2).kind == "hermite"


def test_symbol_validation():
    w = WeightSpec("hermite", 3)
    with pytest.raises(DomainError):
        SymbolSpec(w, (1, 2), (0,))
    with pytest.raises(DomainError):
        SymbolSpec(w, ("0.5",), (0,)).int_q()
    with pytest.raises(DomainError):
        SymbolSpec(w, (1, 1), ("0.2", "0.2")).check_distinct()
    with pytest.raises(DomainError):
        SymbolSpec(w, (1,), (1,)).check_interior()
    assert SymbolSpec(w, (0, 2), ("0.1", "0.3")).active().q == (2,)


class TestRho:
    def test_values(self, ctx):
        with ctx.workprec():
            assert rho(WeightSpec("hermite", 1), 0, ctx) == 2 / mpmath.pi
            assert rho(WeightSpec("hermite", 1), 1, ctx) == 0
            assert rho(WeightSpec("laguerre", 1), "0.5", ctx) == 2 / mpmath.pi

    @pytest.mark.parametrize("kind,x", [("hermite", 1.2), ("laguerre", -0.1), ("laguerre", 1.5)])
    def test_outside(self, kind, x):
        with pytest.raises(DomainError):
            rho(WeightSpec(kind, 1), x)

    @pytest.mark.parametrize("kind", ["hermite", "laguerre"])
    def test_normalised(self, kind):
        w = WeightSpec(kind, 1)
        lo, hi = w.support
        with mp.workprec(80):
            assert abs(mpmath.quad(lambda x: rho(w, x), [lo, mpf(1) / 2, hi]) - 1) < 1e-12


def test_weight_eval_log(ctx):
    assert weight_eval_log(WeightSpec("hermite", 3), 0, ctx).log_mag == 0
    assert weight_eval_log(WeightSpec("hermite", 2), 1, ctx).log_mag == -4
    assert weight_eval_log(WeightSpec("laguerre", 1, 0), 1, ctx).log_mag == -4
    with pytest.raises(DomainError):
        weight_eval_log(WeightSpec("laguerre", 1), 0, ctx)


def test_zeta_log(ctx):
    assert zeta_log(WeightSpec("laguerre", 9, 2), "0.3", ctx).log_mag == 0
    assert zeta_log(WeightSpec("hermite", 1), 1, ctx).log_mag == 2
    assert zeta_log(WeightSpec("hermite", 5), 0, ctx).log_mag == 0


class TestSaddle:
    def test_hermite_origin(self, ctx):
        sd = saddle_data(WeightSpec("hermite", 1), 0, ctx)
        with ctx.workprec():
            assert sd.z_plus == mpmath.mpc(0, 1)
            assert abs(sd.a - 1) < mpf(10) ** -70
            assert abs(sd.theta - mpmath.pi / 2) < mpf(10) ** -70
            assert abs(sd.re_S - mpf(1) / 2) < mpf(10) ** -70

    def test_laguerre_half(self, ctx):
        sd = saddle_data(WeightSpec("laguerre", 1), "0.5", ctx)
        with ctx.workprec():
            assert sd.z_plus == mpmath.mpc(-1, 1)
            assert abs(sd.theta - mpmath.pi / 4) < mpf(10) ** -70

    @pytest.mark.parametrize("kind,x", [("hermite", 1), ("hermite", -1), ("laguerre", 0), ("laguerre", 1)])
    def test_boundary_rejected(self, kind, x):
        with pytest.raises(DomainError):
            saddle_data(WeightSpec(kind, 1), x)

    @pytest.mark.parametrize("kind,strategy", [("hermite", interior_h), ("laguerre", interior_l)])
    def test_invariants(self, ctx, kind, strategy):
        w = WeightSpec(kind, 4)

        @given(strategy)
        def check(x):
            sd = saddle_data(w, x, ctx)
            with ctx.workprec():
                assert abs(sd.z_plus.imag - mpmath.pi / 2 * rho(w, x, ctx)) < mpf(10) ** -30
                assert sd.a > 0
                assert mpmath.isfinite(sd.theta)
                assert abs(sd.S_plus - action_S(kind, sd.z_plus, x, ctx)) == 0
                # z+ is a stationary point of S
                dS = mpmath.diff(lambda z: action_S(kind, z, x, ctx), sd.z_plus)
                assert abs(dS) < mpf(10) ** -30

        check()


class TestNorms:
    def test_closed_values(self, ctx):
        with ctx.workprec():
            assert abs(opnorm_h_log(WeightSpec("hermite", 1), 0, ctx).log_mag - mpmath.log(mpmath.sqrt(mpmath.pi / 2))) < mpf(10) ** -70
            assert abs(opnorm_h_log(WeightSpec("laguerre", 1, 0), 0, ctx).log_mag - mpmath.log(mpf(1) / 4)) < mpf(10) ** -70

    def test_hermite_k1_from_moments(self, ctx):
        # moments of exp(-2x^2): m0 = sqrt(pi/2), m2 = sqrt(pi/2)/4; h1 = det2/det1 = m2
        with ctx.workprec():
            m0 = mpmath.sqrt(mpmath.pi / 2)
            assert abs(opnorm_h_log(WeightSpec("hermite", 1), 1, ctx).log_mag - mpmath.log(m0 / 4)) < mpf(10) ** -70

    @pytest.mark.parametrize("kind,alpha", [("hermite", 0), ("laguerre", "0.5")])
    def test_norms_match_quadrature(self, kind, alpha):
        w = WeightSpec(kind, 3, alpha)
        al, be = recurrence_coeffs(w)
        with mp.workprec(100):
            def pi_k(k, x):
                prev, cur = mpf(0), mpf(1)
                for j in range(k):
                    prev, cur = cur, (x - al(j)) * cur - be(j) * prev
                return cur

            lo = -mpmath.inf if w.is_hermite else 0
            for k in range(5):
                weight = lambda x: mpmath.exp(weight_eval_log(w, x).log_mag) if (w.is_hermite or x > 0) else 0
                val = mpmath.quad(lambda x: pi_k(k, x) ** 2 * weight(x), [lo, 0, mpmath.inf] if w.is_hermite else [0, 1, mpmath.inf])
                assert abs(mpmath.log(val) - opnorm_h_log(w, k).log_mag) < 1e-20
                # orthogonality against lower degrees
                for j in range(k):
                    off = mpmath.quad(lambda x: pi_k(k, x) * pi_k(j, x) * weight(x), [lo, 0, mpmath.inf] if w.is_hermite else [0, 1, mpmath.inf])
                    assert abs(off) < 1e-20 * val


class TestSelbergRatio:
    def test_p_zero(self, ctx):
        assert selberg_ratio_log(WeightSpec("hermite", 4), 4, 0, ctx).log_mag == 0

    @pytest.mark.parametrize("kind,alpha", [("hermite", 0), ("laguerre", 0)])
    def test_N1_p1_bruteforce(self, kind, alpha):
        # H_{1,1} / H_{2,1} with both integrals done by direct quadrature
        w = WeightSpec(kind, 1, alpha)
        with mp.workprec(76):
            om = lambda x: mpmath.exp(weight_eval_log(w, x).log_mag)
            rng = [-mpmath.inf, mpmath.inf] if w.is_hermite else [0, mpmath.inf]
            H1 = mpmath.quad(om, rng)
            H2 = mpmath.quad(lambda x, y: (x - y) ** 2 * om(x) * om(y), rng, rng)
            assert abs(selberg_ratio_log(w, 1, 1).log_mag - mpmath.log(H1 / H2)) < 1e-20
        if w.is_hermite:
            with mp.workprec(100):
                assert abs(H1 - mpmath.sqrt(mpmath.pi / 2)) < 1e-20

    @pytest.mark.parametrize("kind,alpha", [("hermite", 0), ("laguerre", "1.5")])
    def test_against_moment_determinants(self, ctx, kind, alpha):
        for N in range(1, 7):
            w = WeightSpec(kind, N, alpha)
            empty = SymbolSpec(w, (), ())
            for p in range(4):
                num = h_multiple_integral_log(N, empty, ctx)
                den = h_multiple_integral_log(N + p, empty, ctx)
                with ctx.workprec():
                    assert abs(selberg_ratio_log(w, N, p, ctx).log_mag - (num / den).log_mag) < mpf(2) ** -128


class TestZSelberg:
    def test_small_p(self, ctx):
        with ctx.workprec():
            assert z_selberg_log(0, 3, ctx).log_mag == 0
            assert abs(z_selberg_log(1, 1, ctx).log_mag - mpmath.log(mpmath.pi) / 2) < mpf(10) ** -70
            assert abs(z_selberg_log(2, 1, ctx).log_mag - mpmath.log(mpmath.pi)) < mpf(10) ** -70

    def test_p2_quadrature(self):
        with mp.workprec(64):
            v = mpmath.quad(lambda x, y: (x - y) ** 2 * mpmath.exp(-x * x - y * y), [-mpmath.inf, mpmath.inf], [-mpmath.inf, mpmath.inf])
            assert abs(v - mpmath.pi) < 1e-15

    @given(st.integers(0, 8), st.floats(0.01, 100))
    def test_scaling_law(self, p, a):
        from fhankel import PrecisionContext

        c = PrecisionContext(256)
        with c.workprec():
            d = z_selberg_log(p, a, c).log_mag - z_selberg_log(p, 1, c).log_mag
            assert abs(d + mpf(p * p) / 2 * mpmath.log(mpf(a))) < mpf(10) ** -70

    def test_rejects_nonpositive_a(self):
        with pytest.raises(DomainError):
            z_selberg_log(2, 0)


class TestAction:
    def test_examples(self, ctx):
        with ctx.workprec():
            assert abs(action_S("hermite", mpmath.mpc(0, 1), 0, ctx) - mpmath.mpc(mpf(1) / 2, -mpmath.pi / 2)) < mpf(10) ** -70
            assert action_S("hermite", 1, 1, ctx) == mpf(3) / 2
            i = mpmath.mpc(0, 1)
            ref = i + mpmath.log(i) - mpmath.log(2 + i)
            assert abs(action_S("laguerre", i, mpf(1) / 2, ctx) - ref) < mpf(10) ** -70

    def test_singular(self):
        with pytest.raises(DomainError):
            action_S("hermite", 0, 0.2)
        with pytest.raises(DomainError):
            action_S("laguerre", -2, 0.2)
