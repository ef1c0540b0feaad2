import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import interval_sets
from lusinlp.approx import (
    ApproxError,
    CauchyFailure,
    continuous_approx_char,
    dyadic_average,
    lp_simple_approx,
    uniform_limit_certificate,
    uniform_simple_approx,
    urysohn_1d,
)
from lusinlp.borel import CompactSet, IntervalSet
from lusinlp.curves import (
    HatPath,
    PiecewiseContinuous,
    Simple,
    certificate_for,
    constant,
    hat_discretization,
    parse_curve,
    zero_curve,
)
from lusinlp.lcs import FiniteDim, PointwiseSpace
from lusinlp.lpnorm import lp_distance

E1 = FiniteDim.coordinates(1)
X = F(1, 2)
S = PointwiseSpace.at(X)
LIN = parse_curve({"pw": {"name": "linear"}}, E1)


def coord(y):
    return y.coords[0]


def at_x(y):
    return y(X)


def I(lo, hi):
    return IntervalSet.interval(F(lo), F(hi))


def full_cert(c, eps=F(1, 10)):
    return certificate_for(c, eps)


def simple_numpy(beta, proj):
    """Vectorized a.e. values of a simple curve under a scalar projection."""
    flat = beta.flat_pieces()
    los = np.array([float(lo) for lo, _, _ in flat])
    his = np.array([float(hi) for _, hi, _ in flat])
    vals = np.array([float(proj(y)) for _, _, y in flat])

    def f(t):
        i = np.searchsorted(los, t, side="right") - 1
        inside = (i >= 0) & (t < his[np.maximum(i, 0)])
        return np.where(inside, vals[np.maximum(i, 0)], 0.0)

    return f


def dist_oracle(cf, beta, proj, p, breaks=()):
    """Independent Lp distance: Gauss-Legendre on every smooth segment.

    ``cf`` is a numpy formula for the curve under the projection ``proj``
    that defines the (single-term) seminorm.
    """
    nodes, weights = np.polynomial.legendre.leggauss(10)
    cuts = np.array(sorted({0.0, 1.0} | {float(b) for b in beta.breakpoints()}
                           | {float(b) for b in breaks}))
    a, b = cuts[:-1], cuts[1:]
    keep = b > a
    a, b = a[keep], b[keep]
    ts = ((a + b) / 2)[:, None] + ((b - a) / 2)[:, None] * nodes[None, :]
    vals = np.abs(cf(ts) - simple_numpy(beta, proj)(ts)) ** p
    return float(((b - a) / 2 * (vals @ weights)).sum()) ** (1 / p)


class TestUniform:
    def test_constant(self):
        y0 = E1.vector(F(7, 3))
        c = constant(y0, E1)
        beta, rep = uniform_simple_approx(c, full_cert(c), 0, F(1, 10))
        assert rep.passed and rep.rows[0].measured == 0
        for t in (0, F(1, 3), 1):
            assert beta(t) == y0

    def test_linear(self):
        beta, rep = uniform_simple_approx(LIN, full_cert(LIN), 0, F(1, 10))
        assert rep.passed and rep.rows[0].measured < F(1, 10)
        assert rep.notes["cells"] >= 20
        for k in range(1001):
            t = F(k, 1000)
            assert abs((LIN(t) - beta(t)).coords[0]) < F(1, 10)

    def test_hat(self):
        c = HatPath(5, S)
        beta, rep = uniform_simple_approx(c, full_cert(c), X, F(1, 5))
        assert rep.passed
        for k in range(1001):
            t = F(k, 1000)
            assert abs(c(t)(X) - beta(t)(X)) < F(1, 5)

    def test_jump_on_compact(self):
        jump = parse_curve({"pw": {"name": "jump"}}, E1)
        cert = certificate_for(jump, F(1, 20))
        beta, rep = uniform_simple_approx(jump, cert, 0, F(1, 10))
        assert rep.passed
        for lo, hi in cert.K.pieces:
            for k in range(101):
                t = lo + (hi - lo) * F(k, 100)
                assert abs((jump(t) - beta(t)).coords[0]) < F(1, 10)

    def test_no_modulus(self):
        blind = PiecewiseContinuous(lambda t: E1.vector(t), E1)
        cert = certificate_for(constant(E1.zero(), E1), F(1, 10))
        with pytest.raises(ApproxError, match="modulus"):
            uniform_simple_approx(blind, cert, 0, F(1, 10))

    def test_vanishes_off_compact(self):
        y0 = E1.vector(1)
        A = I(F(1, 5), F(3, 5))
        s = Simple(((y0, A),), E1)
        cert = certificate_for(s, F(1, 10))
        beta, _ = uniform_simple_approx(s, cert, 0, F(1, 10))
        for k in range(200):
            t = F(k, 200)
            if not cert.K.contains(t):
                assert beta(t) == E1.zero()


class TestLpDensity:
    def test_zero_and_simple_fixed(self):
        z = zero_curve(E1)
        beta, rep = lp_simple_approx(z, 0, 2, F(1, 10))
        assert beta is z and rep.passed
        s = Simple(((E1.vector(3), I(0, F(1, 3))),), E1)
        beta, rep = lp_simple_approx(s, 0, 1, F(1, 100))
        assert beta is s and rep.rows[-1].measured == 0

    @pytest.mark.parametrize("p", [1, 2, 3])
    @pytest.mark.parametrize("eps", [F(1, 10), F(1, 100)])
    def test_linear_and_hat(self, p, eps):
        beta, rep = lp_simple_approx(LIN, 0, p, eps)
        assert rep.passed
        assert dist_oracle(lambda t: t, beta, coord, p) < float(eps)
        h = HatPath(10, S)
        beta, rep = lp_simple_approx(h, X, p, eps)
        assert rep.passed
        hat = lambda t: np.maximum(1 - 10 * np.abs(0.5 - t), 0)
        assert dist_oracle(hat, beta, at_x, p, breaks=(F(2, 5), X, F(3, 5))) < float(eps)

    def test_sine(self):
        sine = parse_curve({"pw": {"name": "sine"}}, E1)
        beta, rep = lp_simple_approx(sine, 0, 2, F(1, 10))
        assert rep.passed
        assert dist_oracle(lambda t: np.sin(2 * np.pi * t), beta, coord, 2, breaks=(X,)) < 0.1


class TestUrysohn:
    def test_example_sandwich(self):
        K = CompactSet.of([(F(22, 100), F(58, 100))])
        U = I(F(18, 100), F(62, 100))
        f = urysohn_1d(K, U)
        assert f.breakpoints == (0, F(18, 100), F(22, 100), F(58, 100), F(62, 100), 1)
        for k in range(1001):
            t = F(k, 1000)
            v = f(t)
            assert (1 if K.contains(t) else 0) <= v <= (1 if U.contains(t) else 0)
        assert f(F(20, 100)) == F(1, 2)

    def test_trivial(self):
        f = urysohn_1d(CompactSet.empty(), I(F(1, 5), F(2, 5)))
        assert all(f(F(k, 10)) == 0 for k in range(11))
        g = urysohn_1d(CompactSet.of([(0, 1)]), I(0, 1))
        assert all(g(F(k, 10)) == 1 for k in range(11))

    def test_errors(self):
        with pytest.raises(ValueError, match="margin"):
            urysohn_1d(CompactSet.of([(F(1, 5), F(2, 5))]), I(F(1, 5), F(1, 2)))
        with pytest.raises(ValueError):
            urysohn_1d(CompactSet.of([(F(1, 5), F(3, 5))]), I(F(1, 10), F(1, 2)))

    @given(interval_sets())
    def test_sandwich_property(self, A):
        from lusinlp.borel import inner_compact, outer_open
        if not A:
            return
        K, U = inner_compact(A, F(1, 20)), outer_open(A, F(1, 20))
        f = urysohn_1d(K, U)
        for k in range(201):
            t = F(k, 200)
            assert (1 if K.contains(t) else 0) <= f(t) <= (1 if U.contains(t) else 0)


class TestContinuousChar:
    def test_empty(self):
        alpha, rep = continuous_approx_char(E1.vector(1), IntervalSet.empty(), 3, E1)
        assert rep.passed and rep.rows[0].measured == 0
        assert all(alpha(F(k, 7)) == E1.zero() for k in range(8))

    def test_examples(self):
        A = I(F(1, 5), F(3, 5))
        alpha, rep = continuous_approx_char(E1.vector(1), A, 5, E1)
        assert rep.passed and rep.rows[0].bound == F(1, 5)
        alpha, rep = continuous_approx_char(E1.vector(2), A, 40, E1, p=2)
        assert rep.passed and rep.rows[0].bound == F(1, 10)

    def test_oracle(self):
        A = I(F(1, 5), F(3, 5))
        y0 = E1.vector(2)
        alpha, rep = continuous_approx_char(y0, A, 5, E1, p=2)
        f = rep.notes["f"]
        ref = quad(lambda t: (2 * abs(float(f(F(t)) - (1 if A.contains(F(t)) else 0)))) ** 2,
                   0, 1, points=[float(k) for k in f.knots[1:-1]], epsabs=1e-13)[0]
        assert abs(float(rep.rows[0].measured) - ref) < 1e-10


class TestDyadic:
    def test_constant(self):
        y0 = E1.vector(F(5, 7))
        for n in range(5):
            avg = dyadic_average(constant(y0, E1), n)
            assert all(avg(F(k, 13)) == y0 for k in range(14))

    @pytest.mark.parametrize("n", range(0, 9))
    def test_linear_exact(self, n):
        avg = dyadic_average(LIN, n)
        for k in range(2**n):
            assert avg(F(k, 2**n)) == E1.vector(F(2 * k + 1, 2 ** (n + 1)))
        d = lp_distance(LIN, avg, 0, 1)
        assert d.exact and d.value == F(1, 2 ** (n + 2))

    def test_aligned_simple_identity(self):
        s = Simple(((E1.vector(1), I(0, F(1, 4))), (E1.vector(-2), I(F(1, 2), F(3, 4)))), E1)
        for n in (2, 3, 5):
            avg = dyadic_average(s, n)
            assert all(avg(F(k, 64)) == s(F(k, 64)) for k in range(64))

    @settings(max_examples=25)
    @given(st.integers(0, 5), interval_sets(denom=12, max_pieces=3))
    def test_idempotent(self, n, A):
        s = Simple(((E1.vector(3), A),), E1) if A else zero_curve(E1)
        for c in (s, LIN):
            a = dyadic_average(c, n)
            b = dyadic_average(a, n)
            assert all(a(F(k, 128)) == b(F(k, 128)) for k in range(129))

    def test_lipschitz_rate(self):
        sine = parse_curve({"pw": {"name": "sine"}}, E1)
        for c, q in ((LIN, 0), (HatPath(10, S), X), (sine, 0)):
            L = float(c.lipschitz(q))
            prev = math.inf
            for n in range(0, 7):
                err = float(lp_distance(c, dyadic_average(c, n), q, 1).value)
                assert err <= L * 2**-n + 1e-9
                assert err <= prev + 1e-9
                prev = err


class TestLimit:
    def test_constant_sequence(self):
        y0 = E1.vector(2)
        s = constant(y0, E1)
        res = uniform_limit_certificate([s, s, s], depth=5)
        assert res.certificate.K.pieces == ((0, 1),)
        assert all(res.curve(F(k, 10)) == y0 for k in range(10))
        assert res.report.passed

    def test_geometric(self):
        y0 = E1.vector(1)
        seq = [Simple(((y0.scale(1 - F(1, 2**n)), I(0, 1)),), E1) for n in range(1, 12)]
        res = uniform_limit_certificate(seq, depth=8)
        assert res.report.passed
        # members N..11 have tail sup 2^-N - 2^-11; N_k is the first N below 1/k
        gap = lambda N: F(1, 2**N) - F(1, 2**11)
        for k, N in enumerate(res.indices, start=1):
            assert gap(N) < F(1, k)
            assert N == 1 or gap(N - 1) >= F(1, k)
        assert res.curve(F(1, 3)) == seq[res.indices[-1] - 1](F(1, 3))

    def test_hat_failure(self):
        sp = PointwiseSpace.at(X)
        seq = [hat_discretization(2**j, 2 ** (j + 1), sp) for j in range(1, 5)]
        with pytest.raises(CauchyFailure) as info:
            uniform_limit_certificate(seq, depth=20)
        exc = info.value
        assert exc.gap >= F(1, 2)
        assert exc.report.rows[-1].passed is False

    def test_schedule_too_short(self):
        s = zero_curve(E1)
        with pytest.raises(ValueError):
            uniform_limit_certificate([s], eps_schedule=[1], depth=3)
