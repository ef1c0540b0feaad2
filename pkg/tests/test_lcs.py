from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lusinlp.lcs import (
    CoordVector,
    FiniteDim,
    Hat,
    PointVector,
    PointwiseSpace,
    SpaceMismatch,
    UnknownSeminorm,
    coordinate,
    evaluation,
    functional_apply,
    hat,
    indicator,
    parse_vector,
    seminorm_eval,
    vec_add,
    vec_eval,
    vec_scale,
)

rat = st.fractions(min_value=-3, max_value=3, max_denominator=40)
unit = st.fractions(min_value=0, max_value=1, max_denominator=40)


@st.composite
def point_vectors(draw):
    terms = []
    for _ in range(draw(st.integers(0, 4))):
        if draw(st.booleans()):
            prim = hat(draw(unit), draw(st.integers(1, 30)))
        else:
            prim = indicator(draw(unit))
        terms.append(prim.scale(draw(rat)))
    out = PointVector(())
    for t in terms:
        out = out + t
    return out


def coord_vectors(dim):
    return st.lists(rat, min_size=dim, max_size=dim).map(lambda xs: CoordVector(tuple(xs)))


X = (F(1, 10), F(1, 2), F(9, 10))
PW = PointwiseSpace(X)
FD = FiniteDim(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1), (F(1, 2), 2, 0)))


class TestExamples:
    def test_seminorm_examples(self):
        S = PointwiseSpace.at("0.5")
        assert seminorm_eval(S, F(1, 2), S.zero()) == 0
        assert seminorm_eval(S, F(1, 2), hat("0.55", 10)) == F(1, 2)
        s, s2 = F(1, 5), F(3, 10)
        S2 = PointwiseSpace.at(s)
        assert seminorm_eval(S2, s, indicator(s) - indicator(s2)) == 1

    def test_vector_ops(self):
        v = hat("0.5", 10)
        assert vec_add(v, PW.zero()) == v
        assert vec_eval(vec_scale(2, v), F(1, 2)) == 2
        w = vec_add(v, v)
        assert len(w.terms) == 1 and w.terms[0][1] == 2
        for x in (0, F(2, 5), F(1, 2), F(11, 20), 1):
            assert w(x) == 2 * v(x)

    def test_functionals(self):
        assert functional_apply(evaluation("0.3"), indicator("0.3")) == 1
        assert functional_apply(evaluation("0.3"), hat("0.25", 20)) == 0
        f = evaluation("0.1", 2)
        g = evaluation("0.9")
        from lusinlp.lcs import PointEvals
        fg = PointEvals(f.terms + g.terms)
        assert functional_apply(fg, hat("0.1", 5)) == 2

    def test_errors(self):
        with pytest.raises(UnknownSeminorm):
            PW.seminorm(F(1, 3), PW.zero())
        with pytest.raises(UnknownSeminorm):
            FD.seminorm(9, FD.zero())
        with pytest.raises(SpaceMismatch):
            vec_add(hat(0, 1), CoordVector((1,)))
        with pytest.raises(SpaceMismatch):
            CoordVector((1, 2)) + CoordVector((1,))
        with pytest.raises(SpaceMismatch):
            coordinate(0, 2)(hat(0, 1))

    def test_hat_value_keeps_type(self):
        assert Hat(F(1, 2), F(10))(F(3, 5)) == 0
        assert Hat(F(1, 2), F(4))(F(3, 5)) == F(3, 5)

    def test_parse_vector(self):
        v = parse_vector({"sum": [{"hat": {"c": "1/2", "n": 10}}, {"scale": [2, {"ind": 0.3}]}]})
        assert v(F(1, 2)) == 1 and v(F(3, 10)) == 2 + hat("1/2", 10)(F(3, 10))
        assert parse_vector({"coords": ["1/3", 2]}) == CoordVector((F(1, 3), 2))
        with pytest.raises(ValueError):
            parse_vector({"bogus": 1})


class TestAxioms:
    @given(point_vectors(), point_vectors(), rat)
    def test_pointwise_axioms(self, u, v, a):
        for x in X:
            q = lambda w: PW.seminorm(x, w)
            assert q(u) >= 0
            assert q(u.scale(a)) == abs(a) * q(u)
            assert q(u + v) <= q(u) + q(v)
            assert q(u) == abs(vec_eval(u, x))
            f = evaluation(x)
            assert abs(f(u)) == q(u)
            assert PW.dominates(x, f)

    @given(coord_vectors(3), coord_vectors(3), rat)
    def test_finite_axioms(self, u, v, a):
        for i in FD.active:
            q = lambda w: FD.seminorm(i, w)
            assert q(u.scale(a)) == abs(a) * q(u)
            assert q(u + v) <= q(u) + q(v)
            for w, f in FD.seminorm_terms(i):
                assert w * abs(f(u)) <= q(u)

    @given(point_vectors(), point_vectors(), rat)
    def test_functional_linearity(self, u, v, a):
        for f in PW.generating_functionals():
            assert f(u.scale(a) + v) == a * f(u) + f(v)

    def test_float_linearity(self):
        import random

        rng = random.Random(3)
        for _ in range(200):
            u = CoordVector(tuple(rng.uniform(-5, 5) for _ in range(3)))
            v = CoordVector(tuple(rng.uniform(-5, 5) for _ in range(3)))
            a = rng.uniform(-5, 5)
            f = FD.generating_functionals()[1]
            assert abs(f(u.scale(a) + v) - (a * f(u) + f(v))) <= 1e-12 * (1 + abs(a)) * 10

    def test_coordinate_seminorms_separate(self):
        E = FiniteDim.coordinates(2)
        v = E.vector(0, F(1, 7))
        assert any(E.seminorm(i, v) > 0 for i in E.active)

    def test_pointwise_separates_fragment(self):
        v = indicator(F(1, 3)) - hat(F(1, 3), 2)
        S = PointwiseSpace.at(F(1, 3), F(1, 2))
        assert any(S.seminorm(x, v) != 0 for x in S.active)

    def test_from_functional_values(self):
        z = PW.from_functional_values([1, 0, F(1, 2)])
        assert [z(x) for x in X] == [1, 0, F(1, 2)]
        assert FD.dominates(3, coordinate(1, 3)) and not FD.dominates(0, coordinate(1, 3))
