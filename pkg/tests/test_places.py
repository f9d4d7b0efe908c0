"""Places: valuations, supports, residues, splitting."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genuslab.errors import NotAUnit, Unsupported, ZeroElement
from genuslab.fields import FunctionField, QuadField, RationalField
from genuslab.places import (
    DivisorialSet,
    Place,
    PlaceAbove,
    places_above,
    residue,
    residue_field,
    support,
    valuation,
)
from genuslab.poly import Poly
from genuslab.quadfield import QuadElem, QuadIdeal, primes_above
from genuslab.ratfunc import RatFunc


def t_over(p):
    return RatFunc.t(p)


class TestConstruction:
    def test_kinds(self):
        assert Place.rational(5).kind == "p"
        f = Poly.make(3, [1, 0, 1])
        v = Place.finite_poly(f)
        assert v.kind == "poly" and v.degree() == 2
        assert Place.infinite(5).kind == "inf"
        P = primes_above(5, -1)[0]
        assert Place.quadratic(P).kind == "qprime"

    def test_rejects_junk(self):
        with pytest.raises(Unsupported):
            Place.rational(6)
        with pytest.raises(Unsupported):
            Place.finite_poly(Poly.make(5, [0, 1, 1]))  # t^2 + t = t(t+1)
        with pytest.raises(Unsupported):
            Place.finite_poly(Poly.make(5, [0, 2]))  # 2t not monic
        with pytest.raises(Unsupported):
            # 2 + 4i has norm 20: not a prime ideal
            Place.quadratic(
                QuadIdeal.from_generators(-1, [QuadElem.make(-1, 2, 4)])
            )

    def test_quadratic_inert_and_ramified(self):
        inert = Place.quadratic(primes_above(3, -1)[0])
        assert (inert.e, inert.f) == (1, 2)
        ram = Place.quadratic(primes_above(2, -1)[0])
        assert (ram.e, ram.f) == (2, 1)
        split = Place.quadratic(primes_above(5, -1)[0])
        assert (split.e, split.f) == (1, 1)

    def test_sort_is_total_and_kind_ranked(self):
        f = Poly.make(3, [1, 0, 1])
        ps = [
            Place.quadratic(primes_above(5, -1)[0]),
            Place.infinite(3),
            Place.finite_poly(f),
            Place.rational(7),
            Place.rational(2),
        ]
        ordered = sorted(ps)
        assert [v.kind for v in ordered] == ["p", "p", "poly", "inf", "qprime"]
        assert ordered[0] == Place.rational(2)

    def test_str_matches_grammar(self):
        assert str(Place.rational(5)) == "p:5"
        assert str(Place.finite_poly(Poly.make(3, [1, 0, 1]))) == "poly:t^2+1@Fp(3)"
        assert str(Place.infinite(None)) == "inf@Q(t)"
        P = primes_above(5, -5)[0]
        assert str(Place.quadratic(P)).startswith("qprime:(5,")


class TestValuation:
    def test_rational(self):
        x = Fraction(50, 3)
        assert valuation(Place.rational(5), x) == 2
        assert valuation(Place.rational(3), x) == -1
        assert valuation(Place.rational(2), x) == 1
        assert valuation(Place.rational(7), x) == 0

    def test_zero_rejected_everywhere(self):
        for v in (
            Place.rational(5),
            Place.finite_poly(Poly.make(3, [0, 1])),
            Place.infinite(3),
            Place.quadratic(primes_above(5, -1)[0]),
        ):
            with pytest.raises(ZeroElement):
                valuation(v, 0)

    def test_function_field(self):
        t = t_over(3)
        x = t * t / (t - 1)
        assert valuation(Place.finite_poly(Poly.x(3)), x) == 2
        assert valuation(Place.finite_poly(Poly.make(3, [-1, 1])), x) == -1
        assert valuation(Place.infinite(3), x) == -1

    def test_quadratic(self):
        P5 = Place.quadratic(primes_above(5, -1)[0])
        # 2 + i generates one prime over 5; its square has valuation 2
        z = QuadElem.make(-1, 2, 1)
        v1 = valuation(P5, z)
        v2 = valuation(P5, z * z)
        assert v2 == 2 * v1
        P2 = Place.quadratic(primes_above(2, -1)[0])
        assert valuation(P2, QuadElem.make(-1, 1, 1)) == 1  # 1 + i


class TestSupport:
    def test_rational(self):
        got = support(Fraction(50, 3))
        assert got == [
            (Place.rational(2), 1),
            (Place.rational(3), -1),
            (Place.rational(5), 2),
        ]

    def test_function_field_omits_zero_infinity(self):
        t = t_over(5)
        x = (t - 1) / t
        got = support(x)
        assert got == [
            (Place.finite_poly(Poly.x(5)), -1),
            (Place.finite_poly(Poly.make(5, [-1, 1])), 1),
        ]
        assert all(v.kind != "inf" for v, _m in got)

    def test_function_field_infinity_flag(self):
        t = t_over(5)
        x = t * t + 1
        with_inf = support(x)
        assert (Place.infinite(5), -2) in with_inf
        without = support(x, include_infinite=False)
        assert all(v.kind != "inf" for v, _m in without)

    def test_quadratic_split_denominator(self):
        # (2+i)/(2-i) = (3+4i)/5 has valuation +-1 at the two primes over 5
        z = QuadElem.make(-1, Fraction(3, 5), Fraction(4, 5))
        got = support(z)
        assert sorted(m for _v, m in got) == [-1, 1]
        assert all(v.p == 5 for v, _m in got)

    def test_zero_rejected(self):
        with pytest.raises(ZeroElement):
            support(Fraction(0))


class TestResidue:
    def test_rational(self):
        assert residue(Place.rational(5), Fraction(7, 3)) == 4

    def test_rational_nonunit(self):
        with pytest.raises(NotAUnit):
            residue(Place.rational(5), Fraction(50, 3))

    def test_poly_degree_one_is_evaluation(self):
        t = t_over(5)
        x = (t + 1) / (t - 1)
        assert residue(Place.finite_poly(Poly.x(5)), x) == 4  # x(0) = -1
        tq = t_over(None)
        y = (tq * tq + 1) / tq
        v = Place.finite_poly(Poly.make(None, [-2, 1]))
        assert residue(v, y) == Fraction(5, 2)

    def test_poly_higher_degree(self):
        f = Poly.make(3, [1, 0, 1])  # t^2 + 1 irreducible mod 3
        t = t_over(3)
        got = residue(Place.finite_poly(f), t)
        assert got == Poly.x(3)
        # 1/t = -t mod t^2 + 1: t * -t = -t^2 = 1 - (t^2+1)
        got = residue(Place.finite_poly(f), 1 / t)
        assert got == Poly.make(3, [0, -1])

    def test_infinite(self):
        t = t_over(5)
        x = (2 * t * t + 1) / (3 * t * t + t)
        assert residue(Place.infinite(5), x) == 2 * pow(3, 3, 5) % 5 == 4
        tq = t_over(None)
        y = (2 * tq + 1) / (3 * tq)
        assert residue(Place.infinite(None), y) == Fraction(2, 3)

    def test_quad_split(self):
        # at (5, 2+w) with w = i: i = 3, so 2 - i = 4 and 1/(2-i) = 4
        P = Place.quadratic(QuadIdeal(-1, 5, 2, 1))
        assert residue(P, QuadElem.omega(-1)) == 3
        z = QuadElem.make(-1, 2, -1).inverse()
        assert residue(P, z) == 4

    def test_quad_ramified(self):
        P2 = Place.quadratic(primes_above(2, -1)[0])
        assert residue(P2, QuadElem.omega(-1)) == 1

    def test_quad_inert(self):
        P3 = Place.quadratic(primes_above(3, -1)[0])
        assert residue(P3, QuadElem.omega(-1)) == Poly.make(3, [0, 1])
        half = QuadElem.make(-1, Fraction(1, 2), Fraction(1, 2))
        assert residue(P3, half) == Poly.make(3, [2, 2])

    def test_quad_nonunit(self):
        P = Place.quadratic(QuadIdeal(-1, 5, 2, 1))
        with pytest.raises(NotAUnit):
            residue(P, QuadElem.make(-1, 2, 1))


class TestResidueField:
    def test_handles(self):
        assert residue_field(Place.rational(5)).order() == 5
        assert residue_field(Place.finite_poly(Poly.make(3, [1, 0, 1]))).order() == 9
        assert residue_field(Place.infinite(None)).variant == "Q"
        assert residue_field(Place.infinite(7)).order() == 7
        P3 = Place.quadratic(primes_above(3, -1)[0])
        h = residue_field(P3)
        assert h.order() == 9 and h.modulus == Poly.make(3, [1, 0, 1])

    def test_number_field_residues_refused(self):
        v = Place.finite_poly(Poly.make(None, [1, 0, 1]))
        with pytest.raises(Unsupported):
            residue_field(v)


class TestPlacesAbove:
    def test_gaussian_split_inert_ramified(self):
        gauss = QuadField(-1)
        five = places_above(Place.rational(5), gauss)
        assert [(r.e, r.f) for r in five] == [(1, 1), (1, 1)]
        assert all(r.place is not None for r in five)
        three = places_above(Place.rational(3), gauss)
        assert [(r.e, r.f) for r in three] == [(1, 2)]
        two = places_above(Place.rational(2), gauss)
        assert [(r.e, r.f) for r in two] == [(2, 1)]

    def test_sum_ef_is_two(self):
        for d in (-1, -5, -23, 5, 13):
            for p in (2, 3, 5, 7, 11, 13):
                recs = places_above(Place.rational(p), QuadField(d))
                assert sum(r.e * r.f for r in recs) == 2

    def test_function_field_sqrt_t(self):
        g = Poly.x(5)
        assert places_above(Place.finite_poly(g), g) == [PlaceAbove(2, 1)]
        at_one = places_above(Place.finite_poly(Poly.make(5, [-1, 1])), g)
        assert [(r.e, r.f) for r in at_one] == [(1, 1), (1, 1)]
        at_two = places_above(Place.finite_poly(Poly.make(5, [-2, 1])), g)
        assert [(r.e, r.f) for r in at_two] == [(1, 2)]
        inf = places_above(Place.infinite(5), g)
        assert [(r.e, r.f) for r in inf] == [(2, 1)]

    def test_non_quadratic_refused(self):
        with pytest.raises(Unsupported):
            places_above(Place.rational(5), 17)
        with pytest.raises(Unsupported):
            places_above(Place.rational(5), Poly.x(5))


class TestDivisorialSet:
    def test_membership(self):
        V = DivisorialSet(FunctionField(5))
        assert V.contains(Place.finite_poly(Poly.x(5)))
        assert not V.contains(Place.infinite(5))
        assert not V.contains(Place.rational(5))
        W = DivisorialSet(FunctionField(5), include_infinite=True)
        assert W.contains(Place.infinite(5))

    def test_exclusion(self):
        S = (Place.rational(2),)
        V = DivisorialSet(RationalField(), excluded=S)
        assert not V.contains(Place.rational(2))
        assert V.contains(Place.rational(3))


# ---------------------------------------------------------------------------
# properties


def rat_strategy():
    return st.fractions(
        min_value=-100, max_value=100, max_denominator=100
    ).filter(lambda q: q != 0)


@st.composite
def ratfunc_strategy(draw, p):
    def poly():
        coeffs = draw(
            st.lists(st.integers(0, p - 1), min_size=1, max_size=4)
        )
        return Poly.make(p, coeffs)

    num = poly()
    den = poly()
    if num.is_zero():
        num = Poly.one(p)
    if den.is_zero():
        den = Poly.one(p)
    return RatFunc.make(num, den)


@given(rat_strategy())
@settings(max_examples=100, deadline=None)
def test_rational_reconstruction(q):
    prod = Fraction(1)
    for v, m in support(q):
        prod *= Fraction(v.p) ** m
    assert prod == abs(q)


@given(ratfunc_strategy(5))
@settings(max_examples=100, deadline=None)
def test_product_formula_f5t(x):
    # deg(div(x)) = 0 once infinity is counted with degree 1
    assert sum(v.degree() * m for v, m in support(x)) == 0


@given(
    st.sampled_from([-1, -5, -23, 5]),
    st.integers(-9, 9),
    st.integers(-9, 9),
    st.sampled_from([2, 3, 5, 7, 13]),
)
@settings(max_examples=100, deadline=None)
def test_quad_valuations_match_norm(d, x, y, p):
    z = QuadElem.make(d, x, y)
    if z.is_zero():
        return
    total = 0
    for rec in places_above(Place.rational(p), QuadField(d)):
        total += rec.f * valuation(rec.place, z)
    n = z.norm()
    assert total == (
        0 if n.numerator % p else _mult(n.numerator, p)
    ) - (0 if n.denominator % p else _mult(n.denominator, p))


def _mult(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@given(st.sampled_from([2, 3, 5, 7, 11, 13, 17]), rat_strategy())
@settings(max_examples=100, deadline=None)
def test_residue_is_multiplicative(p, q):
    v = Place.rational(p)
    if valuation(v, q) != 0:
        return
    r1 = residue(v, q)
    r2 = residue(v, q * q)
    assert r1 * r1 % p == r2
