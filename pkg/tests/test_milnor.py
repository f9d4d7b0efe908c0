"""Symbol families: residues, certificates, and the two-phase reduction."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genuslab.errors import (
    EvenResidueChar,
    NonUnitCoefficient,
    NormSearchFailed,
    RamifiedAtPlace,
    Unsupported,
    UnsupportedPlaceDegree,
)
from genuslab.fields import FunctionField, RationalField
from genuslab.intarith import kronecker
from genuslab.milnor import (
    NormCertificate,
    SymbolFamily,
    eliminate_place,
    normalize_valuations,
    reduce_to_units,
    residue_k3_family,
    tame_residue_k2,
)
from genuslab.places import DivisorialSet, Place
from genuslab.poly import Poly
from genuslab.ratfunc import RatFunc

QT = FunctionField(None)
QQ = RationalField()


def t_over_q():
    return RatFunc.t(None)


def place_at(r):
    """The degree-1 place t - r of Q(t)."""
    return Place.finite_poly(Poly.make(None, [Fraction(-r), Fraction(1)]))


def qt_family(a, bs, cs, excluded=()):
    return SymbolFamily(QT, a, tuple(bs), tuple(cs), DivisorialSet(QT, excluded))


class TestTameResidue:
    def test_f7_vs_f5(self):
        # residue of {t, t-1} at (t) is -1, a nonsquare mod 7, square mod 5
        for p in (5, 7):
            t = RatFunc.t(p)
            out = tame_residue_k2(t, t - 1, Place.finite_poly(Poly.x(p)))
            assert out == p - 1
            assert kronecker(out, p) == (1 if p == 5 else -1)

    def test_rational_prime(self):
        assert tame_residue_k2(Fraction(5), Fraction(3), Place.rational(5)) == 2

    def test_steinberg_and_antisymmetry(self):
        t = RatFunc.t(5)
        vt = Place.finite_poly(Poly.x(5))
        assert tame_residue_k2(t, 1 - t, vt) == 1
        assert tame_residue_k2(t, -t, vt) == 1

    def test_unit_pair_trivial(self):
        t = RatFunc.t(5)
        vt = Place.finite_poly(Poly.x(5))
        assert tame_residue_k2(t + 1, t + 2, vt) == 1

    def test_qt_linear_place(self):
        t = t_over_q()
        f = t - 2
        out = tame_residue_k2(f, f * f * f * 5, place_at(2))
        assert out == Fraction(-1, 5)

    def test_char_two_refused(self):
        t = RatFunc.t(2)
        with pytest.raises(EvenResidueChar):
            tame_residue_k2(t, t + 1, Place.finite_poly(Poly.x(2)))


class TestFamilyValidation:
    def test_basic_construction(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [t * (t - 3)])
        assert fam.r == 1
        assert [str(v) for v in fam.support_c()] == ["poly:t-3@Q(t)", "poly:t@Q(t)"]

    def test_non_unit_b_rejected(self):
        t = t_over_q()
        with pytest.raises(NonUnitCoefficient):
            qt_family(-1, [t], [t - 1])

    def test_excluded_place_allows_non_unit(self):
        t = t_over_q()
        vt = Place.finite_poly(Poly.x(None))
        fam = qt_family(-1, [t], [t - 1], excluded=(vt,))
        assert fam.support_c() == [place_at(1)]

    def test_finite_constant_field_refused(self):
        t = RatFunc.t(5)
        with pytest.raises(Unsupported):
            SymbolFamily(
                FunctionField(5), -1, (2,), (t,), DivisorialSet(FunctionField(5))
            )

    def test_infinite_place_refused(self):
        with pytest.raises(Unsupported):
            SymbolFamily(
                QT,
                -1,
                (2,),
                (t_over_q(),),
                DivisorialSet(QT, include_infinite=True),
            )

    def test_length_mismatch(self):
        with pytest.raises(Unsupported):
            qt_family(-1, [2, 3], [t_over_q()])

    def test_zero_entry(self):
        with pytest.raises(Unsupported):
            qt_family(-1, [2], [0])


class TestResidueFamily:
    def test_split_pair(self):
        out = residue_k3_family(qt_family(-1, [2], [t_over_q()]), place_at(0))
        assert out.pair == (Fraction(-1), Fraction(2))
        assert out.odd_indices == (0,)
        assert out.trivial is True

    def test_nonsplit_pair(self):
        out = residue_k3_family(qt_family(-1, [-1], [t_over_q()]), place_at(0))
        assert out.trivial is False

    def test_even_valuation_drops_out(self):
        t = t_over_q()
        out = residue_k3_family(qt_family(-1, [-1], [t * t]), place_at(0))
        assert out.odd_indices == ()
        assert out.trivial is True

    def test_product_collapse(self):
        # (-1, 3) and (-1, 27) are each ramified, but the residue pair
        # multiplies the b's of odd index: (-1, 81) is split
        t = t_over_q()
        out = residue_k3_family(qt_family(-1, [3, 27], [t, t]), place_at(0))
        assert out.odd_indices == (0, 1)
        assert out.trivial is True

    def test_rational_prime_field_kills_k2(self):
        fam = SymbolFamily(
            QQ,
            -1,
            (-1,),
            (5,),
            DivisorialSet(QQ, excluded=(Place.rational(2),)),
        )
        out = residue_k3_family(fam, Place.rational(5))
        assert out.pair == (4, 4)
        assert out.trivial is True

    def test_higher_degree_undecided(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [t * t + 1])
        out = residue_k3_family(
            fam, Place.finite_poly(Poly.make(None, [1, 0, 1]))
        )
        assert out.undecided and out.trivial is None and out.pair is None

    def test_non_unit_coefficient(self):
        t = t_over_q()
        vt = Place.finite_poly(Poly.x(None))
        fam = qt_family(-1, [t], [t - 1], excluded=(vt,))
        with pytest.raises(NonUnitCoefficient):
            residue_k3_family(fam, vt)

    def test_even_char_refused(self):
        fam = SymbolFamily(QQ, -1, (-1,), (5,), DivisorialSet(QQ))
        with pytest.raises(EvenResidueChar):
            residue_k3_family(fam, Place.rational(2))


class TestNormalize:
    def test_mixed_exponents(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [t**3 * (t - 1) ** 2])
        out, steps = normalize_valuations(fam)
        assert out.cs == (t,)
        assert len(steps) == 2
        for s in steps:
            assert s.phase == "normalize"
            assert s.certificate.verify()

    def test_negative_valuation(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [1 / t])
        out, steps = normalize_valuations(fam)
        assert out.cs == (t,)
        assert steps[0].pi == 1 / t**2

    def test_rational(self):
        fam = SymbolFamily(
            QQ,
            -1,
            (-1,),
            (Fraction(125, 9),),
            DivisorialSet(QQ, excluded=(Place.rational(2),)),
        )
        out, steps = normalize_valuations(fam)
        assert out.cs == (Fraction(5),)
        assert len(steps) == 2


class TestReduce:
    def test_split_constant_route(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [t * (t - 3)])
        result = reduce_to_units(fam)
        assert result.final.cs == (QT.one(),)
        assert result.condition_T_used_at == ()
        assert [s.phase for s in result.steps] == ["eliminate", "eliminate"]
        assert [str(s.pi) for s in result.steps] == ["t - 3", "t"]
        assert result.verify()

    def test_ramified_place_obstruction(self):
        fam = qt_family(-1, [-1], [t_over_q()])
        with pytest.raises(RamifiedAtPlace) as info:
            reduce_to_units(fam)
        assert info.value.place == place_at(0)

    def test_two_symbol_family(self):
        t = t_over_q()
        fam = qt_family(-1, [2, 5], [t * (t - 1), 4 * (t - 1)])
        result = reduce_to_units(fam)
        assert result.final.cs == (QT.one(), QT.coerce(4))
        # the (t-1) step divides both entries: b_J = 10 is a two-square sum
        joint = [s for s in result.steps if s.indices == (0, 1)]
        assert len(joint) == 1 and str(joint[0].pi) == "t - 1"
        assert result.verify()

    def test_normalize_then_eliminate(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [t**3])
        result = reduce_to_units(fam)
        assert result.final.cs == (QT.one(),)
        assert [s.phase for s in result.steps] == ["normalize", "eliminate"]

    def test_rational_four_squares_fallback(self):
        fam = SymbolFamily(
            QQ,
            -1,
            (-1,),
            (5,),
            DivisorialSet(QQ, excluded=(Place.rational(2),)),
        )
        result = reduce_to_units(fam)
        assert result.final.cs == (Fraction(1),)
        assert result.condition_T_used_at == (Place.rational(5),)
        cert = result.steps[0].certificate
        assert cert.verify() and cert.value == 5

    def test_higher_degree_refused(self):
        t = t_over_q()
        fam = qt_family(-1, [2], [t * t + 1])
        with pytest.raises(UnsupportedPlaceDegree):
            reduce_to_units(fam)

    def test_pool_search_exhausts(self, monkeypatch):
        import genuslab.milnor as milnor_mod
        from genuslab.config import Budgets

        monkeypatch.setattr(
            milnor_mod,
            "current_budgets",
            lambda: Budgets(norm_search_evals=2000),
        )
        t = t_over_q()
        b = t * t + 1
        excl = Place.finite_poly(Poly.make(None, [1, 0, 1]))
        fam = SymbolFamily(QT, -1, (b,), (t,), DivisorialSet(QT, (excl,)))
        with pytest.raises(NormSearchFailed):
            reduce_to_units(fam)

    def test_step_json_shape(self):
        t = t_over_q()
        result = reduce_to_units(qt_family(-1, [2], [t]))
        js = result.to_json()
        assert js["final_c"] == ["1"]
        step = js["steps"][0]
        assert set(step) == {"place", "phase", "indices", "pi_v", "certificate"}
        assert step["pi_v"] == "t"
        assert set(step["certificate"]) == {"a", "b", "coords", "value"}


class TestCertificates:
    def test_exact_identity(self):
        cert = NormCertificate(
            Fraction(-1), Fraction(2), tuple(map(Fraction, (1, 1, 1, 0))), Fraction(0)
        )
        assert cert.verify()

    def test_tampering_detected(self):
        cert = NormCertificate(
            Fraction(-1), Fraction(2), tuple(map(Fraction, (1, 1, 1, 0))), Fraction(3)
        )
        assert not cert.verify()


# ---------------------------------------------------------------------------
# properties

# b-pool of two-square sums: (-1, b) is split for every product of these
TWO_SQUARE_B = [2, 5, 13, 10, Fraction(1, 5), Fraction(25, 13)]


@st.composite
def safe_families(draw):
    r = draw(st.integers(1, 3))
    bs = [draw(st.sampled_from(TWO_SQUARE_B)) for _ in range(r)]
    t = t_over_q()
    cs = []
    for _ in range(r):
        c = QT.one() * draw(st.sampled_from([1, 2, Fraction(3, 7)]))
        for root in (0, 1, 2, 3):
            e = draw(st.integers(-2, 2))
            c = c * (t - root) ** e
        cs.append(c)
    return qt_family(-1, bs, cs)


@given(safe_families())
@settings(max_examples=40, deadline=None)
def test_reduction_round_trip(fam):
    result = reduce_to_units(fam)
    assert result.final.support_c() == []
    assert result.verify()
    # support shrinks strictly through the eliminate phase
    elim = [s for s in result.steps if s.phase == "eliminate"]
    assert len({s.place for s in elim}) == len(elim)
    assert result.condition_T_used_at == ()


@given(safe_families())
@settings(max_examples=25, deadline=None)
def test_residue_agreement_through_reduction(fam):
    result = reduce_to_units(fam)
    for r in range(0, 5):
        v = place_at(r)
        before = residue_k3_family(fam, v)
        after = residue_k3_family(result.final, v)
        assert before.trivial and after.trivial
        assert after.odd_indices == ()


@given(st.integers(2, 60))
@settings(max_examples=30, deadline=None)
def test_rational_families_reduce(n):
    # c = odd part of n, supported away from 2; b = -1 forces the
    # four-square fallback at every support prime
    while n % 2 == 0:
        n //= 2
    if n == 1:
        n = 3
    fam = SymbolFamily(
        QQ, -1, (-1,), (n,), DivisorialSet(QQ, excluded=(Place.rational(2),))
    )
    result = reduce_to_units(fam)
    assert result.final.support_c() == []
    assert result.verify()
