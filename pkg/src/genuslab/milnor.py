"""Degree-3 symbol families and their reduction to unit coefficients.

A family with entries a, (b_1..b_r), (c_1..c_r) stands for the sum of the
symbols {a, b_i, c_i} in degree-3 Milnor K-theory mod 2 of Q or Q(t).  The
reduction rewrites the c-vector, place by place, until every c_i is a unit
on the working place set, touching each c_i only by division by values of
the quadratic norm form

    q(z, x, y, w)  =  z^2 - a x^2 - b y^2 + a b w^2

for the appropriate b (such a value kills {a, b, value} mod 2).  The class
of the *sum* is preserved, and every move carries an exact certificate.

Phase 1 divides by even uniformizer powers (squares are always values);
phase 2 clears the remaining valuation-1 places with a norm uniformizer,
which exists only when the residue symbol at the place dies — otherwise the
obstruction is reported, not worked around.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from math import isqrt

from .brauer import hilbert_symbol, ramification_set
from .config import current_budgets
from .errors import (
    EvenResidueChar,
    NonUnitCoefficient,
    NormSearchFailed,
    RamifiedAtPlace,
    Unsupported,
    UnsupportedPlaceDegree,
)
from .fields import FunctionField, RationalField
from .places import DivisorialSet, Place, residue, residue_field, support, valuation
from .poly import Poly

__all__ = [
    "NormCertificate",
    "ReductionResult",
    "ReductionStep",
    "ResidueK2",
    "SymbolFamily",
    "eliminate_place",
    "normalize_valuations",
    "reduce_to_units",
    "residue_k3_family",
    "tame_residue_k2",
]


# ---------------------------------------------------------------------------
# the norm form of (a, b)


def _form_value(a, b, u):
    z, x, y, w = u
    return z * z - a * x * x - b * y * y + a * b * w * w


def _form_pairing(a, b, u, v):
    return u[0] * v[0] - a * u[1] * v[1] - b * u[2] * v[2] + a * b * u[3] * v[3]


@dataclass(frozen=True)
class NormCertificate:
    """Exact witness that `value` is represented by the norm form of (a, b)."""

    a: object
    b: object
    coords: tuple
    value: object

    def verify(self) -> bool:
        return _form_value(self.a, self.b, self.coords) == self.value

    def to_json(self):
        return {
            "a": str(self.a),
            "b": str(self.b),
            "coords": [str(c) for c in self.coords],
            "value": str(self.value),
        }


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class SymbolFamily:
    """Sum of symbols {a, b_i, c_i} with a, b_i units on `place_set`."""

    field: object
    a: object
    bs: tuple
    cs: tuple
    place_set: DivisorialSet

    def __post_init__(self):
        K = self.field
        if not isinstance(K, (RationalField, FunctionField)):
            raise Unsupported(f"symbol families live over Q or Q(t), not {K}")
        if isinstance(K, FunctionField):
            if K.p is not None:
                raise Unsupported(
                    "finite constant fields are out of scope for symbol families"
                )
            if self.place_set.include_infinite:
                # the infinite place can never be cleared without adding
                # finite support, so the working set must be affine
                raise Unsupported("place set over Q(t) must exclude infinity")
        if self.place_set.field != K:
            raise Unsupported("place set is over a different field")
        object.__setattr__(self, "a", K.coerce(self.a))
        object.__setattr__(self, "bs", tuple(K.coerce(b) for b in self.bs))
        object.__setattr__(self, "cs", tuple(K.coerce(c) for c in self.cs))
        if len(self.bs) != len(self.cs) or not self.bs:
            raise Unsupported("need equally many b's and c's, at least one")
        for x in (self.a, *self.bs, *self.cs):
            if x == K.zero():
                raise Unsupported("symbol entries must be nonzero")
        for x in (self.a, *self.bs):
            for v, _m in support(x):
                if self.place_set.contains(v):
                    raise NonUnitCoefficient(
                        f"{x} is not a unit at {v} of the working place set"
                    )

    @property
    def r(self) -> int:
        return len(self.bs)

    def support_c(self) -> list[Place]:
        """Places of the working set where some c_i is a non-unit."""
        seen = set()
        for c in self.cs:
            for v, _m in support(c):
                if self.place_set.contains(v):
                    seen.add(v)
        return sorted(seen, key=lambda v: v.sort_key())

    def b_product(self, indices):
        out = self.field.one()
        for i in indices:
            out = out * self.bs[i]
        return out

    def __str__(self):
        terms = ", ".join(
            f"{{{self.a}, {b}, {c}}}" for b, c in zip(self.bs, self.cs)
        )
        return f"SymbolFamily[{terms}]"


# ---------------------------------------------------------------------------
# residues


def tame_residue_k2(f, g, place: Place):
    """Tame symbol of {f, g}: the residue of (-1)^(mn) f^n / g^m.

    m, n are the valuations of f, g at the place.  Works at any place of
    odd or zero residue characteristic; the result lives in the residue
    field (an int mod p, a Fraction, or a Poly over F_p).
    """
    if place.residue_char() == 2:
        raise EvenResidueChar(f"tame symbol undefined at {place}")
    m = valuation(place, f)
    n = valuation(place, g)
    K = place.field()
    u = K.coerce(f) ** n / K.coerce(g) ** m
    if (m * n) % 2:
        u = -u
    return residue(place, u)


@dataclass(frozen=True)
class ResidueK2:
    """Residue of a family at a place: a symbol over the residue field.

    `pair` is (abar, bbar) with bbar the product of the b_i whose c_i has
    odd valuation.  `trivial` records whether the pair dies in K_2 mod 2
    of the residue field; at places of residue degree > 1 over Q(t) the
    question is out of desk range and `undecided` is set instead.
    """

    kappa: object
    pair: tuple | None
    odd_indices: tuple
    undecided: bool = False
    trivial: bool | None = None

    def to_json(self):
        return {
            "pair": None if self.pair is None else [str(x) for x in self.pair],
            "odd_indices": list(self.odd_indices),
            "undecided": self.undecided,
            "trivial": self.trivial,
        }


def residue_k3_family(family: SymbolFamily, place: Place) -> ResidueK2:
    """Residue of the family at a finite place, reduced mod 2.

    Sum of v(c_i)*{abar, bbar_i} over i, which mod 2 collapses to the
    single pair (abar, prod of bbar_i over odd i).
    """
    if place.field() != family.field:
        raise Unsupported(f"{place} is not a place of {family.field}")
    if place.residue_char() == 2:
        raise EvenResidueChar(f"no tame residue at {place}")
    for x in (family.a, *family.bs):
        if valuation(place, x) != 0:
            raise NonUnitCoefficient(f"{x} is not a unit at {place}")
    odd = tuple(
        i for i, c in enumerate(family.cs) if valuation(place, c) % 2 != 0
    )
    if place.degree() > 1:
        return ResidueK2(None, None, odd, undecided=True, trivial=None)
    abar = residue(place, family.a)
    bbar = residue(place, family.b_product(odd))
    if not odd:
        trivial = True
    elif isinstance(family.field, RationalField):
        # K_2 of a prime field is generated by {-1, -1}, which vanishes
        # mod 2 at odd p; the pair is recorded but never an obstruction
        trivial = True
    else:
        # residue field is Q: decide by ramification of the quaternion
        trivial = ramification_set(abar, bbar).is_split()
    return ResidueK2(residue_field(place), (abar, bbar), odd, trivial=trivial)


# ---------------------------------------------------------------------------
# norm-form searches


def _fraction_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _conic_point(a: Fraction, b: Fraction):
    """Nonzero (z, x, y) in Q^3 with z^2 = a x^2 + b y^2, by shell search.

    Meant for split (a, b), where a point exists at small height; returns
    None when the budget runs out.
    """
    budgets = current_budgets()
    ra = _fraction_sqrt(a)
    if ra is not None:
        return (ra, Fraction(1), Fraction(0))
    rb = _fraction_sqrt(b)
    if rb is not None:
        return (rb, Fraction(0), Fraction(1))
    evals = 0
    for h in range(1, budgets.norm_equation_height + 1):
        edges = [(h, y) for y in range(h + 1)]
        edges += [(x, h) for x in range(h)]
        for x, y in edges:
            evals += 1
            if evals > budgets.norm_search_evals:
                return None
            z = _fraction_sqrt(a * x * x + b * y * y)
            if z is not None:
                return (z, Fraction(x), Fraction(y))
    return None


def _represent_isotropic(K, a, b, e, target):
    """Coordinates representing `target` once the form has isotropic e.

    With q(e) = 0 and any g with B(e, g) != 0,
    q(lambda e + g) = 2 lambda B(e, g) + q(g) is solved for lambda.
    """
    diag = (K.one(), -a, -b, a * b)
    k = next(i for i in range(4) if e[i] != K.zero())
    g = tuple(K.one() if i == k else K.zero() for i in range(4))
    pairing = diag[k] * e[k]
    lam = (target - diag[k]) / (2 * pairing)
    return tuple(lam * e[i] + g[i] for i in range(4))


def _direct_search_q(a: Fraction, b: Fraction, target: Fraction):
    """Integer-coordinate search for q(z,x,y,w) = target over Q."""
    budgets = current_budgets()
    evals = 0
    bound = budgets.norm_equation_height
    for h in range(0, bound + 1):
        for x in range(h + 1):
            for y in range(h + 1):
                for w in range(h + 1):
                    if max(x, y, w) != h:
                        continue
                    evals += 1
                    if evals > budgets.norm_search_evals:
                        return None
                    s = target + a * x * x + b * y * y - a * b * w * w
                    z = _fraction_sqrt(s)
                    if z is not None:
                        return (z, Fraction(x), Fraction(y), Fraction(w))
    return None


def _direct_search_qt(K, a, b, target):
    """Small-pool search over Q(t) for non-constant coefficient data."""
    budgets = current_budgets()
    t = K.coerce(Poly.x(None))
    pool = [
        K.zero(),
        K.one(),
        -K.one(),
        K.coerce(2),
        K.coerce(-2),
        K.coerce(Fraction(1, 2)),
        K.coerce(Fraction(-1, 2)),
        t,
        t + 1,
        t - 1,
    ]
    evals = 0
    for z in pool:
        for x in pool:
            for y in pool:
                for w in pool:
                    evals += 1
                    if evals > budgets.norm_search_evals:
                        return None
                    if _form_value(a, b, (z, x, y, w)) == target:
                        return (z, x, y, w)
    return None


def _constant_value_of(K, x):
    """The element as a Fraction if it is a constant, else None."""
    if isinstance(K, RationalField):
        return x
    if x.is_constant():
        return Fraction(x.constant_value())
    return None


def _uniformizer(K, place: Place):
    if isinstance(K, RationalField):
        return Fraction(place.p)
    return K.coerce(place.poly)


# ---------------------------------------------------------------------------
# reduction steps


@dataclass(frozen=True)
class ReductionStep:
    """One replayable move: each c_i, i in `indices`, was divided by `pi`."""

    place: Place
    phase: str  # "normalize" | "eliminate"
    indices: tuple
    pi: object
    certificate: NormCertificate
    used_fallback: bool = False

    def to_json(self):
        return {
            "place": str(self.place),
            "phase": self.phase,
            "indices": list(self.indices),
            "pi_v": str(self.pi),
            "certificate": self.certificate.to_json(),
        }


def normalize_valuations(family: SymbolFamily):
    """Phase 1: divide c's by even uniformizer powers until v(c_i) in {0,1}.

    The divisor at each step is a square, hence tautologically a value of
    the relevant norm form with coordinates (f^q, 0, 0, 0).
    """
    K = family.field
    steps = []
    cs = list(family.cs)
    for i in range(family.r):
        for v, m in support(cs[i]):
            if not family.place_set.contains(v):
                continue
            q = m // 2
            if q == 0:
                continue
            f = _uniformizer(K, v)
            root = f**q
            divisor = root * root
            coords = (root, K.zero(), K.zero(), K.zero())
            cert = NormCertificate(family.a, family.bs[i], coords, divisor)
            assert cert.verify()
            cs[i] = cs[i] / divisor
            assert valuation(v, cs[i]) == m % 2
            steps.append(ReductionStep(v, "normalize", (i,), divisor, cert))
    return replace(family, cs=tuple(cs)), steps


def eliminate_place(family: SymbolFamily, place: Place):
    """Phase 2 at one place: divide the odd c's by a norm uniformizer.

    Requires normalized valuations.  The uniformizer pi is the place's own
    monic polynomial (or the prime itself over Q), so the working support
    strictly shrinks.  Raises RamifiedAtPlace when the residue obstruction
    is nontrivial and NormSearchFailed when a representation exists but is
    not found within budget.
    """
    K = family.field
    vals = [valuation(place, c) for c in family.cs]
    assert all(v in (0, 1) for v in vals), "normalize valuations first"
    J = tuple(i for i, v in enumerate(vals) if v == 1)
    assert J, "place does not meet the c-support"
    if place.degree() > 1:
        raise UnsupportedPlaceDegree(place)
    rk2 = residue_k3_family(family, place)
    if rk2.trivial is False:
        raise RamifiedAtPlace(place, rk2)
    b_J = family.b_product(J)
    if isinstance(K, RationalField):
        # two units at an odd prime always pair trivially, so (a, b_J)
        # splits at p and a uniformizing reduced norm exists
        assert hilbert_symbol(family.a, b_J, place) == 1
    target = _uniformizer(K, place)
    coords = None
    used_fallback = False
    ac = _constant_value_of(K, family.a)
    bc = _constant_value_of(K, b_J)
    if ac is not None and bc is not None and ramification_set(ac, bc).is_split():
        point = _conic_point(ac, bc)
        if point is not None:
            e = (K.coerce(point[0]), K.coerce(point[1]), K.coerce(point[2]), K.zero())
            assert _form_value(family.a, b_J, e) == K.zero()
            coords = _represent_isotropic(K, family.a, b_J, e, target)
    if coords is None:
        used_fallback = True
        if isinstance(K, RationalField):
            coords = _direct_search_q(family.a, b_J, target)
        else:
            coords = _direct_search_qt(K, family.a, b_J, target)
        if coords is None:
            raise NormSearchFailed(
                place, None, current_budgets().norm_search_evals
            )
    cert = NormCertificate(family.a, b_J, coords, target)
    assert cert.verify()
    cs = list(family.cs)
    for i in J:
        cs[i] = cs[i] / target
        assert valuation(place, cs[i]) == 0
    new_family = replace(family, cs=tuple(cs))
    step = ReductionStep(place, "eliminate", J, target, cert, used_fallback)
    return new_family, step


@dataclass(frozen=True)
class ReductionResult:
    """Reduced family plus the full replayable move log."""

    initial: SymbolFamily
    final: SymbolFamily
    steps: tuple
    condition_T_used_at: tuple

    def verify(self) -> bool:
        """Re-check every certificate and replay the division log exactly."""
        if self.final.support_c():
            return False
        acc = list(self.initial.cs)
        for step in self.steps:
            if not step.certificate.verify():
                return False
            if step.certificate.value != step.pi:
                return False
            for i in step.indices:
                acc[i] = acc[i] / step.pi
        return tuple(acc) == self.final.cs

    def to_json(self):
        return {
            "final_c": [str(c) for c in self.final.cs],
            "steps": [s.to_json() for s in self.steps],
            "condition_T_used_at": [str(v) for v in self.condition_T_used_at],
        }


def reduce_to_units(family: SymbolFamily) -> ReductionResult:
    """Two-phase reduction of the c-vector to units on the place set.

    Induction on the number of support places: normalization never grows
    the support, and each elimination removes its place for good because
    the uniformizer meets no other place of the working set.
    """
    for v in family.support_c():
        if v.degree() > 1:
            raise UnsupportedPlaceDegree(v)
    current, steps = normalize_valuations(family)
    fallback_places = []
    while True:
        supp = current.support_c()
        if not supp:
            break
        v = supp[0]
        current, step = eliminate_place(current, v)
        steps.append(step)
        if step.used_fallback:
            fallback_places.append(v)
        assert v not in current.support_c()
    result = ReductionResult(
        initial=family,
        final=current,
        steps=tuple(steps),
        condition_T_used_at=tuple(fallback_places),
    )
    assert result.verify()
    return result
