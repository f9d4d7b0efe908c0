"""Quaternion symbols and quadratic cyclic algebras: local symbols,
ramification sets, residue characters, unit representatives, and the
finite enumeration that backs the genus-size estimate.

The global backbone (invariants determine the class, they sum to zero,
every admissible vector occurs) is classical Albert-Brauer-Hasse-
Noether theory; this module treats it as an external oracle and keeps
it testable by verifying reciprocity on random inputs rather than
assuming it silently.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EvenResidueChar,
    InvariantSumNonzero,
    PicNontrivial,
    RamifiedExtension,
    RamifiedInput,
    Unsupported,
    ZeroElement,
)
from .fields import FunctionField, QuadField, RationalField, field_of
from .intarith import factor_integer, legendre, val_p
from .places import DivisorialSet, Place, places_above, residue, support, valuation
from .poly import Poly
from .quadfield import (
    check_squarefree_nonsquare,
    field_discriminant,
    principal_generator,
    quad_prime_splitting,
)
from .ratfunc import RatFunc

# ---------------------------------------------------------------------------
# algebra records


@dataclass(frozen=True)
class CyclicAlgebra:
    """(L/K, c) with L the quadratic extension by sqrt(radicand).

    K is Q (radicand: squarefree int) or k(t) (radicand: squarefree
    polynomial); c is a nonzero element of K.
    """

    K: object
    radicand: object
    c: object

    def __post_init__(self):
        if isinstance(self.K, RationalField):
            check_squarefree_nonsquare(self.radicand)
        elif isinstance(self.K, FunctionField):
            assert isinstance(self.radicand, Poly)
        else:
            raise Unsupported("cyclic algebras live over Q or k(t) here")
        c = self.K.coerce(self.c)
        if c == self.K.zero():
            raise ZeroElement("c must be nonzero")
        object.__setattr__(self, "c", c)

    def ext(self):
        if isinstance(self.K, RationalField):
            return QuadField(self.radicand)
        return self.radicand


@dataclass(frozen=True)
class QuaternionAlg:
    """The symbol algebra (a, b) over a::field = b::field."""

    a: object
    b: object

    def field(self):
        return field_of(self.a)


@dataclass(frozen=True)
class ResidueChar:
    """Residue character value of a cyclic algebra at one place: an
    element of Q/Z represented in [0, 1), with the residue degree of
    the place in L."""

    place: Place
    value: Fraction
    residue_degree: int


# ---------------------------------------------------------------------------
# Hilbert symbols


def _sym_q_odd(a: Fraction, b: Fraction, p: int) -> int:
    alpha, beta = val_p(a, p), val_p(b, p)
    ua = a / Fraction(p) ** alpha
    ub = b / Fraction(p) ** beta
    la = legendre(ua.numerator * ua.denominator % p, p)
    lb = legendre(ub.numerator * ub.denominator % p, p)
    sign = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    return sign * pow(la, beta % 2) * pow(lb, alpha % 2)


def _sym_q_two(a: Fraction, b: Fraction) -> int:
    alpha, beta = val_p(a, 2), val_p(b, 2)
    ua = a / Fraction(2) ** alpha
    ub = b / Fraction(2) ** beta
    # odd units mod 8 (x/y = x*y mod 8 since y^2 = 1 mod 8)
    u = ua.numerator * ua.denominator % 8
    w = ub.numerator * ub.denominator % 8
    eps_u, eps_w = (u % 4 == 3), (w % 4 == 3)
    om_u, om_w = (u in (3, 5)), (w in (3, 5))
    e = (eps_u & eps_w) ^ ((alpha % 2) & om_w) ^ ((beta % 2) & om_u)
    return -1 if e else 1


def _sym_fpt(a: RatFunc, b: RatFunc, place: Place) -> int:
    p = place.p
    va, vb = valuation(place, a), valuation(place, b)
    u = a ** vb * b ** (-va)
    if (va * vb) % 2:
        u = u * RatFunc.const(p, p - 1)
    r = residue(place, u)
    q = p ** place.degree()
    if isinstance(r, int):
        s = pow(r, (q - 1) // 2, p)
        return 1 if s == 1 else -1
    s = r.pow_mod((q - 1) // 2, place.poly)
    return 1 if s.is_one() else -1


def hilbert_symbol(a, b, place) -> int:
    """(a, b) at a place of Q or F_p(t) (odd p), or at the real place
    (place="real"); +1 means the quaternion algebra splits there."""
    if place == "real":
        a, b = Fraction(a), Fraction(b)
        if a == 0 or b == 0:
            raise ZeroElement("symbol of zero")
        return -1 if (a < 0 and b < 0) else 1
    assert isinstance(place, Place)
    K = place.field()
    if isinstance(K, RationalField):
        a, b = K.coerce(a), K.coerce(b)
        if a == 0 or b == 0:
            raise ZeroElement("symbol of zero")
        if place.p == 2:
            return _sym_q_two(a, b)
        return _sym_q_odd(a, b, place.p)
    if isinstance(K, FunctionField):
        if K.p is None:
            raise Unsupported(
                "Q(t) has no +-1-valued symbol; use residue fields of Q"
            )
        if K.p == 2:
            raise EvenResidueChar(
                "quadratic symbols need odd residue characteristic"
            )
        a, b = K.coerce(a), K.coerce(b)
        if a.is_zero() or b.is_zero():
            raise ZeroElement("symbol of zero")
        return _sym_fpt(a, b, place)
    raise Unsupported(f"no Hilbert symbol at {place}")


# ---------------------------------------------------------------------------
# ramification


@dataclass(frozen=True)
class RamificationData:
    """Finite places where a quaternion symbol is -1, plus the real one."""

    finite: tuple
    real: bool

    def count(self) -> int:
        return len(self.finite) + (1 if self.real else 0)

    def is_split(self) -> bool:
        return self.count() == 0


def ramification_set(a, b) -> RamificationData:
    """All places where (a, b) ramifies.

    Over Q the candidates are supp(a), supp(b), 2 and the real place;
    over F_p(t) (odd p) the finite supports and infinity.  The count
    always comes out even (reciprocity), asserted here.
    """
    K = field_of(a)
    if isinstance(K, RationalField):
        a, b = K.coerce(a), K.coerce(b)
        candidates = {2}
        candidates.update(v.p for v, _m in support(a))
        candidates.update(v.p for v, _m in support(b))
        finite = tuple(
            Place.rational(p)
            for p in sorted(candidates)
            if hilbert_symbol(a, b, Place.rational(p)) == -1
        )
        real = hilbert_symbol(a, b, "real") == -1
        data = RamificationData(finite, real)
        assert data.count() % 2 == 0, "reciprocity demands even parity"
        return data
    if isinstance(K, FunctionField) and K.p is not None:
        if K.p == 2:
            raise EvenResidueChar(
                "quadratic symbols need odd residue characteristic"
            )
        a, b = K.coerce(a), K.coerce(b)
        places = {v for v, _m in support(a, include_infinite=False)}
        places.update(v for v, _m in support(b, include_infinite=False))
        places.add(Place.infinite(K.p))
        finite = tuple(
            v for v in sorted(places) if hilbert_symbol(a, b, v) == -1
        )
        data = RamificationData(finite, False)
        assert data.count() % 2 == 0, "reciprocity demands even parity"
        return data
    raise Unsupported(f"no ramification sets over {K}")


# ---------------------------------------------------------------------------
# residue characters of cyclic algebras


def residue_cyclic(alg: CyclicAlgebra, place: Place) -> ResidueChar:
    """chi(frobenius) = v(c)/n_v mod Z at a place unramified in L.

    n_v is the residue degree of the place in L; split places always
    give 0, inert ones give v(c)/2 mod Z.  RamifiedExtension at places
    that ramify in L.
    """
    above = places_above(place, alg.ext())
    if any(r.e == 2 for r in above):
        raise RamifiedExtension(place, "L/K ramifies here")
    n_v = above[0].f
    v = valuation(place, alg.c)
    return ResidueChar(place, Fraction(v % n_v, n_v), n_v)


def is_unramified(alg: CyclicAlgebra, V: DivisorialSet) -> tuple[bool, list]:
    """Whether the algebra is unramified at every place of V, plus the
    offending places.

    At places unramified in L the residue character decides; at places
    ramified in L (over Q) the Hilbert symbol does.
    """
    K = alg.K
    assert V.field == K
    candidates = {v for v, _m in support(alg.c, include_infinite=False)}
    if isinstance(K, RationalField):
        for p, _e in factor_integer(abs(field_discriminant(alg.radicand))):
            candidates.add(Place.rational(p))
    else:
        for v, _m in support(RatFunc.from_poly(alg.radicand)):
            if v.kind == "poly":
                candidates.add(v)
    offending = []
    for v in sorted(candidates):
        if not V.contains(v):
            continue
        above = places_above(v, alg.ext())
        if any(r.e == 2 for r in above):
            if isinstance(K, RationalField):
                sym = hilbert_symbol(alg.radicand, alg.c, v)
            else:
                sym = hilbert_symbol(RatFunc.from_poly(alg.radicand), alg.c, v)
            if sym == -1:
                offending.append(v)
        elif residue_cyclic(alg, v).value != 0:
            offending.append(v)
    return (not offending, offending)


# ---------------------------------------------------------------------------
# unit representatives (Q / quadratic only)


@dataclass(frozen=True)
class UnitRepResult:
    """c = u * d_value with u supported away from the finite places of
    V' and d_value an explicit product of norms from L."""

    algebra: CyclicAlgebra
    u: Fraction
    d_value: Fraction
    certificate: tuple  # (place, norm generator pi_w, exponent v(c)/n_v)

    def verify(self) -> bool:
        prod = Fraction(1)
        for _place, pi, e in self.certificate:
            prod *= Fraction(pi.norm()) ** e
        return prod == self.d_value and self.u * self.d_value == self.algebra.c


def reduce_to_unit_rep(alg: CyclicAlgebra) -> UnitRepResult:
    """Strip the support of c by dividing out norms from L = Q(sqrt(d)).

    Every prime in supp(c) must be unramified in L with n_v | v(c)
    (else RamifiedInput), and the primes above must be principal (else
    PicNontrivial).  The quotient u = c / prod N(pi_w)^{v(c)/n_v} is a
    unit representative of the same class with identical residue data.
    """
    if not isinstance(alg.K, RationalField):
        raise Unsupported("unit representatives are computed over Q")
    d = alg.radicand
    c = alg.c
    cert = []
    d_value = Fraction(1)
    for v, m in support(c):
        split = quad_prime_splitting(v.p, d)
        if split.kind == "ramified":
            raise RamifiedInput(v, "c meets a place ramified in L")
        n_v = 2 if split.kind == "inert" else 1
        if m % n_v:
            raise RamifiedInput(
                v, "odd valuation at an inert place: the algebra ramifies"
            )
        P = split.primes[0][0]
        pi = principal_generator(P)
        if pi is None:
            raise PicNontrivial(
                f"no principal generator above {v.p}; the class group obstructs"
            )
        e = m // n_v
        cert.append((v, pi, e))
        d_value *= Fraction(pi.norm()) ** e
    u = c / d_value
    out = UnitRepResult(alg, u, d_value, tuple(cert))
    assert out.verify()
    assert not support(u), "u must have empty support"
    return out


# ---------------------------------------------------------------------------
# global classes by invariants


@dataclass(frozen=True)
class GlobalBrauerClass:
    """A class of period dividing n, named by its local invariants.

    invariants: ((place, value in (0,1) with denominator | n), ...)
    sorted; real is 0 or 1/2.  The sum of all entries must vanish in
    Q/Z (InvariantSumNonzero otherwise); that the data then names one
    and only one class is the classical local-global classification.
    """

    n: int
    invariants: tuple
    real: Fraction

    @staticmethod
    def make(n: int, invariants, real=Fraction(0)) -> "GlobalBrauerClass":
        real = Fraction(real) % 1
        if real not in (Fraction(0), Fraction(1, 2)):
            raise Unsupported("the real invariant is 0 or 1/2")
        items = (
            invariants.items() if isinstance(invariants, dict) else invariants
        )
        acc: dict[Place, Fraction] = {}
        for place, val in items:
            val = Fraction(val) % 1
            if val == 0:
                continue
            if n % val.denominator:
                raise Unsupported(
                    f"invariant {val} has period not dividing {n}"
                )
            acc[place] = (acc.get(place, Fraction(0)) + val) % 1
        ent = tuple(
            sorted(
                ((P, v) for P, v in acc.items() if v != 0),
                key=lambda pv: pv[0].sort_key(),
            )
        )
        total = sum((v for _P, v in ent), real)
        if total.denominator != 1:
            raise InvariantSumNonzero(total)
        return GlobalBrauerClass(n, ent, real)

    @staticmethod
    def from_quaternion(a, b) -> "GlobalBrauerClass":
        ram = ramification_set(a, b)
        return GlobalBrauerClass.make(
            2,
            [(P, Fraction(1, 2)) for P in ram.finite],
            Fraction(1, 2) if ram.real else Fraction(0),
        )

    def order(self) -> int:
        out = 2 if self.real else 1
        for _P, v in self.invariants:
            out = out * v.denominator // _gcd(out, v.denominator)
        return out

    def support(self) -> tuple:
        return tuple(P for P, _v in self.invariants)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "invariants": [[str(P), str(v)] for P, v in self.invariants],
            "real": str(self.real),
        }


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _coprime_residues(m: int) -> list[Fraction]:
    return [Fraction(a, m) for a in range(1, m) if _gcd(a, m) == 1]


def genus_enumerate_global(cls: GlobalBrauerClass) -> list[GlobalBrauerClass]:
    """All classes with the same support and the same local orders whose
    invariants sum to zero; brute force over coprime numerators.

    The real invariant is rigid (0 or 1/2 admits one choice each), so
    n = 2 always returns the singleton."""
    options = [
        [(P, w) for w in _coprime_residues(v.denominator)]
        for P, v in cls.invariants
    ]
    budget = 1
    for opts in options:
        budget *= len(opts)
        if budget > 10 ** 6:
            raise Unsupported("enumeration budget exceeded")
    out = []
    for combo in itertools.product(*options):
        total = sum((w for _P, w in combo), cls.real)
        if total.denominator != 1:
            continue
        out.append(GlobalBrauerClass.make(cls.n, list(combo), cls.real))
    return out


def _euler_phi(n: int) -> int:
    out = 1
    for q, e in factor_integer(n):
        out *= (q - 1) * q ** (e - 1)
    return out


def genus_bound_E(n: int, orders, ramified_counts) -> int:
    """The size estimate |gen| <= prod_parts |order_part| * phi(part)^r_part.

    For prime-power n pass scalars; for composite n pass one order and
    one ramified-place count per prime part of n, in ascending prime
    order."""
    parts = [q ** e for q, e in factor_integer(n)]
    if isinstance(orders, int):
        orders = (orders,)
    if isinstance(ramified_counts, int):
        ramified_counts = (ramified_counts,)
    if len(parts) != len(orders) or len(parts) != len(ramified_counts):
        raise Unsupported(
            f"{n} has {len(parts)} prime parts; orders and counts must match"
        )
    bound = 1
    for part, order, r in zip(parts, orders, ramified_counts):
        bound *= order * _euler_phi(part) ** r
    return bound
