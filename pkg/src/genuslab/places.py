"""Places of Q, F_p(t), Q(t) and Q(sqrt(d)).

A place is a frozen record naming a discrete valuation: a rational
prime, a monic irreducible polynomial, the degree valuation at
infinity, or a prime ideal of a quadratic order.  The module computes
valuations, supports, residue maps into explicit residue-field handles,
and splitting of places in quadratic extensions.

Archimedean data (real embeddings) never appears here; the Brauer layer
tracks the real invariant on its own.  The infinite place of k(t) *is*
first-class but divisorial place sets exclude it unless asked.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotAUnit, Unsupported, ZeroElement
from .fields import FunctionField, QuadField, RationalField, field_of
from .intarith import factor_fraction, factor_integer, is_prime, is_square_fraction, kronecker, val_p
from .poly import Poly
from .polyfactor import factor_poly, is_irreducible
from .quadfield import (
    QuadElem,
    QuadIdeal,
    field_discriminant,
    ideal_valuation,
    quad_prime_splitting,
    uses_half_basis,
)
from .ratfunc import RatFunc

_KIND_RANK = {"p": 0, "poly": 1, "inf": 2, "qprime": 3}

# residue computations that fall back to scanning the residue field give
# up beyond this many candidates
_RESIDUE_SCAN_BOUND = 10_000


@dataclass(frozen=True)
class Place:
    """One place, tagged by kind.

    kind "p"     : rational prime, field Q               (p set)
    kind "poly"  : monic irreducible over F_p or Q       (p = base char or
                   None, poly set, f = degree)
    kind "inf"   : the 1/t place of k(t)                 (p = base char)
    kind "qprime": prime ideal of O_{Q(sqrt(d))}         (ideal, e, f set)

    Total order: kind rank first, then local data; see sort_key.
    """

    kind: str
    p: int | None = None
    poly: Poly | None = None
    ideal: QuadIdeal | None = None
    e: int = 1
    f: int = 1

    # -- constructors -------------------------------------------------------

    @staticmethod
    def rational(p: int) -> "Place":
        if not is_prime(p):
            raise Unsupported(f"{p} is not prime")
        return Place("p", p=p)

    @staticmethod
    def finite_poly(poly: Poly) -> "Place":
        if not poly.is_monic() or not is_irreducible(poly):
            raise Unsupported(f"{poly} is not monic irreducible")
        return Place("poly", p=poly.p, poly=poly, f=poly.degree())

    @staticmethod
    def infinite(base: int | None) -> "Place":
        if base is not None and not is_prime(base):
            raise Unsupported(f"coefficient characteristic {base} not prime")
        return Place("inf", p=base)

    @staticmethod
    def quadratic(P: QuadIdeal) -> "Place":
        d = P.d
        D = field_discriminant(d)
        if P.c == P.a and P.b == 0 and is_prime(P.a):
            # the full ideal (p): prime exactly when p is inert
            p = P.a
            if kronecker(D, p) != -1:
                raise Unsupported(f"({p}) is not prime for d={d}")
            return Place("qprime", p=p, ideal=P, e=1, f=2)
        if P.c == 1 and is_prime(P.a):
            p, b = P.a, P.b
            # b + w must be a root of the minimal polynomial of -w mod p
            if uses_half_basis(d):
                val = b * b + b - (d - 1) // 4
            else:
                val = b * b - d
            if val % p != 0:
                raise Unsupported(f"{P} is not a prime ideal")
            e = 2 if kronecker(D, p) == 0 else 1
            return Place("qprime", p=p, ideal=P, e=e, f=1)
        raise Unsupported(f"{P} is not a prime ideal in HNF shape")

    # -- basic data ---------------------------------------------------------

    def degree(self) -> int:
        """Residue degree; the weight in the k(t) product formula."""
        return self.f

    def residue_char(self) -> int | None:
        return self.p

    def field(self):
        if self.kind == "p":
            return RationalField()
        if self.kind in ("poly", "inf"):
            return FunctionField(self.p)
        return QuadField(self.ideal.d)

    def sort_key(self):
        rank = _KIND_RANK[self.kind]
        if self.kind == "p":
            return (rank, self.p)
        if self.kind == "poly":
            base = (-1,) if self.p is None else (self.p,)
            return (rank, base, self.poly.sort_key())
        if self.kind == "inf":
            return (rank, (-1,) if self.p is None else (self.p,))
        return (rank, self.ideal.d, self.ideal.sort_key())

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.kind == "p":
            return f"p:{self.p}"
        base = "Q(t)" if self.p is None else f"Fp({self.p})"
        if self.kind == "poly":
            return f"poly:{str(self.poly).replace(' ', '')}@{base}"
        if self.kind == "inf":
            return f"inf@{base}"
        I = self.ideal
        if self.f == 2:
            gens = f"({I.a})"
        elif I.b == 0:
            gens = f"({I.a},w)"
        else:
            gens = f"({I.a},{I.b}+w)"
        return f"qprime:{gens}@d={I.d}"


# ---------------------------------------------------------------------------
# residue fields


@dataclass(frozen=True)
class ResidueFieldHandle:
    """Names the residue field of a place.

    variant "Fp": prime field, elements are ints in [0, p)
    variant "Fq": F_p[x]/(modulus), elements are F_p polynomials of
                  degree < deg(modulus)
    variant "Q" : the rationals (degree-one places of Q(t))
    """

    variant: str
    p: int | None = None
    modulus: Poly | None = None

    def order(self) -> int | None:
        if self.variant == "Fp":
            return self.p
        if self.variant == "Fq":
            return self.p ** self.modulus.degree()
        return None

    def __str__(self) -> str:
        if self.variant == "Fp":
            return f"F{self.p}"
        if self.variant == "Fq":
            return f"F{self.p}[x]/({self.modulus})"
        return "Q"


def _omega_min_poly(d: int, p: int) -> Poly:
    """Minimal polynomial of w mod p (monic, degree 2)."""
    if uses_half_basis(d):
        return Poly.make(p, [(-(d - 1) // 4) % p, (p - 1) % p, 1])
    return Poly.make(p, [(-d) % p, 0, 1])


def residue_field(place: Place) -> ResidueFieldHandle:
    if place.kind == "p":
        return ResidueFieldHandle("Fp", p=place.p)
    if place.kind == "poly":
        if place.p is None:
            if place.poly.degree() == 1:
                return ResidueFieldHandle("Q")
            raise Unsupported(
                "number-field residue fields (degree >= 2 over Q(t)) "
                "are outside scope"
            )
        if place.poly.degree() == 1:
            return ResidueFieldHandle("Fp", p=place.p)
        return ResidueFieldHandle("Fq", p=place.p, modulus=place.poly)
    if place.kind == "inf":
        if place.p is None:
            return ResidueFieldHandle("Q")
        return ResidueFieldHandle("Fp", p=place.p)
    d = place.ideal.d
    if place.f == 2:
        return ResidueFieldHandle("Fq", p=place.p, modulus=_omega_min_poly(d, place.p))
    return ResidueFieldHandle("Fp", p=place.p)


# ---------------------------------------------------------------------------
# valuations


def _poly_multiplicity(g: Poly, f: Poly) -> int:
    k = 0
    while g.divides(f):
        f = f // g
        k += 1
    return k


def valuation(place: Place, x) -> int:
    """v(x) at the place; raises ZeroElement on x = 0."""
    x = place.field().coerce(x)
    if place.kind == "p":
        if x == 0:
            raise ZeroElement("valuation of zero")
        return val_p(x, place.p)
    if place.kind == "qprime":
        return ideal_valuation(place.ideal, x)  # raises ZeroElement itself
    if x.is_zero():
        raise ZeroElement("valuation of zero")
    if place.kind == "poly":
        return _poly_multiplicity(place.poly, x.num) - _poly_multiplicity(
            place.poly, x.den
        )
    return x.den.degree() - x.num.degree()


# ---------------------------------------------------------------------------
# support


def support(x, include_infinite: bool = True) -> list[tuple[Place, int]]:
    """All places with nonzero valuation, sorted, as (place, v(x)).

    Over k(t) the infinite place is listed (when its valuation is
    nonzero) unless include_infinite=False; over Q and Q(sqrt(d)) the
    flag is meaningless and ignored.
    """
    K = field_of(x)
    x = K.coerce(x)
    if isinstance(K, RationalField):
        if x == 0:
            raise ZeroElement("support of zero")
        return [(Place.rational(p), e) for p, e in factor_fraction(x)]
    if isinstance(K, FunctionField):
        if x.is_zero():
            raise ZeroElement("support of zero")
        entries: dict[Poly, int] = {}
        for g, e in factor_poly(x.num)[1]:
            entries[g] = entries.get(g, 0) + e
        for g, e in factor_poly(x.den)[1]:
            entries[g] = entries.get(g, 0) - e
        out = [
            (Place.finite_poly(g), e) for g, e in entries.items() if e != 0
        ]
        vinf = x.den.degree() - x.num.degree()
        if include_infinite and vinf != 0:
            out.append((Place.infinite(K.p), vinf))
        out.sort(key=lambda pair: pair[0].sort_key())
        return out
    if x.is_zero():
        raise ZeroElement("support of zero")
    d = x.d
    den = (x.x.denominator * x.y.denominator) // gcd(
        x.x.denominator, x.y.denominator
    )
    u = x * den
    candidates = {p for p, _e in factor_integer(den)}
    nu = int(u.norm())
    candidates.update(p for p, _e in factor_integer(abs(nu)))
    out = []
    for p in sorted(candidates):
        for P, _e, _f in quad_prime_splitting(p, d).primes:
            v = ideal_valuation(P, x)
            if v != 0:
                out.append((Place.quadratic(P), v))
    out.sort(key=lambda pair: pair[0].sort_key())
    return out


# ---------------------------------------------------------------------------
# residue maps


def _fp_inv(a: int, p: int) -> int:
    return pow(a % p, p - 2, p)


def residue(place: Place, x):
    """Image of a unit at the place in its residue field.

    Returns an int for F_p, an F_p polynomial (degree < deg modulus)
    for F_q, a Fraction for Q.  Raises NotAUnit when v(x) != 0.
    """
    x = place.field().coerce(x)
    v = valuation(place, x)
    if v != 0:
        raise NotAUnit(f"valuation {v} at {place}")
    if place.kind == "p":
        return x.numerator * _fp_inv(x.denominator, place.p) % place.p
    if place.kind == "poly":
        if place.p is None:
            # degree-one place t - r: residue is evaluation at r
            residue_field(place)  # raises Unsupported for degree >= 2
            r = -place.poly.coeff(0)
            return x.num.evaluate(r) / x.den.evaluate(r)
        q = place.p ** place.poly.degree()
        num = x.num % place.poly
        den_inv = x.den.pow_mod(q - 2, place.poly)
        out = (num * den_inv) % place.poly
        if place.poly.degree() == 1:
            return out.coeff(0)
        return out
    if place.kind == "inf":
        if place.p is None:
            return Fraction(x.num.lc()) / Fraction(x.den.lc())
        return x.num.lc() * _fp_inv(x.den.lc(), place.p) % place.p
    return _quad_residue(place, x)


def _quad_residue(place: Place, x: QuadElem):
    d, p = x.d, place.p
    den = (x.x.denominator * x.y.denominator) // gcd(
        x.x.denominator, x.y.denominator
    )
    if den % p != 0:
        u = x * den
        ux, uy = int(u.x) % p, int(u.y) % p
        s = _fp_inv(den, p)
        if place.f == 1:
            # w = -b at this place
            return (ux - uy * place.ideal.b) * s % p
        return Poly.make(p, [ux * s % p, uy * s % p])
    # denominator meets p: scan the (small) residue field for the unique
    # representative congruent to x
    if p ** place.f > _RESIDUE_SCAN_BOUND:
        raise Unsupported("residue scan bound exceeded")
    if place.f == 1:
        for r in range(p):
            diff = x - QuadElem.make(d, r, 0)
            if diff.is_zero() or ideal_valuation(place.ideal, diff) >= 1:
                return r
    else:
        for r1 in range(p):
            for r0 in range(p):
                diff = x - QuadElem.make(d, r0, r1)
                if diff.is_zero() or ideal_valuation(place.ideal, diff) >= 1:
                    return Poly.make(p, [r0, r1])
    raise AssertionError("unit with no residue; valuation must be broken")


# ---------------------------------------------------------------------------
# splitting in quadratic extensions


@dataclass(frozen=True)
class PlaceAbove:
    """A place of a quadratic extension over a fixed place below.

    For L = Q(sqrt(d)) the place field carries the actual prime; for
    function-field extensions k(t)(sqrt(g)) only (e, f) are recorded.
    """

    e: int
    f: int
    place: Place | None = None


def places_above(place: Place, ext) -> list[PlaceAbove]:
    """Places of the quadratic extension ext above a given place.

    ext is a QuadField tag (over Q) or a squarefree polynomial g naming
    k(t)(sqrt(g)) (over k(t)).  The records satisfy sum(e*f) = 2.
    Anything non-quadratic is Unsupported.
    """
    if isinstance(ext, QuadField):
        if place.kind != "p":
            raise Unsupported("QuadField extensions live over places of Q")
        split = quad_prime_splitting(place.p, ext.d)
        out = [
            PlaceAbove(e, f, Place.quadratic(P)) for P, e, f in split.primes
        ]
    elif isinstance(ext, Poly):
        out = _function_field_splitting(place, ext)
    else:
        raise Unsupported(f"{ext!r} does not name a quadratic extension")
    assert sum(r.e * r.f for r in out) == 2
    return out


def _function_field_splitting(place: Place, g: Poly) -> list[PlaceAbove]:
    if place.kind not in ("poly", "inf") or place.p != g.p:
        raise Unsupported("extension and place live over different bases")
    if place.p == 2:
        raise Unsupported("splitting in characteristic 2 is out of scope")
    _lc, factors = factor_poly(g)
    if any(e >= 2 for _f, e in factors):
        raise Unsupported(f"{g} is not squarefree")
    if place.kind == "inf":
        if g.degree() % 2 == 1:
            return [PlaceAbove(2, 1)]
        lc = g.lc()
        if place.p is None:
            square = lc > 0 and is_square_fraction(Fraction(lc))
        else:
            square = pow(lc, (place.p - 1) // 2, place.p) == 1
        if square:
            return [PlaceAbove(1, 1), PlaceAbove(1, 1)]
        return [PlaceAbove(1, 2)]
    f = place.poly
    if place.p is None:
        if f.degree() != 1:
            raise Unsupported(
                "splitting at higher-degree places of Q(t) is out of scope"
            )
        val = g.evaluate(-f.coeff(0))
        if val == 0:
            return [PlaceAbove(2, 1)]
        if is_square_fraction(Fraction(val)):
            return [PlaceAbove(1, 1), PlaceAbove(1, 1)]
        return [PlaceAbove(1, 2)]
    h = g % f
    if h.is_zero():
        return [PlaceAbove(2, 1)]
    q = place.p ** f.degree()
    s = h.pow_mod((q - 1) // 2, f)
    if s.is_one():
        return [PlaceAbove(1, 1), PlaceAbove(1, 1)]
    return [PlaceAbove(1, 2)]


# ---------------------------------------------------------------------------
# divisorial place sets


@dataclass(frozen=True)
class DivisorialSet:
    """V minus S: every divisorial place of the field except a finite
    excluded set, with the k(t) infinite place opt-in."""

    field: object
    excluded: tuple[Place, ...] = ()
    include_infinite: bool = False

    def contains(self, place: Place) -> bool:
        if place.field() != self.field:
            return False
        if place.kind == "inf" and not self.include_infinite:
            return False
        return place not in self.excluded

    def __str__(self) -> str:
        parts = [f"V({self.field})"]
        if self.excluded:
            names = ", ".join(str(P) for P in sorted(self.excluded))
            parts.append(f"minus {{{names}}}")
        if self.include_infinite:
            parts.append("with infinity")
        return " ".join(parts)
