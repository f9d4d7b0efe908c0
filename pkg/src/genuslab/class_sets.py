"""Integral models, adelic class sets, and principal-open cocycle gluing.

A coordinate ring here is a ring of S-integers in one of the supported
fields: Z[1/N] inside Q, k[t] (with optional inverted irreducibles) inside
k(t), or an S-order O_d[1/N] inside Q(sqrt(d)).  An adele point is a finite
collection of local invertible frames, one per finite ring place, equal to
the identity elsewhere.  Gluing produces the unique finitely generated
submodule of K^n whose completion at every place matches the given frame;
decomposition factors the adele as (global frame) x (everywhere-integral
unit part), with a non-principal Steinitz class reported as an obstruction
rather than an answer.

Over a principal ring the gluing is done by hand: clear denominators, pass
to the column Hermite form of [A | pi^k I] at each place, and intersect the
per-place models.  Over a quadratic order only rank-one frames and diagonal
frames are glued, through fractional-ideal bookkeeping; the Steinitz class
of the result is the one invariant that survives.

The second half of the module handles 1-cocycles on principal open covers
D(a_1) u ... u D(a_m): validation of the overlap rings, the cocycle
identity, pushout to an adele point (smallest trivializing chart per
place), and a two-route determinant consistency check in which the section
module of the determinant cocycle is compared, with inverted sign, against
the determinant of the glued rank-n module.
"""

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .divisors import (
    Divisor,
    _ideal_divisor,
    divisor_generator,
    pic_group,
    principal_divisor,
)
from .errors import (
    CocycleInvalid,
    CoverInvalid,
    NonPrincipalClass,
    ParseError,
    PicNontrivial,
    SingularComponent,
    Unsupported,
    ZeroElement,
)
from .fields import FunctionField, QuadField, RationalField
from .places import DivisorialSet, Place, support, valuation
from .poly import Poly
from .polyfactor import is_irreducible
from .quadfield import QuadElem, QuadIdeal, ideal_valuation, quad_prime_splitting

# ---------------------------------------------------------------------------
# coordinate rings


@dataclass(frozen=True)
class CoordinateRing:
    """S-integers of a supported field: the base ring plus a finite set of
    inverted finite places."""

    field: object
    inverted: tuple  # Places made invertible, sorted

    @staticmethod
    def integers(invert=()) -> "CoordinateRing":
        """Z, or Z[1/N] with N the product of the inverted primes."""
        places = []
        for p in invert:
            P = p if isinstance(p, Place) else Place.rational(int(p))
            assert P.kind == "p"
            places.append(P)
        return CoordinateRing(RationalField(), _sorted_places(places))

    @staticmethod
    def poly_ring(p=None, invert=()) -> "CoordinateRing":
        """k[t] for k = F_p or Q, optionally with irreducibles inverted."""
        K = FunctionField(p)
        places = []
        for f in invert:
            P = f if isinstance(f, Place) else Place.finite_poly(f)
            assert P.kind == "poly" and P.field() == K
            places.append(P)
        return CoordinateRing(K, _sorted_places(places))

    @staticmethod
    def quad_order(d: int, invert=()) -> "CoordinateRing":
        """The maximal order of Q(sqrt(d)), with every prime above each
        inverted rational prime made invertible."""
        K = QuadField(d)
        places = []
        for p in invert:
            if isinstance(p, Place):
                assert p.kind == "qprime" and p.ideal.d == d
                places.append(p)
                continue
            for P, _e, _f in quad_prime_splitting(int(p), d).primes:
                places.append(Place.quadratic(P))
        return CoordinateRing(K, _sorted_places(places))

    def finite_kind(self) -> str:
        if isinstance(self.field, RationalField):
            return "p"
        if isinstance(self.field, FunctionField):
            return "poly"
        return "qprime"

    def is_ring_place(self, P: Place) -> bool:
        """True when P is a finite place at which this ring is local."""
        if P.field() != self.field or P.kind != self.finite_kind():
            return False
        return P not in self.inverted

    def contains(self, x) -> bool:
        """Membership test via valuations: no pole at any ring place."""
        x = self.field.coerce(x)
        if _elem_is_zero(self.field, x):
            return True
        return all(
            m >= 0
            for P, m in support(x, include_infinite=False)
            if self.is_ring_place(P)
        )

    def __str__(self) -> str:
        K = self.field
        if isinstance(K, RationalField):
            base = "Z"
        elif isinstance(K, FunctionField):
            base = ("Q" if K.p is None else f"F{K.p}") + "[t]"
        else:
            base = f"O({K.d})"
        if not self.inverted:
            return base
        if isinstance(K, RationalField):
            n = 1
            for P in self.inverted:
                n *= P.p
            return f"{base}[1/{n}]"
        if isinstance(K, FunctionField):
            names = "*".join(f"({P.poly})" for P in self.inverted)
            return f"{base}[1/{names}]"
        chars = sorted({P.residue_char() for P in self.inverted})
        n = 1
        for p in chars:
            n *= p
        return f"{base}[1/{n}]"


def _sorted_places(places) -> tuple:
    out = sorted(set(places), key=lambda P: P.sort_key())
    return tuple(out)


# ---------------------------------------------------------------------------
# matrices over the fraction field
#
# A matrix is a tuple of row tuples of field elements.  Everything here is
# n <= 4, so cofactor determinants and Gaussian inverses are the honest
# choice over anything clever.


def _matrix(K, rows, n: int):
    rows = tuple(tuple(K.coerce(x) for x in row) for row in rows)
    if len(rows) != n or any(len(row) != n for row in rows):
        raise Unsupported(f"expected a {n}x{n} matrix")
    return rows


def _identity(K, n: int):
    one, zero = K.one(), K.zero()
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def _elem_is_zero(K, x) -> bool:
    return x == K.zero()


def _mat_mul(K, A, B):
    n = len(A)
    return tuple(
        tuple(
            sum((A[i][k] * B[k][j] for k in range(n)), K.zero())
            for j in range(n)
        )
        for i in range(n)
    )


def _det(K, A):
    n = len(A)
    if n == 1:
        return A[0][0]
    acc = K.zero()
    for j in range(n):
        minor = tuple(
            tuple(row[c] for c in range(n) if c != j) for row in A[1:]
        )
        term = A[0][j] * _det(K, minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def _mat_inv(K, A):
    n = len(A)
    work = [list(row) + list(_identity(K, n)[i]) for i, row in enumerate(A)]
    for col in range(n):
        piv = next(
            (r for r in range(col, n) if not _elem_is_zero(K, work[r][col])),
            None,
        )
        if piv is None:
            raise SingularComponent("matrix is singular")
        work[col], work[piv] = work[piv], work[col]
        inv = K.one() / work[col][col]
        work[col] = [inv * x for x in work[col]]
        for r in range(n):
            if r == col or _elem_is_zero(K, work[r][col]):
                continue
            f = work[r][col]
            work[r] = [a - f * b for a, b in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def _v_integral(K, A, v: Place) -> bool:
    return all(
        _elem_is_zero(K, x) or valuation(v, x) >= 0 for row in A for x in row
    )


def _v_unimodular(K, A, v: Place) -> bool:
    if not _v_integral(K, A, v):
        return False
    return valuation(v, _det(K, A)) == 0


def _matrix_json(A) -> list:
    return [[str(x) for x in row] for row in A]


# ---------------------------------------------------------------------------
# column Hermite reduction over Z and k[t]
#
# One Euclidean elimination serves both entry rings; the ops objects carry
# exactly the operations the loop needs.  Canonical form: pivot rows
# strictly increase, pivots are positive / monic, and the pivot-row entries
# of earlier columns are reduced modulo the pivot.


class _IntOps:
    """Z with |.| as the Euclidean size and positive canonical units."""

    zero = 0
    one = 1

    def is_zero(self, x):
        return x == 0

    def size(self, x):
        return abs(x)

    def divmod(self, a, b):
        return divmod(a, b)

    def canon_unit(self, x):
        return -1 if x < 0 else 1


class _PolyOps:
    """k[t] with degree as the size and monic canonical pivots."""

    def __init__(self, p):
        self.zero = Poly.zero(p)
        self.one = Poly.one(p)

    def is_zero(self, x):
        return x.is_zero()

    def size(self, x):
        return x.degree()

    def divmod(self, a, b):
        return a // b, a % b

    def canon_unit(self, x):
        # the constant u with u*x monic, found without touching coefficients
        return x.monic() // x


def _ops_for(K):
    if isinstance(K, RationalField):
        return _IntOps()
    if isinstance(K, FunctionField):
        return _PolyOps(K.p)
    raise Unsupported(f"no Euclidean entry ring for {K}")


def _col_reduce(cols, pivot_rows: int, ops):
    """Euclidean column elimination.

    Returns (settled, active): settled holds (pivot_row, column) pairs in
    canonical Hermite form over the first pivot_rows rows; active holds the
    columns that vanish on all of those rows (the kernel directions when the
    input was extended by identity tails)."""
    active = [list(c) for c in cols]
    settled = []
    for r in range(pivot_rows):
        live = [c for c in active if not ops.is_zero(c[r])]
        while len(live) > 1:
            live.sort(key=lambda c: ops.size(c[r]))
            base = live[0]
            for c in live[1:]:
                q, _ = ops.divmod(c[r], base[r])
                for t in range(len(c)):
                    c[t] = c[t] - q * base[t]
            live = [c for c in live if not ops.is_zero(c[r])]
        if not live:
            continue
        piv = live[0]
        active.remove(piv)
        u = ops.canon_unit(piv[r])
        if u != ops.one:
            piv[:] = [u * x for x in piv]
        for _r0, c0 in settled:
            q, _ = ops.divmod(c0[r], piv[r])
            if not ops.is_zero(q):
                for t in range(len(c0)):
                    c0[t] = c0[t] - q * piv[t]
        settled.append((r, piv))
    return settled, active


def _col_hnf(cols, nrows: int, ops):
    """Canonical column Hermite form; drops zero columns."""
    settled, _ = _col_reduce(cols, nrows, ops)
    return [c for _r, c in settled]


def _lattice_intersect(cols_a, cols_b, n: int, ops):
    """Columns spanning (span cols_a) ∩ (span cols_b) over the entry ring.

    Kernel trick: a column (x, y) of the kernel of [A | -B] gives the
    intersection element A x = B y; the identity tail below A carries x."""
    ext = []
    for j, c in enumerate(cols_a):
        tail = [ops.one if i == j else ops.zero for i in range(len(cols_a))]
        ext.append(list(c) + tail)
    for c in cols_b:
        ext.append([ops.zero - x for x in c] + [ops.zero] * len(cols_a))
    _settled, active = _col_reduce(ext, n, ops)
    prods = []
    for c in active:
        x = c[n:]
        col = [
            sum((cols_a[j][i] * x[j] for j in range(len(cols_a))), ops.zero)
            for i in range(n)
        ]
        prods.append(col)
    out = _col_hnf(prods, n, ops)
    assert len(out) == n, "full-rank lattices must meet in full rank"
    return out


def _multiplicity(x, pi, ops) -> int:
    """Exact power of pi dividing a nonzero ring element."""
    assert not ops.is_zero(x)
    k = 0
    while True:
        q, r = ops.divmod(x, pi)
        if not ops.is_zero(r):
            return k
        x = q
        k += 1


def _ring_det(cols, ops):
    n = len(cols)
    if n == 1:
        return cols[0][0]
    acc = ops.zero
    for j in range(n):
        minor = [
            [cols[c][i] for i in range(1, n)] for c in range(n) if c != j
        ]
        term = cols[j][0] * _ring_det(minor, ops)
        acc = acc - term if j % 2 else acc + term
    return acc


def _scale_to_ring(K, A):
    """(integer/polynomial matrix, denominator) with A = matrix / den."""
    if isinstance(K, RationalField):
        den = 1
        for row in A:
            for x in row:
                den = den * x.denominator // gcd(den, x.denominator)
        rows = []
        for row in A:
            out = []
            for x in row:
                y = x * den
                assert y.denominator == 1
                out.append(y.numerator)
            rows.append(out)
        return rows, den
    den = Poly.one(K.p)
    for row in A:
        for x in row:
            d = x.den
            den = (den * d) // den.gcd(d)
    rows = []
    for row in A:
        out = []
        for x in row:
            y = x * den
            assert y.den == Poly.one(K.p), "denominator failed to clear"
            out.append(y.num)
        rows.append(out)
    return rows, den


def _ring_uniformizer(v: Place):
    if v.kind == "p":
        return v.p
    assert v.kind == "poly"
    return v.poly


# ---------------------------------------------------------------------------
# adele points


@dataclass(frozen=True)
class AdelePoint:
    """Finite-support family of local invertible frames.

    Components are stored only where they differ from the identity; every
    unlisted finite ring place implicitly carries the identity frame."""

    ring: CoordinateRing
    n: int
    components: tuple  # ((Place, matrix), ...) sorted by place

    @staticmethod
    def make(ring: CoordinateRing, n: int, components) -> "AdelePoint":
        if n < 1:
            raise Unsupported("rank must be positive")
        K = ring.field
        items = (
            components.items() if isinstance(components, dict) else components
        )
        seen = {}
        for P, rows in items:
            if not ring.is_ring_place(P):
                raise Unsupported(f"{P} is not a finite place of {ring}")
            if P in seen:
                raise Unsupported(f"duplicate component at {P}")
            A = _matrix(K, rows, n)
            if _elem_is_zero(K, _det(K, A)):
                raise SingularComponent(f"component at {P} is singular")
            if A != _identity(K, n):
                seen[P] = A
        comps = tuple(
            sorted(seen.items(), key=lambda kv: kv[0].sort_key())
        )
        return AdelePoint(ring, n, comps)

    def support(self) -> tuple:
        return tuple(P for P, _A in self.components)

    def component(self, v: Place):
        for P, A in self.components:
            if P == v:
                return A
        return _identity(self.ring.field, self.n)

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "n": self.n,
            "components": {
                str(P): _matrix_json(A) for P, A in self.components
            },
        }


# ---------------------------------------------------------------------------
# fractional ideals of a quadratic order


@dataclass(frozen=True)
class FracIdeal:
    """Fractional ideal I/den of the maximal order, den a positive integer.

    Normalized so gcd(den, content(I)) = 1, which makes the dataclass
    equality the mathematical one."""

    num: QuadIdeal
    den: int

    @staticmethod
    def make(num: QuadIdeal, den: int = 1) -> "FracIdeal":
        assert den > 0
        # content of an HNF ideal {a, b + c*w} is its c entry
        g = gcd(den, num.c)
        if g > 1:
            num = QuadIdeal.from_generators(
                num.d,
                [
                    QuadElem.make(num.d, Fraction(num.a, g), 0),
                    QuadElem.make(
                        num.d, Fraction(num.b, g), Fraction(num.c, g)
                    ),
                ],
            )
            den //= g
        return FracIdeal(num, den)

    @staticmethod
    def one(d: int) -> "FracIdeal":
        return FracIdeal(QuadIdeal.unit_ideal(d), 1)

    @property
    def d(self) -> int:
        return self.num.d

    def __mul__(self, other: "FracIdeal") -> "FracIdeal":
        assert self.d == other.d
        return FracIdeal.make(self.num * other.num, self.den * other.den)

    def valuation(self, P: Place) -> int:
        assert P.kind == "qprime" and P.ideal.d == self.d
        v = ideal_valuation(P.ideal, self.num)
        if self.den != 1:
            v -= ideal_valuation(
                P.ideal, QuadElem.make(self.d, self.den, 0)
            )
        return v

    def divisor(self) -> Divisor:
        K = QuadField(self.d)
        D = _ideal_divisor(self.num)
        if self.den != 1:
            D = D - principal_divisor(K.coerce(self.den))
        return D

    def __str__(self) -> str:
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/{self.den}"


def _prime_power(P: QuadIdeal, m: int) -> FracIdeal:
    if m >= 0:
        return FracIdeal.make(P**m, 1)
    # P^{-1} = conj(P)/N(P)
    k = -m
    return FracIdeal.make(P.conj_ideal() ** k, P.norm_value() ** k)


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Finitely generated full-rank module inside K^n.

    Over Z[1/N] and k[t] the module is free and carries a column basis over
    K (canonical Hermite scaling).  Over a quadratic order it is stored as
    a pseudo-basis: the direct sum of fractional ideals along the standard
    axes, whose product is the Steinitz class."""

    ring: CoordinateRing
    n: int
    basis: tuple = None  # rows over K, or None
    pseudo: tuple = None  # FracIdeals, or None

    def __post_init__(self):
        quad = isinstance(self.ring.field, QuadField)
        assert (self.pseudo is not None) == quad
        assert (self.basis is not None) == (not quad)
        if self.pseudo is not None:
            assert len(self.pseudo) == self.n

    @staticmethod
    def standard(ring: CoordinateRing, n: int) -> "Lattice":
        if isinstance(ring.field, QuadField):
            return Lattice(
                ring, n, pseudo=tuple(FracIdeal.one(ring.field.d) for _ in range(n))
            )
        return Lattice(ring, n, basis=_identity(ring.field, n))

    def steinitz(self) -> FracIdeal | None:
        if self.pseudo is None:
            return None
        out = FracIdeal.one(self.ring.field.d)
        for I in self.pseudo:
            out = out * I
        return out

    def to_json(self) -> dict:
        out = {"ring": str(self.ring), "n": self.n}
        if self.basis is not None:
            out["basis"] = _matrix_json(self.basis)
        else:
            out["pseudo"] = [str(I) for I in self.pseudo]
            out["steinitz"] = str(self.steinitz())
        return out


# ---------------------------------------------------------------------------
# gluing


def glue_lattice(adele: AdelePoint) -> Lattice:
    """The unique lattice matching every local frame of the adele point.

    At each support place the integral model is the column Hermite form of
    [A | pi^k I] after clearing denominators (k the valuation of det A); the
    global module is the intersection of the per-place models, rescaled by
    the cleared uniformizer powers.  The result is verified at every
    support place and spot-checked at three fresh places."""
    if isinstance(adele.ring.field, QuadField):
        return _glue_quad(adele)
    return _glue_pid(adele)


def _glue_pid(adele: AdelePoint) -> Lattice:
    ring, n = adele.ring, adele.n
    K = ring.field
    ops = _ops_for(K)
    if not adele.components:
        return Lattice.standard(ring, n)
    models = []
    shift = ops.one
    for v, A in adele.components:
        rows, den = _scale_to_ring(K, A)
        pi = _ring_uniformizer(v)
        s = _multiplicity(den, pi, ops) if den != ops.one else 0
        cols = [[rows[i][j] for i in range(n)] for j in range(n)]
        k = _multiplicity(_ring_det(cols, ops), pi, ops)
        pik = pi**k
        cand = cols + [
            [pik if i == j else ops.zero for i in range(n)] for j in range(n)
        ]
        B = _col_hnf(cand, n, ops)
        assert len(B) == n
        models.append(B)
        shift = shift * pi**s
    acc = models[0]
    for B in models[1:]:
        acc = _lattice_intersect(acc, B, n, ops)
    denom = K.coerce(shift)
    basis = tuple(
        tuple(K.coerce(acc[j][i]) / denom for j in range(n))
        for i in range(n)
    )
    lat = Lattice(ring, n, basis=basis)
    _check_glue(adele, lat)
    return lat


def _check_glue(adele: AdelePoint, lat: Lattice) -> None:
    K = adele.ring.field
    Binv = _mat_inv(K, lat.basis)
    for v, A in adele.components:
        U = _mat_mul(K, Binv, A)
        assert _v_unimodular(K, U, v), f"glued basis mismatches frame at {v}"
    for w in _fresh_places(adele.ring, adele.support(), 3):
        assert _v_unimodular(K, lat.basis, w), (
            f"glued basis is not standard at {w}"
        )


def _glue_quad(adele: AdelePoint) -> Lattice:
    ring, n = adele.ring, adele.n
    K = ring.field
    for v, A in adele.components:
        for i in range(n):
            for j in range(n):
                if i != j and not _elem_is_zero(K, A[i][j]):
                    raise Unsupported(
                        "quadratic gluing handles rank one and diagonal "
                        "frames only"
                    )
    ideals = [FracIdeal.one(K.d) for _ in range(n)]
    for v, A in adele.components:
        for j in range(n):
            m = valuation(v, A[j][j])
            ideals[j] = ideals[j] * _prime_power(v.ideal, m)
    # cross-check the ideal valuations against the frames
    for v, A in adele.components:
        for j in range(n):
            assert ideals[j].valuation(v) == valuation(v, A[j][j])
    for w in _fresh_places(ring, adele.support(), 3):
        for I in ideals:
            assert I.valuation(w) == 0
    return Lattice(ring, n, pseudo=tuple(ideals))


_SPOT_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113,
)


def _fresh_places(ring: CoordinateRing, avoid, count: int):
    """Smallest `count` finite ring places outside `avoid` (deterministic,
    so every verification replays byte-for-byte)."""
    avoid = set(avoid)
    K = ring.field
    out = []
    if isinstance(K, RationalField):
        for p in _SPOT_PRIMES:
            P = Place.rational(p)
            if P in avoid or not ring.is_ring_place(P):
                continue
            out.append(P)
            if len(out) == count:
                return out
    elif isinstance(K, FunctionField):
        for f in _monic_polys(K.p):
            if not is_irreducible(f):
                continue
            P = Place.finite_poly(f)
            if P in avoid or not ring.is_ring_place(P):
                continue
            out.append(P)
            if len(out) == count:
                return out
    else:
        for p in _SPOT_PRIMES:
            sp = quad_prime_splitting(p, K.d)
            P = Place.quadratic(sp.primes[0][0])
            if P in avoid or not ring.is_ring_place(P):
                continue
            out.append(P)
            if len(out) == count:
                return out
    raise Unsupported("ran out of spot-check places")


def _monic_polys(p):
    """Monic polynomials of degree >= 1 in a stable order."""
    coeff_pool = range(p) if p is not None else range(-8, 9)
    for deg in range(1, 5):
        for tail in itertools.product(coeff_pool, repeat=deg):
            yield Poly.make(p, list(tail) + [1])


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Decomposition:
    """adele = (global frame) x (unit part), unit part integral with unit
    determinant at every finite ring place.

    Off the stored support both factors are understood to be inverse to
    each other, so only the support components are kept."""

    adele: AdelePoint
    lattice: Lattice
    global_part: tuple  # matrix over K
    unit_parts: tuple  # ((Place, matrix), ...)

    def verify(self) -> bool:
        K = self.adele.ring.field
        units = dict(self.unit_parts)
        if set(units) != set(self.adele.support()):
            return False
        for v, U in self.unit_parts:
            A = self.adele.component(v)
            if _mat_mul(K, self.global_part, U) != A:
                return False
            if not _v_unimodular(K, U, v):
                return False
        g = _det(K, self.global_part)
        if _elem_is_zero(K, g):
            return False
        # the global determinant may only involve support places
        supp = set(self.adele.support())
        for P, m in support(g, include_infinite=False):
            if m and self.adele.ring.is_ring_place(P) and P not in supp:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "adele": self.adele.to_json(),
            "lattice": self.lattice.to_json(),
            "global": _matrix_json(self.global_part),
            "units": {
                str(P): _matrix_json(U) for P, U in self.unit_parts
            },
        }


def decompose_adele(adele: AdelePoint) -> Decomposition:
    """Factor an adele point through a global frame.

    Over principal rings this always succeeds; over a quadratic order the
    rank must be one and a non-principal class divisor raises
    NonPrincipalClass carrying the Steinitz ideal."""
    if isinstance(adele.ring.field, QuadField):
        return _decompose_quad(adele)
    lat = _glue_pid(adele)
    K = adele.ring.field
    Binv = _mat_inv(K, lat.basis)
    units = tuple(
        (v, _mat_mul(K, Binv, A)) for v, A in adele.components
    )
    dec = Decomposition(adele, lat, lat.basis, units)
    assert dec.verify()
    return dec


def _decompose_quad(adele: AdelePoint) -> Decomposition:
    ring = adele.ring
    K = ring.field
    if adele.n != 1:
        raise Unsupported("quadratic decomposition is rank one only")
    lat = _glue_quad(adele)
    V = DivisorialSet(K, excluded=ring.inverted)
    D = Divisor.make(
        K, [(v, valuation(v, A[0][0])) for v, A in adele.components]
    )
    try:
        g = divisor_generator(D, V)
    except PicNontrivial:
        raise NonPrincipalClass(lat.steinitz().num) from None
    units = tuple(
        (v, ((A[0][0] / g,),)) for v, A in adele.components
    )
    dec = Decomposition(adele, lat, ((g,),), units)
    assert dec.verify()
    return dec


# ---------------------------------------------------------------------------
# class sets


@dataclass(frozen=True)
class ClassSetResult:
    """GL_n class set of a coordinate ring: size, class labels in the
    Picard invariants, and one lattice representative per class."""

    ring: CoordinateRing
    n: int
    size: int
    invariants: tuple
    labels: tuple
    representatives: tuple

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "n": self.n,
            "size": self.size,
            "invariants": list(self.invariants),
            "labels": [list(lab) for lab in self.labels],
            "representatives": [L.to_json() for L in self.representatives],
        }


def class_set_gln(ring: CoordinateRing, n: int) -> ClassSetResult:
    """The class set of rank-n lattices up to global frames.

    Principal rings have a single class.  Over a quadratic order the map
    L -> Steinitz(L) is a bijection onto the S-Picard group, so the class
    set is enumerated by Picard labels with representatives
    R^(n-1) + I."""
    if n < 1:
        raise Unsupported("rank must be positive")
    K = ring.field
    if not isinstance(K, QuadField):
        return ClassSetResult(
            ring, n, 1, (), ((),), (Lattice.standard(ring, n),)
        )
    pic = pic_group(K, S=ring.inverted)
    witness_ideals = [
        _divisor_ideal(W) for W in pic.witnesses
    ]
    labels = tuple(
        itertools.product(*[range(m) for m in pic.invariants])
    )
    assert len(labels) == pic.order
    reps = []
    for lab in labels:
        I = FracIdeal.one(K.d)
        for W, e in zip(witness_ideals, lab):
            I = I * FracIdeal.make(W**e)
        pseudo = tuple(
            FracIdeal.one(K.d) for _ in range(n - 1)
        ) + (I,)
        reps.append(Lattice(ring, n, pseudo=pseudo))
    return ClassSetResult(
        ring, n, pic.order, pic.invariants, labels, tuple(reps)
    )


def _divisor_ideal(D: Divisor) -> QuadIdeal:
    """Integral ideal of an effective quadratic divisor."""
    assert isinstance(D.field, QuadField)
    I = QuadIdeal.unit_ideal(D.field.d)
    for P, m in D.entries:
        assert m > 0 and P.kind == "qprime"
        I = I * P.ideal**m
    return I


# ---------------------------------------------------------------------------
# principal open covers and cocycles


@dataclass(frozen=True)
class CechCover:
    """Principal open cover D(a_1) u ... u D(a_m) of the ring's places.

    Every a_i must lie in the ring; the cover condition says no finite ring
    place kills all of them at once."""

    ring: CoordinateRing
    elements: tuple

    @staticmethod
    def make(ring: CoordinateRing, elements) -> "CechCover":
        K = ring.field
        elems = tuple(K.coerce(a) for a in elements)
        if not elems:
            raise CoverInvalid("empty cover")
        for a in elems:
            if _elem_is_zero(K, a):
                raise ZeroElement("cover element is zero")
            if not ring.contains(a):
                raise Unsupported(f"cover element {a} is not in {ring}")
        cover = CechCover(ring, elems)
        bad = cover._bad_locus()
        for P in bad:
            if all(valuation(P, a) > 0 for a in elems):
                raise CoverInvalid(
                    f"no cover element is a unit at {P}", place=P
                )
        return cover

    def _bad_locus(self) -> list:
        seen = set()
        for a in self.elements:
            for P, m in support(a, include_infinite=False):
                if m > 0 and self.ring.is_ring_place(P):
                    seen.add(P)
        return sorted(seen, key=lambda P: P.sort_key())

    @property
    def size(self) -> int:
        return len(self.elements)

    def chart_at(self, P: Place) -> int:
        """Smallest index whose element is a unit at P."""
        for i, a in enumerate(self.elements):
            if valuation(P, a) == 0:
                return i
        raise CoverInvalid(f"no cover element is a unit at {P}", place=P)

    def to_json(self) -> dict:
        return {"ring": str(self.ring), "cover": [str(a) for a in self.elements]}


@dataclass(frozen=True)
class CechCocycle:
    """GL_n 1-cocycle on a principal open cover, stored on i < j overlaps.

    Entries must be regular on the overlap ring R[1/(a_i a_j)] (with the
    inverted places of the ring also allowed in denominators) and the
    determinant must be a unit there; g(j, i) is the stored inverse and
    g(i, i) the identity."""

    cover: CechCover
    n: int
    entries: tuple  # (((i, j), matrix), ...) with i < j, sorted

    @staticmethod
    def make(cover: CechCover, n: int, entries) -> "CechCocycle":
        if n < 1:
            raise Unsupported("rank must be positive")
        ring = cover.ring
        K = ring.field
        items = entries.items() if isinstance(entries, dict) else entries
        seen = {}
        for (i, j), rows in items:
            if not (0 <= i < j < cover.size):
                raise CocycleInvalid(
                    f"overlap index ({i}, {j}) out of range"
                )
            if (i, j) in seen:
                raise CocycleInvalid(f"duplicate overlap ({i}, {j})")
            M = _matrix(K, rows, n)
            det = _det(K, M)
            if _elem_is_zero(K, det):
                raise CocycleInvalid(f"entry at ({i}, {j}) is singular")
            ai, aj = cover.elements[i], cover.elements[j]
            for row in M:
                for x in row:
                    if _elem_is_zero(K, x):
                        continue
                    _check_overlap_regular(ring, x, ai, aj, (i, j), pole_only=True)
            _check_overlap_regular(ring, det, ai, aj, (i, j), pole_only=False)
            seen[(i, j)] = M
        ent = tuple(sorted(seen.items()))
        return CechCocycle(cover, n, ent)

    def g(self, i: int, j: int):
        """Transition frame from chart j to chart i."""
        K = self.cover.ring.field
        if i == j:
            return _identity(K, self.n)
        key = (i, j) if i < j else (j, i)
        for (a, b), M in self.entries:
            if (a, b) == key:
                return M if (i, j) == key else _mat_inv(K, M)
        return _identity(K, self.n)

    def det_cocycle(self) -> "CechCocycle":
        """The GL_1 cocycle of determinants (same cover)."""
        K = self.cover.ring.field
        ent = tuple(
            ((i, j), ((_det(K, M),),)) for (i, j), M in self.entries
        )
        return CechCocycle(self.cover, 1, ent)

    def to_json(self) -> dict:
        out = self.cover.to_json()
        out["n"] = self.n
        out["g"] = {
            f"({i + 1},{j + 1})": _matrix_json(M)
            for (i, j), M in self.entries
        }
        return out


def _check_overlap_regular(ring, x, ai, aj, key, pole_only: bool) -> None:
    """Poles (and, for determinants, zeros) only where a_i a_j vanishes."""
    for P, m in support(x, include_infinite=False):
        if not ring.is_ring_place(P):
            continue
        if (m < 0 if pole_only else m != 0) and not (
            valuation(P, ai) > 0 or valuation(P, aj) > 0
        ):
            word = "pole" if m < 0 else "zero"
            raise CocycleInvalid(
                f"entry at {key} has a {word} at {P} off the overlap"
            )


def cech_verify(cocycle: CechCocycle):
    """Check g(i,k) = g(i,j) g(j,k) on all ordered triples.

    Returns (True, None) or (False, first failing triple)."""
    K = cocycle.cover.ring.field
    m = cocycle.cover.size
    for i, j, k in itertools.permutations(range(m), 3):
        lhs = cocycle.g(i, k)
        rhs = _mat_mul(K, cocycle.g(i, j), cocycle.g(j, k))
        if lhs != rhs:
            return False, (i, j, k)
    return True, None


def cech_to_double_coset(cocycle: CechCocycle) -> AdelePoint:
    """Push a verified cocycle to its adele point.

    Chart 0 is the reference: at each place in the vanishing locus the
    component is the transition g(chart, 0) from the reference to the
    smallest trivializing chart.  Checks, per place: transition frames
    between any two trivializing charts are unimodular (well-definedness),
    the support is finite by construction, and the reference chart itself
    contributes the identity."""
    ok, triple = cech_verify(cocycle)
    if not ok:
        raise CocycleInvalid(
            f"cocycle identity fails on triple {triple}", triple=triple
        )
    cover = cocycle.cover
    ring = cover.ring
    K = ring.field
    comps = {}
    for P in cover._bad_locus():
        units = [
            i for i, a in enumerate(cover.elements)
            if valuation(P, a) == 0
        ]
        assert units, "cover condition guarantees a trivializing chart"
        for i, j in itertools.combinations(units, 2):
            assert _v_unimodular(K, cocycle.g(i, j), P), (
                f"transition ({i}, {j}) is not unimodular at {P}"
            )
        phi = units[0]
        if phi != 0:
            comps[P] = cocycle.g(phi, 0)
    assert cocycle.g(0, 0) == _identity(K, cocycle.n)
    return AdelePoint.make(ring, cocycle.n, comps)


# ---------------------------------------------------------------------------
# determinant consistency


@dataclass(frozen=True)
class DiagramReport:
    """Two independent routes to the determinant class of a glued cocycle.

    rank_route: valuations (or Picard label) of det of the glued rank-n
    module.  section_route: valuations (or label) of the section module of
    the determinant cocycle, computed by scalar bookkeeping only.  The
    section module sits in the inverted coset slot, so consistency is
    rank_route + section_route = 0 at every place."""

    ring: CoordinateRing
    n: int
    ok: bool
    places: tuple
    rank_route: tuple
    section_route: tuple
    rank_label: tuple | None
    section_label: tuple | None

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "n": self.n,
            "ok": self.ok,
            "places": [str(P) for P in self.places],
            "rank_route": list(self.rank_route),
            "section_route": list(self.section_route),
            "rank_label": (
                None if self.rank_label is None else list(self.rank_label)
            ),
            "section_label": (
                None
                if self.section_label is None
                else list(self.section_label)
            ),
        }


def diagram_check(cocycle: CechCocycle) -> DiagramReport:
    """Compare rank-n gluing against determinant-cocycle bookkeeping.

    Route one glues the full adele point and takes the determinant of the
    resulting module.  Route two never builds a matrix: it reads the
    valuations of the determinant scalars chart by chart and assembles the
    section module of the dual side directly, so the two routes meeting
    (with inverted sign) exercises genuinely different code."""
    adele = cech_to_double_coset(cocycle)
    cover = cocycle.cover
    ring = cover.ring
    K = ring.field
    places = tuple(cover._bad_locus())

    # route two: scalar bookkeeping on determinants
    dets = {key: _det(K, M) for key, M in cocycle.entries}

    def delta(i, j):
        if i == j:
            return K.one()
        key = (i, j) if i < j else (j, i)
        x = dets.get(key, K.one())
        return x if (i, j) == key else K.one() / x

    section_vals = tuple(
        -valuation(P, delta(cover.chart_at(P), 0)) for P in places
    )

    # route one: glue the rank-n module and take its determinant
    lat = glue_lattice(adele)
    if isinstance(K, QuadField):
        pic = pic_group(K, S=ring.inverted)
        st = lat.steinitz()
        rank_label = pic.class_of(st.divisor())
        D = Divisor.make(K, list(zip(places, section_vals)))
        section_label = pic.class_of(D)
        invs = pic.invariants
        ok = all(
            (a + b) % m == 0
            for a, b, m in zip(rank_label, section_label, invs)
        )
        rank_vals = tuple(st.valuation(P) for P in places)
        return DiagramReport(
            ring,
            cocycle.n,
            ok,
            places,
            rank_vals,
            section_vals,
            rank_label,
            section_label,
        )
    det_basis = _det(K, lat.basis)
    rank_vals = tuple(valuation(P, det_basis) for P in places)
    for P, m in support(det_basis, include_infinite=False):
        assert not (m and ring.is_ring_place(P) and P not in places), (
            "glued determinant strays outside the vanishing locus"
        )
    ok = all(a + b == 0 for a, b in zip(rank_vals, section_vals))
    return DiagramReport(
        ring, cocycle.n, ok, places, rank_vals, section_vals, None, None
    )


# ---------------------------------------------------------------------------
# JSON fixtures


_KEY_RE = re.compile(r"^\((\d+)\s*,\s*(\d+)\)$")


def cocycle_from_json(
    ring: CoordinateRing, data: dict, parse=None
) -> CechCocycle:
    """Rebuild a cocycle from its fixture form.

    Fixture overlap keys are 1-based strings "(1,2)"; matrices are nested
    string lists.  The default element parser handles integers and
    fractions; richer rings must pass their own."""
    if parse is None:
        def parse(s):
            try:
                return Fraction(str(s))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(
                    f"cannot parse element {s!r}", text=str(s)
                ) from exc
    cover = CechCover.make(ring, [parse(s) for s in data["cover"]])
    entries = {}
    n = None
    for key, rows in data.get("g", {}).items():
        m = _KEY_RE.match(key.strip())
        if not m:
            raise ParseError(f"bad overlap key {key!r}", text=key)
        i, j = int(m.group(1)) - 1, int(m.group(2)) - 1
        mat = [[parse(s) for s in row] for row in rows]
        if n is None:
            n = len(mat)
        entries[(i, j)] = mat
    if n is None:
        n = int(data.get("n", 1))
    return CechCocycle.make(cover, n, entries)
