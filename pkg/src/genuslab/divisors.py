"""Divisors, Picard groups, S-unit bases, and H^1 of the norm-one torus.

Everything here is constructive: Picard classes come with witness
divisors, triviality claims come with explicit generators, unit bases
come with their valuation matrices, and the torus cohomology is a pair
of integer-lattice computations (kernel of the norm over image of
sigma - 1) whose brute-force companion is kept alongside as an
independent route.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .config import current_budgets
from .errors import (
    GeneratorSearchFailed,
    PicNontrivial,
    Unsupported,
)
from .fields import FunctionField, QuadField, RationalField, field_of
from .intarith import factor_integer, is_prime
from .linalg import hnf_int, hnf_solve, int_kernel, int_mat_inverse_unimodular, snf_int
from .places import DivisorialSet, Place, support, valuation
from .poly import Poly
from .quadfield import (
    QuadElem,
    QuadIdeal,
    ideal_valuation,
    principal_generator,
    quad_class_group,
    quad_prime_splitting,
    real_quad_h1_certificate,
    quad_fundamental_unit,
    torsion_unit,
)
from .ratfunc import RatFunc

# ---------------------------------------------------------------------------
# divisors


@dataclass(frozen=True)
class Divisor:
    """Formal Z-combination of places of one field, sorted and reduced."""

    field: object
    entries: tuple  # ((Place, int), ...) nonzero, sorted by place

    @staticmethod
    def make(field, pairs) -> "Divisor":
        acc: dict[Place, int] = {}
        items = pairs.items() if isinstance(pairs, dict) else pairs
        for place, m in items:
            if place.field() != field:
                raise Unsupported(f"{place} is not a place of {field}")
            acc[place] = acc.get(place, 0) + int(m)
        ent = tuple(
            sorted(
                ((P, m) for P, m in acc.items() if m),
                key=lambda pm: pm[0].sort_key(),
            )
        )
        return Divisor(field, ent)

    @staticmethod
    def zero(field) -> "Divisor":
        return Divisor(field, ())

    def value(self, place: Place) -> int:
        for P, m in self.entries:
            if P == place:
                return m
        return 0

    def support(self) -> tuple:
        return tuple(P for P, _m in self.entries)

    def degree(self) -> int:
        return sum(m * P.degree() for P, m in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "Divisor") -> "Divisor":
        assert self.field == other.field
        return Divisor.make(self.field, list(self.entries) + list(other.entries))

    def __neg__(self) -> "Divisor":
        return Divisor(self.field, tuple((P, -m) for P, m in self.entries))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(f"{m}*({P})" for P, m in self.entries)


def principal_divisor(x, V: DivisorialSet | None = None) -> Divisor:
    """div(x) restricted to a divisorial place set (default: all finite
    places of x's field, infinity excluded)."""
    K = field_of(x)
    if V is None:
        V = DivisorialSet(K)
    assert V.field == K, "element and place set disagree on the field"
    pairs = [
        (P, m)
        for P, m in support(x, include_infinite=V.include_infinite)
        if V.contains(P)
    ]
    return Divisor.make(K, pairs)


# ---------------------------------------------------------------------------
# Picard groups


@dataclass(frozen=True)
class PicGroup:
    """Pic of the S-integers, presented as a finite abelian quotient.

    invariants are the nontrivial cyclic orders; witnesses hold one
    divisor per cyclic factor whose class generates it.  class_of sends
    a divisor to its exponent label in those factors.
    """

    field: object
    order: int
    invariants: tuple
    witnesses: tuple
    _cg: object = dc_field(default=None, repr=False, compare=False)
    _lmat: tuple = dc_field(default=None, repr=False, compare=False)
    _diag: tuple = dc_field(default=None, repr=False, compare=False)

    def class_of(self, D: Divisor) -> tuple:
        if self._cg is None:
            return ()
        m = len(self._cg.invariants)
        x = [0] * m
        for P, mult in D.entries:
            assert P.kind == "qprime" and P.ideal.d == self._cg.d
            c = self._cg.class_of_ideal(P.ideal)
            for i in range(m):
                x[i] += mult * c[i]
        y = [sum(self._lmat[i][j] * x[j] for j in range(m)) for i in range(m)]
        return tuple(
            y[i] % self._diag[i] for i in range(m) if self._diag[i] > 1
        )

    def is_principal_class(self, D: Divisor) -> bool:
        return all(e == 0 for e in self.class_of(D))

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "cyclic": list(self.invariants),
            "witnesses": [str(D) for D in self.witnesses],
        }


def _ideal_divisor(I: QuadIdeal) -> Divisor:
    """The divisor of an integral ideal: sum of v_P(I) * P."""
    K = QuadField(I.d)
    pairs = []
    for p, _e in factor_integer(I.norm_value()):
        for P, _pe, _pf in quad_prime_splitting(p, I.d).primes:
            v = ideal_valuation(P, I)
            if v:
                pairs.append((Place.quadratic(P), v))
    return Divisor.make(K, pairs)


def pic_group(K, S: tuple = ()) -> PicGroup:
    """Pic of the ring of S-integers of K.

    Q, F_p(t) and Q(t) are principal-ideal territory; Q(sqrt(d)) with
    d < 0 quotients the ideal class group by the classes of S.  Real
    quadratic fields are handled elsewhere via the class-number-one
    certificate.
    """
    if isinstance(K, (RationalField, FunctionField)):
        return PicGroup(K, 1, (), ())
    assert isinstance(K, QuadField)
    for P in S:
        if P.kind != "qprime" or P.ideal.d != K.d:
            raise Unsupported(f"{P} is not a finite place of {K}")
    cg = quad_class_group(K.d)  # Unsupported for d > 0
    m = len(cg.invariants)
    if m == 0:
        return PicGroup(K, 1, (), ())
    cols = [
        [cg.invariants[i] if j == i else 0 for i in range(m)] for j in range(m)
    ]
    cols += [list(cg.class_of_ideal(P.ideal)) for P in S]
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(m)]
    Dg, L, _R = snf_int(mat)
    diag = tuple(Dg[i][i] for i in range(m))
    assert all(diag), "quotient of a finite group must be finite"
    order = 1
    for di in diag:
        order *= di
    invariants = tuple(di for di in diag if di > 1)
    lmat = tuple(tuple(row) for row in L)
    group = PicGroup(K, order, invariants, (), cg, lmat, diag)
    # witness divisors: push each quotient generator back to an ideal
    Linv = int_mat_inverse_unimodular([list(r) for r in lmat])
    witnesses = []
    expected = [i for i in range(m) if diag[i] > 1]
    for pos, i in enumerate(expected):
        x = tuple(Linv[j][i] % cg.invariants[j] for j in range(m))
        W = _ideal_divisor(cg.representative_ideal(x))
        label = group.class_of(W)
        assert label[pos] == 1 and all(
            label[q] == 0 for q in range(len(label)) if q != pos
        )
        witnesses.append(W)
    return PicGroup(K, order, invariants, tuple(witnesses), cg, lmat, diag)


def pic_trivializing_set(K) -> tuple:
    """A small set of places whose classes generate Pic, greedily chosen
    by ascending residue characteristic (empty over PID fields)."""
    if isinstance(K, (RationalField, FunctionField)):
        return ()
    assert isinstance(K, QuadField)
    cg = quad_class_group(K.d)
    m = len(cg.invariants)
    if m == 0:
        return ()

    def closure(subgroup, c):
        new = set(subgroup)
        frontier = [c]
        while frontier:
            g = frontier.pop()
            for h in list(new):
                sm = tuple(
                    (g[i] + h[i]) % cg.invariants[i] for i in range(m)
                )
                if sm not in new:
                    new.add(sm)
                    frontier.append(sm)
        return new

    subgroup = {tuple([0] * m)}
    chosen: list[Place] = []
    p = 2
    bound = max(50, abs(cg.discriminant))
    while len(subgroup) < cg.h:
        if p > bound:
            raise GeneratorSearchFailed(None, bound)
        if is_prime(p):
            for P, _e, f in quad_prime_splitting(p, K.d).primes:
                if f == 2:
                    continue
                c = tuple(cg.class_of_ideal(P))
                if c in subgroup:
                    continue
                chosen.append(Place.quadratic(P))
                subgroup = closure(subgroup, c)
                if len(subgroup) == cg.h:
                    break
        p += 1
    return tuple(chosen)


# ---------------------------------------------------------------------------
# constructive triviality


def _split_signs(pairs) -> tuple[QuadIdeal, QuadIdeal]:
    """(A, B) integral with prod P^e = A / B."""
    d = pairs[0][0].d if pairs else None
    A = None
    B = None
    for P, e in pairs:
        if e > 0:
            A = P ** e if A is None else A * P ** e
        elif e < 0:
            B = P ** (-e) if B is None else B * P ** (-e)
    if A is None:
        A = QuadIdeal.unit_ideal(d)
    if B is None:
        B = QuadIdeal.unit_ideal(d)
    return A, B


def _fractional_generator(pairs) -> QuadElem:
    """Generator of the fractional ideal prod P^e, assuming its class is
    trivial.  Conjugation trick: A/B has the same class as A*conj(B),
    whose generator divided by N(B) does the job."""
    A, B = _split_signs(pairs)
    target = A * B.conj_ideal()
    g = principal_generator(target)
    if g is None:
        raise GeneratorSearchFailed(
            target, current_budgets().generator_norm_factor
        )
    return g / B.norm_value()


def divisor_generator(D: Divisor, V: DivisorialSet | None = None):
    """An element g with principal_divisor(g, V) = D, when one exists.

    Over Q and for finite divisors over k(t) a generator always exists;
    over k(t) with the infinite place in play, None certifies the degree
    obstruction.  Over Q(sqrt(d)) the class obstruction must vanish
    modulo the excluded set S, else PicNontrivial.
    """
    K = D.field
    if V is None:
        V = DivisorialSet(K)
    assert V.field == K
    if D.is_zero():
        return K.one()
    if isinstance(K, RationalField):
        g = Fraction(1)
        for P, m in D.entries:
            g *= Fraction(P.p) ** m
        return g
    if isinstance(K, FunctionField):
        num = Poly.one(K.p)
        den = Poly.one(K.p)
        minf = 0
        for P, m in D.entries:
            if P.kind == "inf":
                minf = m
                continue
            if m > 0:
                num = num * P.poly ** m
            else:
                den = den * P.poly ** (-m)
        g = RatFunc.make(num, den)
        if V.include_infinite:
            if minf != den.degree() - num.degree():
                return None  # no function has that degree pattern
        assert principal_divisor(g, V) == D
        return g
    assert isinstance(K, QuadField)
    pairs = [(P.ideal, m) for P, m in D.entries]
    if K.d > 0:
        real_quad_h1_certificate(K.d)  # Unsupported when not certified
        g = _fractional_generator(pairs)
        assert principal_divisor(g, V) == D
        return g
    S = tuple(P for P in V.excluded)
    pic = pic_group(K, S)
    cg = pic._cg
    if cg is not None:
        # the generator exists iff the class of D dies modulo S-classes
        m = len(cg.invariants)
        target = [0] * m
        for I, e in pairs:
            c = cg.class_of_ideal(I)
            for i in range(m):
                target[i] = (target[i] + e * c[i]) % cg.invariants[i]
        s_classes = [cg.class_of_ideal(P.ideal) for P in S]
        combo = _match_class(target, s_classes, cg.invariants)
        if combo is None:
            raise PicNontrivial(
                "divisor class survives modulo the excluded set",
                group=pic,
            )
        for P, x in zip(S, combo):
            if x:
                pairs.append((P.ideal, -x))
    g = _fractional_generator(pairs)
    assert principal_divisor(g, V) == D
    return g


def _class_order(c, invariants) -> int:
    k = 1
    acc = tuple(c)
    while any(acc[i] % invariants[i] for i in range(len(c))):
        acc = tuple(acc[i] + c[i] for i in range(len(c)))
        k += 1
    return k


def _match_class(target, s_classes, invariants):
    """Exponents x with sum x_j s_j = target mod invariants (brute force
    over the finite box of per-class orders)."""
    m = len(invariants)
    orders = [_class_order(c, invariants) for c in s_classes]
    for combo in itertools.product(*[range(o) for o in orders]):
        acc = [0] * m
        for x, c in zip(combo, s_classes):
            for i in range(m):
                acc[i] += x * c[i]
        if all((acc[i] - target[i]) % invariants[i] == 0 for i in range(m)):
            return combo
    return None


# ---------------------------------------------------------------------------
# S-units


@dataclass(frozen=True)
class UnitBasis:
    """Torsion generator plus a free basis of the S-units.

    valuation_matrix rows follow places, columns follow free; over
    imaginary quadratic fields it is the column-HNF kernel basis of the
    class map, hence visibly of full rank.
    """

    field: object
    torsion: tuple  # (element, order)
    free: tuple
    places: tuple
    valuation_matrix: tuple  # rows by place, columns by free generator
    note: str | None = None

    def rank(self) -> int:
        return len(self.free)

    def to_json(self) -> dict:
        out = {
            "torsion": [str(self.torsion[0]), self.torsion[1]],
            "free": [str(g) for g in self.free],
            "places": [str(P) for P in self.places],
        }
        if self.note:
            out["note"] = self.note
        return out


def _primitive_root(p: int) -> int:
    qs = [q for q, _e in factor_integer(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise AssertionError("no primitive root found below p")


def unit_group(K, S: tuple = ()) -> UnitBasis:
    """Basis of the unit group of the S-integers of K.

    Requires Pic of the S-integers to be trivial (PicNontrivial
    otherwise); generators come with exact valuation vectors, full rank
    by construction.
    """
    S = tuple(sorted(S))
    if isinstance(K, RationalField):
        for P in S:
            if P.kind != "p":
                raise Unsupported(f"{P} is not a finite place of Q")
        free = tuple(Fraction(P.p) for P in S)
        mat = _identity_rows(len(S))
        return UnitBasis(K, (Fraction(-1), 2), free, S, mat)
    if isinstance(K, FunctionField):
        for P in S:
            if P.kind != "poly":
                raise Unsupported(
                    "unit bases keep to finite polynomial places"
                )
        free = tuple(RatFunc.from_poly(P.poly) for P in S)
        mat = _identity_rows(len(S))
        if K.p is None:
            return UnitBasis(
                K,
                (RatFunc.const(None, Fraction(-1)), 2),
                free,
                S,
                mat,
                note=(
                    "constants Q^x are an infinitely generated unit "
                    "summand; the basis lists units modulo constants"
                ),
            )
        g = _primitive_root(K.p)
        return UnitBasis(K, (RatFunc.const(K.p, g), K.p - 1), free, S, mat)
    assert isinstance(K, QuadField)
    d = K.d
    for P in S:
        if P.kind != "qprime" or P.ideal.d != d:
            raise Unsupported(f"{P} is not a finite place of {K}")
    if d > 0:
        return _real_quad_units(K, S)
    pic = pic_group(K, S)
    if pic.order != 1:
        raise PicNontrivial(
            f"Pic of the S-integers has order {pic.order}", group=pic
        )
    cg = pic._cg
    s = len(S)
    if cg is None:
        basis = [tuple(1 if i == j else 0 for i in range(s)) for j in range(s)]
    else:
        m = len(cg.invariants)
        rows = [
            [cg.class_of_ideal(P.ideal)[i] for P in S]
            + [cg.invariants[i] if j == i else 0 for j in range(m)]
            for i in range(m)
        ]
        kernel = int_kernel(rows)
        basis = hnf_int([v[:s] for v in kernel])
        assert len(basis) == s, "class map kernel must have full rank"
    free = []
    for col in basis:
        g = _fractional_generator(list(zip([P.ideal for P in S], col)))
        for i, P in enumerate(S):
            assert valuation(P, g) == col[i]
        free.append(g)
    mat = tuple(tuple(col[i] for col in basis) for i in range(s))
    return UnitBasis(K, torsion_unit(d), tuple(free), S, mat)


def _real_quad_units(K, S) -> UnitBasis:
    real_quad_h1_certificate(K.d)  # Unsupported when h = 1 fails
    free = []
    for P in S:
        g = principal_generator(P.ideal)
        if g is None:
            raise GeneratorSearchFailed(
                P.ideal, current_budgets().generator_norm_factor
            )
        free.append(g)
    eps, _n = quad_fundamental_unit(K.d)
    free.append(eps)
    rows = tuple(
        tuple((1 if i == j else 0) for j in range(len(S))) + (0,)
        for i in range(len(S))
    )
    return UnitBasis(
        K,
        torsion_unit(K.d),
        tuple(free),
        S,
        rows,
        note=(
            "the fundamental unit carries the zero valuation vector; "
            "its independence is archimedean"
        ),
    )


def _identity_rows(n: int) -> tuple:
    return tuple(
        tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
    )


# ---------------------------------------------------------------------------
# H^1 of the norm-one torus (quadratic case)


@dataclass(frozen=True)
class TorusH1Result:
    d: int
    order: int
    invariants: tuple
    torsion_order: int
    unit_rank: int
    sigma_matrix: tuple  # action on Z/t + Z^k exponent coordinates
    places: tuple
    generators: tuple

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "invariants": list(self.invariants),
            "torsion_order": self.torsion_order,
            "unit_rank": self.unit_rank,
            "sigma_matrix": [list(r) for r in self.sigma_matrix],
            "places": [str(P) for P in self.places],
            "generators": [str(g) for g in self.generators],
        }


def tate_h1_minus(torsion_order: int, sigma) -> tuple[int, tuple]:
    """Order and invariants of ker(1 + sigma) / im(sigma - 1) on the
    module Z/t x Z^k, sigma given as an integer matrix on exponent
    columns (torsion coordinate first).

    For the cyclic group of order two this Tate cohomology is the H^1
    of the twisted module, which is why the descent layer leans on it.
    """
    t = torsion_order
    n = len(sigma)
    A = [[sigma[i][j] % t if i == 0 else sigma[i][j] for j in range(n)] for i in range(n)]
    # involution check: A^2 = identity on Z/t x Z^k
    sq = [
        [sum(A[i][l] * A[l][j] for l in range(n)) for j in range(n)]
        for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            want = 1 if i == j else 0
            got = sq[i][j]
            ok = (got - want) % t == 0 if i == 0 else got == want
            assert ok, "sigma must square to the identity on the units"

    N = [[A[i][j] + (1 if i == j else 0) for j in range(n)] for i in range(n)]
    Dm = [[A[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    # kernel lattice {x : N x = 0 mod t e_0} via one slack unknown
    rows = [N[i] + [-t if i == 0 else 0] for i in range(n)]
    ker_cols = [v[:n] for v in int_kernel(rows)]
    im_cols = [[Dm[i][j] for i in range(n)] for j in range(n)]
    im_cols.append([t] + [0] * (n - 1))
    B = hnf_int(ker_cols)
    if not B:
        return 1, ()
    coords = []
    for col in im_cols:
        z = hnf_solve(B, col)
        assert z is not None, "image of sigma - 1 must kill the norm"
        coords.append(z)
    r = len(B)
    Y = [[coords[j][i] for j in range(len(coords))] for i in range(r)]
    Dg, _L, _R = snf_int(Y)
    diag = [Dg[i][i] for i in range(r)]
    assert all(diag), "torus cohomology must be finite"
    order = 1
    for di in diag:
        order *= di
    return order, tuple(di for di in diag if di > 1)


def tate_h1_minus_brute(torsion_order: int, sigma, box: int = 4) -> int:
    """Independent route: enumerate norm-one exponent vectors in a box
    and count them modulo the (sigma - 1)-image lattice."""
    t = torsion_order
    n = len(sigma)
    A = [[sigma[i][j] for j in range(n)] for i in range(n)]
    Dm = [[A[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    im_cols = [[Dm[i][j] for i in range(n)] for j in range(n)]
    im_cols.append([t] + [0] * (n - 1))
    imB = hnf_int(im_cols)
    reps: list[tuple] = []
    ranges = [range(t)] + [range(-box, box + 1)] * (n - 1)
    for x in itertools.product(*ranges):
        nx = [sum((A[i][j] + (1 if i == j else 0)) * x[j] for j in range(n)) for i in range(n)]
        if any(nx[1:]) or nx[0] % t:
            continue
        if any(
            hnf_solve(imB, [x[i] - r[i] for i in range(n)]) is not None
            for r in reps
        ):
            continue
        reps.append(x)
    return len(reps)


def torus_h1(d: int, S) -> TorusH1Result:
    """H^1 of the norm-one torus of Q(sqrt(d)) over the S-integers.

    S lists rational primes (expanded to every place above) or explicit
    quadratic places; the set must be stable under conjugation.  The
    S-unit lattice with its conjugation action feeds tate_h1_minus.
    """
    K = QuadField(d)
    places: set[Place] = set()
    for item in S:
        if isinstance(item, int):
            for P, _e, _f in quad_prime_splitting(item, d).primes:
                places.add(Place.quadratic(P))
        elif isinstance(item, Place) and item.kind == "qprime":
            if item.ideal.d != d:
                raise Unsupported(f"{item} lives in the wrong field")
            places.add(item)
        else:
            raise Unsupported(f"{item!r} does not name a place for S")
    for P in places:
        if Place.quadratic(P.ideal.conj_ideal()) not in places:
            raise Unsupported(
                "S must be stable under conjugation for the torus"
            )
    SL = tuple(sorted(places))
    units = unit_group(K, SL)  # PicNontrivial propagates
    zeta, t = units.torsion
    k = len(units.free)
    sigma_t = _dlog_torsion(zeta.conj(), zeta, t)
    basis_cols = [
        tuple(units.valuation_matrix[i][j] for i in range(len(SL)))
        for j in range(k)
    ]
    lattice_cols = [c for c in basis_cols if any(c)]
    A = [[0] * (k + 1) for _ in range(k + 1)]
    A[0][0] = sigma_t
    for j, g in enumerate(units.free):
        gc = g.conj()
        w = [valuation(P, gc) for P in SL]
        if any(w):
            z = hnf_solve(lattice_cols, w)
            assert z is not None, "conjugate unit left the S-unit lattice"
            exps = _expand_coords(basis_cols, lattice_cols, z)
        else:
            exps = [0] * k
        rem = gc
        for i, e in enumerate(exps):
            if e:
                rem = rem * units.free[i] ** (-e)
        a = _match_torsion_times_unit(rem, zeta, t, units, exps)
        A[0][1 + j] = a % t
        for i in range(k):
            A[1 + i][1 + j] = exps[i]
    order, invariants = tate_h1_minus(t, A)
    return TorusH1Result(
        d,
        order,
        invariants,
        t,
        k,
        tuple(tuple(r) for r in A),
        SL,
        units.free,
    )


def _dlog_torsion(target: QuadElem, zeta: QuadElem, t: int) -> int:
    acc = QuadElem.one(zeta.d)
    for a in range(t):
        if acc == target:
            return a
        acc = acc * zeta
    raise Unsupported("conjugate of the torsion generator is not torsion")


def _expand_coords(basis_cols, lattice_cols, z) -> list:
    """Distribute hnf coordinates (over nonzero columns) back to the full
    generator list; zero-valuation generators get exponent 0 here."""
    exps = []
    it = iter(z)
    for c in basis_cols:
        exps.append(next(it) if any(c) else 0)
    return exps


def _match_torsion_times_unit(rem, zeta, t, units, exps) -> int:
    """rem must equal zeta^a, possibly times a power of a zero-valuation
    free generator (the real fundamental unit); fold that power into
    exps in place and return a."""
    acc = QuadElem.one(zeta.d)
    for a in range(t):
        if acc == rem:
            return a
        acc = acc * zeta
    cols = [
        tuple(units.valuation_matrix[r][i] for r in range(len(units.places)))
        for i in range(len(units.free))
    ]
    for i in (j for j, c in enumerate(cols) if not any(c)):
        eps = units.free[i]
        for e in range(-64, 65):
            cand = rem * eps ** (-e)
            acc = QuadElem.one(zeta.d)
            for a in range(t):
                if acc == cand:
                    exps[i] += e
                    return a
                acc = acc * zeta
    raise Unsupported("unit decomposition failed; torsion search exhausted")
