"""Arithmetic of quadratic fields Q(sqrt(d)), d squarefree.

Elements are stored on the integral basis {1, w} of the maximal order,
where w = (1+sqrt(d))/2 when d = 1 mod 4 and w = sqrt(d) otherwise.
Ideals are two-generator Z-modules in Hermite form [[a, b], [0, c]],
meaning the basis {a, b + c*w} with c | a, c | b, 0 <= b < a.  Class
groups of imaginary fields are computed from reduced binary quadratic
forms; real fields get a fundamental unit (continued fractions, exact
norm certificate) and a Minkowski-bound class-number-one certificate
for small d.  Everything is exact; searches carry explicit budgets.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, isqrt

from .config import current_budgets
from .errors import (
    GeneratorSearchFailed,
    PeriodBudgetExceeded,
    Unsupported,
    ZeroElement,
)
from .intarith import (
    factor_fraction,
    is_prime,
    isqrt_exact,
    kronecker,
    sqrt_mod_p,
)
from .linalg import hnf_int, int_mat_inverse_unimodular, snf_int


def check_squarefree_nonsquare(d: int) -> None:
    if d in (0, 1):
        raise Unsupported(f"d={d} does not define a quadratic field")
    n = abs(d)
    f = 2
    while f * f <= n:
        if n % (f * f) == 0:
            raise Unsupported(f"d={d} is not squarefree")
        f += 1


def uses_half_basis(d: int) -> bool:
    """True when w = (1+sqrt(d))/2, i.e. d = 1 mod 4."""
    return d % 4 == 1


def field_discriminant(d: int) -> int:
    return d if uses_half_basis(d) else 4 * d


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class QuadElem:
    """x + y*w in Q(sqrt(d)) with rational coordinates."""

    d: int
    x: Fraction
    y: Fraction

    @staticmethod
    def make(d: int, x, y) -> "QuadElem":
        return QuadElem(d, Fraction(x), Fraction(y))

    @staticmethod
    def zero(d: int) -> "QuadElem":
        return QuadElem.make(d, 0, 0)

    @staticmethod
    def one(d: int) -> "QuadElem":
        return QuadElem.make(d, 1, 0)

    @staticmethod
    def omega(d: int) -> "QuadElem":
        return QuadElem.make(d, 0, 1)

    @staticmethod
    def sqrt_d(d: int) -> "QuadElem":
        if uses_half_basis(d):
            return QuadElem.make(d, -1, 2)
        return QuadElem.make(d, 0, 1)

    @staticmethod
    def from_sqrt_coords(d: int, u, v) -> "QuadElem":
        """Element u + v*sqrt(d)."""
        u, v = Fraction(u), Fraction(v)
        if uses_half_basis(d):
            return QuadElem(d, u - v, 2 * v)
        return QuadElem(d, u, v)

    def sqrt_coords(self) -> tuple[Fraction, Fraction]:
        """(u, v) with self = u + v*sqrt(d)."""
        if uses_half_basis(self.d):
            return (self.x + self.y / 2, self.y / 2)
        return (self.x, self.y)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def is_one(self) -> bool:
        return self.x == 1 and self.y == 0

    def is_rational(self) -> bool:
        return self.y == 0

    def rational_value(self) -> Fraction:
        assert self.y == 0
        return self.x

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def conj(self) -> "QuadElem":
        if uses_half_basis(self.d):
            return QuadElem(self.d, self.x + self.y, -self.y)
        return QuadElem(self.d, self.x, -self.y)

    def trace(self) -> Fraction:
        if uses_half_basis(self.d):
            return 2 * self.x + self.y
        return 2 * self.x

    def norm(self) -> Fraction:
        if uses_half_basis(self.d):
            return self.x * self.x + self.x * self.y - self.y * self.y * ((self.d - 1) // 4)
        return self.x * self.x - self.d * self.y * self.y

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise TypeError("mixed quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem.make(self.d, other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.d, self.x + o.x, self.y + o.y)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.d, -self.x, -self.y)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.d, self.x - o.x, self.y - o.y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        x1, y1, x2, y2 = self.x, self.y, o.x, o.y
        if uses_half_basis(self.d):
            m = (self.d - 1) // 4
            return QuadElem(self.d, x1 * x2 + m * y1 * y2, x1 * y2 + x2 * y1 + y1 * y2)
        return QuadElem(self.d, x1 * x2 + self.d * y1 * y2, x1 * y2 + x2 * y1)

    __rmul__ = __mul__

    def inverse(self) -> "QuadElem":
        n = self.norm()
        if n == 0:
            raise ZeroElement("inverse of zero")
        c = self.conj()
        return QuadElem(self.d, c.x / n, c.y / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElem.one(self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sort_key(self):
        return (self.x, self.y)

    def __str__(self):
        def fr(q):
            return str(q)

        if self.y == 0:
            return fr(self.x)
        wpart = "w" if self.y == 1 else ("-w" if self.y == -1 else f"{fr(self.y)}*w")
        if self.x == 0:
            return wpart
        sign = "+" if self.y > 0 else "-"
        mag = abs(self.y)
        wmag = "w" if mag == 1 else f"{fr(mag)}*w"
        return f"{fr(self.x)} {sign} {wmag}"

    def __repr__(self):
        return f"QuadElem(d={self.d}, {self})"


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class QuadIdeal:
    """Nonzero integral ideal with Z-basis {a, b + c*w}."""

    d: int
    a: int
    b: int
    c: int

    def __post_init__(self):
        assert self.a > 0 and self.c > 0, "degenerate ideal"
        assert self.a % self.c == 0 and self.b % self.c == 0, "not a module in HNF"
        assert 0 <= self.b < self.a, "HNF entry out of range"
        # closure under multiplication by w
        wb = QuadElem.omega(self.d) * QuadElem.make(self.d, self.b, self.c)
        assert self._contains_int(int(wb.x), int(wb.y)), "module is not an ideal"

    @staticmethod
    def unit_ideal(d: int) -> "QuadIdeal":
        return QuadIdeal(d, 1, 0, 1)

    @staticmethod
    def from_generators(d: int, gens: list[QuadElem]) -> "QuadIdeal":
        cols = []
        w = QuadElem.omega(d)
        for g in gens:
            for z in (g, w * g):
                assert z.is_integral(), "ideal generators must be integral"
                # swapped coordinates (y, x) so the HNF comes out as
                # {a, b + c*w} with the rational generator second
                cols.append((int(z.y), int(z.x)))
        basis = hnf_int(cols)
        if len(basis) < 2:
            # a single nonzero generator z already contributes the
            # independent pair (z, w*z), so rank < 2 means everything was 0
            raise ZeroElement("zero ideal")
        (c, b), (zero_row, a) = basis[0], basis[1]
        assert zero_row == 0
        return QuadIdeal(d, a, b % a, c)

    @staticmethod
    def principal(d: int, z: QuadElem) -> "QuadIdeal":
        if z.is_zero():
            raise ZeroElement("zero ideal")
        den = (z.x.denominator * z.y.denominator) // gcd(z.x.denominator, z.y.denominator)
        scaled = z * den
        assert scaled.is_integral()
        return QuadIdeal.from_generators(z.d, [scaled])

    def norm_value(self) -> int:
        return self.a * self.c

    def content(self) -> int:
        return gcd(gcd(self.a, self.b), self.c)

    def primitive_part(self) -> "QuadIdeal":
        q = self.content()
        return QuadIdeal(self.d, self.a // q, self.b // q, self.c // q)

    def basis(self) -> tuple[QuadElem, QuadElem]:
        return (
            QuadElem.make(self.d, self.a, 0),
            QuadElem.make(self.d, self.b, self.c),
        )

    def _contains_int(self, x: int, y: int) -> bool:
        if y % self.c != 0:
            return False
        return (x - (y // self.c) * self.b) % self.a == 0

    def contains(self, z: QuadElem) -> bool:
        if not z.is_integral():
            return False
        return self._contains_int(int(z.x), int(z.y))

    def contains_ideal(self, other: "QuadIdeal") -> bool:
        return all(self.contains(g) for g in other.basis())

    def __mul__(self, other):
        if isinstance(other, QuadElem):
            return QuadIdeal.from_generators(
                self.d, [g * other for g in self.basis()]
            )
        assert isinstance(other, QuadIdeal) and other.d == self.d
        gens = [g1 * g2 for g1 in self.basis() for g2 in other.basis()]
        return QuadIdeal.from_generators(self.d, gens)

    def __pow__(self, k: int) -> "QuadIdeal":
        assert k >= 0
        result = QuadIdeal.unit_ideal(self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj_ideal(self) -> "QuadIdeal":
        if uses_half_basis(self.d):
            return QuadIdeal(self.d, self.a, (-self.b - self.c) % self.a, self.c)
        return QuadIdeal(self.d, self.a, (-self.b) % self.a, self.c)

    def sort_key(self):
        return (self.norm_value(), self.a, self.b, self.c)

    def __str__(self):
        if self.c == self.a and self.b == 0:
            return f"({self.a})"
        return f"({self.a}, {QuadElem.make(self.d, self.b, self.c)})"


def ideal_valuation(prime: QuadIdeal, target) -> int:
    """v_P(target) for an element or integral ideal at a prime ideal P."""
    budgets = current_budgets()
    if isinstance(target, QuadElem):
        if target.is_zero():
            raise ZeroElement("valuation of zero")
        den = (target.x.denominator * target.y.denominator) // gcd(
            target.x.denominator, target.y.denominator
        )
        if den != 1:
            num = target * den
            return ideal_valuation(prime, num) - ideal_valuation(
                prime, QuadElem.make(target.d, den, 0)
            )
        v = 0
        power = prime
        while v < budgets.valuation_power_bound:
            if not power.contains(target):
                return v
            v += 1
            power = power * prime
        raise Unsupported("valuation power budget exceeded")
    assert isinstance(target, QuadIdeal)
    v = 0
    power = prime
    while v < budgets.valuation_power_bound:
        if not power.contains_ideal(target):
            return v
        v += 1
        power = power * prime
    raise Unsupported("valuation power budget exceeded")


# ---------------------------------------------------------------------------
# prime splitting


@dataclass(frozen=True)
class PrimeSplitting:
    """How a rational prime decomposes: (P, e, f) for each prime above."""

    p: int
    d: int
    symbol: int  # Kronecker (disc | p)
    kind: str  # "split" | "inert" | "ramified"
    primes: tuple[tuple[QuadIdeal, int, int], ...]


def quad_prime_splitting(p: int, d: int) -> PrimeSplitting:
    check_squarefree_nonsquare(d)
    assert is_prime(p), "p must be prime"
    D = field_discriminant(d)
    sym = kronecker(D, p)
    half = uses_half_basis(d)
    if sym == -1:
        return PrimeSplitting(
            p, d, -1, "inert", ((QuadIdeal(d, p, 0, p), 1, 2),)
        )
    if sym == 0:
        if p == 2:
            root = 0 if d % 4 == 2 else 1
        else:
            # double root of the minimal polynomial of w mod p
            root = (1 * pow(2, p - 2, p)) % p if half else 0
        P = QuadIdeal(d, p, (-root) % p, 1)
        return PrimeSplitting(p, d, 0, "ramified", ((P, 2, 1),))
    # split
    if p == 2:
        roots = [0, 1]
    elif half:
        w = sqrt_mod_p(d % p, p)
        inv2 = pow(2, p - 2, p)
        roots = sorted({(1 + w) * inv2 % p, (1 - w) * inv2 % p})
    else:
        w = sqrt_mod_p(d % p, p)
        roots = sorted({w % p, (-w) % p})
    entries = sorted(((-r) % p) for r in roots)
    primes = tuple((QuadIdeal(d, p, b, 1), 1, 1) for b in entries)
    return PrimeSplitting(p, d, 1, "split", primes)


def primes_above(p: int, d: int) -> list[QuadIdeal]:
    return [P for (P, _e, _f) in quad_prime_splitting(p, d).primes]


# ---------------------------------------------------------------------------
# binary quadratic forms (negative discriminant)


@dataclass(frozen=True)
class BQForm:
    a: int
    b: int
    c: int

    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        if not (-self.a < self.b <= self.a <= self.c):
            return False
        if self.a == self.c and self.b < 0:
            return False
        return True

    def reduce(self) -> "BQForm":
        assert self.disc() < 0 and self.a > 0
        a, b, c = self.a, self.b, self.c
        while True:
            if -a < b <= a <= c:
                if a == c and b < 0:
                    b = -b
                return BQForm(a, b, c)
            if c < a or (c == a and b < 0):
                a, b, c = c, -b, a
                continue
            # translate so b lands in (-a, a]; the open end must be -a, else
            # b == -a is a fixed point and the loop never terminates
            k = (a - b) // (2 * a)
            b, c = b + 2 * k * a, a * k * k + b * k + c

    def sort_key(self):
        return (self.a, self.b, self.c)

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def principal_form(D: int) -> BQForm:
    assert D < 0
    if D % 4 == 0:
        return BQForm(1, 0, -D // 4)
    return BQForm(1, 1, (1 - D) // 4)


def enumerate_reduced_forms(D: int) -> list[BQForm]:
    """All reduced positive forms of fundamental discriminant D < 0."""
    assert D < 0 and D % 4 in (0, 1)
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 != 0:
                continue
            if (b * b - D) % (4 * a) != 0:
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            out.append(BQForm(a, b, c))
    return sorted(out, key=BQForm.sort_key)


def ideal_to_form(I: QuadIdeal) -> BQForm:
    """Form class of a primitive ideal: x, y |-> N(a*x + (b+w)*y) / a."""
    J = I.primitive_part()
    d, a, b = J.d, J.a, J.b
    if uses_half_basis(d):
        return BQForm(a, 2 * b + 1, (b * b + b - (d - 1) // 4) // a)
    return BQForm(a, 2 * b, (b * b - d) // a)


def form_to_ideal(F: BQForm, d: int) -> QuadIdeal:
    """The ideal {A, b + w} whose form class is F; inverse of ideal_to_form."""
    if uses_half_basis(d):
        b = ((F.b - 1) // 2) % F.a
    else:
        b = (F.b // 2) % F.a
    return QuadIdeal(d, F.a, b, 1)


# ---------------------------------------------------------------------------
# class group (imaginary)


@dataclass(frozen=True)
class QuadClassGroup:
    """Class group of Q(sqrt(d)), d < 0, as reduced forms with SNF structure.

    invariants are the cyclic orders n_1 | n_2 | ... (trivial factors
    dropped); generator_forms generate the matching cyclic factors.
    """

    d: int
    discriminant: int
    h: int
    invariants: tuple[int, ...]
    generator_forms: tuple[BQForm, ...]
    forms: tuple[BQForm, ...]

    @cached_property
    def _dlog(self) -> dict:
        if not self.invariants:
            return {f: () for f in self.forms}
        gens = [form_to_ideal(F, self.d) for F in self.generator_forms]
        table = {}
        ranges = [range(n) for n in self.invariants]
        for exps in itertools.product(*ranges):
            I = QuadIdeal.unit_ideal(self.d)
            for g, e in zip(gens, exps):
                I = I * g ** e
            table[ideal_to_form(I).reduce()] = exps
        assert len(table) == self.h
        return table

    def class_of_form(self, F: BQForm) -> tuple[int, ...]:
        return self._dlog[F.reduce()]

    def class_of_ideal(self, I: QuadIdeal) -> tuple[int, ...]:
        return self.class_of_form(ideal_to_form(I))

    def is_principal(self, I: QuadIdeal) -> bool:
        return all(e == 0 for e in self.class_of_ideal(I))

    def compose(self, F: BQForm, G: BQForm) -> BQForm:
        prod = form_to_ideal(F, self.d) * form_to_ideal(G, self.d)
        return ideal_to_form(prod).reduce()

    def identity(self) -> BQForm:
        return principal_form(self.discriminant)

    def representative_ideal(self, exps: tuple[int, ...]) -> QuadIdeal:
        I = QuadIdeal.unit_ideal(self.d)
        for F, n, e in zip(self.generator_forms, self.invariants, exps):
            I = I * form_to_ideal(F, self.d) ** (e % n)
        return I


def quad_class_group(d: int) -> QuadClassGroup:
    check_squarefree_nonsquare(d)
    if d > 0:
        raise Unsupported(
            "class groups are only computed for imaginary fields; "
            "real fields get the class-number-one certificate instead"
        )
    D = field_discriminant(d)
    forms = enumerate_reduced_forms(D)
    h = len(forms)
    ident = principal_form(D)

    def compose(F, G):
        return ideal_to_form(form_to_ideal(F, d) * form_to_ideal(G, d)).reduce()

    # greedy generating set with triangular relations
    gens: list[BQForm] = []
    span: dict[BQForm, tuple[int, ...]] = {ident: ()}
    relations: list[list[int]] = []
    for F in forms:
        if F in span:
            continue
        k = 1
        power = F
        while power not in span:
            power = compose(power, F)
            k += 1
        rel = [-e for e in span[power]] + [k]
        new_span = {}
        step = ident
        vecs: list[tuple[BQForm, tuple[int, ...]]] = list(span.items())
        for j in range(k):
            for G, v in vecs:
                new_span[compose(G, step)] = v + (j,)
            step = compose(step, F)
        span = new_span
        for r in relations:
            r.append(0)
        relations.append(rel)
        gens.append(F)
        if len(span) == h:
            break
    assert len(span) == h

    if not gens:
        return QuadClassGroup(d, D, h, (), (), tuple(forms))

    m = len(gens)
    # G = Z^m / row span of relations; Smith form of the transpose gives
    # cyclic factors and, via L^{-1}, generators for each factor
    Mt = [[relations[j][i] for j in range(m)] for i in range(m)]
    Dm, L, _R = snf_int(Mt)
    Linv = int_mat_inverse_unimodular(L)
    orders = [_form_order(g, compose, ident) for g in gens]
    invariants = []
    generator_forms = []
    for i in range(m):
        di = Dm[i][i]
        assert di != 0, "class group must be finite"
        if di == 1:
            continue
        invariants.append(di)
        F = ident
        for j in range(m):
            for _ in range(Linv[j][i] % orders[j]):
                F = compose(F, gens[j])
        assert _form_order(F, compose, ident) == di
        generator_forms.append(F)
    cg = QuadClassGroup(
        d, D, h, tuple(invariants), tuple(generator_forms), tuple(forms)
    )
    prod = 1
    for n in invariants:
        prod *= n
    assert prod == h
    return cg


def _form_order(F: BQForm, compose, ident) -> int:
    k = 1
    power = F
    while power != ident:
        power = compose(power, F)
        k += 1
    return k


# ---------------------------------------------------------------------------
# fundamental unit and torsion


def quad_fundamental_unit(d: int) -> tuple[QuadElem, int]:
    """(u, N(u)) with u > 1 the fundamental unit of Q(sqrt(d)), d > 1.

    Continued-fraction expansion of w; the first convergent whose
    associated element has norm +-1 is the fundamental unit.
    """
    check_squarefree_nonsquare(d)
    assert d > 1, "fundamental units exist only for real fields"
    budgets = current_budgets()
    s = isqrt(d)
    half = uses_half_basis(d)
    P, Q = (1, 2) if half else (0, 1)
    hm1, hm2 = 1, 0
    km1, km2 = 0, 1
    for _ in range(budgets.cf_period_bound):
        assert Q > 0, "continued-fraction state degenerated"
        a = (P + s) // Q
        hcur = a * hm1 + hm2
        kcur = a * km1 + km2
        x, y = (hcur - kcur, kcur) if half else (hcur, kcur)
        u = QuadElem.make(d, x, y)
        n = u.norm()
        if abs(n) == 1:
            return u, int(n)
        P = a * Q - P
        Q = (d - P * P) // Q
        hm2, hm1 = hm1, hcur
        km2, km1 = km1, kcur
    raise PeriodBudgetExceeded(d, budgets.cf_period_bound)


def torsion_unit(d: int) -> tuple[QuadElem, int]:
    """(generator, order) of the torsion part of the unit group."""
    check_squarefree_nonsquare(d)
    if d == -1:
        return QuadElem.omega(-1), 4
    if d == -3:
        return QuadElem.omega(-3), 6
    return QuadElem.make(d, -1, 0), 2


# ---------------------------------------------------------------------------
# principal generator search


def principal_generator(I: QuadIdeal):
    """A generator of I if principal, else None (certified for d < 0).

    Imaginary fields: the norm-form equation has finitely many solutions,
    all enumerated, so None certifies non-principality.  Real fields: the
    search window is derived from the fundamental unit, which again makes
    the enumeration complete.
    """
    d = I.d
    N = I.norm_value()
    half = uses_half_basis(d)
    if d < 0:
        for x, y in _norm_form_solutions_imag(d, N):
            z = QuadElem.make(d, x, y)
            if I.contains(z):
                return z
        return None
    eps, _ = quad_fundamental_unit(d)
    s = isqrt(d)
    ex, ey = int(eps.x), int(eps.y)
    E = ex + abs(ey) * (s + 2)  # integer over-estimate of eps
    ymax = isqrt(N * (E + 1) * (E + 1) // d) + 2
    for y in range(0, ymax + 1):
        if half:
            for target in (4 * N, -4 * N):
                uu = d * y * y + target
                if uu < 0:
                    continue
                u = isqrt_exact(uu)
                if u is None:
                    continue
                for usign in ((u, -u) if u else (0,)):
                    if (usign - y) % 2 != 0:
                        continue
                    z = QuadElem.make(d, (usign - y) // 2, y)
                    if abs(z.norm()) == N and I.contains(z):
                        return z
        else:
            for target in (N, -N):
                xx = d * y * y + target
                if xx < 0:
                    continue
                x = isqrt_exact(xx)
                if x is None:
                    continue
                for xsign in ((x, -x) if x else (0,)):
                    z = QuadElem.make(d, xsign, y)
                    if abs(z.norm()) == N and I.contains(z):
                        return z
    return None


def _norm_form_solutions_imag(d: int, N: int):
    """All (x, y), y >= 0, with N(x + y*w) = N > 0; complete for d < 0."""
    assert d < 0
    half = uses_half_basis(d)
    absd = -d
    if half:
        ymax = isqrt(4 * N // absd)
        for y in range(0, ymax + 1):
            uu = 4 * N - absd * y * y
            if uu < 0:
                continue
            u = isqrt_exact(uu)
            if u is None:
                continue
            for usign in (u, -u) if u else (0,):
                if (usign - y) % 2 == 0:
                    yield ((usign - y) // 2, y)
        return
    ymax = isqrt(N // absd)
    for y in range(0, ymax + 1):
        xx = N - absd * y * y
        if xx < 0:
            continue
        x = isqrt_exact(xx)
        if x is None:
            continue
        for xsign in (x, -x) if x else (0,):
            yield (xsign, y)


def is_principal_certified(I: QuadIdeal) -> bool:
    g = principal_generator(I)
    return g is not None


# ---------------------------------------------------------------------------
# class-number-one certificate for small real fields


def real_quad_h1_certificate(d: int) -> dict:
    """Certify h(Q(sqrt(d))) = 1 via the Minkowski bound, d > 1.

    Every prime of norm below sqrt(D)/2 must come out principal with an
    explicit generator; raises Unsupported when a search fails.
    """
    check_squarefree_nonsquare(d)
    assert d > 1
    D = field_discriminant(d)
    bound = (isqrt(D) + 2) // 2  # integer upper bound for sqrt(D)/2
    witnesses = []
    p = 2
    while p <= bound:
        if is_prime(p):
            split = quad_prime_splitting(p, d)
            for P, _e, _f in split.primes:
                if P.norm_value() > bound:
                    continue
                g = principal_generator(P)
                if g is None:
                    raise Unsupported(
                        f"cannot certify class number one for d={d}: "
                        f"prime {P} is not principal"
                    )
                witnesses.append((P, g))
        p += 1
    return {"d": d, "minkowski_bound": bound, "witnesses": witnesses}


# ---------------------------------------------------------------------------
# norm equations  s^2 - a q^2 = n  over Q


def solve_norm_equation(a: int, n) -> tuple[Fraction, Fraction] | None:
    """Rational (s, q) with s^2 - a*q^2 = n, or None when impossible.

    Works in Q(sqrt(a)): enumerate fractional ideals whose norm matches
    the signed prime pattern of n (class-group window for the split
    primes, plus square-class rescue factors), test principality, and
    match signs with units.  None is certified for a < 0 and for real a
    with a class-number-one certificate.
    """
    check_squarefree_nonsquare(a)
    n = Fraction(n)
    if n == 0:
        return (Fraction(0), Fraction(0))
    if a < 0 and n < 0:
        return None

    if a < 0:
        cg = quad_class_group(a)
        hnum = cg.h
    else:
        cg = None
        real_quad_h1_certificate(a)  # raises Unsupported when not certified
        hnum = 1

    exps = factor_fraction(n)  # signed [(p, e)]
    # per-prime candidate lists of (ideal-part, rational denominator)
    prime_options: list[list[tuple[QuadIdeal, int]]] = []
    for p, e in exps:
        split = quad_prime_splitting(p, a)
        if split.kind == "inert":
            if e % 2 != 0:
                return None
            # contributes the rational factor p^(e/2); both signs of the
            # exponent fold into numerator/denominator handling below
            opts = [_rational_power_option(a, p, e // 2)]
        elif split.kind == "ramified":
            P = split.primes[0][0]
            opts = [_prime_power_option(P, e)]
        else:
            P = split.primes[0][0]
            opts = []
            # P^i conj(P)^j with i + j = e; scan i - j over a window of
            # width 2h around every residue so each ideal class appears
            for delta in range(-(abs(e) + 2 * hnum), abs(e) + 2 * hnum + 1):
                if (delta - e) % 2 != 0:
                    continue
                i = (e + delta) // 2
                j = (e - delta) // 2
                opts.append(_split_pair_option(P, i, j))
        prime_options.append(opts)

    # square-class rescue factors P^2/(p): one per class-group generator
    rescue_options: list[list[tuple[QuadIdeal, int]]] = []
    if cg is not None and cg.invariants:
        for gen_form, order in zip(cg.generator_forms, cg.invariants):
            opts = [(QuadIdeal.unit_ideal(a), 1)]
            P = form_to_ideal(gen_form, a)
            for t in range(1, order):
                opts.append(_split_pair_option(P, t, -t))
            rescue_options.append(opts)

    unit_flip = None
    if a > 0:
        eps, eps_norm = quad_fundamental_unit(a)
        if eps_norm == -1:
            unit_flip = eps

    for combo in itertools.product(*prime_options, *rescue_options):
        I = QuadIdeal.unit_ideal(a)
        den = Fraction(1)
        for part, dpart in combo:
            I = I * part
            den = den * dpart
        g = principal_generator(I)
        if g is None:
            continue
        cand = []
        z = QuadElem.make(a, g.x, g.y) / den
        cand.append(z)
        if unit_flip is not None:
            cand.append(z * unit_flip)
        for z in cand:
            if z.norm() == n:
                u, v = z.sqrt_coords()
                assert u * u - a * v * v == n
                return (u, v)
    return None


def _rational_power_option(d, p, k):
    if k >= 0:
        return (QuadIdeal(d, p, 0, p) ** k, 1)
    return (QuadIdeal.unit_ideal(d), p ** (-k))


def _prime_power_option(P, e):
    if e >= 0:
        return (P ** e, 1)
    # P^e = conj(P)^(-e) / p^(-e)
    return (P.conj_ideal() ** (-e), P.norm_value() ** (-e))


def _split_pair_option(P, i, j):
    """(integral ideal, denominator) representing P^i conj(P)^j."""
    I = QuadIdeal.unit_ideal(P.d)
    den = 1
    p = P.norm_value()
    if i >= 0:
        I = I * P ** i
    else:
        I = I * P.conj_ideal() ** (-i)
        den *= p ** (-i)
    if j >= 0:
        I = I * P.conj_ideal() ** j
    else:
        I = I * P ** (-j)
        den *= p ** (-j)
    return (I, den)
