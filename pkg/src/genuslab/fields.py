"""Tags for the four supported coefficient fields.

Elements are plain values (Fraction, RatFunc, QuadElem); a field tag
travels alongside to say which arithmetic applies, coerce literals, and
order elements deterministically.  Tags are frozen and hashable so they
can key caches and sit inside divisors and reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import Unsupported
from .intarith import is_prime
from .quadfield import QuadElem, check_squarefree_nonsquare
from .ratfunc import RatFunc


@dataclass(frozen=True)
class RationalField:
    """Q; elements are Fraction."""

    def label(self) -> str:
        return "Q"

    def characteristic(self) -> int:
        return 0

    def zero(self) -> Fraction:
        return Fraction(0)

    def one(self) -> Fraction:
        return Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise Unsupported(f"cannot view {x!r} as a rational number")

    def element_sort_key(self, x):
        q = self.coerce(x)
        return (q.numerator, q.denominator)

    def sort_key(self):
        return (0,)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class FunctionField:
    """k(t) with k = F_p (p an odd prime, or 2) or k = Q (p = None)."""

    p: int | None

    def __post_init__(self):
        if self.p is not None and not is_prime(self.p):
            raise Unsupported(f"coefficient characteristic {self.p} not prime")

    def label(self) -> str:
        return "Q(t)" if self.p is None else f"F{self.p}(t)"

    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    def zero(self) -> RatFunc:
        return RatFunc.zero(self.p)

    def one(self) -> RatFunc:
        return RatFunc.one(self.p)

    def coerce(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            if x.p != self.p:
                raise Unsupported("rational function over the wrong base")
            return x
        if isinstance(x, (int, Fraction)):
            if self.p is None:
                return RatFunc.const(None, Fraction(x))
            q = Fraction(x)
            inv = pow(q.denominator % self.p, self.p - 2, self.p)
            return RatFunc.const(self.p, q.numerator * inv % self.p)
        # bare polynomials are accepted as well
        from .poly import Poly

        if isinstance(x, Poly) and x.p == self.p:
            return RatFunc.from_poly(x)
        raise Unsupported(f"cannot view {x!r} as an element of {self.label()}")

    def element_sort_key(self, x):
        return self.coerce(x).sort_key()

    def sort_key(self):
        return (1, 0 if self.p is None else self.p)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(d)) for squarefree d != 0, 1; elements are QuadElem."""

    d: int

    def __post_init__(self):
        check_squarefree_nonsquare(self.d)

    def label(self) -> str:
        return f"Q(sqrt({self.d}))"

    def characteristic(self) -> int:
        return 0

    def zero(self) -> QuadElem:
        return QuadElem.zero(self.d)

    def one(self) -> QuadElem:
        return QuadElem.one(self.d)

    def coerce(self, x) -> QuadElem:
        if isinstance(x, QuadElem):
            if x.d != self.d:
                raise Unsupported("element of a different quadratic field")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadElem.make(self.d, Fraction(x), 0)
        raise Unsupported(f"cannot view {x!r} as an element of {self.label()}")

    def element_sort_key(self, x):
        return self.coerce(x).sort_key()

    def sort_key(self):
        return (2, self.d)

    def __str__(self) -> str:
        return self.label()


def field_of(x):
    """The tag matching a bare element's type; ints read as rationals."""
    if isinstance(x, (int, Fraction)):
        return RationalField()
    if isinstance(x, RatFunc):
        return FunctionField(x.p)
    if isinstance(x, QuadElem):
        return QuadField(x.d)
    raise Unsupported(f"no supported field holds {x!r}")
