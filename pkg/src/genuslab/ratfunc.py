"""Rational functions k(t) for k = F_p or Q, as reduced num/den pairs.

Canonical form: gcd(num, den) = 1 and den monic, so equality and hashing are
structural.  The characteristic rides along on the component polynomials.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import ZeroElement
from .poly import Poly


@dataclass(frozen=True)
class RatFunc:
    num: Poly
    den: Poly

    @classmethod
    def make(cls, num: Poly, den: Poly | None = None) -> "RatFunc":
        if den is None:
            den = Poly.one(num.p)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            return cls(Poly.zero(num.p), Poly.one(num.p))
        g = num.gcd(den)
        if g.degree() >= 1:
            num, den = num // g, den // g
        if not den.is_monic():
            lc = den.lc()
            inv = den._inv_coeff(lc)
            num = Poly.const(num.p, inv) * num
            den = den.monic()
        return cls(num, den)

    @classmethod
    def from_poly(cls, f: Poly) -> "RatFunc":
        return cls.make(f)

    @classmethod
    def const(cls, p, c) -> "RatFunc":
        return cls.make(Poly.const(p, c))

    @classmethod
    def zero(cls, p) -> "RatFunc":
        return cls.make(Poly.zero(p))

    @classmethod
    def one(cls, p) -> "RatFunc":
        return cls.make(Poly.one(p))

    @classmethod
    def t(cls, p) -> "RatFunc":
        return cls.make(Poly.x(p))

    @property
    def p(self):
        return self.num.p

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        if self.is_zero():
            return 0 if self.p is not None else Fraction(0)
        return self.num.constant_value()

    def is_poly(self) -> bool:
        return self.den.is_one()

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise TypeError("mixed characteristics")
            return other
        if isinstance(other, Poly):
            return RatFunc.make(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc.make(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RatFunc.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc.make(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            return (RatFunc.one(self.p) / self) ** (-e)
        return RatFunc.make(self.num**e, self.den**e)

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroElement("inverse of 0")
        return RatFunc.make(self.den, self.num)

    def evaluate(self, x):
        den = self.den.evaluate(x)
        if den == 0:
            raise ZeroDivisionError("pole at evaluation point")
        num = self.num.evaluate(x)
        if self.p is not None:
            return num * pow(den, self.p - 2, self.p) % self.p
        return Fraction(num) / den

    def sort_key(self):
        return (self.num.sort_key(), self.den.sort_key())

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        tag = "Q" if self.p is None else f"F{self.p}"
        return f"RatFunc[{tag}]({self})"
