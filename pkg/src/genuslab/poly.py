"""Dense univariate polynomials over F_p or Q, as immutable coefficient tuples.

A Poly stores ascending coefficients with no trailing zeros, together with the
characteristic: `p` a prime for F_p[t] (coefficients are ints in [0, p)), or
None for Q[t] (coefficients are Fractions).  Polynomials are hashable, totally
ordered by (degree, coefficient tuple), and usable as dictionary keys, which
is what the place machinery needs.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .errors import ZeroElement


def _norm_coeffs(p, coeffs):
    if p is None:
        coeffs = [Fraction(c) for c in coeffs]
    else:
        coeffs = [int(c) % p for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True, order=False)
class Poly:
    p: int | None
    coeffs: tuple

    # -- construction -----------------------------------------------------

    @classmethod
    def make(cls, p, coeffs) -> "Poly":
        return cls(p, _norm_coeffs(p, coeffs))

    @classmethod
    def const(cls, p, c) -> "Poly":
        return cls.make(p, [c])

    @classmethod
    def zero(cls, p) -> "Poly":
        return cls(p, ())

    @classmethod
    def one(cls, p) -> "Poly":
        return cls.make(p, [1])

    @classmethod
    def x(cls, p) -> "Poly":
        return cls.make(p, [0, 1])

    # -- basic structure --------------------------------------------------

    def degree(self) -> int:
        """Degree, with deg 0 = -1 by convention."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def lc(self):
        if not self.coeffs:
            raise ZeroElement("leading coefficient of 0")
        return self.coeffs[-1]

    def constant_value(self):
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        if not self.coeffs:
            return 0 if self.p else Fraction(0)
        return self.coeffs[0]

    def coeff(self, i: int):
        if i < len(self.coeffs):
            return self.coeffs[i]
        return 0 if self.p else Fraction(0)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    # -- ring operations --------------------------------------------------

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.p != self.p:
                raise TypeError("mixed characteristics")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly.make(
            self.p, [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return Poly.make(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly.make(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent on a polynomial")
        result = Poly.one(self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _inv_coeff(self, c):
        if self.p is None:
            return Fraction(1) / c
        return pow(c, self.p - 2, self.p)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree() < other.degree():
            return Poly.zero(self.p), self
        inv_lc = self._inv_coeff(other.lc())
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        quo = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree()]
            if self.p is not None:
                c %= self.p
            if not c:
                continue
            q = c * inv_lc
            if self.p is not None:
                q %= self.p
            quo[k] = q
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= q * b
        return Poly.make(self.p, quo), Poly.make(self.p, rem[: other.degree()])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def divides(self, other: "Poly") -> bool:
        if self.is_zero():
            return other.is_zero()
        return (other % self).is_zero()

    def monic(self) -> "Poly":
        if self.is_zero():
            raise ZeroElement("monic of 0")
        if self.is_monic():
            return self
        inv = self._inv_coeff(self.lc())
        return Poly.make(self.p, [c * inv for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        """Monic gcd (or 0 when both are 0)."""
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def derivative(self) -> "Poly":
        return Poly.make(
            self.p, [i * c for i, c in enumerate(self.coeffs)][1:]
        )

    def evaluate(self, x):
        """Horner evaluation at a point of the coefficient field (or any
        ring element supporting + and *)."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if acc is None:
            return 0 if self.p else Fraction(0)
        if self.p is not None and isinstance(acc, int):
            acc %= self.p
        return acc

    def pow_mod(self, e: int, modulus: "Poly") -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.p)
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result

    # -- rational-specific helpers ----------------------------------------

    def content_and_primitive(self) -> tuple[Fraction, "Poly"]:
        """Over Q: write f = c * g with g in Z[t] primitive, lc(g) > 0."""
        assert self.p is None
        if self.is_zero():
            return Fraction(0), self
        from math import gcd as igcd

        den = reduce(lambda a, b: a * b // igcd(a, b),
                     (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(igcd, (abs(c) for c in ints))
        if ints[-1] < 0:
            g = -g
        prim = Poly.make(None, [c // g for c in ints])
        return Fraction(g, den), prim

    def int_coeffs(self) -> list[int]:
        assert self.p is None
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise ValueError("not an integer polynomial")
            out.append(c.numerator)
        return out

    def reduce_mod(self, q: int) -> "Poly":
        """Reduction of an integer polynomial mod a prime q."""
        return Poly.make(q, self.int_coeffs())

    @classmethod
    def lift_from(cls, f: "Poly") -> "Poly":
        """Lift an F_p polynomial to Z[t] (coefficients in [0, p))."""
        assert f.p is not None
        return cls.make(None, list(f.coeffs))

    # -- ordering and display ---------------------------------------------

    def sort_key(self):
        if self.p is None:
            key = tuple(
                (c.numerator, c.denominator) for c in self.coeffs
            )
        else:
            key = self.coeffs
        return (self.degree(), key)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __le__(self, other):
        return self.sort_key() <= other.sort_key()

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i in range(self.degree(), -1, -1):
            c = self.coeff(i)
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                var = "t" if i == 1 else f"t^{i}"
                if c == 1:
                    terms.append(var)
                elif c == -1:
                    terms.append(f"-{var}")
                else:
                    terms.append(f"{c}*{var}")
        out = " + ".join(terms)
        return out.replace("+ -", "- ")

    def __repr__(self):
        tag = "Q" if self.p is None else f"F{self.p}"
        return f"Poly[{tag}]({self})"
