"""Polynomial factorization over F_p and Q with certified irreducible output.

F_p[t]: squarefree split, then distinct-degree, then equal-degree splitting
(Cantor-Zassenhaus for odd p, trace maps for p = 2) with a deterministic
sweep of trial elements, so results are reproducible.

Q[t]: content + Yun squarefree decomposition + Zassenhaus: monicize, factor
mod a good prime, Hensel lift past the Mignotte bound, exhaustive subset
recombination.  Fine at desk degrees; factoring refuses degrees above the
budget.
"""

from fractions import Fraction
from math import isqrt

from .config import current_budgets
from .errors import DegreeBudgetExceeded, ZeroElement
from .intarith import is_prime
from .poly import Poly


# ---------------------------------------------------------------------------
# F_p[t]


def _squarefree_decomposition_fp(f: Poly) -> list[tuple[Poly, int]]:
    """[(g_i, m_i)] with f = lc * prod g_i^{m_i}, g_i monic squarefree."""
    p = f.p
    f = f.monic()
    out: dict[Poly, int] = {}

    def accumulate(g: Poly, mult: int):
        if g.degree() >= 1:
            out[g] = out.get(g, 0) + mult

    def split(f: Poly, mult: int):
        d = f.derivative()
        if d.is_zero():
            # f = v(t)^p since Frobenius fixes the prime field
            root = Poly.make(p, [f.coeff(i * p) for i in range(f.degree() // p + 1)])
            split(root, mult * p)
            return
        w = f.gcd(d)
        c = f // w
        m = 1
        while c.degree() >= 1:
            y = w.gcd(c)
            accumulate(c // y, mult * m)
            c, w = y, w // y
            m += 1
        if w.degree() >= 1:
            split(w, mult)  # all multiplicities divisible by p here

    split(f, 1)
    return sorted(out.items(), key=lambda gm: gm[0].sort_key())


def _distinct_degree_fp(f: Poly) -> list[tuple[Poly, int]]:
    """[(product_of_irreducibles_of_degree_d, d)] for monic squarefree f."""
    p = f.p
    out = []
    h = Poly.x(p)
    d = 0
    while f.degree() >= 2 * (d + 1):
        d += 1
        h = h.pow_mod(p, f)
        g = f.gcd(h - Poly.x(p))
        if g.degree() >= 1:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree() >= 1:
        out.append((f, f.degree()))
    return out


def _trial_elements(p: int, max_degree: int):
    """Deterministic sweep of non-constant polynomials of bounded degree."""
    for deg in range(1, max_degree + 1):
        def vectors(i):
            if i > deg:
                yield []
                return
            rng = range(1, p) if i == deg else range(p)
            for c in rng:
                for rest in vectors(i + 1):
                    yield [c] + rest

        for coeffs in vectors(0):
            yield Poly.make(p, coeffs)


def _equal_degree_fp(f: Poly, d: int) -> list[Poly]:
    """Split a monic squarefree product of degree-d irreducibles."""
    p = f.p
    if f.degree() == d:
        return [f]
    n = f.degree()
    for u in _trial_elements(p, n - 1):
        if p == 2:
            s = u % f
            acc = s
            for _ in range(d - 1):
                s = s.pow_mod(2, f)
                acc = (acc + s) % f
            g = f.gcd(acc)
        else:
            e = (p**d - 1) // 2
            s = u.pow_mod(e, f)
            g = f.gcd(s - Poly.one(p))
        if 1 <= g.degree() < f.degree():
            return sorted(
                _equal_degree_fp(g, d) + _equal_degree_fp(f // g, d),
                key=Poly.sort_key,
            )
    raise AssertionError("equal-degree split exhausted its element sweep")


def factor_fp(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicity, sorted."""
    out = []
    for g, m in _squarefree_decomposition_fp(f):
        for h, d in _distinct_degree_fp(g):
            for irr in _equal_degree_fp(h, d):
                out.append((irr, m))
    return sorted(out, key=lambda fm: fm[0].sort_key())


def is_irreducible_fp(f: Poly) -> bool:
    """Rabin's deterministic test: t^(p^n) = t mod f plus coprimality at
    every maximal proper subfield degree."""
    p, n = f.p, f.degree()
    if n <= 0:
        return False
    if n == 1:
        return True
    x = Poly.x(p)
    if x.pow_mod(p**n, f) != x % f:
        return False
    for q in {q for q, _ in _factor_small(n)}:
        h = x.pow_mod(p ** (n // q), f)
        if f.gcd(h - x).degree() != 0:
            return False
    return True


def _factor_small(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


# ---------------------------------------------------------------------------
# Q[t]


def _yun_squarefree_q(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm on monic f: [(g_i, i)], f = prod g_i^i, g_i squarefree."""
    f = f.monic()
    fp = f.derivative()
    g = f.gcd(fp)
    if g.is_one():
        return [(f, 1)]
    out = []
    b = f // g
    c = fp // g
    d = c - b.derivative()
    for i in range(1, f.degree() + 2):
        if b.degree() < 1:
            break
        h = b.gcd(d)
        if h.degree() >= 1:
            out.append((h, i))
        b = b // h
        c = d // h
        d = c - b.derivative()
    assert b.degree() < 1, "Yun decomposition failed to terminate"
    return out


def _center(f: Poly, m: int) -> Poly:
    half = m // 2
    return Poly.make(None, [((c + half) % m) - half for c in f.int_coeffs()])


def _mignotte_bound(f: Poly) -> int:
    # coefficient bound for monic integer divisors of monic integer f
    ints = f.int_coeffs()
    norm2 = isqrt(sum(c * c for c in ints)) + 1
    return 2 ** (f.degree() + 1) * norm2


def _poly_bezout(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """s, t with s*a + t*b = 1 in F_p[t] for coprime a, b."""
    p = a.p
    old_r, r = a, b
    old_s, s = Poly.one(p), Poly.zero(p)
    old_t, t = Poly.zero(p), Poly.one(p)
    while not r.is_zero():
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    inv = pow(old_r.constant_value(), p - 2, p)
    return Poly.const(p, inv) * old_s, Poly.const(p, inv) * old_t


def _hensel_pair(f, g, h, s, t, p, target):
    """Quadratically lift f = g*h from mod p to mod p^k >= target.

    Inputs monic g, h with s*g + t*h = 1 mod p, deg s < deg h,
    deg t < deg g.  Returns (modulus, g, h) with the congruence mod modulus.
    """
    m = p
    while m < target:
        m2 = m * m

        def tr(poly):
            return _center(poly, m2)

        e = tr(f - g * h)
        q, r = (s * e).divmod(h)
        g, h = tr(g + t * e + q * g), tr(h + r)
        b = tr(s * g + t * h - Poly.one(None))
        c, d = (s * b).divmod(h)
        s, t = tr(s - d), tr(t - t * b - c * g)
        m = m2
    return m, g, h


def _lift_tree(f: Poly, factors: list[Poly], p: int, target: int) -> list[Poly]:
    """Lift monic f = prod factors (mod p) to centered monic lifts mod
    the smallest p-power >= target; valid simultaneously mod that power."""
    P = p
    while P < target:
        P *= p
    if len(factors) == 1:
        return [_center(f, P)]
    half = len(factors) // 2
    left, right = factors[:half], factors[half:]
    gbar = Poly.one(p)
    for u in left:
        gbar = gbar * u
    hbar = Poly.one(p)
    for u in right:
        hbar = hbar * u
    sbar, tbar = _poly_bezout(gbar, hbar)
    _, g, h = _hensel_pair(
        f,
        Poly.lift_from(gbar),
        Poly.lift_from(hbar),
        Poly.lift_from(sbar),
        Poly.lift_from(tbar),
        p,
        P,
    )
    g, h = _center(g, P), _center(h, P)
    return _lift_tree(g, left, p, target) + _lift_tree(h, right, p, target)


def _zassenhaus_monic(f: Poly) -> list[Poly]:
    """Irreducible monic integer factors of a monic squarefree integer poly."""
    if f.degree() == 1:
        return [f]
    p = 1
    while True:
        p = _next_prime(p)
        fbar = f.reduce_mod(p)
        if fbar.degree() == f.degree() and fbar.gcd(fbar.derivative()).degree() == 0:
            break
    modular = [g for g, _ in factor_fp(fbar)]
    if len(modular) == 1:
        return [f]
    target = 2 * _mignotte_bound(f) + 1
    lifted = _lift_tree(f, modular, p, target)
    P = p
    while P < target:
        P *= p

    from itertools import combinations

    remaining = list(range(len(lifted)))
    out = []
    current = f
    r = 1
    while 2 * r <= len(remaining):
        hit = None
        for subset in combinations(remaining, r):
            cand = Poly.one(None)
            for i in subset:
                cand = cand * lifted[i]
            cand = _center(cand, P)
            if cand.divides(current):
                hit = subset
                out.append(cand)
                current = current // cand
                break
        if hit is None:
            r += 1
        else:
            remaining = [i for i in remaining if i not in hit]
    if current.degree() >= 1:
        out.append(current)
    return out


def _zassenhaus(f: Poly) -> list[Poly]:
    """Irreducible factors of a primitive squarefree integer polynomial
    with lc > 0, returned primitive with lc > 0."""
    lc = f.int_coeffs()[-1]
    if lc == 1:
        return _zassenhaus_monic(f)
    n = f.degree()
    # monicize: g(x) = lc^(n-1) * f(x/lc) is monic with integer coefficients
    g = Poly.make(None, [c * lc ** (n - 1 - i) for i, c in enumerate(f.int_coeffs())])
    out = []
    for h in _zassenhaus_monic(g):
        back = Poly.make(None, [c * Fraction(lc) ** i for i, c in enumerate(h.coeffs)])
        _, prim = back.content_and_primitive()
        out.append(prim)
    return out


def _next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


def factor_q(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors over Q with multiplicity, sorted."""
    out: list[tuple[Poly, int]] = []
    for g, m in _yun_squarefree_q(f):
        _, prim = g.content_and_primitive()
        for irr in _zassenhaus(prim):
            out.append((irr.monic(), m))
    return sorted(out, key=lambda fm: fm[0].sort_key())


def is_irreducible_q(f: Poly) -> bool:
    if f.degree() <= 0:
        return False
    factors = factor_q(f)
    return len(factors) == 1 and factors[0][1] == 1


# ---------------------------------------------------------------------------
# shared entry points


def factor_poly(f: Poly):
    """(leading_coefficient, [(monic_irreducible, exponent)]) sorted.

    The leading coefficient times the product of the factor powers
    reproduces f exactly.  Degrees beyond the budget raise
    DegreeBudgetExceeded; every returned factor passes the matching
    irreducibility certificate.
    """
    if f.is_zero():
        raise ZeroElement("cannot factor the zero polynomial")
    bound = current_budgets().poly_degree_bound
    if f.degree() > bound:
        raise DegreeBudgetExceeded(f.degree(), bound)
    lc = f.lc()
    if f.is_const():
        return lc, []
    if f.p is None:
        return lc, factor_q(f)
    return lc, factor_fp(f)


def is_irreducible(f: Poly) -> bool:
    if f.p is None:
        return is_irreducible_q(f)
    return is_irreducible_fp(f)


def poly_roots(f: Poly) -> list:
    """Roots in the coefficient field, read off the linear factors."""
    _, factors = factor_poly(f)
    roots = []
    for g, m in factors:
        if g.degree() == 1:
            c = g.coeff(0)
            root = (-c) % g.p if g.p is not None else -c
            roots.extend([root] * m)
    return sorted(
        roots,
        key=lambda r: (r.numerator, r.denominator) if isinstance(r, Fraction) else r,
    )
