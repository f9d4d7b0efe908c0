"""Exact integer arithmetic: primality, factorization, residue symbols.

Factorization is trial division up to a bound followed by a fixed Pollard rho
budget; anything that survives both raises FactorBoundExceeded rather than
returning a silently composite "prime".  Primality is deterministic
Miller-Rabin below 2^64 and Baillie-PSW above (recorded as the certification
level; no general certificates above 64 bits).
"""

from fractions import Fraction
from math import gcd, isqrt

from .config import current_budgets
from .errors import FactorBoundExceeded, ZeroElement

Rat = Fraction

# deterministic Miller-Rabin bases for n < 2^64
_MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _miller_rabin(n: int, base: int) -> bool:
    # returns True if n is a strong probable prime to this base
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(base % n, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _lucas_strong_prp(n: int) -> bool:
    # strong Lucas test with Selfridge parameters; n odd, not a square
    d = 5
    while True:
        k = kronecker(d, n)
        if k == -1:
            break
        if k == 0 and abs(d) != n:
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    p, q = 1, (1 - d) // 4
    m = n + 1
    s = 0
    while m % 2 == 0:
        m //= 2
        s += 1
    # Lucas sequences U_m, V_m mod n by binary ladder
    u, v, qk = 1, p, q % n
    for bit in bin(m)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) % n, (d * u + p * v) % n
            if u % 2:
                u += n
            if v % 2:
                v += n
            u, v = u // 2 % n, v // 2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int) -> bool:
    """Deterministic below 2^64; Baillie-PSW (no known counterexample) above."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < 2**64:
        return all(_miller_rabin(n, b) for b in _MR_BASES_64)
    if isqrt(n) ** 2 == n:
        return False
    return _miller_rabin(n, 2) and _lucas_strong_prp(n)


def _pollard_rho(n: int, iterations: int) -> int | None:
    # Brent's cycle variant with deterministic parameter sweep
    if n % 2 == 0:
        return 2
    for c in range(1, 20):
        x = y = 2
        d = 1
        count = 0
        while d == 1 and count < iterations:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
            count += 1
        if 1 < d < n:
            return d
    return None


def factor_integer(n: int, bound: int | None = None) -> list[tuple[int, int]]:
    """Factor |n| into primes, returned as sorted (prime, exponent) pairs.

    The sign is the caller's business: factor_integer(-12) == factor_integer(12).
    Raises FactorBoundExceeded when a composite cofactor survives trial
    division to `bound` and the Pollard rho budget.
    """
    if n == 0:
        raise ZeroElement("cannot factor 0")
    budgets = current_budgets()
    if bound is None:
        bound = budgets.factor_trial_bound
    n = abs(n)
    factors: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # wheel mod 30 for the remaining trial divisors
    p = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p <= bound and p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m <= bound * bound or is_prime(m):
            # composite m <= bound^2 would have had a divisor <= bound
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m, budgets.pollard_iterations)
        if d is None:
            raise FactorBoundExceeded(m, bound)
        stack.append(d)
        stack.append(m // d)
    return sorted(factors.items())


def factor_fraction(q: Fraction) -> list[tuple[int, int]]:
    """Signed-exponent factorization of a nonzero rational."""
    if q == 0:
        raise ZeroElement("cannot factor 0")
    num = factor_integer(q.numerator)
    den = factor_integer(q.denominator)
    out = dict(num)
    for p, e in den:
        out[p] = out.get(p, 0) - e
    return sorted((p, e) for p, e in out.items() if e != 0)


def val_p(q: Fraction | int, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if isinstance(q, int):
        q = Fraction(q)
    if q == 0:
        raise ZeroElement("valuation of 0")
    v = 0
    n = q.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = q.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), the full extension of Jacobi/Legendre."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    t = 0
    while n % 2 == 0:
        n //= 2
        t += 1
    if t:
        if a % 2 == 0:
            return 0
        if t % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for odd prime p."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return 1 if r == 1 else -1


def sqrt_mod_p(a: int, p: int) -> int | None:
    """A square root of a mod p, or None; deterministic (Tonelli-Shanks
    with the smallest quadratic non-residue as auxiliary)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def isqrt_exact(n: int) -> int | None:
    """The integer square root when n is a perfect square, else None."""
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def is_square_fraction(q: Fraction) -> bool:
    return q >= 0 and is_square_int(q.numerator) and is_square_int(q.denominator)


def squarefree_part(n: int) -> int:
    """The squarefree kernel of n (sign preserved): n = kernel * square."""
    if n == 0:
        raise ZeroElement("squarefree part of 0")
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factor_integer(n):
        if e % 2:
            out *= p
    return sign * out


def crt(residues: list[int], moduli: list[int]) -> int:
    """Chinese remainder for pairwise coprime moduli."""
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        g, p, _ = xgcd(m, n)
        assert g == 1, "moduli must be coprime"
        x = (x + (r - x) * p % n * m) % (m * n)
        m *= n
    return x


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t
