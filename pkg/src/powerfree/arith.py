"""Exact integer and rational helpers shared by the counting modules.

Factorization is deterministic for every input up to 2**64: trial division
by a fixed prime table, a Miller-Rabin pass over a witness set that is
provably complete far beyond 64 bits, and Brent-cycle splitting (with a
deterministic parameter schedule) for cofactors whose prime factors all
exceed the table.  No randomness enters anywhere.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import gmpy2
import numpy as np

from .errors import ParameterError

_FACTOR_LIMIT = 1 << 64

# Witnesses covering all n < 3.317e24 (Sorenson-Webster), far past 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_upto(n: int) -> list[int]:
    """All primes <= n, ascending."""
    if n < 2:
        return []
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return [int(p) for p in np.nonzero(flags)[0]]


_TABLE = primes_upto(1 << 16)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for all n below 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int) -> int:
    """A nontrivial factor of composite odd n, deterministic schedule."""
    if n % 2 == 0:
        return 2
    c = 1
    while True:
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            y = ys
            while g == 1:
                y = (y * y + c) % n
                g = math.gcd(abs(x - y), n)
        if g != n:
            return g
        c += 1  # cycle degenerated; retry with the next increment


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization of n as sorted (prime, exponent) pairs.

    Accepts 1 <= n <= 2**64.  The result multiplies back to n exactly.
    """
    if not 1 <= n <= _FACTOR_LIMIT:
        raise ParameterError(f"factorize wants 1 <= n <= 2**64, got {n}")
    out: dict[int, int] = {}
    m = n
    for p in _TABLE:
        if p * p > m:
            break
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        v = stack.pop()
        if is_prime(v):
            out[v] = out.get(v, 0) + 1
            continue
        g = _brent(v)
        stack.append(g)
        stack.append(v // g)
    return sorted(out.items())


def mobius(n: int) -> int:
    """Mobius function; 0 on any square-divisible n."""
    if n <= 0:
        raise ParameterError("mobius wants n >= 1")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def is_squarefree(n: int) -> bool:
    return mobius(n) != 0


def is_k_free(n: int, k: int) -> bool:
    """True when no prime k-th power divides n (n >= 1, k >= 2)."""
    if n < 1:
        raise ParameterError("is_k_free wants n >= 1")
    if k < 2:
        raise ParameterError("is_k_free wants k >= 2")
    return all(e < k for _, e in factorize(n))


def squarefull_decompose(n: int) -> Optional[tuple[int, int]]:
    """Write square-full n as a**2 * b**3 with b squarefree.

    Returns the unique (a, b), or None when some prime divides n exactly
    once.  Not-square-full is a normal outcome, not a fault.
    """
    if n < 1:
        raise ParameterError("squarefull_decompose wants n >= 1")
    a, b = 1, 1
    for p, e in factorize(n):
        if e == 1:
            return None
        if e % 2 == 0:
            a *= p ** (e // 2)
        else:
            b *= p
            a *= p ** ((e - 3) // 2)
    return a, b


def integer_root(n: int, k: int) -> int:
    """floor(n ** (1/k)) computed exactly (n >= 0, k >= 1)."""
    if k < 1:
        raise ParameterError("integer_root wants k >= 1")
    if n < 0:
        raise ParameterError("integer_root wants n >= 0")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    # integer Newton from a power-of-two seed >= the root; the iteration is
    # monotone decreasing, so floats never enter and huge n stays exact
    r = 1 << -(-n.bit_length() // k)
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def floor_root_rational(q: Fraction, k: int) -> int:
    """floor(q ** (1/k)) for rational q >= 0.

    Uses floor(q**(1/k)) == floor(floor(q)**(1/k)), valid because the
    k-th powers below q and below floor(q) are the same integers.
    """
    if q < 0:
        raise ParameterError("floor_root_rational wants q >= 0")
    return integer_root(q.numerator // q.denominator, k)


def exact_fraction(num: int, den: int) -> Fraction:
    """Reduced Fraction built with a subquadratic gcd.

    fractions.Fraction runs the quadratic pure-Python gcd on construction,
    which is minutes-slow on the million-digit products the Euler-constant
    paths produce; gmpy2's gcd makes it milliseconds.  Falls back to the
    plain constructor if the interpreter's Fraction layout ever changes.
    """
    if den == 0:
        raise ZeroDivisionError("exact_fraction with zero denominator")
    if den < 0:
        num, den = -num, -den
    g = int(gmpy2.gcd(num, den))
    num //= g
    den //= g
    try:
        f = Fraction.__new__(Fraction)
        f._numerator = num
        f._denominator = den
        return f
    except AttributeError:  # pragma: no cover
        return Fraction(num, den)


def solve_linear_congruence(a: int, b: int, m: int) -> Optional[tuple[int, int]]:
    """Solutions of a*x == b (mod m) as (x0, period), or None.

    When solvable the full solution set is {x0 + t*period}, with
    period == m // gcd(a, m) and 0 <= x0 < period.
    """
    if m < 1:
        raise ParameterError("solve_linear_congruence wants m >= 1")
    a %= m
    b %= m
    g = math.gcd(a, m)
    if b % g:
        return None
    mg = m // g
    if mg == 1:
        return 0, 1
    x0 = (b // g) * pow(a // g, -1, mg) % mg
    return x0, mg


def crt_merge(r1: int, m1: int, r2: int, m2: int) -> Optional[tuple[int, int]]:
    """Combine x == r1 (mod m1) and x == r2 (mod m2); None if inconsistent."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    t = (r2 - r1) // g * pow(m1 // g, -1, m2 // g) % (m2 // g) if m2 != g else 0
    return (r1 + m1 * t) % lcm, lcm
