"""Arithmetic helpers against naive reimplementations."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from powerfree.arith import (
    crt_merge,
    exact_fraction,
    factorize,
    floor_root_rational,
    integer_root,
    is_k_free,
    is_prime,
    is_squarefree,
    mobius,
    primes_upto,
    solve_linear_congruence,
    squarefull_decompose,
)
from powerfree.errors import ParameterError


def naive_factor(n: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def test_primes_upto_matches_trial_division():
    got = primes_upto(500)
    want = [n for n in range(2, 501)
            if all(n % d for d in range(2, int(math.isqrt(n)) + 1))]
    assert got == want
    assert primes_upto(1) == []
    assert primes_upto(2) == [2]


def test_factorize_reconstructs_and_sorts():
    rng = random.Random(90001)
    for _ in range(300):
        n = rng.randrange(2, 10**6)
        fac = factorize(n)
        assert fac == naive_factor(n)
        prod = 1
        for p, e in fac:
            assert e >= 1 and is_prime(p)
            prod *= p**e
        assert prod == n
    assert factorize(1) == []


def test_is_prime_sweep_and_edges():
    small = set(primes_upto(2000))
    for n in range(0, 2000):
        assert is_prime(n) == (n in small)
    # Carmichael numbers must not fool the test
    for n in (561, 1105, 1729, 2465, 6601, 8911):
        assert not is_prime(n)
    assert is_prime(10**9 + 7)
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)


def test_mobius_against_factorization():
    for n in range(1, 3000):
        fac = naive_factor(n)
        if any(e > 1 for _, e in fac):
            want = 0
        else:
            want = -1 if len(fac) % 2 else 1
        assert mobius(n) == want


def test_mobius_multiplicative_on_coprime_pairs():
    rng = random.Random(90002)
    for _ in range(200):
        a = rng.randrange(1, 5000)
        b = rng.randrange(1, 5000)
        if math.gcd(a, b) != 1:
            continue
        assert mobius(a * b) == mobius(a) * mobius(b)


def test_k_free_predicates():
    for n in range(1, 2000):
        fac = naive_factor(n)
        for k in (2, 3, 4):
            want = all(e < k for _, e in fac)
            assert is_k_free(n, k) == want
        assert is_squarefree(n) == is_k_free(n, 2)


def test_integer_root_boundaries():
    rng = random.Random(90003)
    for _ in range(400):
        k = rng.randrange(1, 6)
        r = rng.randrange(1, 10**4)
        n = r**k
        assert integer_root(n, k) == r
        assert integer_root(n - 1, k) == r - 1 if n > 1 else True
        assert integer_root(n + 1, k) == r + (1 if k == 1 else 0)
    assert integer_root(0, 3) == 0
    big = (10**50 + 12345) ** 3
    assert integer_root(big, 3) == 10**50 + 12345


def test_floor_root_rational_exact():
    rng = random.Random(90004)
    for _ in range(400):
        k = rng.randrange(1, 5)
        num = rng.randrange(1, 10**9)
        den = rng.randrange(1, 10**4)
        q = Fraction(num, den)
        r = floor_root_rational(q, k)
        # r = floor(q^(1/k)) iff r^k <= q < (r+1)^k
        assert Fraction(r**k) <= q < Fraction((r + 1) ** k)
    assert floor_root_rational(Fraction(0), 2) == 0
    assert floor_root_rational(Fraction(8, 1), 3) == 2
    assert floor_root_rational(Fraction(7999999, 1000000), 3) == 1


def test_solve_linear_congruence_matches_brute():
    for m in range(1, 25):
        for a in range(-2 * m, 2 * m + 1):
            for b in range(-m, m + 1):
                want = sorted(x for x in range(m) if (a * x - b) % m == 0)
                got = solve_linear_congruence(a, b, m)
                if not want:
                    assert got is None
                    continue
                r, step = got
                assert 0 <= r < step and m % step == 0
                assert sorted(range(r, m, step)) == want


def test_crt_merge_matches_brute_intersection():
    rng = random.Random(90005)
    for _ in range(300):
        m1 = rng.randrange(1, 40)
        m2 = rng.randrange(1, 40)
        r1 = rng.randrange(m1)
        r2 = rng.randrange(m2)
        lcm = m1 * m2 // math.gcd(m1, m2)
        want = [x for x in range(lcm) if x % m1 == r1 and x % m2 == r2]
        got = crt_merge(r1, m1, r2, m2)
        if not want:
            assert got is None
        else:
            assert got == (want[0], lcm)


def test_squarefull_decompose():
    for n in range(1, 5000):
        fac = naive_factor(n)
        full = all(e >= 2 for _, e in fac)
        got = squarefull_decompose(n)
        if not full:
            assert got is None
            continue
        a, b = got
        assert a * a * b**3 == n
        assert is_squarefree(b)
    assert squarefull_decompose(1) == (1, 1)
    assert squarefull_decompose(72) == (3, 2)  # 9 * 8


def test_exact_fraction():
    assert exact_fraction(6, 4) == Fraction(3, 2)
    assert exact_fraction(-6, 4) == Fraction(-3, 2)
    with pytest.raises((ParameterError, ZeroDivisionError)):
        exact_fraction(1, 0)
