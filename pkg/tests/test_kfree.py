"""k-free counting against per-n oracles and exact identities."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from powerfree.arith import factorize, is_k_free
from powerfree.errors import BudgetExceededError, ParameterError
from powerfree.kfree import (
    LinearFormSystem,
    PairParams,
    buchstab_check,
    count_k_free,
    count_pairs,
    count_tuple,
    euler_constant,
    rho_multiplicative,
    rho_pair,
    rho_tuple,
    sieve_k_free,
    sieve_lemma_residual,
    window_congruence_count,
    xi_primes,
)


def test_sieve_window_flags_match_per_n():
    rng = random.Random(41001)
    for _ in range(20):
        k = rng.choice((2, 3, 4))
        lo = rng.randrange(1, 50000)
        hi = lo + rng.randrange(1, 400)
        win = sieve_k_free(lo, hi, k)
        for n in range(lo, hi + 1):
            assert win.flags[n - lo] == is_k_free(n, k)


def test_count_k_free_small_sweep():
    for k in (2, 3, 4):
        naive = 0
        for n in range(1, 2001):
            naive += is_k_free(n, k)
            if n % 97 == 0:  # sampled prefixes; the endpoint is always checked
                assert count_k_free(n, k) == naive
        assert count_k_free(2000, k) == naive


def test_count_k_free_frozen_values():
    # regression anchors computed by this sieve and cross-checked per-n above
    assert count_k_free(100, 2) == 61
    assert count_k_free(10**4, 2) == 6083
    assert count_k_free(10**6, 2) == 607926
    assert count_k_free(10**4, 3) == 8319


def test_count_pairs_example_and_oracle():
    assert count_pairs(20, PairParams(2, 1)) == 7
    rng = random.Random(41002)
    for _ in range(12):
        k = rng.choice((2, 3))
        h = rng.choice((1, -1, 3))
        x = rng.randrange(50, 1500)
        naive = sum(
            1 for n in range(1, x + 1)
            if n + h >= 1 and is_k_free(n, k) and is_k_free(n + h, k)
        )
        assert count_pairs(x, PairParams(k, h)) == naive


def test_count_pairs_windows_and_shards():
    params = PairParams(2, 1)
    for x in (100, 777, 3000):
        upto = count_pairs(x, params)
        upto2 = count_pairs(2 * x, params)
        dy = count_pairs(x, params, window="dyadic")
        assert dy == upto2 - upto
        for shards in (2, 3, 5):
            assert count_pairs(x, params, shards=shards) == upto
    with pytest.raises(ParameterError):
        count_pairs(100, params, window="open")


def test_count_tuple_agrees_with_pairs():
    for x in (100, 1000):
        for h in (1, 3):
            system = LinearFormSystem(((1, 0), (1, h)), 2)
            assert count_tuple(x, system) == count_pairs(x, PairParams(2, h))
    triple = LinearFormSystem(((1, 0), (1, 1), (1, 2)), 2)
    naive = sum(
        1 for n in range(1, 501)
        if all(is_k_free(n + b, 2) for b in (0, 1, 2))
    )
    assert count_tuple(500, triple) == naive
    assert count_tuple(500, triple, shards=4) == naive


def test_linear_form_system_validation():
    with pytest.raises(ParameterError):
        LinearFormSystem(((1, 0), (1, 0)), 2)  # duplicate form
    with pytest.raises(ParameterError):
        LinearFormSystem(((0, 1), (1, 0)), 2)  # zero coefficient
    with pytest.raises(ParameterError):
        LinearFormSystem(((1, 0),), 1)  # k too small


def test_rho_pair_matches_residue_count():
    for p in (2, 3, 5, 7, 11):
        for k in (2, 3):
            for h in (1, -1, 3):
                params = PairParams(k, h)
                mod = p**k
                want = sum(
                    1 for r in range(mod)
                    if r % mod == 0 or (r + h) % mod == 0
                )
                assert rho_pair(p, params) == want


def test_rho_tuple_matches_residue_count():
    system = LinearFormSystem(((1, 0), (1, 1), (1, 2)), 2)
    for p in (2, 3, 5, 7):
        mod = p**2
        want = sum(
            1 for r in range(mod)
            if any((r + b) % mod == 0 for b in (0, 1, 2))
        )
        assert rho_tuple(p, system) == want
    with pytest.raises(BudgetExceededError):
        rho_tuple(10**9 + 7, system, budget=10)


def test_rho_multiplicative():
    params = PairParams(2, 1)
    for m in (6, 10, 15, 30):
        parts = 1
        for p, _ in factorize(m):
            parts *= rho_pair(p, params)
        assert rho_multiplicative(m, params) == parts
    with pytest.raises(ParameterError):
        rho_multiplicative(12, params)  # not squarefree


def test_xi_primes_oracle():
    system = LinearFormSystem(((1, 0), (1, 1)), 2)
    for n in range(1, 500):
        want = sorted(
            {p for p, e in factorize(n) if e >= 2}
            | {p for p, e in factorize(n + 1) if e >= 2}
        )
        assert xi_primes(n, system) == want


def test_window_congruence_count_dual_route():
    """The congruence route must agree with direct xi membership."""
    params = PairParams(2, 1)
    system = LinearFormSystem(((1, 0), (1, 1)), 2)
    rng = random.Random(41003)
    for _ in range(10):
        x = rng.randrange(50, 800)
        m = rng.choice((2, 3, 5, 6, 10, 15))
        observed, predicted, slack = window_congruence_count(x, m, params)
        need = [p for p, _ in factorize(m)]
        direct = sum(
            1 for n in range(x + 1, 2 * x + 1)
            if all(p in xi_primes(n, system) for p in need)
        )
        assert observed == direct
        assert predicted == Fraction(rho_multiplicative(m, params) * x, m**2)
        assert slack == rho_multiplicative(m, params)


def test_buchstab_identity_exact():
    rng = random.Random(41004)
    for _ in range(25):
        k = rng.choice((2, 3))
        h = rng.choice((1, 3))
        system = LinearFormSystem(((1, 0), (1, h)), k)
        x = rng.randrange(100, 2000)
        w = rng.uniform(2.0, 5.0)
        z = w + rng.uniform(1.0, 20.0)
        lhs, rhs = buchstab_check(x, system, w, z)
        assert lhs == rhs


def test_sieve_lemma_residual_band():
    rng = random.Random(41005)
    system = LinearFormSystem(((1, 0), (1, 1)), 2)
    for _ in range(25):
        n = rng.randrange(2, 20000)
        w = rng.uniform(2.0, 6.0)
        z = w * rng.uniform(1.5, 4.0)
        exact, truncated, error_count = sieve_lemma_residual(n, system, w, z)
        assert abs(exact - truncated) <= error_count


def test_euler_constant_tail_bounds_nest():
    params = PairParams(2, 1)
    small = euler_constant(params, 10**3)
    large = euler_constant(params, 10**4)
    assert small.tail_bound > 0
    assert abs(large.partial - small.partial) <= small.tail_bound
    assert large.tail_bound < small.tail_bound
    # regression anchor, truncated rendering
    assert small.decimal() == "0.322716051849745"
    with pytest.raises(ParameterError):
        euler_constant(params, 1)


def test_euler_constant_tuple_target():
    triple = LinearFormSystem(((1, 0), (1, 1), (1, 2)), 2)
    est = euler_constant(triple, 500)
    # density must stay inside (0, 1) and below the pair density
    pair = euler_constant(PairParams(2, 1), 500)
    assert 0 < est.partial < pair.partial < 1
