"""Square-full numbers and consecutive square-full pairs.

n is square-full when every prime dividing n does so at least twice.
Each such n factors uniquely as a**2 * b**3 with b squarefree, so the
whole population up to x is enumerated by b <= x**(1/3) squarefree and
a <= sqrt(x / b**3); that is O(sqrt(x)) values and never needs a sieve.

Consecutive pairs (n, n+1 both square-full) are rare; the map
n -> 4n(n+1) sends a pair to a larger pair, since 4n(n+1) is a product
of coprime square-full factors and 4n(n+1) + 1 = (2n+1)**2.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .arith import integer_root, is_squarefree, squarefull_decompose
from .errors import ParameterError


def enumerate_squarefull(x: int) -> list[int]:
    """All square-full n <= x, ascending (1 included)."""
    if x < 1:
        return []
    out = []
    for b in range(1, integer_root(x, 3) + 1):
        if not is_squarefree(b):
            continue
        b3 = b**3
        for a in range(1, math.isqrt(x // b3) + 1):
            out.append(a * a * b3)
    out.sort()
    return out


def count_squarefull(x: int) -> int:
    """N(x) = #{square-full n <= x} without materializing the list."""
    if x < 1:
        return 0
    total = 0
    for b in range(1, integer_root(x, 3) + 1):
        if is_squarefree(b):
            total += math.isqrt(x // b**3)
    return total


def consecutive_pairs(x: int) -> list[int]:
    """n <= x with n and n+1 both square-full, ascending."""
    if x < 1:
        return []
    members = set(enumerate_squarefull(x + 1))
    return sorted(n for n in members if n <= x and n + 1 in members)


def recurrence_next(n: int) -> int:
    """Map a consecutive pair at n to the pair at 4n(n+1).

    Requires n, n+1 both square-full.  The image m = 4n(n+1) satisfies
    m square-full (product of coprime square-full factors) and
    m + 1 = (2n+1)**2.
    """
    if n < 1:
        raise ParameterError("recurrence_next wants n >= 1")
    if squarefull_decompose(n) is None or squarefull_decompose(n + 1) is None:
        raise ParameterError(f"{n}, {n + 1} is not a consecutive square-full pair")
    return 4 * n * (n + 1)


def growth_rows(xs: list[int]) -> list[tuple[int, int, float]]:
    """(x, pair count up to x, log count / log x) for each requested x."""
    rows = []
    for x in xs:
        if x < 2:
            raise ParameterError("growth_rows wants x >= 2")
        c = len(consecutive_pairs(x))
        ratio = math.log(c) / math.log(x) if c > 0 else float("nan")
        rows.append((x, c, ratio))
    return rows


def density_fraction(x: int) -> Fraction:
    """N(x)/x as an exact rational, for trend reports."""
    if x < 1:
        raise ParameterError("density_fraction wants x >= 1")
    return Fraction(count_squarefull(x), x)
