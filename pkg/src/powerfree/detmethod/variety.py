"""Dyadic boxes on the surface e^k v^l - d^k u^l = h and exact counts.

Two box conventions are supported and every caller names one:

  dyadic-open   n ~ N means N < n < 2N (both ends strict)
  half-closed   n ~ N means N/2 < n <= N

The u and v scales are U = x^(1/l)/D^(k/l) and V = x^(1/l)/E^(k/l);
their windows are cut with exact integer comparisons of u^l * D^k
against x (cross-multiplied through the rational D), never floats.

brute_count is the reference oracle for the whole subpackage; the
congruence route must agree with it on every in-budget box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence, Union

import numpy as np

from ..arith import floor_root_rational, integer_root
from ..errors import BudgetExceededError, InvariantViolation, ParameterError

BRUTE_BUDGET = 10**9
CONGRUENCE_BUDGET = 10**9
_INT64_CAP = 2**62

CONVENTIONS = ("dyadic-open", "half-closed")


def _int_window(scale: Fraction, convention: str) -> tuple[int, int]:
    """Integer range for n ~ scale under the named convention."""
    if convention == "dyadic-open":
        lo = math.floor(scale) + 1
        hi = math.ceil(2 * scale) - 1
    else:
        lo = math.floor(scale / 2) + 1
        hi = math.floor(scale)
    return lo, hi


def _power_window(x: int, den_scale: Fraction, k: int, l: int, convention: str) -> tuple[int, int]:
    """Integer range for u ~ (x / den_scale^k)^(1/l), cut exactly.

    Strict lower bounds land on floor+1; an inclusive or strict upper
    bound is decided by testing whether the bound is attained exactly.
    """
    p, q = den_scale.numerator, den_scale.denominator
    # u^l compared against x * q^k / p^k
    base = Fraction(x * q**k, p**k)
    if convention == "dyadic-open":
        lo = floor_root_rational(base, l) + 1
        top = Fraction(2**l) * base
        ft = floor_root_rational(top, l)
        hi = ft - 1 if Fraction(ft**l) == top else ft
    else:
        low = base / 2**l
        lo = floor_root_rational(low, l) + 1
        hi = floor_root_rational(base, l)
    return lo, hi


@dataclass(frozen=True)
class BoxRanges:
    """Inclusive integer ranges for each coordinate; empty when lo > hi."""

    d: tuple[int, int]
    e: tuple[int, int]
    u: tuple[int, int]
    v: tuple[int, int]

    def counts(self) -> tuple[int, int, int, int]:
        return tuple(max(0, hi - lo + 1) for lo, hi in (self.d, self.e, self.u, self.v))

    def contains_v(self, v: int) -> bool:
        return self.v[0] <= v <= self.v[1]


@dataclass(frozen=True)
class VarietyParams:
    """Surface exponents (k, l, h) with a dyadic box at scale x, D, E."""

    k: int
    l: int
    h: int
    x: int
    D: Fraction
    E: Fraction
    convention: str = "dyadic-open"

    def __post_init__(self) -> None:
        if not (self.k >= 2 and 1 <= self.l < self.k):
            raise ParameterError("need k >= 2 and 1 <= l < k")
        if self.h == 0:
            raise ParameterError("h must be nonzero")
        if self.x < 1:
            raise ParameterError("x must be positive")
        object.__setattr__(self, "D", Fraction(self.D))
        object.__setattr__(self, "E", Fraction(self.E))
        if self.D <= 0 or self.E <= 0:
            raise ParameterError("D and E must be positive")
        if self.convention not in CONVENTIONS:
            raise ParameterError(f"convention must be one of {CONVENTIONS}")

    def ranges(self) -> BoxRanges:
        c = self.convention
        return BoxRanges(
            d=_int_window(self.D, c),
            e=_int_window(self.E, c),
            u=_power_window(self.x, self.D, self.k, self.l, c),
            v=_power_window(self.x, self.E, self.k, self.l, c),
        )

    def s_range(self) -> tuple[Fraction, Fraction]:
        """Outer range of s = d/e; (D/(2E), 2D/E) under both conventions."""
        return self.D / (2 * self.E), 2 * self.D / self.E


@dataclass(frozen=True)
class ExplicitBox:
    """Counting box with all four ranges given directly, for oracles."""

    k: int
    l: int
    h: int
    d: tuple[int, int]
    e: tuple[int, int]
    u: tuple[int, int]
    v: tuple[int, int]

    def __post_init__(self) -> None:
        if not (self.k >= 2 and 1 <= self.l < self.k):
            raise ParameterError("need k >= 2 and 1 <= l < k")
        if self.h == 0:
            raise ParameterError("h must be nonzero")
        for lo, hi in (self.d, self.e, self.u, self.v):
            if lo < 1:
                raise ParameterError("box coordinates start at 1")

    def ranges(self) -> BoxRanges:
        return BoxRanges(self.d, self.e, self.u, self.v)


Countable = Union[VarietyParams, ExplicitBox]


def _primes_of(n: int) -> set[int]:
    out = set()
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.add(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.add(m)
    return out


@dataclass(frozen=True, order=True)
class SolutionQuad:
    """One integer point (d, e, u, v) on e^k v^l - d^k u^l = h.

    Construction verifies the surface equation and the divisibility
    constraint that every prime dividing gcd(ev, du) divides h.
    """

    d: int
    e: int
    u: int
    v: int

    def verify(self, k: int, l: int, h: int) -> None:
        if self.e**k * self.v**l - self.d**k * self.u**l != h:
            raise InvariantViolation(f"{self} is not on the surface")
        g = gcd(self.e * self.v, self.d * self.u)
        for p in _primes_of(g):
            if h % p != 0:
                raise InvariantViolation(f"{self}: prime {p} of gcd(ev, du) misses h")

    @property
    def s(self) -> Fraction:
        return Fraction(self.d, self.e)

    @property
    def t(self) -> Fraction:
        return Fraction(self.v, self.u)


def _make_quad(d: int, e: int, u: int, v: int, k: int, l: int, h: int) -> SolutionQuad:
    q = SolutionQuad(d, e, u, v)
    q.verify(k, l, h)
    return q


def _shard_ranges(lo: int, hi: int, shards: int) -> Iterator[tuple[int, int]]:
    n = hi - lo + 1
    if n <= 0:
        return
    shards = max(1, min(shards, n))
    step, extra = divmod(n, shards)
    start = lo
    for i in range(shards):
        width = step + (1 if i < extra else 0)
        yield start, start + width - 1
        start += width


def brute_count(box: Countable, shards: int = 1) -> list[SolutionQuad]:
    """Enumerate every solution quad in the box; the reference oracle.

    Loops d, e, u and solves e^k v^l = d^k u^l + h for v by exact root
    extraction.  The inner u loop is vectorized when the products fit
    in int64; otherwise it falls back to plain integers.
    """
    r = box.ranges()
    nd, ne, nu, _ = r.counts()
    if nd * ne * nu > BRUTE_BUDGET:
        raise BudgetExceededError(f"brute box volume {nd * ne * nu} exceeds {BRUTE_BUDGET}")
    out: list[SolutionQuad] = []
    for d_lo, d_hi in _shard_ranges(r.d[0], r.d[1], shards):
        out.extend(_brute_shard(box, r, d_lo, d_hi))
    out.sort()
    return out


def _brute_shard(box: Countable, r: BoxRanges, d_lo: int, d_hi: int) -> list[SolutionQuad]:
    k, l, h = box.k, box.l, box.h
    u_lo, u_hi = r.u
    out: list[SolutionQuad] = []
    if u_lo > u_hi:
        return out
    use_numpy = d_hi**k * u_hi**l + abs(h) < _INT64_CAP
    us = np.arange(u_lo, u_hi + 1, dtype=np.int64) if use_numpy else None
    for d in range(d_lo, d_hi + 1):
        dk = d**k
        for e in range(r.e[0], r.e[1] + 1):
            ek = e**k
            if use_numpy:
                t = dk * us**l + h
                cand = us[(t > 0) & (t % ek == 0)]
                pairs = ((int(u), (dk * int(u) ** l + h) // ek) for u in cand)
            else:
                pairs = _slow_pairs(dk, ek, h, l, u_lo, u_hi)
            for u, w in pairs:
                v = w if l == 1 else integer_root(w, l)
                if v**l == w and r.contains_v(v):
                    out.append(_make_quad(d, e, u, v, k, l, h))
    return out


def _slow_pairs(dk: int, ek: int, h: int, l: int, u_lo: int, u_hi: int):
    for u in range(u_lo, u_hi + 1):
        t = dk * u**l + h
        if t > 0 and t % ek == 0:
            yield u, t // ek


def congruence_count(box: Countable) -> int:
    """Count solutions via d^k = -h u^(-l) (mod e^k), per (e, u) pair.

    For gcd(u, e) = 1 the admissible d form residue classes mod e^k,
    intersected with the d-box through a precomputed residue table of
    d^k mod e^k.  Pairs with gcd(u, e) > 1 are scanned directly.
    """
    r = box.ranges()
    nd, ne, nu, _ = r.counts()
    if nd == 0 or ne == 0 or nu == 0:
        return 0
    k, l, h = box.k, box.l, box.h
    work = ne * nu + sum(e**k for e in range(r.e[0], r.e[1] + 1))
    if work > CONGRUENCE_BUDGET:
        raise BudgetExceededError(f"congruence work {work} exceeds {CONGRUENCE_BUDGET}")
    total = 0
    for e in range(r.e[0], r.e[1] + 1):
        ek = e**k
        table: dict[int, list[int]] = {}
        for d in range(r.d[0], r.d[1] + 1):
            table.setdefault(pow(d, k, ek), []).append(d)
        for u in range(r.u[0], r.u[1] + 1):
            if gcd(u, e) == 1:
                target = (-h * pow(u, -l, ek)) % ek
                cands = table.get(target, ())
            else:
                cands = range(r.d[0], r.d[1] + 1)
            ul = u**l
            for d in cands:
                t = d**k * ul + h
                if t <= 0 or t % ek:
                    continue
                w = t // ek
                v = w if l == 1 else integer_root(w, l)
                if v**l == w and r.contains_v(v):
                    total += 1
    return total


def proximity_report(
    params: VarietyParams, quads: Sequence[SolutionQuad]
) -> tuple[list[float], float]:
    """Observed |t - s^(k/l)| * x * U/V per quad, and their maximum.

    The surface forces t to track s^(k/l) at scale (1/x)(V/U); the
    implied constant is not explicit, so this is a calibration report
    (floats are fine here), never an assertion.
    """
    exponent = params.k / params.l
    u_over_v = float(params.E / params.D) ** exponent  # U/V = (E/D)^(k/l)
    scaled = []
    for q in quads:
        gap = abs(float(q.t) - float(q.s) ** exponent)
        scaled.append(gap * params.x * u_over_v)
    return scaled, max(scaled, default=0.0)


def choose_M(params: VarietyParams) -> int:
    """Subdivision count: ceil of exp((9/8) log(DE) log(UV) / log x).

    The exponent of x in M is at most 9/(8kl) < 1, so M <= x for the
    boxes of interest; degenerate scales are rejected instead.
    """
    x, k, l = params.x, params.k, params.l
    de = float(params.D * params.E)
    if x <= 1 or de <= 1.0:
        raise ParameterError("choose_M wants x > 1 and D*E > 1")
    log_uv = (2 * math.log(x) - k * math.log(de)) / l
    if log_uv <= 0:
        raise ParameterError("choose_M wants U*V > 1")
    return math.ceil(math.exp(9 / 8 * math.log(de) * log_uv / math.log(x)))


@dataclass(frozen=True)
class SubdivisionPlan:
    """Geometric subdivision of the s-range into (s0, s0(1 + 1/M)] pieces.

    Interval j is (s_lo r^j, s_lo r^(j+1)] with r = 1 + 1/M held exactly,
    so endpoint ratios are exact by construction; the companion integer
    anchor x3(j) = floor(s0 E M / D) is x3 = M/2 at j = 0 and tracks
    s0 = x3 (1/M)(D/E) approximately afterwards.  Endpoints are computed
    on demand: at realistic M their digit counts make a full list wasteful.
    """

    M: int
    s_lo: Fraction
    s_hi: Fraction
    count: int
    D: Fraction
    E: Fraction

    def endpoint(self, j: int) -> Fraction:
        if not 0 <= j <= self.count:
            raise ParameterError(f"endpoint index {j} outside 0..{self.count}")
        m, m1 = self.M, self.M + 1
        return self.s_lo * Fraction(m1**j, m**j)

    def interval(self, j: int) -> tuple[Fraction, Fraction]:
        return self.endpoint(j), self.endpoint(j + 1)

    def anchor(self, j: int) -> int:
        s0 = self.endpoint(j)
        t = s0 * self.E * self.M / self.D
        return t.numerator // t.denominator

    def _cmp_endpoint(self, j: int, s: Fraction) -> int:
        """Sign of (s_lo r^j - s) by cross-multiplied integers."""
        m, m1 = self.M, self.M + 1
        lhs = self.s_lo.numerator * s.denominator * m1**j
        rhs = s.numerator * self.s_lo.denominator * m**j
        return (lhs > rhs) - (lhs < rhs)

    def locate(self, s: Fraction) -> int:
        """Index j with endpoint(j) < s <= endpoint(j+1)."""
        s = Fraction(s)
        if not (self.s_lo < s and self._cmp_endpoint(self.count, s) >= 0):
            raise ParameterError(f"s = {s} outside the covered range")
        ratio = math.log(float(s / self.s_lo)) / math.log1p(1 / self.M)
        j = min(self.count - 1, max(0, int(ratio)))
        while self._cmp_endpoint(j, s) >= 0:  # need endpoint(j) < s
            j -= 1
        while self._cmp_endpoint(j + 1, s) < 0:  # need s <= endpoint(j+1)
            j += 1
        return j

    def assign(self, quads: Sequence[SolutionQuad]) -> dict[int, list[SolutionQuad]]:
        """Partition quads by interval; each lands in exactly one."""
        groups: dict[int, list[SolutionQuad]] = {}
        for q in quads:
            groups.setdefault(self.locate(q.s), []).append(q)
        return groups


def subdivide(params: VarietyParams, M: int) -> SubdivisionPlan:
    if M < 1:
        raise ParameterError("M must be >= 1")
    s_lo, s_hi = params.s_range()
    # smallest J with s_lo (1 + 1/M)^J >= s_hi; the range ratio is 4
    guess = max(1, math.ceil(math.log(4) / math.log1p(1 / M)))
    plan = SubdivisionPlan(M, s_lo, s_hi, guess, params.D, params.E)
    j = guess
    while plan._cmp_endpoint(j, s_hi) < 0:
        j += 1
    while j > 1 and plan._cmp_endpoint(j - 1, s_hi) >= 0:
        j -= 1
    return SubdivisionPlan(M, s_lo, s_hi, j, params.D, params.E)
