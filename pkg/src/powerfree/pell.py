"""Pell equations T**2 - D*U**2 = 1 and the statistics of small units.

The continued fraction of sqrt(D) is computed with the integer (m, d, a)
recurrence; its period is read off at the first repeated state, and the
convergent at the end of the first period (doubled once when the period
length is odd) gives the fundamental solution.  eps_D = T + U*sqrt(D).

Counting questions compare eps_D**n against powers D**theta.  A float
logarithm guides the answer, but every accepted count is verified by
exact integer arithmetic: eps**n = T_n + U_n*sqrt(D) is an integer pair,
and (T_n + U_n*sqrt(D)) <= D**(p/q) is decided by raising to the q-th
power and comparing squares.  Ties can therefore never be miscounted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import integer_root
from .errors import InvariantViolation, ParameterError, SquareDiscriminant


@dataclass
class CFExpansion:
    """Continued fraction sqrt(D) = [a0; period repeated]."""

    D: int
    a0: int
    period: tuple[int, ...]


def _check_nonsquare(D: int) -> int:
    if D < 2:
        raise ParameterError("want D >= 2")
    r = math.isqrt(D)
    if r * r == D:
        raise SquareDiscriminant(f"D = {D} is a perfect square")
    return r


def cf_sqrt(D: int) -> CFExpansion:
    """Continued fraction expansion of sqrt(D), D nonsquare.

    Terminates at the first repeated (m, d) state; the period then ends
    with 2*a0 and the body reads the same in both directions.
    """
    a0 = _check_nonsquare(D)
    period = []
    m, d, a = 0, 1, a0
    first = None
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        if first is None:
            first = (m, d)
        elif (m, d) == first:
            break
        period.append(a)
    return CFExpansion(D, a0, tuple(period))


@dataclass
class PellFundamental:
    """Least T, U >= 1 with T**2 - D*U**2 = 1."""

    D: int
    T: int
    U: int

    @property
    def log_eps(self) -> float:
        """ln(T + U*sqrt(D)), accurate to float precision at any size.

        Advisory only: counting decisions go through exact arithmetic.
        """
        T = self.T
        if T < 1 << 52:
            return math.log(T + math.sqrt(T * T - 1))
        # eps = T + sqrt(T**2 - 1); the correction to ln(2T) is < 1/(4T**2)
        return math.log(2) + math.log(T)


def fundamental_solution(D: int) -> PellFundamental:
    """Fundamental solution via the continued fraction of sqrt(D)."""
    sol = _fundamental_capped(D, None)
    assert sol is not None
    return sol


def _fundamental_capped(D: int, cap: Optional[int]) -> Optional[PellFundamental]:
    """Fundamental solution, or None once T provably exceeds cap.

    Convergent numerators increase toward T, so any numerator above cap
    certifies T > cap without finishing the expansion.
    """
    a0 = _check_nonsquare(D)
    p_prev, p_cur = 1, a0
    q_prev, q_cur = 0, 1
    m, d, a = 0, 1, a0
    ell = 0
    first = None
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        if first is None:
            first = (m, d)
        elif (m, d) == first:
            break
        ell += 1
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if cap is not None and p_prev > cap:
            return None
    # at the break, (p_prev, q_prev) is the convergent at the period end
    if ell % 2 == 0:
        T, U = p_prev, q_prev
    else:
        # odd period solves T**2 - D U**2 = -1; square it inside Z[sqrt(D)]
        T, U = p_prev * p_prev + D * q_prev * q_prev, 2 * p_prev * q_prev
    if cap is not None and T > cap:
        return None
    if T * T - D * U * U != 1:
        raise InvariantViolation(f"Pell identity failed at D={D}")
    return PellFundamental(D, T, U)


def pell_power(sol: PellFundamental, n: int) -> tuple[int, int]:
    """(T_n, U_n) with T_n + U_n*sqrt(D) = (T + U*sqrt(D))**n, n >= 0."""
    if n < 0:
        raise ParameterError("pell_power wants n >= 0")
    T, U, D = sol.T, sol.U, sol.D
    a, b = 1, 0
    base_a, base_b = T, U
    while n:
        if n & 1:
            a, b = a * base_a + D * b * base_b, a * base_b + b * base_a
        base_a, base_b = (
            base_a * base_a + D * base_b * base_b,
            2 * base_a * base_b,
        )
        n >>= 1
    return a, b


def _leq_power(T: int, U: int, D: int, p: int, q: int) -> bool:
    """Exact test of T + U*sqrt(D) <= D**(p/q) for T, U >= 0."""
    # raise to the q-th power: (T + U sqrt(D))**q = A + B sqrt(D)
    A, B = 1, 0
    for _ in range(q):
        A, B = A * T + D * B * U, A * U + B * T
    rhs = D**p
    # A + B sqrt(D) <= rhs  <=>  B sqrt(D) <= rhs - A
    diff = rhs - A
    if diff < 0:
        return False
    return B * B * D <= diff * diff


def _theta_parts(theta: Fraction) -> tuple[int, int]:
    if theta <= 0:
        raise ParameterError("exponent must be positive")
    return theta.numerator, theta.denominator


def unit_below(D: int, theta: Fraction) -> Optional[PellFundamental]:
    """fundamental_solution(D) when eps_D <= D**theta, else None.

    Uses the convergent cap floor(D**theta) + 1 to abandon hopeless D
    early, then decides the boundary exactly.
    """
    p, q = _theta_parts(theta)
    cap = integer_root(D**p, q) + 1
    sol = _fundamental_capped(D, cap)
    if sol is None:
        return None
    return sol if _leq_power(sol.T, sol.U, D, p, q) else None


def count_S(X: int, alpha: Fraction) -> int:
    """sum over nonsquare D with X < D < 2X of #{n >= 1 : eps_D**n <= D**(1/2 + alpha)}.

    Float logs suggest the count; the returned value is verified power
    by power in exact arithmetic, so boundary ties are decided exactly.
    """
    if X < 1:
        raise ParameterError("count_S wants X >= 1")
    theta = Fraction(1, 2) + Fraction(alpha)
    p, q = _theta_parts(theta)
    total = 0
    for D in range(X + 1, 2 * X):
        r = math.isqrt(D)
        if r * r == D:
            continue
        sol = unit_below(D, theta)
        if sol is None:
            continue
        # smallest power already fits; count upward exactly
        n = 1
        Tn, Un = sol.T, sol.U
        while True:
            Tn, Un = Tn * sol.T + D * Un * sol.U, Tn * sol.U + Un * sol.T
            if _leq_power(Tn, Un, D, p, q):
                n += 1
            else:
                break
        total += n
    return total


def density_below(X: int, theta: Fraction) -> tuple[int, float]:
    """(count, count / X) for #{nonsquare D <= X : eps_D <= D**theta}."""
    if X < 1:
        raise ParameterError("density_below wants X >= 1")
    theta = Fraction(theta)
    count = 0
    for D in range(2, X + 1):
        r = math.isqrt(D)
        if r * r == D:
            continue
        if unit_below(D, theta) is not None:
            count += 1
    return count, count / X
