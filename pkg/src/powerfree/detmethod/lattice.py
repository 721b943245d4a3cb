"""Gauss-reduced lattices attached to a subdivision interval.

The (d, e)-side lattice is spanned by T(1, 0) and T(0, 1) where
T(x1, x2) = ((M/D)(x1 - x2 s0), x2/E), of determinant M/(DE).  The
(v, u)-side analogue uses the anchor x4 = floor(x3^(k/l) M^(1 - k/l))
and t0 = (x4/M)(V/U); it is built exactly only for l = 1, where the
box scales U, V and t0 are all rational.

Reduction is Gauss-Lagrange over exact rationals with the integer
change of basis carried along; shortness, the half-bound on the inner
product, the Hermite inequality, and unimodularity are all checked
exactly on construction.  L1, L2 are the advisory reciprocal lengths
1/|g1|, 1/|g2| (constants taken as 1), satisfying
L1 L2 >= (sqrt(3)/2) DE/M by the Hermite bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..arith import floor_root_rational
from ..errors import InvariantViolation, ParameterError
from .variety import VarietyParams

Vec = tuple[Fraction, Fraction]


def _dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def _norm2(a: Vec) -> Fraction:
    return _dot(a, a)


def _round_half(t: Fraction) -> int:
    # nearest integer, ties toward +inf: floor(t + 1/2)
    u = t + Fraction(1, 2)
    return u.numerator // u.denominator


@dataclass(frozen=True)
class ReducedLattice:
    g1: Vec
    g2: Vec
    det: Fraction
    L1: float
    L2: float
    h1: tuple[int, int]
    h2: tuple[int, int]

    def validate(self) -> None:
        n1, n2 = _norm2(self.g1), _norm2(self.g2)
        if n1 == 0 or n2 == 0:
            raise InvariantViolation("degenerate reduced basis")
        if n1 > n2:
            raise InvariantViolation("g1 is not the shorter vector")
        if 2 * abs(_dot(self.g1, self.g2)) > n1:
            raise InvariantViolation("basis is not Gauss-reduced")
        if 3 * n1 * n2 > 4 * self.det**2:
            raise InvariantViolation("Hermite bound violated")
        if abs(self.h1[0] * self.h2[1] - self.h1[1] * self.h2[0]) != 1:
            raise InvariantViolation("change of basis is not unimodular")


def reduce_basis(b1: Vec, b2: Vec) -> ReducedLattice:
    """Gauss-Lagrange reduction tracking the integer change of basis."""
    b1 = (Fraction(b1[0]), Fraction(b1[1]))
    b2 = (Fraction(b2[0]), Fraction(b2[1]))
    det = b1[0] * b2[1] - b1[1] * b2[0]
    if det == 0:
        raise ParameterError("basis is singular")
    h1, h2 = (1, 0), (0, 1)
    while True:
        if _norm2(b1) > _norm2(b2):
            b1, b2 = b2, b1
            h1, h2 = h2, h1
        mu = _round_half(_dot(b1, b2) / _norm2(b1))
        if mu == 0:
            break
        b2 = (b2[0] - mu * b1[0], b2[1] - mu * b1[1])
        h2 = (h2[0] - mu * h1[0], h2[1] - mu * h1[1])
        if _norm2(b2) >= _norm2(b1):
            break
    if _norm2(b1) > _norm2(b2):
        b1, b2 = b2, b1
        h1, h2 = h2, h1
    lat = ReducedLattice(
        b1,
        b2,
        abs(det),
        1.0 / math.sqrt(float(_norm2(b1))),
        1.0 / math.sqrt(float(_norm2(b2))),
        h1,
        h2,
    )
    lat.validate()
    return lat


def lattice_for_interval(D: Fraction, E: Fraction, M: int, s0: Fraction) -> ReducedLattice:
    """Reduced basis of the interval lattice T(Z^2) on the (d, e) side."""
    D, E, s0 = Fraction(D), Fraction(E), Fraction(s0)
    if D <= 0 or E <= 0 or M < 1:
        raise ParameterError("lattice wants positive D, E and M >= 1")
    scale = Fraction(M) / D
    return reduce_basis((scale, Fraction(0)), (-scale * s0, Fraction(1) / E))


def u_side_anchor(x3: int, M: int, k: int, l: int) -> int:
    """x4 = floor(x3^(k/l) M^(1 - k/l)), the (v, u)-side integer anchor."""
    if x3 < 0 or M < 1 or not (k >= 2 and 1 <= l < k):
        raise ParameterError("bad u-side anchor inputs")
    return floor_root_rational(Fraction(x3**k, M ** (k - l)), l)


def u_side_lattice(params: VarietyParams, M: int, x3: int) -> ReducedLattice:
    """Reduced (v, u)-side lattice for l = 1, where t0 and V are rational.

    t0 = (x4/M)(V/U) with V/U = (D/E)^k; for l > 1 the box scales are
    irrational and no exact construction is offered.
    """
    if params.l != 1:
        raise ParameterError("exact u-side lattice needs l = 1")
    k = params.k
    x4 = u_side_anchor(x3, M, k, 1)
    t0 = Fraction(x4, M) * (params.D / params.E) ** k
    V = Fraction(params.x) / params.E**k
    U = Fraction(params.x) / params.D**k
    scale = Fraction(M) / V
    return reduce_basis((scale, Fraction(0)), (-scale * t0, Fraction(1) / U))
