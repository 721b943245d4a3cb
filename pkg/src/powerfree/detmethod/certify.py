"""Rank-deficiency certificates for subdivision intervals.

The monomial matrix for J solutions and exponent caps (A, B) has rows
(s_j^a t_j^b) over the H = (A+1)(B+1) monomials, a-major order
(a, b) = (0,0), (0,1), ..., (A,B).  Rows are cleared to integers by
e_j^A u_j^B, rank is computed by fraction-free elimination, and a rank
deficit yields an integer polynomial C(s, t) with content 1 vanishing
at every solution of the interval, verified exactly before return.
Full rank is an outcome, not an error: the certificate then records
the pivot rows as its witness.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from ..errors import InvariantViolation, ParameterError
from .variety import SolutionQuad


def json_dumps_wide(obj, bits: int, **kwargs) -> str:
    """json.dumps tolerating integers up to the given bit length.

    Interval anchors are exact powers of (M+1)/M and outgrow the
    interpreter's int-to-str digit limit on realistic plans; the limit
    is raised for the call and restored afterwards.
    """
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:  # interpreter without a conversion limit
        return json.dumps(obj, **kwargs)
    need = bits * 31 // 100 + 3  # digits <= bits * log10(2), padded
    old = get()
    if need <= old:
        return json.dumps(obj, **kwargs)
    sys.set_int_max_str_digits(need)
    try:
        return json.dumps(obj, **kwargs)
    finally:
        sys.set_int_max_str_digits(old)


def _bareiss(rows: list[list[int]]) -> tuple[int, list[int], list[int], list[list[int]]]:
    """Fraction-free echelon form.

    Returns (rank, pivot_cols, pivot_rows, echelon) where pivot_rows
    are indices into the original row order and echelon holds the
    eliminated integer rows (top rank rows are the pivot rows).
    """
    m = [row[:] for row in rows]
    order = list(range(len(m)))
    ncols = len(m[0]) if m else 0
    prev = 1
    rank = 0
    pivot_cols: list[int] = []
    for col in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        order[rank], order[piv] = order[piv], order[rank]
        p = m[rank][col]
        for i in range(rank + 1, len(m)):
            for j in range(col + 1, ncols):
                m[i][j] = (p * m[i][j] - m[i][col] * m[rank][j]) // prev
            m[i][col] = 0
        prev = p
        pivot_cols.append(col)
        rank += 1
    return rank, pivot_cols, order[:rank], m


def _kernel_vector(echelon: list[list[int]], rank: int, pivot_cols: list[int], ncols: int) -> list[int]:
    """Integer kernel vector with the first free column set to 1.

    Back-substitutes over exact rationals on the echelon rows, then
    clears denominators and divides out the content.
    """
    free = next(c for c in range(ncols) if c not in pivot_cols)
    x: list[Fraction] = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for i in range(rank - 1, -1, -1):
        c = pivot_cols[i]
        acc = sum((Fraction(echelon[i][j]) * x[j] for j in range(c + 1, ncols)), Fraction(0))
        x[c] = -acc / echelon[i][c]
    den = 1
    for v in x:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in x]
    content = 0
    for v in ints:
        content = gcd(content, v)
    ints = [v // content for v in ints]
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return ints


@dataclass
class IntervalCertificate:
    """Outcome of certifying one interval's solutions.

    coeffs lists the integer coefficients of C(s, t) in a-major (a, b)
    order when rank < H, and is empty at full rank, where witness_rows
    instead records a full-rank row minor.
    """

    A: int
    B: int
    J: int
    H: int
    rank: int
    coeffs: list[int]
    witness_rows: list[int]
    coeff_bits: int
    s0: Optional[Fraction] = None
    M: Optional[int] = None
    quads: list[SolutionQuad] = field(default_factory=list)

    @property
    def has_certificate(self) -> bool:
        return self.rank < self.H

    def evaluate(self, q: SolutionQuad) -> int:
        """Cleared-denominator value of C at (s, t) = (d/e, v/u)."""
        total = 0
        i = 0
        for a in range(self.A + 1):
            for b in range(self.B + 1):
                if self.coeffs:
                    total += (
                        self.coeffs[i]
                        * q.d**a
                        * q.e ** (self.A - a)
                        * q.v**b
                        * q.u ** (self.B - b)
                    )
                i += 1
        return total

    def record(self) -> dict:
        """Serializable form with the stable field order."""
        if self.s0 is None or self.M is None:
            raise ParameterError("certificate has no interval reference")
        return {
            "interval": [self.s0.numerator, self.s0.denominator, self.M],
            "A": self.A,
            "B": self.B,
            "J": self.J,
            "H": self.H,
            "rank": self.rank,
            "coeffs": list(self.coeffs),
        }

    def to_json(self) -> str:
        rec = self.record()
        bits = max(self.s0.numerator.bit_length(), self.s0.denominator.bit_length())
        return json_dumps_wide(rec, bits)


def certify_interval(
    quads: Sequence[SolutionQuad],
    A: int,
    B: int,
    s0: Optional[Fraction] = None,
    M: Optional[int] = None,
) -> IntervalCertificate:
    """Certify one interval's solution list with monomial caps (A, B)."""
    if A < 0 or B < 0:
        raise ParameterError("monomial caps must be non-negative")
    if not quads:
        raise ParameterError("certify_interval wants at least one solution")
    rows = []
    for q in quads:
        rows.append(
            [
                q.d**a * q.e ** (A - a) * q.v**b * q.u ** (B - b)
                for a in range(A + 1)
                for b in range(B + 1)
            ]
        )
    H = (A + 1) * (B + 1)
    rank, pivot_cols, pivot_rows, echelon = _bareiss(rows)
    if rank == H:
        cert = IntervalCertificate(A, B, len(rows), H, rank, [], sorted(pivot_rows), 0, s0, M, list(quads))
        return cert
    coeffs = _kernel_vector(echelon, rank, pivot_cols, H)
    bits = max(abs(c).bit_length() for c in coeffs)
    cert = IntervalCertificate(A, B, len(rows), H, rank, coeffs, [], bits, s0, M, list(quads))
    for q in quads:
        if cert.evaluate(q) != 0:
            raise InvariantViolation(f"certificate fails to vanish at {q}")
    content = 0
    for c in coeffs:
        content = gcd(content, c)
    if content != 1:
        raise InvariantViolation("certificate coefficients have content > 1")
    return cert
