"""Line families on e^2 v - d^2 u = 1 and the on/off-line split.

Every line contained in the surface falls into one of two shapes:

  kappa = -1   fixed coprime (d, e), direction (0, 0, e^2, d^2); the
               (u, v) solutions form one arithmetic progression
  kappa = 3    direction (a A^3 B^2 C, -b A^2 B^3 C, a b^3 B^2, a^3 b A^2)
               with C = 4/Q1^3, Q1^2 | 4, and the base coordinates
               (A D1, B E1, b^2 U1, a^2 V1) tied by
                 Q1^2 = V1 B^2 - U1 A^2
                 b D1 + a E1 = 2/Q1
                 U1 A^2 Q1 C - D1 b Q1 = -3

For fixed (Q1, a, b, A, B) those constraints put b D1 in one residue
class modulo lcm of the relevant moduli; each admissible D1 yields one
line.  The signs of a and b are free (the direction is determined only
up to them) and all four patterns are searched.  The step granularity
(lambda in Z, Z/2 or 2Z) is not fixed a priori: the smallest of the
three giving integer quads is recorded, oriented so d increases.
Every emitted family is re-verified pointwise on four sample steps,
which pins the cubic surface identity exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from ..arith import crt_merge, integer_root, solve_linear_congruence
from ..errors import InvariantViolation, ParameterError
from .variety import Countable, ExplicitBox, brute_count

Quad = tuple[int, int, int, int]
FQuad = tuple[Fraction, Fraction, Fraction, Fraction]

_PATTERNS = ((Fraction(1, 2), "Z/2"), (Fraction(1), "Z"), (Fraction(2), "2Z"))


@dataclass(frozen=True)
class LineFamily:
    kappa: int
    base: Quad
    direction: FQuad
    step: Quad  # smallest integral multiple of direction
    pattern: str  # which lambda granularity the step realizes
    alpha: Optional[int] = None
    beta: Optional[int] = None
    a: Optional[int] = None
    b: Optional[int] = None
    A: Optional[int] = None
    B: Optional[int] = None
    Q1: Optional[int] = None
    C: Optional[Fraction] = None
    D1: Optional[int] = None
    E1: Optional[int] = None
    U1: Optional[int] = None
    V1: Optional[int] = None
    witness: Optional[Quad] = None  # an all-positive in-box point, when known

    def point(self, m: int) -> Quad:
        return tuple(b + m * s for b, s in zip(self.base, self.step))

    def contains(self, q: Quad) -> bool:
        i = next(i for i, s in enumerate(self.step) if s != 0)
        delta = q[i] - self.base[i]
        if delta % self.step[i]:
            return False
        m = delta // self.step[i]
        return self.point(m) == q

    def validate(self) -> None:
        for m in range(4):  # 4 points pin a cubic identity
            d, e, u, v = self.point(m)
            if e * e * v - d * d * u != 1:
                raise InvariantViolation(f"line point {self.point(m)} off the surface")
        if self.kappa == 3:
            a, b, A, B, Q1 = self.a, self.b, self.A, self.B, self.Q1
            if Q1 not in (1, 2):  # Q1^2 | 4
                raise InvariantViolation("Q1^2 must divide 4")
            for x, y in ((a, b), (a, A), (a, B), (b, A), (b, B), (A, B)):
                if gcd(x, y) != 1:
                    raise InvariantViolation("a, A, b, B must be pairwise coprime")
            if self.V1 * B * B - self.U1 * A * A != Q1 * Q1:
                raise InvariantViolation("Q1^2 = V1 B^2 - U1 A^2 fails")
            if b * self.D1 + a * self.E1 != 2 // Q1:
                raise InvariantViolation("b D1 + a E1 = 2/Q1 fails")
            if self.U1 * A * A * Q1 * self.C - self.D1 * b * Q1 != -3:
                raise InvariantViolation("U1 A^2 Q1 C - D1 b Q1 = -3 fails")
            if self.base != (A * self.D1, B * self.E1, b * b * self.U1, a * a * self.V1):
                raise InvariantViolation("base does not match its parameters")


def _kappa_minus_one(d: int, e: int) -> LineFamily:
    sol = solve_linear_congruence(d * d, -1, e * e)
    u0, period = sol
    if u0 < 1:
        u0 += period
    v0 = (d * d * u0 + 1) // (e * e)
    e2, d2 = e * e, d * d
    fam = LineFamily(
        kappa=-1,
        base=(d, e, u0, v0),
        direction=(Fraction(0), Fraction(0), Fraction(e2), Fraction(d2)),
        step=(0, 0, e2, d2),
        pattern="Z",
        alpha=-d,
        beta=-e,
        witness=(d, e, u0, v0),
    )
    fam.validate()
    return fam


def kappa3_class(Q1: int, a: int, b: int, A: int, B: int) -> Optional[tuple[int, int]]:
    """Residue class (r, m) with D1 = r (mod m) solving the line constraints.

    a and b carry signs (the direction is determined only up to them);
    coprimality is judged on magnitudes.  None when the congruences are
    incompatible; ParameterError for an inadmissible Q1 or a non-coprime
    parameter tuple.
    """
    if Q1 < 1 or 4 % (Q1 * Q1) != 0:
        raise ParameterError("Q1^2 must divide 4")
    if a == 0 or b == 0:
        raise ParameterError("a and b must be nonzero")
    for x, y in ((a, b), (a, A), (a, B), (b, A), (b, B), (A, B)):
        if gcd(x, y) != 1:
            raise ParameterError("a, A, b, B must be pairwise coprime")
    if gcd(Q1, A * B) != 1:
        raise ParameterError("Q1 must be coprime to A B")
    if Q1 == 1:  # 4 U1 A^2 = b D1 - 3, 4 V1 B^2 = b D1 + 1, a E1 = 2 - b D1
        system = ((b, 3, 4 * A * A), (b, -1, 4 * B * B), (b, 2, abs(a)))
    else:  # U1 A^2 = 2 b D1 - 3, V1 B^2 = 2 b D1 + 1, a E1 = 1 - b D1
        system = ((2 * b, 3, A * A), (2 * b, -1, B * B), (b, 1, abs(a)))
    merged: Optional[tuple[int, int]] = (0, 1)
    for coef, rhs, mod in system:
        sol = solve_linear_congruence(coef, rhs, mod)
        if sol is None:
            return None
        merged = crt_merge(merged[0], merged[1], sol[0], sol[1])
        if merged is None:
            return None
    return merged


def _kappa3_derived(Q1: int, a: int, b: int, A: int, B: int, D1: int) -> tuple[int, int, int]:
    if Q1 == 1:
        num = b * D1
        U1, r1 = divmod(num - 3, 4 * A * A)
        V1, r2 = divmod(num + 1, 4 * B * B)
        E1, r3 = divmod(2 - num, a)
    else:
        num = 2 * b * D1
        U1, r1 = divmod(num - 3, A * A)
        V1, r2 = divmod(num + 1, B * B)
        E1, r3 = divmod(1 - b * D1, a)
    if r1 or r2 or r3:
        raise InvariantViolation("D1 outside its residue class")
    return U1, V1, E1


def _integral_step(direction: FQuad) -> tuple[Quad, str]:
    for sigma, name in _PATTERNS:
        scaled = tuple(sigma * c for c in direction)
        if all(c.denominator == 1 for c in scaled):
            return tuple(int(c) for c in scaled), name
    raise InvariantViolation("direction admits no integral step up to 2")


def _kappa3_families(
    d_box: tuple[int, int], e_box: tuple[int, int], x: int, stress: bool
) -> list[LineFamily]:
    d_lo, d_hi = d_box
    e_lo, e_hi = e_box
    U = max(1, x // (d_hi * d_hi))
    V = max(1, x // (e_hi * e_hi))
    ab_max = integer_root(U * V, 4) * (4 if stress else 1)
    ab_max = max(1, ab_max)
    out: list[LineFamily] = []
    seen: set[tuple[Quad, Quad]] = set()
    min_box = min(d_hi, e_hi)
    for Q1 in (1, 2):
        C = Fraction(4, Q1**3)
        for A in range(1, integer_root(4 * min_box, 2) + 1):
            if gcd(Q1, A) != 1:
                continue
            for B in range(1, 4 * min_box // (A * A) + 1):
                if A * A * B * B > 4 * min_box:
                    break
                if gcd(A, B) != 1 or gcd(Q1, B) != 1:
                    continue
                plane = 2 * A * B // Q1  # b B d + a A e is constant on each line
                for aa in range(1, ab_max + 1):
                    for bb in range(1, ab_max // aa + 1):
                        for a, b in ((aa, bb), (aa, -bb), (-aa, bb), (-aa, -bb)):
                            # plane must meet the box rectangle
                            dn, dp = (d_hi, d_lo) if b < 0 else (d_lo, d_hi)
                            en, ep = (e_hi, e_lo) if a < 0 else (e_lo, e_hi)
                            if not b * B * dn + a * A * en <= plane <= b * B * dp + a * A * ep:
                                continue
                            try:
                                cls = kappa3_class(Q1, a, b, A, B)
                            except ParameterError:
                                continue
                            if cls is None:
                                continue
                            out.extend(
                                _kappa3_lines_in_box(
                                    Q1, C, a, b, A, B, cls, d_box, e_box, seen
                                )
                            )
    out.sort(key=lambda f: (f.Q1, f.A, f.B, f.a, f.b, f.base))
    return out


def _kappa3_lines_in_box(
    Q1: int,
    C: Fraction,
    a: int,
    b: int,
    A: int,
    B: int,
    cls: tuple[int, int],
    d_box: tuple[int, int],
    e_box: tuple[int, int],
    seen: set[tuple[Quad, Quad]],
) -> list[LineFamily]:
    direction = (
        a * A**3 * B**2 * C,
        -b * A**2 * B**3 * C,
        Fraction(a * b**3 * B**2),
        Fraction(a**3 * b * A**2),
    )
    step, pattern = _integral_step(direction)
    if step[0] < 0:  # orient so the d component increases
        step = tuple(-c for c in step)
    r, mod = cls
    d_lo, d_hi = d_box
    lo = (d_lo - step[0]) // A - 1
    hi = (d_hi + step[0]) // A + 1
    first = r + mod * ((lo - r + mod - 1) // mod)
    out = []
    for D1 in range(first, hi + 1, mod):
        U1, V1, E1 = _kappa3_derived(Q1, a, b, A, B, D1)
        base = (A * D1, B * E1, b * b * U1, a * a * V1)
        m_lo = -((base[0] - d_lo) // step[0])  # ceil((d_lo - base_d) / step_d)
        m_hi = (d_hi - base[0]) // step[0]
        hit = None
        for m in range(m_lo, m_hi + 1):
            d, e, u, v = (base[i] + m * step[i] for i in range(4))
            if e_box[0] <= e <= e_box[1] and u >= 1 and v >= 1 and d_lo <= d <= d_hi:
                hit = (d, e, u, v)
                break
        if hit is None:
            continue
        key = (hit, step)
        if key in seen:
            continue
        seen.add(key)
        fam = LineFamily(
            kappa=3,
            base=base,
            direction=direction,
            step=step,
            pattern=pattern,
            a=a,
            b=b,
            A=A,
            B=B,
            Q1=Q1,
            C=C,
            D1=D1,
            E1=E1,
            U1=U1,
            V1=V1,
            witness=hit,
        )
        fam.validate()
        out.append(fam)
    return out


def enumerate_lines(
    d_box: tuple[int, int], e_box: tuple[int, int], x: int, stress: bool = False
) -> list[LineFamily]:
    """All line families meeting the (d, e) box, for k=2, l=1, h=1.

    kappa = -1 families exist for every coprime (d, e); the kappa = 3
    search is bounded by ab <= (UV)^(1/4) and A^2 B^2 <= 4 min(D, E)
    with implied constants 1, widened by 4 under stress=True.  x enters
    only through the (UV)^(1/4) budget.
    """
    if d_box[0] < 1 or e_box[0] < 1:
        raise ParameterError("boxes start at 1")
    fams: list[LineFamily] = []
    for e in range(e_box[0], e_box[1] + 1):
        for d in range(d_box[0], d_box[1] + 1):
            if gcd(d, e) == 1:
                fams.append(_kappa_minus_one(d, e))
    fams.extend(_kappa3_families(d_box, e_box, x, stress))
    return fams


def count_split(box: Countable) -> tuple[int, int]:
    """(on_line, off_line) partition of the brute solution list."""
    if (box.k, box.l, box.h) != (2, 1, 1):
        raise ParameterError("line split is defined for k=2, l=1, h=1")
    sols = brute_count(box)
    r = box.ranges()
    if isinstance(box, ExplicitBox):
        x = max(r.e[1] ** 2 * r.v[1], r.d[1] ** 2 * r.u[1], 1)
    else:
        x = box.x
    if not sols:
        return 0, 0
    fams = enumerate_lines(r.d, r.e, x)
    by_pair = {(f.base[0], f.base[1]): f for f in fams if f.kappa == -1}
    kappa3 = [f for f in fams if f.kappa == 3]
    on = 0
    for q in sols:
        tup = (q.d, q.e, q.u, q.v)
        fam = by_pair.get((q.d, q.e))
        if fam is not None and fam.contains(tup):
            on += 1
        elif any(f.contains(tup) for f in kappa3):
            on += 1
    return on, len(sols) - on
