"""Modified continued fractions, admissible sequences and partitions of
positive rationals, Farey extension/reduction, the attached ring elements
m(P), joins, and the right GL(2, Z) action on admissible sequences.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple, Union

from .core import NEG_INF, ZERO, ExtRational, FormalSum, I, IntMat2, M, T, T_pow

Number = Union[ExtRational, Fraction, int, str]

# m(P) - m(P') = (MTM + T - I) * W for a single Farey step
FAREY_GENERATOR = M * T * M + T - I
# the generator of the ideal used for the Lewis system: I - T - MTM
IDEAL_GENERATOR = I - T - M * T * M


def pair_matrix(x: ExtRational, y: ExtRational) -> IntMat2:
    """[q_x, -p_x; q_y, -p_y] for two consecutive points."""
    return IntMat2(x.q, -x.p, y.q, -y.p)


def is_admissible(points: Sequence[Number]) -> bool:
    pts = [ExtRational.of(x) for x in points]
    return all(pair_matrix(u, v).det == 1 for u, v in zip(pts, pts[1:]))


def is_minimal(points: Sequence[Number]) -> bool:
    """Admissible, ends at -infinity, denominators strictly decreasing."""
    pts = [ExtRational.of(x) for x in points]
    if not pts or not pts[-1].is_neg_inf or not is_admissible(pts):
        return False
    qs = [x.q for x in pts]
    return all(a > b for a, b in zip(qs, qs[1:]))


@dataclass(frozen=True)
class AdmissibleSequence:
    points: Tuple[ExtRational, ...]

    def __post_init__(self):
        pts = tuple(ExtRational.of(x) for x in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 1:
            raise ValueError("empty sequence")
        for j, (u, v) in enumerate(zip(pts, pts[1:]), start=1):
            if pair_matrix(u, v).det != 1:
                raise ValueError(f"not admissible at position {j}: {u}, {v}")

    @classmethod
    def of(cls, points: Sequence[Number]) -> "AdmissibleSequence":
        return cls(tuple(ExtRational.of(x) for x in points))

    @property
    def k(self) -> int:
        """Index of the last point (length is k + 1)."""
        return len(self.points) - 1

    @property
    def is_partition(self) -> bool:
        first = self.points[0]
        return self.points[-1].is_neg_inf and not first.is_neg_inf and first.p >= 0

    @property
    def is_minimal(self) -> bool:
        return is_minimal(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, j):
        return self.points[j]

    def __str__(self) -> str:
        return "(" + ", ".join("-inf" if x.is_neg_inf else str(x.to_fraction()) for x in self.points) + ")"

    def to_json(self) -> list:
        return ["-inf" if x.is_neg_inf else str(x) for x in self.points]


Partition = AdmissibleSequence


def _check_domain(x: Number, allow_zero: bool) -> ExtRational:
    x = ExtRational.of(x)
    if x.is_neg_inf or x.p < 0 or (x.p == 0 and not allow_zero):
        raise ValueError("domain is Q+")
    return x


def continued_fraction(x: Fraction) -> List[int]:
    """Regular expansion [a_0, ..., a_N] of x >= 0, normalised so a_N > 1
    whenever N > 0 (x = 1 gives [1])."""
    p, q = x.numerator, x.denominator
    out = []
    while q:
        a, r = divmod(p, q)
        out.append(a)
        p, q = q, r
    if len(out) > 1 and out[-1] == 1:
        out.pop()
        out[-1] += 1
    return out


def from_continued_fraction(cf: Sequence[int]) -> Fraction:
    p0, q0, p1, q1 = 1, 0, cf[0], 1
    for a in cf[1:]:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
    return Fraction(p1, q1)


def _normalize_cf(cf: List[int]) -> List[int]:
    if len(cf) > 1 and cf[-1] == 1:
        cf = cf[:-2] + [cf[-2] + 1]
    return cf


def mcfe(x: Number, allow_zero: bool = False) -> AdmissibleSequence:
    """Modified continued fraction expansion of x.

    Drops the last partial quotient when its index is odd and decrements it
    when the index is even; 0 is followed by -infinity.  The expansion [1]
    is treated under the even rule, so positive integers m give
    (m, m-1, ..., 1, 0, -inf).
    """
    x = _check_domain(x, allow_zero)
    pts = [x]
    cur = x.to_fraction()
    while cur != 0:
        cf = continued_fraction(cur)
        m = len(cf) - 1
        if m % 2:
            nxt = cf[:-1]
        else:
            nxt = cf[:-1] + [cf[-1] - 1]
        nxt = _normalize_cf(nxt)
        cur = from_continued_fraction(nxt)
        pts.append(ExtRational.of(cur))
    pts.append(NEG_INF)
    return AdmissibleSequence(tuple(pts))


def minimal_partition(x: Number, allow_zero: bool = False) -> AdmissibleSequence:
    """The unique partition of x with strictly decreasing denominators.

    Each next denominator solves p_{j-1} q_j = 1 (mod q_{j-1}) with
    0 <= q_j < q_{j-1}.
    """
    x = _check_domain(x, allow_zero)
    pts = [x]
    p, q = x.p, x.q
    while q > 0:
        if q == 1:
            q_next = 0
        else:
            q_next = pow(p % q, -1, q)
        p_next = (p * q_next - 1) // q
        pts.append(ExtRational(p_next, q_next))
        p, q = p_next, q_next
    return AdmissibleSequence(tuple(pts))


def m_of(P: Union[AdmissibleSequence, Sequence[Number]]) -> FormalSum:
    if not isinstance(P, AdmissibleSequence):
        P = AdmissibleSequence.of(P)
    pts = P.points
    return FormalSum([pair_matrix(u, v) for u, v in zip(pts, pts[1:])])


def mediant(x: ExtRational, y: ExtRational) -> ExtRational:
    return ExtRational(x.p + y.p, x.q + y.q)


def farey_extend(P: AdmissibleSequence, l: int) -> AdmissibleSequence:
    """Insert the mediant of x_{l-1} and x_l (1 <= l <= k)."""
    if not 1 <= l <= P.k:
        raise IndexError(f"extension index {l} out of range 1..{P.k}")
    pts = list(P.points)
    pts.insert(l, mediant(pts[l - 1], pts[l]))
    return AdmissibleSequence(tuple(pts))


def farey_reduce(P: AdmissibleSequence, l: int) -> AdmissibleSequence:
    """Delete x_l, which must be the mediant of its neighbours."""
    if not 1 <= l <= P.k - 1:
        raise IndexError(f"reduction index {l} out of range 1..{P.k - 1}")
    pts = list(P.points)
    u, v, w = pts[l - 1], pts[l], pts[l + 1]
    # compare unreduced: 2/3 and 0/1 give 2/4, which is not the mediant 1/2
    if (u.p + w.p, u.q + w.q) != (v.p, v.q):
        raise ValueError("not a Farey triple")
    del pts[l]
    return AdmissibleSequence(tuple(pts))


def _descent_index(P: AdmissibleSequence):
    qs = [x.q for x in P.points]
    for l in range(1, len(qs) - 1):
        if qs[l] > qs[l + 1] and qs[l] >= qs[l - 1]:
            return l
    return None


def reduce_to_minimal(P: AdmissibleSequence) -> Tuple[AdmissibleSequence, List[IntMat2]]:
    """Farey-reduce a partition down to the minimal one.

    Returns the minimal partition and one witness W per step, with
    m(before) - m(after) = (MTM + T - I) * W.  Summing, the difference
    m(P) - m(P_x) equals (I - T - MTM) * (-sum W).
    """
    if not P.is_partition:
        raise ValueError("reduce_to_minimal expects a partition")
    witnesses = []
    while True:
        l = _descent_index(P)
        if l is None:
            break
        pts = P.points
        witnesses.append(pair_matrix(pts[l - 1], pts[l + 1]))
        P = farey_reduce(P, l)
    return P, witnesses


def join(P1: AdmissibleSequence, P2: AdmissibleSequence) -> AdmissibleSequence:
    if P1.points[-1] != P2.points[0]:
        raise ValueError(f"cannot join: {P1.points[-1]} != {P2.points[0]}")
    return AdmissibleSequence(P1.points + P2.points[1:])


def right_act_point(x: ExtRational, A: IntMat2) -> ExtRational:
    """x . A = A^{-1} x = (d x - b)/(-c x + a)."""
    return ExtRational(A.d * x.p - A.b * x.q, A.a * x.q - A.c * x.p)


def act_right(P: AdmissibleSequence, A: IntMat2) -> AdmissibleSequence:
    det = A.det
    if det not in (1, -1):
        raise ValueError("act_right needs A in GL(2, Z)")
    for x in P.points:
        # a/c >= x, read as a > 0 when c = 0
        if A.c == 0:
            ok = A.a > 0
        else:
            ok = x.is_neg_inf or Fraction(A.a, A.c) >= x.to_fraction()
        if not ok:
            raise ValueError("action undefined on this sequence")
    try:
        image = [right_act_point(x, A) for x in P.points]
    except ValueError as exc:
        raise ValueError("action undefined on this sequence") from exc
    if det == -1:
        image.reverse()
    return AdmissibleSequence(tuple(image))


def lift_inverse(i: int, n: int) -> int:
    return pow(i, -1, n) if n > 1 else 0


@dataclass(frozen=True)
class XTSData:
    x: ExtRational
    y: ExtRational
    z: ExtRational
    s: int
    X: IntMat2
    joined: AdmissibleSequence
    Ay: IntMat2
    lhs: FormalSum
    rhs: FormalSum

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def xts_data(n: int, c: int, c2: int, i: int) -> XTSData:
    """Build x, y, z, s, X and both sides of the three-partition identity
    for divisors c, c2 of n with gcd(c, c2) = 1 = gcd(i, n)."""
    if c < 1 or c2 < 1 or n % c or n % c2:
        raise ValueError("c and c' must be positive divisors of n")
    if gcd(c, c2) != 1:
        raise ValueError("gcd(c, c') must be 1")
    if gcd(i, n) != 1:
        raise ValueError("gcd(i, n) must be 1")
    nc, nc2 = n // c, n // c2
    ih = lift_inverse(i, n)
    bx = (c2 * i - c) % nc
    by = (c2 * i) % nc
    bz = (c * ih - c2) % nc2
    x = ExtRational(bx, nc)
    y = ExtRational(by, nc)
    z = ExtRational(bz, nc2)
    s_num = bx + c - by
    if s_num % nc:
        raise ArithmeticError("shift s is not integral")
    s = s_num // nc

    left = IntMat2(bz + c2, c2, nc2, 0)
    Ay = IntMat2(c, by, 0, nc)
    prod = left * Ay.adjugate()
    if any(e % n for e in prod):
        raise ArithmeticError("X is not integral")
    X = IntMat2(*(e // n for e in prod))
    if X.det != -1:
        raise ArithmeticError("det X != -1")

    Px = minimal_partition(x, allow_zero=True)
    Pz = minimal_partition(z, allow_zero=True)
    joined = join(act_right(Pz, X), act_right(Px, T_pow(s)))

    Ax = IntMat2(c, bx, 0, nc)
    Az = IntMat2(c2, bz, 0, nc2)
    lhs = m_of(Px) * Ax * T + M * m_of(Pz) * Az * T * M
    rhs = m_of(joined) * Ay
    return XTSData(x, y, z, s, X, joined, Ay, lhs, rhs)


def xts_identity_check(n: int, c: int, c2: int, i: int) -> bool:
    return xts_data(n, c, c2, i).holds
