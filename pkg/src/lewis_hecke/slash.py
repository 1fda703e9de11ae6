"""The weight-s slash action of integer matrices on functions holomorphic
off a real half-line, numerically for complex s and exactly (as rational
functions) for integer s.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Union

from sympy import QQ
from sympy.polys.fields import field as _rational_field

from .core import FormalSum, IntMat2, I, M, T

Number = Union[int, float, complex]
NEG_INFINITY = -math.inf


class SlashError(ValueError):
    pass


@dataclass(frozen=True)
class BranchedFunction:
    """phi holomorphic on C minus (-inf, branch_point].

    meromorphic=True marks a single-valued function (e.g. 1/z): the
    branching condition a - c r > 0 is then not needed, only poles are
    excluded, and the cut of the result comes from (cz+d)^{-2s} alone.
    """

    func: Callable[[complex], complex]
    branch_point: float
    meromorphic: bool = False
    name: str = "phi"

    def on_cut(self, z: complex) -> bool:
        z = complex(z)
        return z.imag == 0 and z.real <= self.branch_point

    def __call__(self, z: complex) -> complex:
        if not self.meromorphic and self.on_cut(z):
            raise SlashError(f"domain: {z} lies on the cut (-inf, {self.branch_point}]")
        try:
            return complex(self.func(complex(z)))
        except ZeroDivisionError as exc:
            raise SlashError(f"domain: {self.name} has a pole at {z}") from exc


def inv_z() -> BranchedFunction:
    return BranchedFunction(lambda z: 1 / z, 0.0, meromorphic=True, name="1/z")


def constant(value: complex) -> BranchedFunction:
    return BranchedFunction(lambda z: value, NEG_INFINITY, meromorphic=True, name=f"const {value}")


def in_G(R: IntMat2) -> bool:
    return R.det != 0 and (R.c > 0 or (R.c == 0 and R.a > 0 and R.d > 0))


def in_G_plus(R: IntMat2) -> bool:
    return in_G(R) and R.a > 0 and R.b >= 0 and R.d >= 0


def branching_ok(R: IntMat2, r: float) -> bool:
    """a - c r > 0."""
    if r == NEG_INFINITY:
        return R.c > 0 or R.a > 0
    return R.a - R.c * r > 0


def slashed_branch_point(R: IntMat2, r: float) -> float:
    """max{(d r - b)/(a - c r), -d/c}, with -d/c = -inf when c = 0."""
    pole = -R.d / R.c if R.c > 0 else NEG_INFINITY
    if r == NEG_INFINITY:
        moved = -R.d / R.c if R.c > 0 else NEG_INFINITY
    else:
        moved = (R.d * r - R.b) / (R.a - R.c * r)
    return max(moved, pole)


def _power(w: complex, e: complex) -> complex:
    """Principal w^e = exp(e log w) on C minus (-inf, 0]."""
    return cmath.exp(e * cmath.log(w))


def _check_pair(phi: BranchedFunction, R: IntMat2) -> float:
    if not in_G(R):
        raise SlashError(f"outside 𝒢: {R!r}")
    if not phi.meromorphic and not branching_ok(R, phi.branch_point):
        raise SlashError(f"branching condition violated for {R!r} at r = {phi.branch_point}")
    if phi.meromorphic:
        return -R.d / R.c if R.c > 0 else NEG_INFINITY
    return slashed_branch_point(R, phi.branch_point)


def slash_num(phi: BranchedFunction, R: IntMat2, s: Number, z: Number) -> complex:
    """|det R|^s (cz+d)^{-2s} phi((az+b)/(cz+d))."""
    cut = _check_pair(phi, R)
    z = complex(z)
    if z.imag == 0 and z.real <= cut:
        raise SlashError(f"domain: {z} lies on the cut (-inf, {cut}] of phi|{R!r}")
    w = R.c * z + R.d
    if w == 0:
        raise SlashError(f"domain: cz + d vanishes at {z}")
    s = complex(s)
    factor = _power(abs(R.det), s) * _power(w, -2 * s)
    return factor * phi((R.a * z + R.b) / w)


def slash_function(phi: BranchedFunction, R: IntMat2, s: Number) -> BranchedFunction:
    """phi|_s R as a new BranchedFunction with the propagated branch point."""
    cut = _check_pair(phi, R)
    return BranchedFunction(lambda z: slash_num(phi, R, s, z), cut, name=f"{phi.name}|{R!r}")


def sum_branch_point(phi: BranchedFunction, P: FormalSum) -> float:
    return max((_check_pair(phi, R) for R in P.matrices()), default=NEG_INFINITY)


def slash_sum(phi: BranchedFunction, P: FormalSum, s: Number, z: Number) -> complex:
    total = 0j
    for R, k in P.items():
        try:
            total += k * slash_num(phi, R, s, z)
        except SlashError as exc:
            raise SlashError(f"term {R!r}: {exc}") from exc
    return total


def slash_sum_function(phi: BranchedFunction, P: FormalSum, s: Number) -> BranchedFunction:
    return BranchedFunction(lambda z: slash_sum(phi, P, s, z), sum_branch_point(phi, P), name=f"{phi.name}|P")


# exact mode ---------------------------------------------------------------

_FIELD, _Z = _rational_field("z", QQ)


class RationalFunction:
    """Exact element of Q(z); numerator and denominator kept coprime."""

    __slots__ = ("_f",)

    def __init__(self, f):
        self._f = f

    @classmethod
    def z(cls) -> "RationalFunction":
        return cls(_Z)

    @classmethod
    def const(cls, value: Union[int, Fraction]) -> "RationalFunction":
        value = Fraction(value)
        return cls(_FIELD(QQ(value.numerator, value.denominator)))

    @classmethod
    def inv_z(cls) -> "RationalFunction":
        return cls(1 / _Z)

    @classmethod
    def from_coeffs(cls, num: Sequence, den: Sequence) -> "RationalFunction":
        """Coefficients listed from the constant term upward."""

        def poly(cs):
            acc = _FIELD(0)
            for k, c in enumerate(cs):
                c = Fraction(c)
                acc += QQ(c.numerator, c.denominator) * _Z**k
            return acc

        return cls(poly(num) / poly(den))

    @staticmethod
    def _coerce(x) -> "RationalFunction":
        if isinstance(x, RationalFunction):
            return x
        return RationalFunction.const(x)

    def __add__(self, other):
        return RationalFunction(self._f + self._coerce(other)._f)

    __radd__ = __add__

    def __sub__(self, other):
        return RationalFunction(self._f - self._coerce(other)._f)

    def __rsub__(self, other):
        return RationalFunction(self._coerce(other)._f - self._f)

    def __mul__(self, other):
        return RationalFunction(self._f * self._coerce(other)._f)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self._f / other._f)

    def __neg__(self):
        return RationalFunction(-self._f)

    def __pow__(self, k: int):
        return RationalFunction(self._f**k)

    def __eq__(self, other) -> bool:
        try:
            return self._f == self._coerce(other)._f
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash(self._f)

    def is_zero(self) -> bool:
        return self._f == 0

    def numerator_coeffs(self) -> List[Fraction]:
        return _coeffs(self._f.numer)

    def denominator_coeffs(self) -> List[Fraction]:
        return _coeffs(self._f.denom)

    def compose_moebius(self, R: IntMat2) -> "RationalFunction":
        """f((az+b)/(cz+d))."""
        if R.det == 0:
            raise ValueError("singular matrix")
        w = (R.a * _Z + R.b) / (R.c * _Z + R.d)
        return RationalFunction(_evaluate(self._f, w))

    def proportional_to(self, other: "RationalFunction") -> Optional[Fraction]:
        """k with self = k * other, or None."""
        if other.is_zero():
            return Fraction(0) if self.is_zero() else None
        q = self._f / other._f
        if q.numer.degree() > 0 or q.denom.degree() > 0:
            return None
        value = q.numer.LC / q.denom.LC
        return Fraction(int(value.numerator), int(value.denominator))

    def __call__(self, z):
        """Exact value at a rational point, complex value otherwise."""
        exact = isinstance(z, (int, Fraction))
        conv = (lambda c: c) if exact else complex
        num = sum(conv(c) * z**k for k, c in enumerate(self.numerator_coeffs()))
        den = sum(conv(c) * z**k for k, c in enumerate(self.denominator_coeffs()))
        return num / den

    def __repr__(self) -> str:
        return str(self._f.as_expr())


def _coeffs(poly) -> List[Fraction]:
    deg = poly.degree()
    if deg < 0:
        return [Fraction(0)]
    out = [Fraction(0)] * (deg + 1)
    for (k,), c in poly.terms():
        out[k] = Fraction(int(c.numerator), int(c.denominator))
    return out


def _evaluate(f, w):
    def horner(poly):
        cs = _coeffs(poly)
        acc = _FIELD(0)
        for c in reversed(cs):
            acc = acc * w + QQ(c.numerator, c.denominator)
        return acc

    return horner(f.numer) / horner(f.denom)


def slash_exact_term(f: RationalFunction, R: IntMat2, s: int) -> RationalFunction:
    """|det R|^s (cz+d)^{-2s} f((az+b)/(cz+d)), built with one reduction."""
    if f.is_zero():
        return f
    N, D = f._f.numer, f._f.denom
    ring = N.ring
    z = ring.gens[0]
    p, q = R.a * z + R.b, R.c * z + R.d
    m = max(N.degree(), D.degree())
    p_pow, q_pow = [ring.one], [ring.one]
    for _ in range(m):
        p_pow.append(p_pow[-1] * p)
        q_pow.append(q_pow[-1] * q)

    def homog(poly):
        acc = ring.zero
        for (k,), c in poly.terms():
            acc += c * p_pow[k] * q_pow[m - k]
        return acc

    num, den = homog(N), homog(D)
    scale = QQ(abs(R.det)) ** s
    if s >= 0:
        den = den * q ** (2 * s)
    else:
        num = num * q ** (-2 * s)
    return RationalFunction(_FIELD.new(num * scale, den))


def slash_exact(f: RationalFunction, P: Union[FormalSum, IntMat2], s) -> RationalFunction:
    """f|_s P in Q(z); terms are summed in the order P stores them, which
    for chain-ordered sums keeps intermediate degrees small."""
    if isinstance(s, bool) or not isinstance(s, int):
        if isinstance(s, Fraction) and s.denominator == 1:
            s = int(s)
        elif isinstance(s, float) and s.is_integer():
            s = int(s)
        else:
            raise ValueError("exact mode requires integer weight")
    P = FormalSum.coerce(P)
    acc = RationalFunction.const(0)
    for R, k in P.items():
        if R.det == 0:
            raise ValueError(f"singular term {R!r}")
        acc = acc + slash_exact_term(f, R, s) * k
    return acc


def lewis_operator(lam: int) -> FormalSum:
    """I - T - lam TM: f|_s of it is the Lewis residual."""
    return I - T - (T * M) * lam


def lewis_residual_exact(f: RationalFunction, s: int, lam: int) -> RationalFunction:
    return slash_exact(f, lewis_operator(lam), s)


# numeric checks -----------------------------------------------------------


def default_points() -> List[complex]:
    """25 real points inside (0.1, 5.1) and 10 points off the axis."""
    real = [0.1 + 5.0 * (k + 0.5) / 25 for k in range(25)]
    ims = [0.5, -0.5, 1.0, -1.0]
    cplx = [complex(0.5 + 0.5 * k, ims[k % 4]) for k in range(10)]
    return [complex(x) for x in real] + cplx


def _rel_close(a: complex, b: complex, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def compose_check(
    phi: BranchedFunction,
    R1: IntMat2,
    R2: IntMat2,
    s: Number,
    points: Optional[Iterable[Number]] = None,
    tol: float = 1e-12,
) -> bool:
    """(phi|R1)|R2 == phi|(R1 R2) at the sample points, relative to tol."""
    R12 = R1 * R2
    for R in (R1, R2, R12):
        if not in_G(R):
            raise SlashError(f"hypothesis: {R!r} outside 𝒢")
    r = phi.branch_point
    if not branching_ok(R1, r) or not branching_ok(R12, r):
        raise SlashError("hypothesis: branching condition fails for R1 or R1 R2")
    r1 = slashed_branch_point(R1, r)
    if not branching_ok(R2, r1):
        raise SlashError("hypothesis: branching condition fails for (phi|R1, R2)")
    strict = BranchedFunction(phi.func, r, name=phi.name)
    inner = slash_function(strict, R1, s)
    pts = default_points() if points is None else [complex(z) for z in points]
    for z in pts:
        lhs = slash_num(inner, R2, s, z)
        rhs = slash_num(strict, R12, s, z)
        if not _rel_close(lhs, rhs, tol):
            return False
    return True


def lewis_residual(
    phi: Union[BranchedFunction, Callable[[complex], complex]],
    s: Number,
    lam: Number,
    points: Optional[Iterable[Number]] = None,
) -> float:
    """max |phi(z) - phi(z+1) - lam z^{-2s} phi(1 + 1/z)|."""
    f = phi if isinstance(phi, BranchedFunction) else BranchedFunction(phi, 0.0, meromorphic=True)
    pts = default_points() if points is None else [complex(z) for z in points]
    worst = 0.0
    for z in pts:
        val = f(z) - slash_num(f, T, s, z) - lam * slash_num(f, T * M, s, z)
        worst = max(worst, abs(val))
    return worst
