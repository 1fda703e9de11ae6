"""Exact arithmetic substrate: 2x2 integer matrices, extended rationals and
finite integer combinations of matrices (elements of the ring Z[Mat_*(2, Z)]).

Everything here is immutable and uses Python integers, so chain compositions
can never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union


def ceil_ratio(num: int, den: int) -> int:
    """Smallest integer >= num/den (den > 0)."""
    if den <= 0:
        raise ValueError("ceil_ratio requires a positive denominator")
    return -((-num) // den)


@dataclass(frozen=True, slots=True)
class IntMat2:
    """The integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __mul__(self, other):
        if isinstance(other, IntMat2):
            return mat_mul(self, other)
        if isinstance(other, FormalSum):
            return FormalSum({self: 1}) * other
        if isinstance(other, int):
            # ring scalar, not entrywise scaling (that is diag(k) * A)
            return FormalSum({self: other})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def scaled(self, k: int) -> "IntMat2":
        return IntMat2(self.a * k, self.b * k, self.c * k, self.d * k)

    def __add__(self, other):
        return FormalSum({self: 1}) + other

    def __sub__(self, other):
        return FormalSum({self: 1}) - other

    def __neg__(self) -> "FormalSum":
        return FormalSum({self: -1})

    def inverse(self) -> "IntMat2":
        """Inverse in GL(2, Z); only defined for determinant +-1."""
        det = self.det
        if det not in (1, -1):
            raise ValueError(f"{self} is not invertible over Z (det={det})")
        return IntMat2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def adjugate(self) -> "IntMat2":
        return IntMat2(self.d, -self.b, -self.c, self.a)

    def power(self, k: int) -> "IntMat2":
        if k < 0:
            return self.inverse().power(-k)
        result, base = I, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def as_list(self) -> list:
        return [self.a, self.b, self.c, self.d]

    def __repr__(self) -> str:
        return f"[{self.a},{self.b};{self.c},{self.d}]"


def mat_mul(A: IntMat2, B: IntMat2) -> IntMat2:
    return IntMat2(
        A.a * B.a + A.b * B.c,
        A.a * B.b + A.b * B.d,
        A.c * B.a + A.d * B.c,
        A.c * B.b + A.d * B.d,
    )


def content(A: IntMat2) -> int:
    """gcd of the entries; A is primitive iff this is 1."""
    g = gcd(gcd(A.a, A.b), gcd(A.c, A.d))
    if g == 0:
        raise ValueError("undefined content: zero matrix")
    return g


I = IntMat2(1, 0, 0, 1)
M = IntMat2(0, 1, 1, 0)
T = IntMat2(1, 1, 0, 1)
Q = IntMat2(0, -1, 1, 0)
T_INV = T.inverse()

GENERATORS = {"I": I, "M": M, "T": T, "Q": Q}


def T_pow(k: int) -> IntMat2:
    return IntMat2(1, k, 0, 1)


def diag(d: int) -> IntMat2:
    return IntMat2(d, 0, 0, d)


@dataclass(frozen=True, slots=True, order=False)
class ExtRational:
    """p/q in lowest terms with q >= 0.  The pair (-1, 0) is -infinity,
    the single point at infinity of the projective line: any p/0 maps to it.
    """

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if q < 0:
            p, q = -p, -q
        if q == 0:
            if p == 0:
                raise ValueError("0/0 is not a rational number")
            p = -1
        else:
            g = gcd(p, q)
            p, q = p // g, q // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @classmethod
    def of(cls, x: Union["ExtRational", Fraction, int, str]) -> "ExtRational":
        if isinstance(x, ExtRational):
            return x
        if isinstance(x, int):
            return cls(x, 1)
        if isinstance(x, Fraction):
            return cls(x.numerator, x.denominator)
        if isinstance(x, str):
            s = x.strip()
            if s in ("-inf", "-oo", "-1/0"):
                return NEG_INF
            if "/" in s:
                p, q = s.split("/")
                return cls(int(p), int(q))
            return cls(int(s), 1)
        raise TypeError(f"cannot convert {x!r} to ExtRational")

    @property
    def is_neg_inf(self) -> bool:
        return self.q == 0

    def to_fraction(self) -> Fraction:
        if self.q == 0:
            raise ValueError("-infinity has no Fraction value")
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return float("-inf") if self.q == 0 else self.p / self.q

    def _key(self):
        return (0, Fraction(0)) if self.q == 0 else (1, Fraction(self.p, self.q))

    def __lt__(self, other: "ExtRational") -> bool:
        return self._key() < ExtRational.of(other)._key()

    def __le__(self, other: "ExtRational") -> bool:
        return self._key() <= ExtRational.of(other)._key()

    def __gt__(self, other: "ExtRational") -> bool:
        return self._key() > ExtRational.of(other)._key()

    def __ge__(self, other: "ExtRational") -> bool:
        return self._key() >= ExtRational.of(other)._key()

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    __repr__ = __str__


NEG_INF = ExtRational(-1, 0)
ZERO = ExtRational(0, 1)


def moebius(A: IntMat2, x: ExtRational) -> ExtRational:
    """Left action x -> (a x + b)/(c x + d) on projective coordinates."""
    if A.det == 0:
        raise ValueError("moebius action needs a nonsingular matrix")
    x = ExtRational.of(x)
    num = A.a * x.p + A.b * x.q
    den = A.c * x.p + A.d * x.q
    if num == 0 and den == 0:
        raise ValueError("image undefined")
    return ExtRational(num, den)


class FormalSum:
    """A finite Z-linear combination of IntMat2 (an element of the ring R).

    Zero coefficients are never stored.  Insertion order of the terms is
    preserved, which keeps serialized output and rational-function sums
    deterministic.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Union[Mapping[IntMat2, int], Iterable[IntMat2], None] = None):
        acc: Dict[IntMat2, int] = {}
        if terms is None:
            pass
        elif isinstance(terms, Mapping):
            for m, k in terms.items():
                if k:
                    acc[m] = acc.get(m, 0) + k
        else:
            for m in terms:
                acc[m] = acc.get(m, 0) + 1
        self._terms = {m: k for m, k in acc.items() if k}

    @classmethod
    def coerce(cls, x) -> "FormalSum":
        if isinstance(x, FormalSum):
            return x
        if isinstance(x, IntMat2):
            return cls({x: 1})
        if isinstance(x, int):
            return cls({I: x})
        raise TypeError(f"cannot coerce {x!r} to FormalSum")

    def items(self):
        return self._terms.items()

    def matrices(self):
        return self._terms.keys()

    def coeff(self, m: IntMat2) -> int:
        return self._terms.get(m, 0)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other) -> bool:
        try:
            other = FormalSum.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "FormalSum":
        other = FormalSum.coerce(other)
        acc = dict(self._terms)
        for m, k in other._terms.items():
            acc[m] = acc.get(m, 0) + k
        return FormalSum(acc)

    __radd__ = __add__

    def __neg__(self) -> "FormalSum":
        return FormalSum({m: -k for m, k in self._terms.items()})

    def __sub__(self, other) -> "FormalSum":
        return self + (-FormalSum.coerce(other))

    def __rsub__(self, other) -> "FormalSum":
        return FormalSum.coerce(other) - self

    def __mul__(self, other) -> "FormalSum":
        if isinstance(other, int):
            return FormalSum({m: k * other for m, k in self._terms.items()})
        other = FormalSum.coerce(other)
        acc: Dict[IntMat2, int] = {}
        for m1, k1 in self._terms.items():
            for m2, k2 in other._terms.items():
                m = m1 * m2
                acc[m] = acc.get(m, 0) + k1 * k2
        return FormalSum(acc)

    def __rmul__(self, other) -> "FormalSum":
        if isinstance(other, int):
            return self * other
        return FormalSum.coerce(other) * self

    def to_json(self) -> list:
        return [{"coeff": k, "matrix": m.as_list()} for m, k in self._terms.items()]

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, k in self._terms.items():
            parts.append(f"{m!r}" if k == 1 else f"{k}*{m!r}")
        return " + ".join(parts)
