"""The coset space I_n = Gamma0bar(n) \\ GL(2, Z), realised as classes [x:y]
with gcd(x, y, n) = 1, parametrised by n-admissible pairs (c, b).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .core import ExtRational, IntMat2, M, Q, T, T_INV


def prime_factors(n: int) -> List[int]:
    out, p = [], 2
    n = abs(n)
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n: int) -> List[int]:
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def coset_count(n: int) -> int:
    """n * prod_{p | n} (1 + 1/p)."""
    r = n
    for p in prime_factors(n):
        r = r // p * (p + 1)
    return r


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, u, v) with u a + v b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def unit_lift(u: int, n: int, step: int) -> int:
    """u + step*t coprime to n, for gcd(u, step) = 1 and step | n.

    t is the product of the primes of n that divide neither step nor u.
    """
    t = 1
    for p in prime_factors(n):
        if step % p and u % p:
            t *= p
    nu = u + step * t
    if gcd(nu, n) != 1:
        raise ArithmeticError(f"unit lift failed for u={u}, n={n}, step={step}")
    return nu


@dataclass(frozen=True, order=True)
class CosetIndex:
    """Canonical (c, b) for an element of I_n; ordered lexicographically."""

    n: int
    c: int
    b: int

    def __post_init__(self):
        n, c, b = self.n, self.c, self.b
        if n < 1 or c < 1 or n % c or not 0 <= b < n // c:
            raise ValueError(f"invalid coset coordinates {(n, c, b)}")
        if gcd(gcd(c, b), n // c) != 1:
            raise ValueError(f"({c},{b}) is not {n}-admissible")

    @property
    def d(self) -> int:
        return d_of(self.c, self.b, self.n)

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.c, self.d)

    def __repr__(self) -> str:
        return f"({self.c},{self.b})"


def is_admissible_pair(c: int, b: int, n: int) -> bool:
    """Existence of k in [0, c) with gcd(c, b + k n/c) = 1."""
    nc = n // c
    return any(gcd(c, b + k * nc) == 1 for k in range(c))


def d_of(c: int, b: int, n: int) -> int:
    nc = n // c
    for k in range(c):
        if gcd(c, b + k * nc) == 1:
            return c + b + k * nc
    raise ValueError(f"({c},{b}) is not {n}-admissible")


@lru_cache(maxsize=None)
def _enumerate(n: int) -> Tuple[CosetIndex, ...]:
    out = []
    for c in divisors(n):
        nc = n // c
        for b in range(nc):
            if gcd(gcd(c, b), nc) == 1:
                out.append(CosetIndex(n, c, b))
    return tuple(out)


def enumerate_cosets(n: int) -> List[CosetIndex]:
    if n < 1:
        raise ValueError("level must be >= 1")
    return list(_enumerate(n))


@lru_cache(maxsize=None)
def _position(n: int) -> Dict[CosetIndex, int]:
    return {i: k for k, i in enumerate(_enumerate(n))}


def position(i: CosetIndex) -> int:
    return _position(i.n)[i]


def canonicalize(n: int, x: int, y: int) -> CosetIndex:
    """Canonical (c, b) of the class [x:y] in I_n.

    c = gcd(x, n); a unit nu with nu x = c (mod n) moves the class to
    [c : nu y], and b is read off from d = b + c (mod n/c).
    """
    if gcd(gcd(x, y), n) != 1:
        raise ValueError(f"[{x}:{y}] not in I_{n}")
    if n == 1:
        return CosetIndex(1, 1, 0)
    c, u, _ = ext_gcd(x % n, n)
    step = n // c
    nu = unit_lift(u, n, step)
    d = nu * y
    return CosetIndex(n, c, (d - c) % step)


def act(i: CosetIndex, g: IntMat2) -> CosetIndex:
    """Right action [x:y] g = [a x + c y : b x + d y]."""
    if g.det not in (1, -1):
        raise ValueError("act needs g in GL(2, Z)")
    x, y = i.pair
    return canonicalize(i.n, g.a * x + g.c * y, g.b * x + g.d * y)


def A_of(i: CosetIndex) -> IntMat2:
    return IntMat2(i.c, i.b, 0, i.n // i.c)


def B_of(i: CosetIndex) -> IntMat2:
    return IntMat2(i.n // i.c, 0, i.b, i.c)


def x_of(i: CosetIndex) -> ExtRational:
    return ExtRational(i.b, i.n // i.c)


def sigma(n1: int, n2: int, i: CosetIndex) -> CosetIndex:
    if n1 % n2:
        raise ValueError(f"{n2} does not divide {n1}")
    if i.n != n1:
        raise ValueError("index is not at level n1")
    x, y = i.pair
    return canonicalize(n2, x, y)


def symmetric_partner(i: CosetIndex) -> CosetIndex:
    c, d = i.pair
    return canonicalize(i.n, d - c, d)


def is_self_symmetric(i: CosetIndex) -> bool:
    return symmetric_partner(i) == i


def self_symmetric_criterion(i: CosetIndex) -> bool:
    d = i.d
    return i.c == 1 and (d * (d - 2)) % i.n == 0


class PermutationRep:
    """rho(g) on the ordered list of I_n: row i has its 1 in column i.g."""

    def __init__(self, n: int, g: IntMat2):
        if g.det not in (1, -1):
            raise ValueError("rho needs g in GL(2, Z)")
        self.n = n
        self.g = g
        idx = _enumerate(n)
        pos = _position(n)
        self.perm: Tuple[int, ...] = tuple(pos[act(i, g)] for i in idx)

    @classmethod
    def from_perm(cls, n: int, g: IntMat2, perm: Sequence[int]) -> "PermutationRep":
        obj = cls.__new__(cls)
        obj.n, obj.g, obj.perm = n, g, tuple(perm)
        return obj

    def __len__(self) -> int:
        return len(self.perm)

    def __mul__(self, other: "PermutationRep") -> "PermutationRep":
        # (rho(g) rho(h))_{i,:} picks row perm_g[i] of rho(h)
        return PermutationRep.from_perm(self.n, self.g * other.g, [other.perm[j] for j in self.perm])

    def __eq__(self, other) -> bool:
        return isinstance(other, PermutationRep) and self.perm == other.perm

    def matrix(self) -> np.ndarray:
        mu = len(self.perm)
        P = np.zeros((mu, mu), dtype=np.int64)
        P[np.arange(mu), self.perm] = 1
        return P

    def one_line(self) -> List[int]:
        return list(self.perm)

    def order(self) -> int:
        from math import lcm

        seen, out = set(), 1
        for start in range(len(self.perm)):
            if start in seen:
                continue
            length, j = 0, start
            while j not in seen:
                seen.add(j)
                j = self.perm[j]
                length += 1
            out = lcm(out, length)
        return out


def rho(n: int, g: IntMat2) -> PermutationRep:
    return PermutationRep(n, g)


WORD_LETTERS = {"T": T, "t": T_INV, "M": M, "Q": Q, "q": Q.inverse(), "I": IntMat2(1, 0, 0, 1)}


def parse_word(word: str) -> IntMat2:
    """Product of letters T, t = T^-1, M, Q, q = Q^-1, I; e.g. 'tM'."""
    g = IntMat2(1, 0, 0, 1)
    for ch in word:
        if ch not in WORD_LETTERS:
            raise ValueError(f"unknown letter {ch!r} in word {word!r}")
        g = g * WORD_LETTERS[ch]
    return g
