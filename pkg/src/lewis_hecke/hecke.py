"""Hecke operators T_n and the primitive part T~_n as formal sums over S_n,
their action on period functions, the s = 1 multiplier kappa~(n), and
transport of Lewis solutions between levels along sigma.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Dict, List, Tuple

from .chains import PsiVector, chain_of, enum_Sn, psi_of, raw_certificates
from .core import FormalSum, IntMat2, content
from .cosets import CosetIndex, coset_count, enumerate_cosets, sigma
from .slash import BranchedFunction, RationalFunction, slash_exact, slash_sum


class IntegrityError(ArithmeticError):
    pass


@dataclass(frozen=True)
class HeckeSet:
    n: int
    variant: str
    terms: FormalSum

    def matrices(self) -> List[IntMat2]:
        return list(self.terms.matrices())

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "count": len(self.terms),
            "matrices": [A.as_list() for A in self.terms.matrices()],
        }


def square_divisors(n: int) -> List[int]:
    return [d for d in range(1, isqrt(n) + 1) if n % (d * d) == 0]


def is_squarefree(n: int) -> bool:
    return square_divisors(n) == [1]


@lru_cache(maxsize=None)
def _ttilde(n: int) -> HeckeSet:
    # chain order makes the exact s = 1 sums telescope
    mats = [A for i in enumerate_cosets(n) for A in chain_of(i).matrices]
    return HeckeSet(n, "tilde", FormalSum(mats))


def ttilde_set(n: int) -> HeckeSet:
    if n < 1:
        raise ValueError("n must be >= 1")
    return _ttilde(n)


def ttilde_by_content(n: int) -> HeckeSet:
    """The primitive members of S_n, found directly by content."""
    mats = sorted((A for A in enum_Sn(n) if content(A) == 1), key=lambda A: A.entries)
    return HeckeSet(n, "tilde", FormalSum(mats))


@lru_cache(maxsize=None)
def _tn(n: int) -> HeckeSet:
    mats = [A.scaled(d) for d in square_divisors(n) for A in _ttilde(n // (d * d)).matrices()]
    return HeckeSet(n, "full", FormalSum(mats))


def tn_set(n: int) -> HeckeSet:
    if n < 1:
        raise ValueError("n must be >= 1")
    return _tn(n)


def component_sum(psi: PsiVector) -> FormalSum:
    acc = FormalSum()
    for i in enumerate_cosets(psi.n):
        acc = acc + psi[i]
    return acc


def decompose(n: int) -> List[Tuple[int, HeckeSet]]:
    """Split S_n by content d: A = d A' with A' primitive in S_{n/d^2}.

    Raises IntegrityError unless every piece is exactly T~_{n/d^2} and the
    pieces cover S_n once.
    """
    groups: Dict[int, List[IntMat2]] = {}
    for A in sorted(enum_Sn(n), key=lambda A: A.entries):
        groups.setdefault(content(A), []).append(A)
    out = []
    for d in sorted(groups):
        m = n // (d * d)
        if d * d * m != n:
            raise IntegrityError(f"content {d} with d^2 not dividing {n}")
        reduced = {IntMat2(A.a // d, A.b // d, A.c // d, A.d // d) for A in groups[d]}
        if reduced != set(ttilde_set(m).matrices()):
            raise IntegrityError(f"content-{d} part of S_{n} is not d * T~_{m}")
        out.append((d, ttilde_set(m)))
    if sum(len(h) for _, h in out) != len(enum_Sn(n)):
        raise IntegrityError("pieces do not cover S_n exactly once")
    missing = [d for d in square_divisors(n) if d not in groups]
    if missing:
        raise IntegrityError(f"no matrices of content {missing} in S_{n}")
    return out


def _hecke(n: int, variant: str) -> HeckeSet:
    if variant == "tilde":
        return ttilde_set(n)
    if variant == "full":
        return tn_set(n)
    raise ValueError(f"unknown variant {variant!r}")


def apply(phi: BranchedFunction, n: int, s, z, variant: str = "tilde") -> complex:
    return slash_sum(phi, _hecke(n, variant).terms, s, z)


def hecke_function(phi: BranchedFunction, n: int, s, variant: str = "tilde") -> BranchedFunction:
    H = _hecke(n, variant).terms
    return BranchedFunction(lambda z: slash_sum(phi, H, s, z), 0.0, name=f"T{n}{phi.name}")


def exact_multiplier(n: int, variant: str = "tilde") -> Fraction:
    """k with (1/z)|_1 H = k/z, raising IntegrityError if not proportional."""
    inv = RationalFunction.inv_z()
    image = slash_exact(inv, _hecke(n, variant).terms, 1)
    k = image.proportional_to(inv)
    if k is None:
        raise IntegrityError(f"(1/z)|T{'~' if variant == 'tilde' else ''}_{n} is not a multiple of 1/z: {image}")
    return k


@lru_cache(maxsize=None)
def kappa_tilde(n: int) -> Fraction:
    return exact_multiplier(n, "tilde")


def kappa_full(n: int) -> Fraction:
    return exact_multiplier(n, "full")


def divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def kappa_formula(n: int) -> int:
    """|I_n|, the expected value of kappa~(n)."""
    return coset_count(n)


# level transport -----------------------------------------------------------


@dataclass(frozen=True)
class CertifiedSolution:
    psi: PsiVector
    certificates: Dict[CosetIndex, FormalSum]


def canonical_solution(n: int) -> CertifiedSolution:
    return CertifiedSolution(psi_of(n), raw_certificates(n))


def _check_levels(n1: int, n2: int) -> None:
    if n1 % n2:
        raise ValueError(f"{n2} does not divide {n1}")


def lift_solution(n1: int, n2: int, sol: CertifiedSolution) -> CertifiedSolution:
    """psi1_i = psi2_{sigma(i)}; certificates follow the same rule."""
    _check_levels(n1, n2)
    if sol.psi.n != n2:
        raise ValueError("solution is not at level n2")
    comps, certs = {}, {}
    for i in enumerate_cosets(n1):
        j = sigma(n1, n2, i)
        comps[i] = sol.psi[j]
        certs[i] = sol.certificates[j]
    return CertifiedSolution(PsiVector(n1, comps), certs)


def push_solution(n1: int, n2: int, sol: CertifiedSolution) -> CertifiedSolution:
    """psi2_j = sum of psi1_i over the fibre sigma^{-1}(j)."""
    _check_levels(n1, n2)
    if sol.psi.n != n1:
        raise ValueError("solution is not at level n1")
    comps = {j: FormalSum() for j in enumerate_cosets(n2)}
    certs = {j: FormalSum() for j in enumerate_cosets(n2)}
    for i in enumerate_cosets(n1):
        j = sigma(n1, n2, i)
        comps[j] = comps[j] + sol.psi[i]
        certs[j] = certs[j] + sol.certificates[i]
    return CertifiedSolution(PsiVector(n2, comps), certs)


def fibre_sizes(n1: int, n2: int) -> Dict[CosetIndex, int]:
    _check_levels(n1, n2)
    out = {j: 0 for j in enumerate_cosets(n2)}
    for i in enumerate_cosets(n1):
        out[sigma(n1, n2, i)] += 1
    return out
