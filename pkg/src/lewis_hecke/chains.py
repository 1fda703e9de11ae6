"""The monoid sets S_n, X_n, Y_n, the operator K, chains, the special
solution psi of the Lewis system and exact certificates of its validity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Dict, FrozenSet, Optional, Tuple

from .core import I, IntMat2, M, T, FormalSum, ceil_ratio
from .cosets import (
    CosetIndex,
    A_of,
    act,
    divisors,
    enumerate_cosets,
    unit_lift,
    x_of,
)
from .partitions import (
    IDEAL_GENERATOR,
    minimal_partition,
    m_of,
    pair_matrix,
    reduce_to_minimal,
    xts_data,
)


@lru_cache(maxsize=None)
def _scan_Sn(n: int) -> Tuple[IntMat2, ...]:
    # ad - bc = n with 0 <= b < d, 0 <= c < a forces a + d <= n + 1
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 2 - a):
            m = a * d - n
            if m < 0:
                continue
            if m == 0:
                out.extend(IntMat2(a, b, 0, d) for b in range(d))
                out.extend(IntMat2(a, 0, c, d) for c in range(1, a))
                continue
            for c in range(1, a):
                if m % c == 0 and m // c < d:
                    out.append(IntMat2(a, m // c, c, d))
    out.sort(key=lambda A: A.entries)
    return tuple(out)


def in_Sn(A: IntMat2, n: int) -> bool:
    return A.det == n and A.a > A.c >= 0 and A.d > A.b >= 0


def enum_Sn(n: int) -> FrozenSet[IntMat2]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return frozenset(_scan_Sn(n))


def sorted_Sn(n: int) -> Tuple[IntMat2, ...]:
    return _scan_Sn(n)


def enum_Xn(n: int) -> FrozenSet[IntMat2]:
    return frozenset(IntMat2(c, a, 0, n // c) for c in divisors(n) for a in range(n // c))


def enum_Yn(n: int) -> FrozenSet[IntMat2]:
    return frozenset(IntMat2(c, 0, a, n // c) for c in divisors(n) for a in range(c))


def K(A: IntMat2) -> IntMat2:
    """T^{ceil(d/b)} Q A on S_n minus Y_n."""
    n = A.det
    if n < 1 or not in_Sn(A, n):
        raise ValueError(f"{A!r} is not in S_n")
    if A.b == 0:
        raise ValueError("chain terminus: K undefined on Y_n")
    r = ceil_ratio(A.d, A.b)
    return IntMat2(-A.c + r * A.a, -A.d + r * A.b, A.a, A.b)


def K_inv(A: IntMat2) -> IntMat2:
    """M T^{ceil(a/c)} Q M A on S_n minus X_n."""
    n = A.det
    if n < 1 or not in_Sn(A, n):
        raise ValueError(f"{A!r} is not in S_n")
    if A.c == 0:
        raise ValueError("chain start: K_inv undefined on X_n")
    r = ceil_ratio(A.a, A.c)
    return IntMat2(A.c, A.d, -A.a + r * A.c, -A.b + r * A.d)


@dataclass(frozen=True)
class Chain:
    owner: CosetIndex
    matrices: Tuple[IntMat2, ...]

    @property
    def k(self) -> int:
        return len(self.matrices) - 1

    def total(self) -> FormalSum:
        return FormalSum(self.matrices)

    def to_json(self) -> dict:
        return {
            "c": self.owner.c,
            "b": self.owner.b,
            "k": self.k,
            "matrices": [A.as_list() for A in self.matrices],
        }


def chain_by_K(i: CosetIndex) -> Tuple[IntMat2, ...]:
    A = A_of(i)
    out = [A]
    while A.b != 0:
        A = K(A)
        out.append(A)
    return tuple(out)


def chain_by_partition(i: CosetIndex) -> Tuple[IntMat2, ...]:
    """K^j(A_i) = [q_{k-1-j}, -p_{k-1-j}; q_{k-j}, -p_{k-j}] A_i."""
    P = minimal_partition(x_of(i), allow_zero=True)
    pts, A = P.points, A_of(i)
    k = P.k
    return tuple(pair_matrix(pts[k - 1 - j], pts[k - j]) * A for j in range(k))


@lru_cache(maxsize=None)
def _chain(i: CosetIndex) -> Chain:
    mats = chain_by_K(i)
    if mats != chain_by_partition(i):
        raise ArithmeticError(f"chain constructions disagree at {i!r}")
    return Chain(i, mats)


def chain_of(i: CosetIndex) -> Chain:
    return _chain(i)


@dataclass(frozen=True)
class PsiVector:
    n: int
    components: Dict[CosetIndex, FormalSum] = field(hash=False)

    def __getitem__(self, i: CosetIndex) -> FormalSum:
        return self.components[i]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PsiVector)
            and self.n == other.n
            and all(self.components[i] == other.components.get(i) for i in self.components)
            and len(self.components) == len(other.components)
        )

    def scaled(self, k: int) -> "PsiVector":
        return PsiVector(self.n, {i: v * k for i, v in self.components.items()})

    def term_count(self) -> int:
        return sum(len(v) for v in self.components.values())

    def to_json(self) -> list:
        return [
            {"c": i.c, "b": i.b, "terms": v.to_json()}
            for i, v in sorted(self.components.items())
        ]


@lru_cache(maxsize=None)
def _psi(n: int) -> PsiVector:
    comps = {}
    for i in enumerate_cosets(n):
        by_chain = chain_of(i).total()
        by_partition = m_of(minimal_partition(x_of(i), allow_zero=True)) * A_of(i)
        if by_chain != by_partition:
            raise ArithmeticError(f"psi constructions disagree at {i!r}")
        comps[i] = by_chain
    return PsiVector(n, comps)


def psi_of(n: int) -> PsiVector:
    return _psi(n)


def ideal_generator(lam: int) -> FormalSum:
    """I - T - lam*TM; lam = 1 with M on the left gives I - T - MTM."""
    return I - T - (T * M) * lam


def lewis_lhs(psi: PsiVector, i: CosetIndex, lam: int) -> FormalSum:
    """psi_{iT} - psi_i T - lam * psi_{iM} T M, the per-index Lewis expression."""
    return psi[act(i, T)] - psi[i] * T - psi[act(i, M)] * (T * M) * lam


def lewis_lhs_mtm(psi: PsiVector, i: CosetIndex) -> FormalSum:
    """psi_{iT} - psi_i T - M psi_{iM} T M."""
    return psi[act(i, T)] - psi[i] * T - M * psi[act(i, M)] * (T * M)


@dataclass(frozen=True)
class Certificate:
    index: CosetIndex
    R: FormalSum
    R_lambda: FormalSum
    ok: bool
    ok_lambda: bool
    residual: FormalSum
    residual_lambda: FormalSum
    in_T: bool

    def to_json(self) -> dict:
        return {
            "c": self.index.c,
            "b": self.index.b,
            "ok": self.ok,
            "ok_lambda": self.ok_lambda,
            "R_terms": len(self.R),
            "R_lambda_terms": len(self.R_lambda),
            "all_a_positive": self.in_T,
        }


def raw_certificate(i: CosetIndex) -> FormalSum:
    """R with psi_{iT} - psi_i T - M psi_{iM} TM = (I - T - MTM) R.

    [c:d] is rewritten as [c : k d'] with d' = gcd(n, d) and k a unit, so
    the three components are the x, y, z of the three-partition identity;
    R collects the reduction witnesses of the joined partition of y.
    """
    n = i.n
    c, d = i.pair
    d1 = gcd(n, d)
    k = unit_lift(d // d1, n, n // d1)
    data = xts_data(n, c, d1, k)
    if not data.holds:
        raise ArithmeticError(f"three-partition identity fails at {i!r}")
    _, witnesses = reduce_to_minimal(data.joined)
    return FormalSum(witnesses) * data.Ay


@lru_cache(maxsize=None)
def _raw_certificates(n: int) -> Dict[CosetIndex, FormalSum]:
    return {i: raw_certificate(i) for i in enumerate_cosets(n)}


def raw_certificates(n: int) -> Dict[CosetIndex, FormalSum]:
    return dict(_raw_certificates(n))


def transport(R: FormalSum, psi_iM: FormalSum, lam: int) -> FormalSum:
    """Move a certificate for I - T - MTM to one for I - T - lam TM."""
    return (I + (T * M) * lam - M * T * M) * R + (M - I * lam) * psi_iM * (T * M)


def _all_a_positive(*sums: FormalSum) -> bool:
    return all(A.a > 0 for s in sums for A in s.matrices())


def certify(psi: PsiVector, i: CosetIndex, lam: int, R: FormalSum) -> Certificate:
    res = lewis_lhs_mtm(psi, i) - IDEAL_GENERATOR * R
    R_lam = transport(R, psi[act(i, M)], lam)
    res_lam = lewis_lhs(psi, i, lam) - ideal_generator(lam) * R_lam
    return Certificate(
        index=i,
        R=R,
        R_lambda=R_lam,
        ok=not res,
        ok_lambda=not res_lam,
        residual=res,
        residual_lambda=res_lam,
        in_T=_all_a_positive(psi[i], R),
    )


@dataclass(frozen=True)
class LewisReport:
    n: int
    lam: int
    certificates: Tuple[Certificate, ...]

    @property
    def passed(self) -> bool:
        return all(c.ok and c.ok_lambda and c.in_T for c in self.certificates)

    def first_failure(self) -> Optional[Certificate]:
        for c in self.certificates:
            if not (c.ok and c.ok_lambda and c.in_T):
                return c
        return None

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "lambda": self.lam,
            "passed": self.passed,
            "components": len(self.certificates),
            "certificate_terms": sum(len(c.R) for c in self.certificates),
            "certificates": [c.to_json() for c in self.certificates],
        }
        bad = self.first_failure()
        if bad is not None:
            out["counterexample"] = {
                "c": bad.index.c,
                "b": bad.index.b,
                "residual": bad.residual.to_json(),
                "residual_lambda": bad.residual_lambda.to_json(),
            }
        return out


def check_lewis_certificates(
    psi: PsiVector, certificates: Dict[CosetIndex, FormalSum], lam: int
) -> LewisReport:
    """Check psi against per-index certificates for the ideal of I - T - MTM
    and their transports to I - T - lam TM, all in exact arithmetic."""
    if lam not in (1, -1):
        raise ValueError("lambda must be +1 or -1")
    idx = enumerate_cosets(psi.n)
    return LewisReport(psi.n, lam, tuple(certify(psi, i, lam, certificates[i]) for i in idx))


def verify_lewis_system(n: int, lam: int) -> LewisReport:
    return check_lewis_certificates(psi_of(n), _raw_certificates(n), lam)
