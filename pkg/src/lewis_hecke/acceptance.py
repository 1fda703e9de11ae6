"""The acceptance suite: one function per criterion, each returning a
CriterionResult.  Used by `lewis-hecke verify all` and by the test suite.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd
from typing import Callable, Dict, List, Optional

import numpy as np

from .chains import (
    K,
    K_inv,
    check_lewis_certificates,
    chain_by_K,
    enum_Sn,
    enum_Xn,
    enum_Yn,
    verify_lewis_system,
)
from .core import FormalSum, IntMat2, content
from .cosets import A_of, canonicalize, coset_count, enumerate_cosets, x_of
from .hecke import (
    canonical_solution,
    decompose,
    divisor_sum,
    is_squarefree,
    kappa_full,
    kappa_tilde,
    lift_solution,
    push_solution,
    square_divisors,
    tn_set,
    ttilde_set,
)
from .partitions import m_of, minimal_partition
from .slash import RationalFunction, compose_check, in_G_plus, inv_z, lewis_residual_exact
from .transfer import build, inv_z_taylor, selberg_zeta, spectrum


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    limit: Optional[float] = None
    counterexample: Optional[dict] = None

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:.0f} s)" if self.limit else ""
        return f"{tag} criterion {self.number:2d}: {self.title} [{self.seconds:.2f} s{limit}] {self.detail}".rstrip()

    def to_json(self) -> dict:
        out = {
            "criterion": self.number,
            "title": self.title,
            "passed": bool(self.passed),
            "detail": self.detail,
            "seconds": round(self.seconds, 3),
            "limit_seconds": self.limit,
        }
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _cap(default: int, max_n: Optional[int]) -> int:
    return default if max_n is None else min(default, max_n)


def brute_force_classes(n: int) -> List[frozenset]:
    """Classes of pairs (x, y) mod n with gcd(x, y, n) = 1 under scaling by units."""
    units = [k for k in range(1, n + 1) if gcd(k, n) == 1] if n > 1 else [1]
    seen, classes = set(), []
    for x in range(n):
        for y in range(n):
            if gcd(gcd(x, y), n) != 1 or (x, y) in seen:
                continue
            cls = frozenset(((k * x) % n, (k * y) % n) for k in units)
            seen |= cls
            classes.append(cls)
    return classes


def crit_k_bijection(max_n: Optional[int] = None) -> CriterionResult:
    top = _cap(100, max_n)
    for n in range(1, top + 1):
        S, X, Y = enum_Sn(n), enum_Xn(n), enum_Yn(n)
        image = {}
        for A in S - Y:
            B = K(A)
            if B in image or K_inv(B) != A:
                return CriterionResult(1, "K bijection", False, counterexample={"n": n, "A": A.as_list()})
            image[B] = A
        if set(image) != S - X:
            return CriterionResult(1, "K bijection", False, counterexample={"n": n})
        if any(K(K_inv(B)) != B for B in S - X):
            return CriterionResult(1, "K bijection", False, counterexample={"n": n, "side": "K o K_inv"})
    return CriterionResult(1, "K bijection", True, f"n <= {top}")


def crit_chain_partition(max_n: Optional[int] = None) -> CriterionResult:
    top = _cap(100, max_n)
    for n in range(1, top + 1):
        seen = [A for i in enumerate_cosets(n) for A in chain_by_K(i)]
        primitive = {A for A in enum_Sn(n) if content(A) == 1}
        if len(seen) != len(set(seen)) or set(seen) != primitive:
            return CriterionResult(2, "chain partition", False, counterexample={"n": n})
    return CriterionResult(2, "chain partition", True, f"n <= {top}")


def crit_dual_psi(max_n: Optional[int] = None) -> CriterionResult:
    top = _cap(60, max_n)
    count = 0
    for n in range(1, top + 1):
        for i in enumerate_cosets(n):
            by_chain = FormalSum(chain_by_K(i))
            by_partition = m_of(minimal_partition(x_of(i), allow_zero=True)) * A_of(i)
            count += 1
            if by_chain != by_partition:
                return CriterionResult(3, "dual psi construction", False, counterexample={"n": n, "c": i.c, "b": i.b})
    return CriterionResult(3, "dual psi construction", True, f"{count} components, n <= {top}")


def crit_lewis_certificates(max_n: Optional[int] = None) -> CriterionResult:
    top = _cap(50, max_n)
    for n in range(1, top + 1):
        for lam in (1, -1):
            report = verify_lewis_system(n, lam)
            if not report.passed:
                return CriterionResult(4, "Lewis certificates", False, counterexample=report.to_json()["counterexample"])
    return CriterionResult(4, "Lewis certificates", True, f"n <= {top}, lambda = +1, -1")


def crit_hecke_decomposition(max_n: Optional[int] = None) -> CriterionResult:
    top = _cap(200, max_n)
    for n in range(1, top + 1):
        try:
            decompose(n)
        except ArithmeticError as exc:
            return CriterionResult(5, "Hecke decomposition", False, str(exc), counterexample={"n": n})
        full = tn_set(n).terms
        if set(full.matrices()) != set(enum_Sn(n)) or any(k != 1 for _, k in full.items()):
            return CriterionResult(5, "Hecke decomposition", False, counterexample={"n": n})
        same = full == ttilde_set(n).terms
        if same != is_squarefree(n):
            return CriterionResult(5, "Hecke decomposition", False, counterexample={"n": n, "squarefree": is_squarefree(n)})
    return CriterionResult(5, "Hecke decomposition", True, f"n <= {top}")


def crit_kappa(max_n: Optional[int] = None) -> CriterionResult:
    top = _cap(50, max_n)
    if kappa_tilde(2) != 3 or kappa_tilde(3) != 4:
        return CriterionResult(6, "s = 1 multiplier", False, f"kappa(2) = {kappa_tilde(2)}, kappa(3) = {kappa_tilde(3)}")
    for n in range(1, top + 1):
        try:
            kt = {m: kappa_tilde(m) for m in {n // (d * d) for d in square_divisors(n)}}
            full = kappa_full(n)
        except ArithmeticError as exc:
            return CriterionResult(6, "s = 1 multiplier", False, str(exc), counterexample={"n": n})
        sigma = divisor_sum(n)
        split = sum(kt[n // (d * d)] for d in square_divisors(n))
        if kt[n] != coset_count(n) or full != sigma or split != sigma:
            return CriterionResult(6, "s = 1 multiplier", False, counterexample={"n": n, "sigma": sigma, "T_n": str(full)})
    return CriterionResult(6, "s = 1 multiplier", True, f"n <= {top}")


def crit_coset_counts(max_n: Optional[int] = None) -> CriterionResult:
    top, brute = _cap(500, max_n), _cap(30, max_n)
    for n in range(1, top + 1):
        if len(enumerate_cosets(n)) != coset_count(n):
            return CriterionResult(7, "coset counts", False, counterexample={"n": n})
    for n in range(1, brute + 1):
        classes = brute_force_classes(n)
        images = [{canonicalize(n, x, y) for x, y in cls} for cls in classes]
        if any(len(im) != 1 for im in images):
            return CriterionResult(7, "coset counts", False, "canonicalize not constant on a class", {"n": n})
        reps = {next(iter(im)) for im in images}
        if len(reps) != len(classes) or reps != set(enumerate_cosets(n)):
            return CriterionResult(7, "coset counts", False, "class oracle mismatch", {"n": n})
    return CriterionResult(7, "coset counts", True, f"counts n <= {top}, class oracle n <= {brute}")


def crit_spectral(max_n: Optional[int] = None) -> CriterionResult:
    sp = spectrum(build(1, 1, 32))
    lam, v, _ = sp.leading()
    coeffs = v / v[0] * 0.5
    err_lam = abs(lam - 1)
    err_coef = float(np.max(np.abs(coeffs - inv_z_taylor(32))))
    worst_vec = 0.0
    for n in (2, 3, 4, 6):
        op = build(n, 1, 32)
        vsp = spectrum(op)
        k = vsp.index_closest(1.0)
        lam_n, vec, _ = vsp.pair(k)
        C = vec.reshape(op.N, op.mu)
        C = C / C[0, 0]
        worst_vec = max(worst_vec, abs(lam_n - 1), float(np.max(np.abs(C - C[:, [0]]))))
    second = [spectrum(build(1, 1, N)).eigenvalues[1] for N in (48, 80)]
    drift = abs(second[0] - second[1])
    ok = bool(err_lam < 1e-10 and err_coef < 1e-8 and worst_vec < 1e-10 and drift < 1e-6)
    detail = (
        f"|lambda-1| = {err_lam:.1e}, coeff err = {err_coef:.1e}, vector err = {worst_vec:.1e}, "
        f"lambda_2 = {second[1].real:.10f} (drift {drift:.1e})"
    )
    return CriterionResult(8, "spectral facts", ok, detail)


def crit_selberg(max_n: Optional[int] = None) -> CriterionResult:
    worst_zero, worst_fact = 0.0, 0.0
    for n in (1, 2, 3):
        r = selberg_zeta(n, 1, 32)
        worst_zero = max(worst_zero, abs(r.value))
        worst_fact = max(worst_fact, r.discrepancy)
    ok = bool(worst_zero < 1e-8 and worst_fact < 1e-10)
    return CriterionResult(9, "Selberg zeta zero", ok, f"max |Z(1)| = {worst_zero:.1e}, factorization gap = {worst_fact:.1e}")


def random_G_plus(rng: random.Random, bound: int = 6) -> IntMat2:
    while True:
        A = IntMat2(rng.randint(1, bound), rng.randint(0, bound), rng.randint(0, bound), rng.randint(0, bound))
        if in_G_plus(A):
            return A


def crit_slash(max_n: Optional[int] = None, seed: int = 0) -> CriterionResult:
    rng = random.Random(seed)
    phi = inv_z()
    for s in (1, 0.7, 0.5 + 14.13j):
        for _ in range(100):
            R1, R2 = random_G_plus(rng), random_G_plus(rng)
            if not compose_check(phi, R1, R2, s, tol=1e-12):
                return CriterionResult(10, "slash calculus", False, counterexample={"s": str(s), "R1": R1.as_list(), "R2": R2.as_list()})
    residual = lewis_residual_exact(RationalFunction.inv_z(), 1, 1)
    if not residual.is_zero():
        return CriterionResult(10, "slash calculus", False, f"exact Lewis residual {residual}")
    return CriterionResult(10, "slash calculus", True, "300 compositions, exact residual 0")


def crit_transport(max_n: Optional[int] = None) -> CriterionResult:
    for n1, n2 in ((4, 2), (6, 3), (12, 6)):
        lifted = lift_solution(n1, n2, canonical_solution(n2))
        pushed = push_solution(n1, n2, canonical_solution(n1))
        for lam in (1, -1):
            for label, sol in (("lift", lifted), ("push", pushed)):
                if not check_lewis_certificates(sol.psi, sol.certificates, lam).passed:
                    return CriterionResult(11, "sigma transport", False, counterexample={"pair": [n1, n2], "which": label, "lambda": lam})
        mu = coset_count(n1) // coset_count(n2)
        if push_solution(n1, n2, lifted).psi != canonical_solution(n2).psi.scaled(mu):
            return CriterionResult(11, "sigma transport", False, counterexample={"pair": [n1, n2], "which": "push o lift"})
    return CriterionResult(11, "sigma transport", True, "(4,2), (6,3), (12,6)")


CRITERIA: Dict[int, Callable[..., CriterionResult]] = {
    1: crit_k_bijection,
    2: crit_chain_partition,
    3: crit_dual_psi,
    4: crit_lewis_certificates,
    5: crit_hecke_decomposition,
    6: crit_kappa,
    7: crit_coset_counts,
    8: crit_spectral,
    9: crit_selberg,
    10: crit_slash,
    11: crit_transport,
}

LIMITS = {1: 10.0, 2: 30.0, 4: 60.0, 8: 20.0}


def clear_caches() -> None:
    """Drop memoized sets, chains and multipliers so timings start cold."""
    from . import chains, cosets, hecke

    for fn in (
        chains._scan_Sn, chains._chain, chains._psi, chains._raw_certificates,
        cosets._enumerate, cosets._position,
        hecke._ttilde, hecke._tn, hecke.kappa_tilde,
    ):
        fn.cache_clear()


def run_criterion(number: int, max_n: Optional[int] = None, seed: int = 0, cold: bool = True) -> CriterionResult:
    fn = CRITERIA[number]
    if cold:
        clear_caches()
    start = time.perf_counter()
    result = fn(max_n, seed) if number == 10 else fn(max_n)
    result.seconds = time.perf_counter() - start
    result.limit = LIMITS.get(number)
    if result.limit is not None and result.seconds >= result.limit:
        result.passed = False
        result.detail = f"{result.detail} runtime over limit".strip()
    return result


def _run_packed(args) -> CriterionResult:
    return run_criterion(*args)


def run_all(max_n: Optional[int] = None, seed: int = 0, workers: int = 1) -> List[CriterionResult]:
    """All criteria, reported in criterion order.  With workers > 1 they run
    in a process pool (timings then include contention)."""
    jobs = [(k, max_n, seed) for k in sorted(CRITERIA)]
    if workers <= 1:
        return [_run_packed(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_packed, jobs))
