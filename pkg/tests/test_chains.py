import pytest

from lewis_hecke.chains import (
    K,
    K_inv,
    chain_by_K,
    chain_by_partition,
    chain_of,
    check_lewis_certificates,
    enum_Sn,
    enum_Xn,
    enum_Yn,
    in_Sn,
    lewis_lhs,
    psi_of,
    raw_certificates,
    verify_lewis_system,
)
from lewis_hecke.core import FormalSum, I, IntMat2, content
from lewis_hecke.cosets import CosetIndex, enumerate_cosets, x_of
from lewis_hecke.partitions import minimal_partition


def mat(a, b, c, d):
    return IntMat2(a, b, c, d)


def brute_Sn(n):
    return {
        mat(a, b, c, d)
        for a in range(1, n + 1)
        for d in range(1, n + 1)
        for b in range(d)
        for c in range(a)
        if a * d - b * c == n
    }


def test_set_examples():
    assert enum_Sn(2) == {mat(1, 0, 0, 2), mat(1, 1, 0, 2), mat(2, 0, 0, 1), mat(2, 0, 1, 1)}
    assert enum_Xn(2) == {mat(1, 0, 0, 2), mat(1, 1, 0, 2), mat(2, 0, 0, 1)}
    assert enum_Yn(2) == {mat(1, 0, 0, 2), mat(2, 0, 0, 1), mat(2, 0, 1, 1)}
    assert len(enum_Sn(3)) == 7
    with pytest.raises(ValueError):
        enum_Sn(0)


@pytest.mark.parametrize("n", range(1, 41))
def test_sets_against_brute_force(n):
    S, X, Y = enum_Sn(n), enum_Xn(n), enum_Yn(n)
    assert S == brute_Sn(n)
    assert X | Y <= S
    assert X & Y == {mat(c, 0, 0, n // c) for c in range(1, n + 1) if n % c == 0}


def test_K_examples():
    assert K(mat(1, 1, 0, 2)) == mat(2, 0, 1, 1)
    assert K(mat(1, 2, 0, 3)) == mat(2, 1, 1, 2)
    assert K(mat(2, 1, 1, 2)) == mat(3, 0, 2, 1)
    with pytest.raises(ValueError, match="chain terminus"):
        K(mat(2, 0, 1, 1))
    with pytest.raises(ValueError, match="not in S_n"):
        K(mat(1, 5, 0, 2))


def test_K_inv_examples():
    assert K_inv(mat(2, 0, 1, 1)) == mat(1, 1, 0, 2)
    assert K_inv(mat(3, 0, 2, 1)) == mat(2, 1, 1, 2)
    with pytest.raises(ValueError):
        K_inv(mat(1, 1, 0, 2))


def test_K_matches_generator_form():
    # K(A) = T^{ceil(d/b)} Q A
    from lewis_hecke.core import Q, T_pow, ceil_ratio

    for n in range(1, 30):
        for A in enum_Sn(n) - enum_Yn(n):
            assert K(A) == T_pow(ceil_ratio(A.d, A.b)) * Q * A


@pytest.mark.parametrize("n", [1, 2, 3, 7, 12, 36, 60, 100])
def test_K_bijection_and_primitivity(n):
    S, X, Y = enum_Sn(n), enum_Xn(n), enum_Yn(n)
    image = {K(A) for A in S - Y}
    assert len(image) == len(S - Y) and image == S - X
    for A in S - Y:
        B = K(A)
        assert in_Sn(B, n) and K_inv(B) == A
        assert (content(A) == 1) == (content(B) == 1)
    for B in S - X:
        assert K(K_inv(B)) == B


def test_chain_examples():
    assert chain_of(CosetIndex(2, 1, 0)).matrices == (mat(1, 0, 0, 2),)
    assert chain_of(CosetIndex(2, 1, 1)).matrices == (mat(1, 1, 0, 2), mat(2, 0, 1, 1))
    assert chain_of(CosetIndex(3, 1, 2)).matrices == (mat(1, 2, 0, 3), mat(2, 1, 1, 2), mat(3, 0, 2, 1))


@pytest.mark.parametrize("n", range(1, 61))
def test_chain_structure(n):
    X, Y = enum_Xn(n), enum_Yn(n)
    for i in enumerate_cosets(n):
        ch = chain_of(i).matrices
        assert ch == chain_by_partition(i) == chain_by_K(i)
        assert ch[0] in X and ch[-1] in Y
        assert all(A not in X and A not in Y for A in ch[1:-1])
        assert all(content(A) == 1 for A in ch)
        assert len(ch) == len(minimal_partition(x_of(i), allow_zero=True)) - 1


def test_psi_examples():
    psi = psi_of(2)
    assert psi[CosetIndex(2, 1, 0)] == mat(1, 0, 0, 2)
    assert psi[CosetIndex(2, 1, 1)] == mat(1, 1, 0, 2) + mat(2, 0, 1, 1)
    assert psi[CosetIndex(2, 2, 0)] == mat(2, 0, 0, 1)
    psi3 = psi_of(3)
    assert len(psi3.components) == 4 and psi3.term_count() == 7


@pytest.mark.parametrize("n", [1, 2, 5, 12, 30, 64])
def test_psi_terms(n):
    psi = psi_of(n)
    seen = [A for i in enumerate_cosets(n) for A, k in psi[i].items() for _ in range(k)]
    assert sorted(seen, key=lambda A: A.entries) == sorted(
        (A for A in enum_Sn(n) if content(A) == 1), key=lambda A: A.entries
    )
    assert all(A.det == n and A.a > 0 and min(A.entries) >= 0 for A in seen)


def test_verify_examples():
    r1 = verify_lewis_system(1, 1)
    assert r1.passed and r1.certificates[0].index == CosetIndex(1, 1, 0)
    assert psi_of(1)[CosetIndex(1, 1, 0)] == I
    r2 = verify_lewis_system(2, 1)
    assert r2.passed and len(r2.certificates) == 3
    r12 = verify_lewis_system(12, -1)
    assert r12.passed and len(r12.certificates) == 24


@pytest.mark.parametrize("lam", [1, -1])
def test_verify_sweep(lam):
    for n in range(1, 51):
        assert verify_lewis_system(n, lam).passed, n


def test_certificates_in_T():
    for n in range(1, 31):
        for c in verify_lewis_system(n, 1).certificates:
            assert c.in_T
            assert all(A.a > 0 for A in c.R_lambda.matrices())


def test_broken_solution_is_reported():
    psi = psi_of(6)
    i = enumerate_cosets(6)[3]
    comps = dict(psi.components)
    comps[i] = comps[i] + mat(1, 0, 0, 6)
    from lewis_hecke.chains import PsiVector

    report = check_lewis_certificates(PsiVector(6, comps), raw_certificates(6), 1)
    assert not report.passed
    bad = report.to_json()["counterexample"]
    assert bad["residual"] or bad["residual_lambda"]


def test_lambda_rejects_other_values():
    with pytest.raises(ValueError):
        verify_lewis_system(3, 2)
