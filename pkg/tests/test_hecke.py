from fractions import Fraction

import pytest

from lewis_hecke.chains import check_lewis_certificates, enum_Sn, psi_of
from lewis_hecke.core import IntMat2, content
from lewis_hecke.cosets import coset_count, enumerate_cosets, sigma
from lewis_hecke.hecke import (
    apply,
    canonical_solution,
    component_sum,
    decompose,
    divisor_sum,
    exact_multiplier,
    fibre_sizes,
    is_squarefree,
    kappa_full,
    kappa_tilde,
    lift_solution,
    push_solution,
    square_divisors,
    tn_set,
    ttilde_by_content,
    ttilde_set,
)
from lewis_hecke.slash import RationalFunction, inv_z, lewis_residual_exact, slash_exact


def test_set_examples():
    assert len(ttilde_set(2)) == 4 and set(ttilde_set(2).matrices()) == set(enum_Sn(2))
    assert set(tn_set(4).matrices()) - set(ttilde_set(4).matrices()) == {IntMat2(2, 0, 0, 2)}
    assert ttilde_set(1).matrices() == [IntMat2(1, 0, 0, 1)]
    with pytest.raises(ValueError):
        ttilde_set(0)


def test_decompose_examples():
    assert [(d, h.n) for d, h in decompose(4)] == [(1, 4), (2, 1)]
    assert [(d, h.n) for d, h in decompose(6)] == [(1, 6)]
    assert tn_set(6).terms == ttilde_set(6).terms
    assert [(d, h.n) for d, h in decompose(12)] == [(1, 12), (2, 3)]


@pytest.mark.parametrize("n", range(1, 121))
def test_decomposition_identity(n):
    pieces = decompose(n)
    union = [A.scaled(d) for d, h in pieces for A in h.matrices()]
    assert sorted(union, key=lambda A: A.entries) == sorted(enum_Sn(n), key=lambda A: A.entries)
    assert (tn_set(n).terms == ttilde_set(n).terms) == is_squarefree(n)
    assert ttilde_by_content(n).terms == ttilde_set(n).terms
    assert component_sum(psi_of(n)) == ttilde_set(n).terms
    assert all(content(A) == 1 for A in ttilde_set(n).matrices())


def test_kappa_examples():
    assert kappa_tilde(1) == 1
    assert kappa_tilde(2) == 3
    assert kappa_tilde(3) == 4


@pytest.mark.parametrize("n", range(1, 31))
def test_kappa_and_sigma(n):
    assert kappa_tilde(n) == coset_count(n)
    assert kappa_full(n) == divisor_sum(n)
    assert sum(kappa_tilde(n // (d * d)) for d in square_divisors(n)) == divisor_sum(n)


@pytest.mark.parametrize("n", [2, 3, 6, 10, 16])
def test_hecke_image_solves_lewis_exactly(n):
    inv = RationalFunction.inv_z()
    image = slash_exact(inv, ttilde_set(n).terms, 1)
    assert lewis_residual_exact(image, 1, 1).is_zero()


@pytest.mark.parametrize("m,n", [(2, 3), (3, 2), (2, 2), (4, 5)])
def test_commutativity_on_inv_z(m, n):
    inv = RationalFunction.inv_z()
    twice = slash_exact(slash_exact(inv, ttilde_set(m).terms, 1), ttilde_set(n).terms, 1)
    assert twice.proportional_to(inv) == kappa_tilde(m) * kappa_tilde(n)


def test_numeric_apply():
    for n in (2, 4, 9):
        for z in (0.5, 2.0, 1 + 1j):
            assert abs(apply(inv_z(), n, 1, z) - float(kappa_tilde(n)) / z) < 1e-12
            assert abs(apply(inv_z(), n, 1, z, "full") - divisor_sum(n) / z) < 1e-12
    with pytest.raises(ValueError):
        apply(inv_z(), 2, 1, 1.0, "other")


def test_exact_multiplier_type():
    assert isinstance(exact_multiplier(5), Fraction)


@pytest.mark.parametrize("n1,n2", [(4, 2), (6, 3), (12, 6), (8, 4), (9, 3), (12, 4), (6, 1)])
def test_transport(n1, n2):
    lifted = lift_solution(n1, n2, canonical_solution(n2))
    pushed = push_solution(n1, n2, canonical_solution(n1))
    for lam in (1, -1):
        assert check_lewis_certificates(lifted.psi, lifted.certificates, lam).passed
        assert check_lewis_certificates(pushed.psi, pushed.certificates, lam).passed
    mu = coset_count(n1) // coset_count(n2)
    assert set(fibre_sizes(n1, n2).values()) == {mu}
    assert push_solution(n1, n2, lifted).psi == psi_of(n2).scaled(mu)
    for i in enumerate_cosets(n1):
        assert lifted.psi[i] == psi_of(n2)[sigma(n1, n2, i)]


def test_transport_trivial_and_errors():
    sol = canonical_solution(6)
    assert lift_solution(6, 6, sol).psi == sol.psi
    with pytest.raises(ValueError):
        lift_solution(6, 4, canonical_solution(4))
    with pytest.raises(ValueError):
        push_solution(6, 3, canonical_solution(3))
