import cmath
import random

import pytest
from hypothesis import given, strategies as st

from lewis_hecke.acceptance import random_G_plus
from lewis_hecke.chains import psi_of, raw_certificates
from lewis_hecke.core import FormalSum, I, IntMat2, M, T, diag
from lewis_hecke.cosets import CosetIndex
from lewis_hecke.slash import (
    BranchedFunction,
    RationalFunction,
    SlashError,
    compose_check,
    constant,
    default_points,
    in_G,
    inv_z,
    lewis_operator,
    lewis_residual,
    lewis_residual_exact,
    slash_exact,
    slash_function,
    slash_num,
    slash_sum,
    slash_sum_function,
    slashed_branch_point,
)

TM, MTM = T * M, M * T * M


def log_plus_inv():
    # holomorphic off (-inf, 0], not meromorphic
    return BranchedFunction(lambda z: cmath.log(z) + 1 / z, 0.0, name="log z + 1/z")


def test_slash_num_examples():
    phi = inv_z()
    assert slash_num(phi, T, 1, 2) == pytest.approx(1 / 3, abs=1e-15)
    assert slash_num(phi, M, 1, 2) == pytest.approx(1 / 2, abs=1e-15)
    assert slash_num(phi, TM, 1, 2) == pytest.approx(1 / 6, abs=1e-15)


def test_slash_num_errors():
    phi = log_plus_inv()
    with pytest.raises(SlashError, match="outside"):
        slash_num(phi, IntMat2(-1, 0, 0, 1), 1, 2)
    with pytest.raises(SlashError, match="branching condition"):
        slash_num(phi, IntMat2(0, 1, 1, 0), 1, 2)
    with pytest.raises(SlashError, match="domain"):
        slash_num(phi, T, 1, -2)


def test_G_membership():
    assert in_G(T) and in_G(M) and in_G(TM) and in_G(diag(3))
    assert not in_G(IntMat2(1, 0, 0, -1)) and not in_G(IntMat2(0, 1, -1, 0))


def test_exact_examples():
    inv = RationalFunction.inv_z()
    assert slash_exact(inv, I - T - TM, 1).is_zero()
    psi11 = psi_of(2)[CosetIndex(2, 1, 1)]
    assert slash_exact(inv, psi11, 1) == inv
    for d in (1, 2, 5):
        assert slash_exact(inv, diag(d), 1) == inv
    with pytest.raises(ValueError, match="integer weight"):
        slash_exact(inv, T, 0.5)
    assert lewis_residual_exact(inv, 1, 1).is_zero()
    assert not lewis_residual_exact(inv, 1, -1).is_zero()


def test_compose_examples():
    phi = inv_z()
    pts = [0.1 + 4.8 * k / 19 for k in range(20)]
    assert compose_check(phi, T, TM, 0.5 + 1j, pts)
    assert compose_check(phi, I, I, 0.5 + 1j)
    rng = random.Random(7)
    for _ in range(20):
        assert compose_check(phi, random_G_plus(rng), random_G_plus(rng), 0.7)
    with pytest.raises(SlashError):
        compose_check(phi, IntMat2(-1, 0, 0, 1), T, 1)


def test_lewis_residual_examples():
    assert lewis_residual(inv_z(), 1, 1) < 1e-14
    assert lewis_residual(constant(1.0), 0, 1) > 0.5
    assert lewis_residual(constant(2.0), 0, -1) > 0.5


def test_two_term_equation_for_inv_z():
    for z in default_points():
        assert abs(1 / z - z ** -2 * (1 / (1 / z))) < 1e-14


words = st.lists(st.sampled_from([T, TM, MTM]), min_size=1, max_size=6)


def product(ws):
    g = I
    for w in ws:
        g = g * w
    return g


@given(words, words, st.sampled_from([1, 0.7, 0.5 + 14.13j]))
def test_semigroup_action(w1, w2, s):
    assert compose_check(inv_z(), product(w1), product(w2), s)


@given(words, words)
def test_semigroup_action_branched(w1, w2):
    assert compose_check(log_plus_inv(), product(w1), product(w2), 0.5 + 0.25j)


@given(st.integers(1, 6), st.integers(0, 6), st.integers(1, 6), st.integers(0, 6))
def test_branch_point_propagation(a, b, c, d):
    R = IntMat2(a, b, c, d)
    if R.det == 0:
        return
    phi = log_plus_inv()
    r = slashed_branch_point(R, 0.0)
    assert r == max(-b / a, -d / c)
    g = slash_function(phi, R, 0.75)
    eps = 1e-6
    g(r + eps)  # just right of the cut
    with pytest.raises(SlashError):
        g(r - eps)


@pytest.mark.parametrize("lam", [1, -1])
def test_ideal_slash_well_defined(lam):
    # (phi|L)|P = phi|(L P) for L = I - T - lam TM and P with a > 0
    phi = log_plus_inv()
    L = lewis_operator(lam)
    pieces = list(raw_certificates(5).values())[:6] + [psi_of(5)[i] for i in list(psi_of(5).components)[:4]]
    s = 0.6 + 0.3j
    g = slash_sum_function(phi, L, s)
    for P in pieces:
        if not P:
            continue
        for z in (0.5, 1.7, 3.0 + 1j):
            lhs = slash_sum(g, P, s, z)
            rhs = slash_sum(phi, L * P, s, z)
            assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@given(st.lists(st.integers(1, 6), min_size=4, max_size=4), st.sampled_from([1, 2]))
def test_exact_agrees_with_numeric(entries, s):
    a, b, c, d = entries
    R = IntMat2(a, b, c, d)
    if R.det == 0:
        return
    f = RationalFunction.from_coeffs([2, 1], [1, 0, 1])  # (z + 2)/(z^2 + 1)
    phi = BranchedFunction(lambda z: (z + 2) / (z * z + 1), 0.0, meromorphic=True)
    exact = slash_exact(f, R, s)
    for z in (0.5, 1.3, 2.0 + 0.5j):
        num = slash_num(phi, R, s, z)
        assert abs(exact(complex(z)) - num) <= 1e-12 * max(1.0, abs(num))


def test_exact_negative_and_sum_linearity():
    f = RationalFunction.inv_z()
    P = FormalSum({T: 2, TM: -3, diag(2): 1})
    total = slash_exact(f, P, 1)
    parts = slash_exact(f, T, 1) * 2 - slash_exact(f, TM, 1) * 3 + slash_exact(f, diag(2), 1)
    assert total == parts
