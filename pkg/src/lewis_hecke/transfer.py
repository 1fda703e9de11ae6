"""Finite Taylor truncations of the transfer operator

    L_s f(z) = sum_{n >= 1} (z+n)^{-2s} A^{n-1} B f(1/(z+n)),

with A = rho(T^-1), B = rho(T^-1 M) on C^{I_n}, their spectra, eigenfunctions
and the Fredholm determinant det(1 - L_s^2).

Functions are expanded in (z-1)^k on both sides.  Substituting
w = 1/(z+n) into (w-1)^j and re-expanding around z = 1 gives

    M[k, j] = sum_{l <= j} C(j,l) (-1)^{j-l} C(-2s-l, k) zeta_AB(2s+l+k, 1),

an alternating sum with large cancellation, so it is assembled in mpmath
and rounded to double precision only at the end.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .core import M as M_MAT, T_INV, T
from .cosets import rho

Weight = Union[int, float, complex]
MIN_ORDER, MAX_ORDER = 4, 128


class PoleError(ValueError):
    pass


def _mpc(s: Weight):
    s = complex(s)
    return mpmath.mpc(s.real, s.imag)


def transfer_matrices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """(A, B) = (rho(T^-1), rho(T^-1 M)) as integer permutation matrices."""
    return rho(n, T_INV).matrix(), rho(n, T_INV * M_MAT).matrix()


def permutation_order(P: np.ndarray) -> int:
    mu = P.shape[0]
    Q, k = P.copy(), 1
    ident = np.eye(mu, dtype=P.dtype)
    while not np.array_equal(Q, ident):
        Q = Q @ P
        k += 1
    return k


def _check_pole(a) -> None:
    if abs(a - 1) < mpmath.mpf(10) ** (-(mpmath.mp.dps - 5)):
        raise PoleError(f"pole: zeta_AB has a pole at a = {complex(a)}")


def _residue_zetas(a, b, m: int) -> List:
    """m^{-a} zeta_H(a, (b+r+1)/m) for r = 0..m-1."""
    _check_pole(a)
    scale = mpmath.power(m, -a)
    return [scale * mpmath.zeta(a, (b + r + 1) / mpmath.mpf(m)) for r in range(m)]


def zeta_AB(a: Weight, b: float, n: int = 1, dps: int = 30) -> np.ndarray:
    """sum_{k >= 1} A^{k-1} B (b+k)^{-a} via the cycle decomposition

    zeta_AB = sum_{r < m} A^r B m^{-a} zeta_H(a, (b+r+1)/m),  m = order of A.
    """
    if b <= 0:
        raise ValueError("b must be positive")
    A, B = transfer_matrices(n)
    m = permutation_order(A)
    with mpmath.workdps(dps):
        zs = _residue_zetas(_mpc(a), mpmath.mpf(b), m)
        vals = [complex(z) for z in zs]
    out = np.zeros(A.shape, dtype=complex)
    Ar = np.eye(A.shape[0], dtype=np.int64)
    for r in range(m):
        out += vals[r] * (Ar @ B)
        Ar = Ar @ A
    return out


@dataclass(frozen=True)
class TruncatedOperator:
    n: int
    s: complex
    N: int
    mu: int
    matrix: np.ndarray
    A: np.ndarray
    B: np.ndarray

    def block(self, k: int, j: int) -> np.ndarray:
        mu = self.mu
        return self.matrix[k * mu:(k + 1) * mu, j * mu:(j + 1) * mu]


def _scalar_blocks(s: Weight, N: int, m: int, dps: int) -> List[np.ndarray]:
    """G_r[k, j] for each residue class r, so that M = sum_r G_r (x) A^r B."""
    with mpmath.workdps(dps):
        s2 = 2 * _mpc(s)
        b = mpmath.mpf(1)
        Z = [_residue_zetas(s2 + e, b, m) for e in range(2 * N - 1)]
        # H[k][l] = C(-2s-l, k), by the recurrence in k
        H = []
        for l in range(N):
            x = -s2 - l
            col, c = [], mpmath.mpf(1)
            for k in range(N):
                col.append(c)
                c = c * (x - k) / (k + 1)
            H.append(col)
        pascal = [[mpmath.binomial(j, l) * (-1) ** (j - l) for l in range(j + 1)] for j in range(N)]
        blocks = []
        for r in range(m):
            G = np.empty((N, N), dtype=complex)
            for k in range(N):
                row = [H[l][k] * Z[l + k][r] for l in range(N)]
                for j in range(N):
                    acc = mpmath.mpf(0)
                    pj = pascal[j]
                    for l in range(j + 1):
                        acc += pj[l] * row[l]
                    G[k, j] = complex(acc)
            blocks.append(G)
    return blocks


def build(n: int, s: Weight, N: int, dps: Optional[int] = None) -> TruncatedOperator:
    if not MIN_ORDER <= N <= MAX_ORDER:
        raise ValueError(f"order must lie in [{MIN_ORDER}, {MAX_ORDER}]")
    if n < 1:
        raise ValueError("level must be >= 1")
    A, B = transfer_matrices(n)
    mu = A.shape[0]
    m = permutation_order(A)
    blocks = _scalar_blocks(s, N, m, dps or 20 + N)
    mat = np.zeros((N * mu, N * mu), dtype=complex)
    Ar = np.eye(mu, dtype=np.int64)
    for r in range(m):
        mat += np.kron(blocks[r], Ar @ B)
        Ar = Ar @ A
    return TruncatedOperator(n, complex(s), N, mu, mat, A, B)


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    op: TruncatedOperator

    def index_closest(self, target: complex) -> int:
        return int(np.argmin(np.abs(self.eigenvalues - target)))

    def leading(self) -> Tuple[complex, np.ndarray, float]:
        return self.pair(0)

    def pair(self, k: int) -> Tuple[complex, np.ndarray, float]:
        return complex(self.eigenvalues[k]), self.eigenvectors[:, k], float(self.residuals[k])

    def to_json(self, count: Optional[int] = None) -> dict:
        ev = self.eigenvalues if count is None else self.eigenvalues[:count]
        return {
            "n": self.op.n,
            "s": [self.op.s.real, self.op.s.imag],
            "order": self.op.N,
            "eigenvalues": [[complex(v).real, complex(v).imag] for v in ev],
            "leading_residual": float(self.residuals[0]),
        }


def spectrum(op: TruncatedOperator) -> SpectralResult:
    L = op.matrix
    try:
        vals, vecs = np.linalg.eig(L)
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"eigensolver failed (condition ~ {np.linalg.cond(L):.3e})") from exc
    order = np.argsort(-np.abs(vals), kind="stable")
    vals, vecs = vals[order], vecs[:, order]
    res = np.linalg.norm(L @ vecs - vecs * vals, axis=0)
    return SpectralResult(vals, vecs, res, op)


# eigenfunctions -------------------------------------------------------------

DISC_RADIUS = 1.5
TAIL_TERMS = 12


class DomainError(ValueError):
    pass


@dataclass
class Eigenfunction:
    """Phi(z) = f(z - 1) for an eigenvector f of a truncated L_s.

    `coeffs[k, i]` is the (z-2)^k coefficient of component i.  Calling the
    object sums the Taylor series and only accepts |z - 2| <= 3/2;
    `extended` continues Phi to C minus (-inf, 0] through the eigenvalue
    equation.
    """

    op: TruncatedOperator
    eigenvalue: complex
    coeffs: np.ndarray

    @property
    def mu(self) -> int:
        return self.op.mu

    def __call__(self, z: complex) -> np.ndarray:
        u = complex(z) - 2
        if abs(u) > DISC_RADIUS + 1e-12:
            raise DomainError(f"{z} lies outside the disc |z - 2| <= 3/2")
        return self._taylor(u)

    def _taylor(self, u: complex) -> np.ndarray:
        acc = np.zeros(self.mu, dtype=complex)
        for row in self.coeffs[::-1]:
            acc = acc * u + row
        return acc

    def _zero_taylor(self) -> np.ndarray:
        """Coefficients of f at w = 0 (i.e. Phi at 1) from those at w = 1."""
        N = self.coeffs.shape[0]
        out = np.zeros((TAIL_TERMS, self.mu), dtype=complex)
        for l in range(TAIL_TERMS):
            for k in range(l, N):
                out[l] += self.coeffs[k] * (math.comb(k, l) * (-1) ** (k - l))
        return out

    def extended(self, z: complex, depth: int = 4, direct_terms: int = 60) -> np.ndarray:
        """Phi(z) for z off (-inf, 0]."""
        z = complex(z)
        if z.imag == 0 and z.real <= 0:
            raise DomainError(f"{z} lies on the cut (-inf, 0]")
        w = z - 1
        if abs(z - 2) <= 1.0 or depth == 0:
            if abs(z - 2) > DISC_RADIUS:
                raise DomainError(f"continuation depth exhausted at {z}")
            return self._taylor(z - 2)
        s2 = 2 * self.op.s
        A, B = self.op.A, self.op.B
        acc = np.zeros(self.mu, dtype=complex)
        An = np.eye(self.mu)
        for k in range(1, direct_terms + 1):
            v = self.extended(1 + 1 / (w + k), depth - 1, direct_terms)
            acc += cmath.exp(-s2 * cmath.log(w + k)) * (An @ (B @ v))
            An = An @ A
        # tail: f(u) = sum_l a_l u^l for the small arguments u = 1/(w+k)
        a = self._zero_taylor()
        m = permutation_order(A)
        with mpmath.workdps(30):
            q = mpmath.mpc(w.real, w.imag) + direct_terms
            Ar = np.eye(self.mu)
            for r in range(m):
                shift = (q + r + 1) / m
                for l in range(TAIL_TERMS):
                    e = _mpc(s2) + l
                    coef = complex(mpmath.power(m, -e) * mpmath.zeta(e, shift))
                    acc += coef * (An @ Ar @ B @ a[l])
                Ar = Ar @ A
        return acc / self.eigenvalue

    def component(self, i: int, extended: bool = False) -> Callable[[complex], complex]:
        if extended:
            return lambda z: self.extended(z)[i]
        return lambda z: self(z)[i]


def eigenfunction(
    op: TruncatedOperator,
    which: Union[str, int, complex] = "leading",
    spec: Optional[SpectralResult] = None,
    normalize_at: Optional[complex] = None,
) -> Eigenfunction:
    """Eigenfunction for the leading pair, the k-th pair, or the eigenvalue
    closest to a given complex target."""
    spec = spec or spectrum(op)
    if which == "leading":
        k = 0
    elif isinstance(which, (int, np.integer)) and not isinstance(which, bool):
        k = int(which)
    else:
        k = spec.index_closest(complex(which))
    lam, v, _ = spec.pair(k)
    coeffs = v.reshape(op.N, op.mu).copy()
    # largest constant-term component made real positive, Phi(2) summing to 1
    ref = coeffs[0].sum()
    if abs(ref) < 1e-300:
        ref = coeffs.flat[np.argmax(np.abs(coeffs))]
    coeffs = coeffs / ref
    fn = Eigenfunction(op, lam, coeffs)
    if normalize_at is not None:
        val = fn(normalize_at).sum()
        fn = Eigenfunction(op, lam, coeffs / val)
    return fn


def inv_z_taylor(N: int) -> np.ndarray:
    """Taylor coefficients of 1/(1+w) around w = 1: (-1)^k / 2^{k+1}."""
    return np.array([(-1) ** k / 2 ** (k + 1) for k in range(N)], dtype=float)


# functional equations --------------------------------------------------------

VectorFunction = Callable[[complex], np.ndarray]


def _vec(Phi: VectorFunction, z: complex) -> np.ndarray:
    return np.atleast_1d(np.asarray(Phi(z), dtype=complex))


def default_lewis_points() -> List[complex]:
    """Points whose images z+1 and 1+1/z stay inside the shifted disc."""
    return [1.25 + 0.5 * k / 9 for k in range(10)] + [1.5 + 0.2j, 1.5 - 0.2j]


def vector_lewis_residual(
    n: int, s: Weight, lam: complex, Phi: VectorFunction, points: Optional[Sequence[complex]] = None
) -> float:
    """max |Phi(z) - A Phi(z+1) - lam^{-1} z^{-2s} B Phi(1 + 1/z)|."""
    A, B = transfer_matrices(n)
    s2 = 2 * complex(s)
    worst = 0.0
    for z in points or default_lewis_points():
        z = complex(z)
        r = _vec(Phi, z) - A @ _vec(Phi, z + 1) - cmath.exp(-s2 * cmath.log(z)) / lam * (B @ _vec(Phi, 1 + 1 / z))
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


def two_term_matrix(n: int) -> np.ndarray:
    """B A^{-1} = rho(T^-1 M T)."""
    return rho(n, T_INV * M_MAT * T).matrix()


def two_term_check(
    n: int, s: Weight, lam: complex, Phi: VectorFunction, points: Optional[Sequence[complex]] = None
) -> float:
    """max |Phi(z) - lam z^{-2s} B A^{-1} Phi(1/z)|."""
    C = two_term_matrix(n)
    if not np.array_equal(C @ C, np.eye(C.shape[0], dtype=C.dtype)):
        raise ArithmeticError("(B A^-1)^2 is not the identity")
    s2 = 2 * complex(s)
    pts = points or [0.8, 0.9, 1.0, 1.1, 1.25, 1.0 + 0.2j]
    worst = 0.0
    for z in pts:
        z = complex(z)
        r = _vec(Phi, z) - lam * cmath.exp(-s2 * cmath.log(z)) * (C @ _vec(Phi, 1 / z))
        worst = max(worst, float(np.max(np.abs(r))))
    return worst


@dataclass(frozen=True)
class SelbergResult:
    n: int
    s: complex
    N: int
    value: complex
    factored: complex
    plus: complex
    minus: complex

    @property
    def discrepancy(self) -> float:
        return abs(self.value - self.factored)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": [self.s.real, self.s.imag],
            "order": self.N,
            "Z": [self.value.real, self.value.imag],
            "det_1_plus_L_times_det_1_minus_L": [self.factored.real, self.factored.imag],
            "discrepancy": self.discrepancy,
        }


def selberg_zeta(n: int, s: Weight, N: int, op: Optional[TruncatedOperator] = None) -> SelbergResult:
    """det(1 - L^2), also computed as det(1 + L) det(1 - L)."""
    op = op or build(n, s, N)
    L = op.matrix
    ident = np.eye(L.shape[0])
    value = complex(np.linalg.det(ident - L @ L))
    plus = complex(np.linalg.det(ident + L))
    minus = complex(np.linalg.det(ident - L))
    return SelbergResult(n, complex(s), op.N, value, plus * minus, plus, minus)
