"""Exact kernels for integer matrices: characteristic polynomials, the
Kronecker zero-entropy test, unipotency orders, entropy, symbolic unipotent
powers.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import numpy as np

from .matrix import Matrix
from .poly import UniPoly, binomial_poly, faulhaber_sum, squarefree_decomposition

__all__ = [
    "EigenSpectrum",
    "RootFindingError",
    "char_poly",
    "cyclotomic_order_lcm",
    "eigen_spectrum",
    "entropy",
    "faulhaber_sum",
    "is_unipotent",
    "is_zero_entropy",
    "totient",
    "unipotency_order",
    "unipotent_power_symbolic",
]


class RootFindingError(ArithmeticError):
    """Float root finder did not reach the requested residual."""


def _as_matrix(m):
    return m if isinstance(m, Matrix) else Matrix(m)


def char_poly(m):
    """det(xI - m) as an integer-coefficient UniPoly (monic).

    Division-free: grows the polynomial over leading principal submatrices,
    p_{r+1}(x) = (x - a) p_r(x) - R adj(xI - A_r) c, with the adjugate
    expanded as sum_j x^{r-1-j} sum_{i<=j} c_i A_r^{j-i}.
    """
    m = _as_matrix(m)
    n = m.dim
    # coefficients highest-degree first: [1, c1, ..., cr]
    p = [1]
    for r in range(n):
        a = m[r, r]
        col = [m[i, r] for i in range(r)]
        row = [m[r, j] for j in range(r)]
        # s_t = row . A_r^t . col for t < r
        s = []
        v = col
        for _ in range(r):
            s.append(sum(x * y for x, y in zip(row, v)))
            v = [sum(m[i, j] * v[j] for j in range(r)) for i in range(r)]
        new = [0] * (r + 2)
        for t, c in enumerate(p):
            new[t] += c
            new[t + 1] -= a * c
        # R adj c contributes to x^{r-1-j}, i.e. index j + 2 of new
        for j in range(r):
            new[j + 2] -= sum(p[i] * s[j - i] for i in range(j + 1))
        p = new
    return UniPoly(list(reversed(p)))


def totient(n):
    result, k, m = n, 2, n
    while k * k <= m:
        if m % k == 0:
            while m % k == 0:
                m //= k
            result -= result // k
        k += 1
    if m > 1:
        result -= result // m
    return result


def cyclotomic_order_lcm(d):
    """All n with totient(n) <= d, and their lcm.

    totient(n) >= sqrt(n/2), so the search stops at 2 d^2.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    orders = frozenset(n for n in range(1, 2 * d * d + 1) if totient(n) <= d)
    return orders, reduce(math.lcm, orders, 1)


def _strip_zero_roots(p):
    k = 0
    while k < len(p.coeffs) and p.coeffs[k] == 0:
        k += 1
    return UniPoly(p.coeffs[k:]), k


def is_zero_entropy(m):
    """True iff every eigenvalue of the integer matrix is 0 or a root of unity.

    Decided exactly: after removing the x^k factor the constant term must be
    +-1, and then m^dim (m^B - I)^dim must vanish, B the lcm of all orders n
    with totient(n) <= dim.
    """
    m = _as_matrix(m)
    if not m.is_integral():
        raise ValueError("zero-entropy test needs an integer matrix")
    n = m.dim
    rest, _ = _strip_zero_roots(char_poly(m))
    if abs(rest.constant_term()) != 1:
        return False
    _, big = cyclotomic_order_lcm(n)
    eye = Matrix.identity(n)
    return ((m ** n) @ ((m ** big - eye) ** n)).is_zero()


def is_unipotent(m):
    m = _as_matrix(m)
    return ((m - Matrix.identity(m.dim)) ** m.dim).is_zero()


def unipotency_order(m):
    """Smallest b >= 1 with m^b unipotent, for invertible zero-entropy m."""
    m = _as_matrix(m)
    if not m.is_integral():
        raise ValueError("unipotency order needs an integer matrix")
    if abs(m.det()) != 1:
        raise ValueError("matrix is not invertible over Z (det != +-1)")
    if not is_zero_entropy(m):
        raise ValueError("positive entropy: no power of the matrix is unipotent")
    _, big = cyclotomic_order_lcm(m.dim)
    for b in range(1, big + 1):
        if big % b == 0 and is_unipotent(m ** b):
            return b
    raise AssertionError("unreachable: Kronecker bound violated")


@dataclass(frozen=True)
class EigenSpectrum:
    roots: tuple  # (complex root, multiplicity) pairs
    residual: float

    def moduli(self):
        return [abs(z) for z, _ in self.roots]


def eigen_spectrum(m, tol=1e-8):
    """Float eigenvalues via exact squarefree splitting, then numpy.roots.

    Repeated roots are separated exactly first, so each float root problem is
    well conditioned.  The residual is the worst relative |p(z)| over the
    squarefree factors; above ``tol`` raises RootFindingError.
    """
    p = char_poly(m)
    roots, worst = [], 0.0
    for factor, mult in squarefree_decomposition(p):
        coeffs = [float(c) for c in reversed(factor.coeffs)]
        zs = np.roots(coeffs) if len(coeffs) > 1 else np.array([])
        for z in zs:
            mag = sum(abs(c) * abs(z) ** i for i, c in enumerate(reversed(coeffs)))
            res = abs(np.polyval(coeffs, z)) / max(mag, 1.0)
            worst = max(worst, float(res))
            roots.append((complex(z), mult))
    if worst > tol:
        raise RootFindingError(f"root residual {worst:.3e} above tolerance {tol:.1e}")
    return EigenSpectrum(tuple(roots), worst)


def entropy(m, tol=1e-8):
    """Topological entropy sum_j max(ln|lambda_j|, 0) of the toral endomorphism.

    Natural log.  Exactly 0.0 whenever the exact zero-entropy test passes.
    """
    m = _as_matrix(m)
    if is_zero_entropy(m):
        return 0.0
    spec = eigen_spectrum(m, tol)
    return float(sum(mult * max(math.log(abs(z)), 0.0) for z, mult in spec.roots if z != 0))


def unipotent_power_symbolic(m):
    """m^t = sum_{i<dim} binom(t, i) (m - I)^i as a Matrix of UniPoly in t."""
    m = _as_matrix(m)
    n = m.dim
    d = m - Matrix.identity(n)
    if not (d ** n).is_zero():
        raise ValueError("matrix is not unipotent")
    out = [[UniPoly() for _ in range(n)] for _ in range(n)]
    dp = Matrix.identity(n)
    for i in range(n):
        if dp.is_zero():
            break
        b = binomial_poly(i)
        for r in range(n):
            for c in range(n):
                if dp[r, c] != 0:
                    out[r][c] = out[r][c] + b * Fraction(dp[r, c])
        dp = dp @ d
    return Matrix(out)
