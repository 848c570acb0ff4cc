"""Affine maps x -> A x + alpha on the torus T^d, computed exactly.

Besides plain iteration this module builds, for zero-entropy A, the
per-residue polynomial form of an orbit: with b the unipotency order of A,
C = A^b and beta = sum_{i<b} A^i alpha,

    tau^{tb + r}(a) = C^t (tau^r a) + (sum_{s<t} C^s) beta   (mod 1),

whose coordinates are polynomials in t of degree <= d.  Return-time sets can
then be read off either by iterating or by evaluating those polynomials; the
two routes share nothing but the input.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

import numpy as np

from .exact_algebra import unipotency_order, unipotent_power_symbolic
from .matrix import Matrix
from .poly import UniPoly, faulhaber_sum
from .rational import circle_distance, fmt, frac, to_fraction


def as_point(coords):
    """Normalize coordinates to exact rationals in [0, 1)."""
    return tuple(frac(to_fraction(c)) for c in coords)


@dataclass(frozen=True)
class TorusAffineMap:
    A: Matrix
    alpha: tuple

    def __post_init__(self):
        A = self.A if isinstance(self.A, Matrix) else Matrix.parse(self.A)
        if not A.is_integral():
            raise ValueError("torus maps need an integer matrix")
        alpha = as_point(self.alpha)
        if len(alpha) != A.dim:
            raise ValueError(f"alpha has {len(alpha)} coordinates, A is {A.dim}x{A.dim}")
        object.__setattr__(self, "A", A.map(int))
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def rotation(cls, *alpha):
        return cls(Matrix.identity(len(alpha)), alpha)

    @property
    def dim(self):
        return self.A.dim

    @cached_property
    def unipotency(self):
        """(b, C = A^b) for zero-entropy invertible A; raises otherwise."""
        b = unipotency_order(self.A)
        return b, self.A ** b

    def to_json(self):
        return {"type": "torus", "A": self.A.tolist(), "alpha": [fmt(a) for a in self.alpha]}


def _check_dims(m, x):
    if len(x) != m.dim:
        raise ValueError(f"dimension mismatch: map on T^{m.dim}, point has {len(x)} coordinates")


def apply(m, x):
    """One step: (A x + alpha) mod 1."""
    _check_dims(m, x)
    y = m.A.apply(x)
    return tuple(frac(v + a) for v, a in zip(y, m.alpha))


def _common_den(*vecs):
    return reduce(math.lcm, (q.denominator for v in vecs for q in v), 1)


def iterate(m, x, count):
    """Yield tau^n x for n = 0..count, exactly.

    Works on integer numerators over the common denominator of x and alpha,
    which every iterate shares.
    """
    x = as_point(x)
    _check_dims(m, x)
    den = _common_den(x, m.alpha)
    cur = [int(q * den) for q in x]
    shift = [int(a * den) for a in m.alpha]
    rows = m.A.rows
    for n in range(count + 1):
        yield tuple(Fraction(c, den) for c in cur)
        if n < count:
            cur = [(sum(a * c for a, c in zip(row, cur)) + s) % den for row, s in zip(rows, shift)]


def orbit(m, x, count):
    return list(iterate(m, x, count))


@dataclass(frozen=True)
class ReturnTimeSet:
    window: int
    times: tuple

    def __post_init__(self):
        times = tuple(sorted(set(int(t) for t in self.times)))
        if times and (times[0] < 0 or times[-1] > self.window):
            raise ValueError("return times outside the window")
        object.__setattr__(self, "times", times)

    def __contains__(self, n):
        return n in set(self.times)

    def __len__(self):
        return len(self.times)

    def issubset(self, other):
        return set(self.times) <= set(other.times)

    def to_json(self):
        return {"window": self.window, "times": list(self.times)}


def _check_eps(eps):
    eps = to_fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must satisfy 0 < eps < 1/2")
    return eps


def _check_window(window):
    if window < 0:
        raise ValueError("window must be >= 0")
    return int(window)


def return_times_direct(m, a, eps, window):
    """{n in [0, window] : max_j circle-dist(tau^n a, a)_j < eps} by iteration."""
    eps = _check_eps(eps)
    window = _check_window(window)
    a = as_point(a)
    den = _common_den(a, m.alpha)
    base = [int(q * den) for q in a]
    times = []
    # integer form of "circle distance < eps": min(d, den - d) * eps.den < eps.num * den
    lim = eps.numerator * den
    for n, pt in enumerate(iterate(m, a, window)):
        ok = True
        for q, b0 in zip(pt, base):
            d = abs(int(q * den) - b0)
            if min(d, den - d) * eps.denominator >= lim:
                ok = False
                break
        if ok:
            times.append(n)
    return ReturnTimeSet(window, times)


@dataclass(frozen=True)
class PolynomialOrbit:
    """Residue period b and per-residue coordinate polynomials f[r][j](t)."""

    b: int
    polys: tuple  # b rows of d UniPoly
    base: tuple

    @property
    def dim(self):
        return len(self.base)

    def max_degree(self):
        return max(p.degree for row in self.polys for p in row)

    def to_json(self):
        return {"b": self.b, "base": [fmt(q) for q in self.base],
                "polys": [[[fmt(c) for c in p.coeffs] for p in row] for row in self.polys]}


def polynomial_orbit(m, a):
    """Exact per-residue polynomial representation of the orbit of ``a``."""
    try:
        b, C = m.unipotency
    except ValueError as exc:
        raise ValueError(f"polynomial orbit needs zero entropy and det(A) = +-1: {exc}") from None
    a = as_point(a)
    _check_dims(m, a)
    d = m.dim
    Ct = unipotent_power_symbolic(C)
    # sum_{s<t} C^s, entrywise Faulhaber sums
    Csum = Ct.map(faulhaber_sum)
    beta = [Fraction(0)] * d
    Ai_alpha = list(m.alpha)
    for _ in range(b):
        beta = [x + y for x, y in zip(beta, Ai_alpha)]
        Ai_alpha = list(m.A.apply(Ai_alpha))
    drift = Csum.apply(beta)
    rows = []
    start = a
    for r in range(b):
        lin = Ct.apply(start)
        rows.append(tuple(_to_poly(u) + _to_poly(v) for u, v in zip(lin, drift)))
        start = apply(m, start)
    return PolynomialOrbit(b, tuple(rows), a)


def _to_poly(x):
    return x if isinstance(x, UniPoly) else UniPoly.const(x)


def eval_orbit(orbit, n):
    """tau^n(base) from the polynomial form: n = tb + r, coordinates frac(f[r][j](t))."""
    if n < 0:
        raise ValueError("n must be >= 0")
    t, r = divmod(n, orbit.b)
    return tuple(frac(p(t)) for p in orbit.polys[r])


def return_times_symbolic(orbit, eps, window):
    """Return times computed from the polynomial orbit alone."""
    eps = _check_eps(eps)
    window = _check_window(window)
    base = orbit.base
    forms = [[p.integer_form() for p in row] for row in orbit.polys]
    times = []
    for n in range(window + 1):
        t, r = divmod(n, orbit.b)
        ok = True
        for (coeffs, den), b0 in zip(forms[r], base):
            acc = 0
            for c in reversed(coeffs):
                acc = acc * t + c
            if circle_distance(Fraction(acc % den, den), b0) >= eps:
                ok = False
                break
        if ok:
            times.append(n)
    return ReturnTimeSet(window, times)


def _float_orbits(m, pts, steps):
    A = np.array(m.A.tolist(), dtype=float)
    alpha = np.array([float(a) for a in m.alpha])
    out = np.empty((steps,) + pts.shape)
    cur = pts.copy()
    for t in range(steps):
        out[t] = cur
        cur = np.mod(cur @ A.T + alpha, 1.0)
    return out


def separated_set_size(m, n, eps, samples):
    """Greedy (n, eps)-separated subset of a regular grid with ~``samples`` points.

    Two points are separated when the max over the first n iterates of the
    coordinatewise circle distance exceeds eps.  Only points within eps at
    time 0 can fail to be separated, so candidates are bucketed on a grid of
    cell size eps and compared with neighbouring cells only.
    """
    d = m.dim
    side = max(int(round(samples ** (1.0 / d))), 1)
    axis = (np.arange(side) + 0.5) / side
    pts = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1).reshape(-1, d)
    orbits = np.transpose(_float_orbits(m, pts, n), (1, 0, 2))  # (points, n, d)
    cells = max(int(1.0 / eps), 1)
    buckets = {}
    chosen = []
    offsets = np.array(np.meshgrid(*([[-1, 0, 1]] * d), indexing="ij")).reshape(d, -1).T
    for idx in range(len(pts)):
        cell = tuple(int(c) for c in np.floor(pts[idx] * cells).astype(int) % cells)
        near = []
        for off in offsets:
            key = tuple((c + o) % cells for c, o in zip(cell, off))
            near.extend(buckets.get(key, ()))
        if near:
            diff = np.abs(orbits[near] - orbits[idx])
            diff = np.minimum(diff, 1.0 - diff)
            if np.any(diff.max(axis=(1, 2)) <= eps):
                continue
        chosen.append(idx)
        buckets.setdefault(cell, []).append(idx)
    return len(chosen)


def entropy_estimate_separated(m, n_max, eps, samples):
    """Heuristic entropy estimate (1/n) ln N(n, eps) at n = n_max.

    N(n, eps) is the size of a greedy (n, eps)-separated set drawn from a
    finite grid, so the estimate saturates at ln(samples)/n_max and is only
    useful to separate zero from clearly positive entropy.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    count = separated_set_size(m, n_max, float(eps), samples)
    return math.log(count) / n_max
