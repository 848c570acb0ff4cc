"""Affine maps tau(g Gamma) = g0 * Phi(g) Gamma on UT(k+1)/UT(k+1, Z).

Points are kept as fundamental-domain representatives (every coordinate in
[0, 1)).  For zero-entropy Phi the orbit of a point has, for each residue r
mod b, coordinates given by generalized polynomials q[i,j,r](t) with
n = t b + r.  They are produced in three stages:

1. ``symbolic_automorphism_power``: Phi^{tb+r}(g) as polynomials in t,
   level by level (Psi = Phi^b has unipotent linear parts).
2. ``symbolic_prefix_product``: g0 Phi(g0) ... Phi^{tb+r-1}(g0) as
   polynomials in t, closing each level's running sum with Faulhaber.
3. ``reduce_mod_lattice`` run on the product with floor/frac as GP nodes.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce

from .exact_algebra import is_zero_entropy, unipotency_order, unipotent_power_symbolic
from .gp import from_unipoly, gp_degree, gp_split
from .nilgroup import (
    CoordinateMap,
    UnipotentMatrix,
    coordinates,
    linear_parts,
    preserves_lattice,
    reduce_mod_lattice,
    remainder,
    verify_homomorphism,
    xvar,
)
from .poly import DegreeBound, UniPoly, faulhaber_sum
from .rational import circle_distance, frac, to_fraction
from .torus import ReturnTimeSet, _check_eps, _check_window


def as_nilpoint(g):
    """Fundamental-domain representative of the coset g Gamma."""
    g = g.map(to_fraction)
    return reduce_mod_lattice(g)[0]


class NilAffineMap:
    """tau(g Gamma) = g0 Phi(g) Gamma with Phi a lattice-preserving automorphism.

    Construction validates Phi symbolically (homomorphism identity, lattice
    preservation, invertible integral linear parts).  ``b`` is the lcm of the
    per-level unipotency orders and is only available for zero-entropy Phi.
    """

    def __init__(self, g0, phi, validate=True):
        if g0.k != phi.k:
            raise ValueError(f"dimension mismatch: g0 has k={g0.k}, Phi has k={phi.k}")
        self.k = phi.k
        self.g0 = g0.map(to_fraction)
        self.phi = phi
        if validate:
            if not verify_homomorphism(phi):
                raise ValueError("Phi is not a group homomorphism of UT(k+1)")
            if not preserves_lattice(phi):
                raise ValueError("Phi does not map the lattice UT(k+1, Z) into itself")
        self.linear = linear_parts(phi)
        for i, a in enumerate(self.linear, 1):
            if not a.is_integral() or abs(a.det()) != 1:
                raise ValueError(f"level-{i} linear part is not invertible over Z")

    @classmethod
    def translation(cls, g0):
        return cls(g0, CoordinateMap.identity(g0.k), validate=False)

    def is_zero_entropy(self):
        return all(is_zero_entropy(a) for a in self.linear)

    @cached_property
    def b(self):
        if not self.is_zero_entropy():
            raise ValueError("positive entropy: a linear part of Phi has an eigenvalue off the unit circle")
        return reduce(math.lcm, (unipotency_order(a) for a in self.linear), 1)

    @cached_property
    def _powers(self):
        """Phi^0 .. Phi^b as coordinate maps."""
        out = [CoordinateMap.identity(self.k)]
        for _ in range(self.b):
            out.append(self.phi.compose(out[-1]))
        return out

    @cached_property
    def psi(self):
        return self._powers[self.b]

    @cached_property
    def _psi_levels(self):
        """Per level: (C_i(t) as UniPoly matrix, remainder polys H_i)."""
        psi = self.psi
        lin = linear_parts(psi)
        out = []
        for i in range(1, self.k + 1):
            ct = unipotent_power_symbolic(lin[i])
            hs = [remainder(psi, i, j, lin[i]) for j in range(1, self.k + 2 - i)]
            for h in hs:
                if any(v[1] >= i for v in h.variables()):
                    raise ValueError("remainder depends on its own or higher levels")
            out.append((ct, hs))
        return out

    def phi_power(self, m):
        """Phi^m as a coordinate map (0 <= m <= b)."""
        return self._powers[m]

    def apply(self, x):
        if x.k != self.k:
            raise ValueError(f"dimension mismatch: map has k={self.k}, point has k={x.k}")
        return reduce_mod_lattice(self.g0 * self.phi(x))[0]

    def iterate(self, x, count):
        cur = as_nilpoint(x)
        for n in range(count + 1):
            yield cur
            if n < count:
                cur = self.apply(cur)

    def orbit(self, x, count):
        return list(self.iterate(x, count))

    def power_map(self, m):
        """tau^m as a NilAffineMap: translation g0 Phi(g0) ... Phi^{m-1}(g0), automorphism Phi^m."""
        g = UnipotentMatrix.identity(self.k)
        phi_m = CoordinateMap.identity(self.k)
        for _ in range(m):
            g = g * phi_m(self.g0)
            phi_m = self.phi.compose(phi_m)
        return NilAffineMap(g, phi_m, validate=False)

    def to_json(self):
        return {"type": "nil", "k": self.k, "g0": self.g0.to_json(),
                "phi": {"kind": "map", "coords": self.phi.to_json()}}


def _lift(v):
    if isinstance(v, (UniPoly, DegreeBound)):
        return v
    return UniPoly.const(v)


def _mat_vec(mat, vec):
    out = []
    for row in mat.rows:
        acc = UniPoly()
        for a, x in zip(row, vec):
            if a:
                acc = acc + a * x
        out.append(_lift(acc))
    return out


def _psi_orbit(nmap, start):
    """Psi^t(start) as a UnipotentMatrix of polynomials in t.

    Level i solves X_i(t+1) = C_i X_i(t) + H_i(X_{<i}(t)):
    X_i(t) = C_i^t X_i(0) + C_i^{t-1} sum_{s<t} C_i^{-s} H_i(X_{<i}(s)).
    ``start`` coordinates may be numbers or DegreeBound placeholders.
    """
    k = nmap.k
    X = {}
    for i, (ct, hs) in enumerate(nmap._psi_levels, 1):
        x0 = [_lift(start.x[(i, j)]) for j in range(1, k + 2 - i)]
        level = _mat_vec(ct, x0)
        if any(hs):
            values = {xvar(s, j): X[(s, j)] for s, j in X}
            hvec = [_lift(h.evaluate(values)) for h in hs]
            inv = ct.map(UniPoly.reflect)
            sums = [faulhaber_sum(v) for v in _mat_vec(inv, hvec)]
            back = ct.map(lambda p: p.shift(-1))
            level = [u + v for u, v in zip(level, _mat_vec(back, sums))]
        for j, p in enumerate(level, 1):
            X[(i, j)] = p
    return UnipotentMatrix(k, X)


def symbolic_automorphism_power(nmap, r, g):
    """Phi^{tb+r}(g) with every coordinate a UniPoly in t."""
    if not 0 <= r < nmap.b:
        raise ValueError(f"residue must lie in [0, {nmap.b})")
    start = nmap.phi_power(r)(g.map(to_fraction))
    return _psi_orbit(nmap, start)


def symbolic_prefix_product(factor):
    """P(n) = Q(1) Q(2) ... Q(n) for a UnipotentMatrix ``factor`` of UniPoly in m.

    Since P(n+1) = P(n) Q(n+1), each level-i coordinate satisfies
    P[i,j](n+1) - P[i,j](n) = sum_{s<i} P[s,j](n) Q[i-s,s+j](n+1), whose right
    side only involves lower levels, so P[i,j] is its Faulhaber sum.
    """
    k = factor.k
    q_next = factor.map(lambda p: _lift(p).shift(1))
    P = {}
    for i, j in coordinates(k):
        delta = q_next.x[(i, j)]
        for s in range(1, i):
            delta = delta + P[(s, j)] * q_next.x[(i - s, s + j)]
        P[(i, j)] = faulhaber_sum(_lift(delta))
    return UnipotentMatrix(k, P)


def _polynomial_coset(nmap, r, start):
    """Polynomial matrix whose coset is tau^{tb+r}(x), for Phi^r(x) = start."""
    b = nmap.b
    g0 = nmap.g0
    head = UnipotentMatrix.identity(nmap.k)
    for m in range(r):
        head = head * nmap.phi_power(m)(g0)
    block = UnipotentMatrix.identity(nmap.k).map(UniPoly.const)
    for s in range(b):
        m = r + s
        if m <= b:
            seed = nmap.phi_power(m)(g0)
        else:
            seed = nmap.phi_power(m - b)(nmap.phi_power(b)(g0))
        block = block * _psi_orbit(nmap, seed)
    # block(t) = prod_s Psi^t(Phi^{r+s} g0); product over t < n is P(n) with Q(m) = block(m - 1)
    prefix = symbolic_prefix_product(block.map(lambda p: p.shift(-1)))
    return head.map(UniPoly.const) * prefix * _psi_orbit(nmap, start)


@dataclass
class GPOrbit:
    """Generalized-polynomial orbit: q[r][(i, j)] evaluated at t gives
    coordinate (i, j) of tau^{tb+r}(base)."""

    k: int
    b: int
    base: UnipotentMatrix
    q: list
    polys: list

    def eval_residue(self, r, t):
        memo = {}
        return UnipotentMatrix(self.k, {ij: e.evaluate(t, memo) for ij, e in self.q[r].items()})

    def eval(self, n):
        if n < 0:
            raise ValueError("n must be >= 0")
        t, r = divmod(n, self.b)
        return self.eval_residue(r, t)

    def degrees(self):
        return [{ij: gp_degree(e) for ij, e in row.items()} for row in self.q]

    def to_json(self):
        return {"k": self.k, "b": self.b, "base": self.base.to_json(),
                "q": [{f"{i},{j}": e.to_json() for (i, j), e in row.items()} for row in self.q]}


def gp_orbit(nmap, x):
    x = as_nilpoint(x)
    qs, polys = [], []
    for r in range(nmap.b):
        start = nmap.phi_power(r)(x)
        p = _polynomial_coset(nmap, r, start)
        q, _ = reduce_mod_lattice(p.map(from_unipoly), split=gp_split)
        qs.append(dict(q.x))
        polys.append(p)
    return GPOrbit(nmap.k, nmap.b, x, qs, polys)


def gp_degree_bounds(nmap):
    """Per-residue, per-coordinate GP degree bounds that depend on the map only.

    The engine is rerun with every base-point coordinate replaced by an
    unknown constant (DegreeBound(0)), so the result is valid for all points.
    """
    out = []
    unknown = UnipotentMatrix(nmap.k, {ij: DegreeBound(0) for ij in coordinates(nmap.k)})
    for r in range(nmap.b):
        p = _polynomial_coset(nmap, r, unknown)
        q, _ = reduce_mod_lattice(p.map(DegreeBound.of), split=lambda v: (v, v))
        out.append({ij: v.deg for ij, v in q.x.items()})
    return out


def _distance(a, b):
    return max((circle_distance(a.x[ij], b.x[ij]) for ij in a.x), default=Fraction(0))


def return_times_direct(nmap, x, eps, window):
    eps = _check_eps(eps)
    window = _check_window(window)
    x = as_nilpoint(x)
    times = [n for n, y in enumerate(nmap.iterate(x, window)) if _distance(y, x) < eps]
    return ReturnTimeSet(window, times)


def return_times_gp(orbit, eps, window):
    eps = _check_eps(eps)
    window = _check_window(window)
    times = []
    for n in range(window + 1):
        if _distance(orbit.eval(n), orbit.base) < eps:
            times.append(n)
    return ReturnTimeSet(window, times)


def residue_decomposition(nmap, x, samples):
    """For r = 1..b, the samples tau^{r + mb}(x), m < samples, iterated with tau^b."""
    x = as_nilpoint(x)
    b = nmap.b
    step = nmap.power_map(b)
    out = []
    cur = nmap.apply(x)
    for _ in range(b):
        out.append(list(step.iterate(cur, samples - 1)) if samples > 0 else [])
        cur = nmap.apply(cur)
    return out


def nil_point_from_frac(k, coords):
    return UnipotentMatrix(k, {ij: frac(to_fraction(v)) for ij, v in coords.items()})
