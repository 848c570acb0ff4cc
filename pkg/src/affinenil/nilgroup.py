"""Upper-triangular unipotent groups UT(k+1) over Q with lattice UT(k+1, Z).

An element is addressed by coordinates ``(i, j)``: level ``i`` is the
superdiagonal offset (1..k) and ``j`` the position along it (1..k+1-i), so
``x[i, j]`` sits at matrix row ``j``, column ``i + j`` (1-based).  Products
in these coordinates read

    (g h)[i, j] = sum_{s=0}^{i} g[s, j] * h[i-s, s+j],   with g[0, .] = 1,

which is also the identity every homomorphism must satisfy coordinatewise.
Coordinates may hold any ring elements (Fraction, MultiPoly, UniPoly, GP
expressions), which is how the symbolic engines reuse this module.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .matrix import Matrix
from .multipoly import MultiPoly
from .rational import fmt, to_fraction


def coordinates(k):
    """Canonical coordinate order: level by level, then position."""
    return [(i, j) for i in range(1, k + 1) for j in range(1, k + 2 - i)]


def xvar(i, j, copy=0):
    """Variable name for coordinate (i, j) of the ``copy``-th symbolic element."""
    return (copy, i, j)


def level_weight(v):
    return 2 ** (v[1] - 1)


class UnipotentMatrix:
    __slots__ = ("k", "x")

    def __init__(self, k, coords=None):
        if k < 1:
            raise ValueError("k must be >= 1")
        self.k = k
        x = {ij: 0 for ij in coordinates(k)}
        for ij, v in (coords or {}).items():
            if ij not in x:
                raise ValueError(f"coordinate {ij} out of range for k={k}")
            x[ij] = v
        self.x = x

    @classmethod
    def identity(cls, k):
        return cls(k)

    @classmethod
    def symbolic(cls, k, copy=0):
        return cls(k, {(i, j): MultiPoly.var(xvar(i, j, copy)) for i, j in coordinates(k)})

    @classmethod
    def from_matrix(cls, m):
        m = m if isinstance(m, Matrix) else Matrix(m)
        n = m.dim
        for r in range(n):
            for c in range(r + 1):
                if m[r, c] != (1 if r == c else 0):
                    raise ValueError("not a unipotent upper-triangular matrix")
        return cls(n - 1, {(i, j): m[j - 1, i + j - 1] for i, j in coordinates(n - 1)})

    @classmethod
    def parse(cls, k, entries):
        """From a {"i,j": "p/q"} map; missing coordinates are 0."""
        coords = {}
        for key, v in entries.items():
            i, j = (int(t) for t in key.split(","))
            coords[(i, j)] = to_fraction(v)
        return cls(k, coords)

    def to_json(self):
        return {f"{i},{j}": fmt(v) for (i, j), v in self.x.items()}

    def to_matrix(self, one=1, zero=0):
        n = self.k + 1
        rows = [[one if r == c else zero for c in range(n)] for r in range(n)]
        for (i, j), v in self.x.items():
            rows[j - 1][i + j - 1] = v
        return Matrix(rows)

    def __getitem__(self, ij):
        if ij[0] == 0:
            return 1
        return self.x[ij]

    def __eq__(self, other):
        if not isinstance(other, UnipotentMatrix):
            return NotImplemented
        return self.k == other.k and self.x == other.x

    def __hash__(self):
        return hash((self.k, tuple(self.x.values())))

    def __repr__(self):
        body = ", ".join(f"{i},{j}: {v}" for (i, j), v in self.x.items())
        return f"UnipotentMatrix(k={self.k}, {{{body}}})"

    def map(self, f):
        return UnipotentMatrix(self.k, {ij: f(v) for ij, v in self.x.items()})

    def level(self, i):
        return [self.x[(i, j)] for j in range(1, self.k + 2 - i)]

    def __mul__(self, other):
        if not isinstance(other, UnipotentMatrix):
            return NotImplemented
        if other.k != self.k:
            raise ValueError(f"dimension mismatch: k={self.k} vs k={other.k}")
        out = {}
        for i, j in coordinates(self.k):
            acc = self.x[(i, j)] + other.x[(i, j)]
            for s in range(1, i):
                a = self.x[(s, j)]
                if isinstance(a, int) and a == 0:
                    continue
                acc = acc + a * other.x[(i - s, s + j)]
            out[(i, j)] = acc
        return UnipotentMatrix(self.k, out)

    def inverse(self):
        h = {}
        for i, j in coordinates(self.k):
            acc = -self.x[(i, j)]
            for s in range(1, i):
                acc = acc - self.x[(s, j)] * h[(i - s, s + j)]
            h[(i, j)] = acc
        return UnipotentMatrix(self.k, h)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = UnipotentMatrix.identity(self.k), self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def is_identity(self):
        return all(v == 0 for v in self.x.values())

    def is_integral(self):
        return all(Fraction(v).denominator == 1 for v in self.x.values())

    def is_fractional(self):
        return all(0 <= v < 1 for v in self.x.values())


def group_mul(g, h):
    return g * h


def group_inv(g):
    return g.inverse()


def commutator(g, h):
    """[g, h] = g h g^-1 h^-1."""
    return g * h * g.inverse() * h.inverse()


def lower_central_series_level(g):
    """Largest i with g in G_i of the UT filtration; k+1 for the identity."""
    for i in range(1, g.k + 1):
        if any(v != 0 for v in g.level(i)):
            return i
    return g.k + 1


def level_weighted_degree(p):
    """Weighted degree with weight 2^(i-1) on each level-i coordinate variable."""
    return p.weighted_degree(level_weight)


def _floor_split(v):
    y = floor(v)
    return v - y, y


def reduce_mod_lattice(g, split=_floor_split):
    """Write g = q * gamma with q fractional and gamma integral.

    Level by level, v = g[i,j] - sum_{s=1}^{i-1} q[s,j] * y[i-s,s+j] and
    (q[i,j], y[i,j]) = split(v), by default (frac(v), floor(v)).  Passing a
    different ``split`` runs the same recursion on symbolic coordinates.
    """
    q, y = {}, {}
    for i, j in coordinates(g.k):
        v = g.x[(i, j)]
        for s in range(1, i):
            v = v - q[(s, j)] * y[(i - s, s + j)]
        q[(i, j)], y[(i, j)] = split(v)
    return UnipotentMatrix(g.k, q), UnipotentMatrix(g.k, y)


class CoordinateMap:
    """Polynomial self-map of UT(k+1) given coordinatewise, g -> (phi[i,j](g))."""

    __slots__ = ("k", "polys")

    def __init__(self, k, polys):
        self.k = k
        full = {}
        for ij in coordinates(k):
            p = polys.get(ij, MultiPoly())
            full[ij] = p if isinstance(p, MultiPoly) else MultiPoly.const(p)
        extra = set(polys) - set(full)
        if extra:
            raise ValueError(f"coordinates {sorted(extra)} out of range for k={k}")
        for ij, p in full.items():
            for v in p.variables():
                if not (isinstance(v, tuple) and len(v) == 3 and v[0] == 0 and (v[1], v[2]) in full):
                    raise ValueError(f"coordinate {ij}: unknown variable {v!r}")
        self.polys = full

    @classmethod
    def identity(cls, k):
        return cls(k, {(i, j): MultiPoly.var(xvar(i, j)) for i, j in coordinates(k)})

    def __eq__(self, other):
        if not isinstance(other, CoordinateMap):
            return NotImplemented
        return self.k == other.k and self.polys == other.polys

    def __hash__(self):
        return hash((self.k, tuple(self.polys.values())))

    def __repr__(self):
        body = "; ".join(f"{i},{j} -> {p}" for (i, j), p in self.polys.items())
        return f"CoordinateMap(k={self.k}: {body})"

    def __call__(self, g):
        if g.k != self.k:
            raise ValueError(f"dimension mismatch: map k={self.k}, element k={g.k}")
        values = {xvar(i, j): v for (i, j), v in g.x.items()}
        return UnipotentMatrix(self.k, {ij: p.evaluate(values) for ij, p in self.polys.items()})

    def compose(self, other):
        """self o other."""
        if other.k != self.k:
            raise ValueError("dimension mismatch")
        values = {xvar(i, j): p for (i, j), p in other.polys.items()}
        return CoordinateMap(self.k, {ij: _as_multipoly(p.evaluate(values))
                                      for ij, p in self.polys.items()})

    def power(self, b):
        result = CoordinateMap.identity(self.k)
        for _ in range(b):
            result = self.compose(result)
        return result

    def is_identity(self):
        return self == CoordinateMap.identity(self.k)

    def to_json(self):
        out = {}
        for (i, j), p in self.polys.items():
            terms = []
            for mono, c in sorted(p.terms.items()):
                terms.append({"coef": fmt(c),
                              "mono": {f"{v[1]},{v[2]}": e for v, e in mono}})
            out[f"{i},{j}"] = terms
        return out

    @classmethod
    def parse(cls, k, data):
        polys = {}
        for key, terms in data.items():
            i, j = (int(t) for t in key.split(","))
            p = MultiPoly()
            for term in terms:
                mono = []
                for vkey, e in term.get("mono", {}).items():
                    a, b = (int(t) for t in vkey.split(","))
                    mono.append((xvar(a, b), int(e)))
                p = p + MultiPoly({tuple(sorted(mono)): to_fraction(term["coef"])})
            polys[(i, j)] = p
        return cls(k, polys)


def _as_multipoly(v):
    return v if isinstance(v, MultiPoly) else MultiPoly.const(v)


def unit_element(k, i, j, value=1):
    return UnipotentMatrix(k, {(i, j): Fraction(value)})


def preserves_lattice(phi):
    """Phi(Gamma) in Gamma, checked on the unit coordinate generators."""
    return all(phi(unit_element(phi.k, i, j)).is_integral() for i, j in coordinates(phi.k))


def inner_automorphism(u, k=None):
    """Coordinate polynomials of g -> u g u^-1.

    ``u`` is a UnipotentMatrix or any invertible upper-triangular rational
    Matrix (e.g. diagonal +-1); it must send the integer lattice into itself.
    """
    if isinstance(u, UnipotentMatrix):
        um = u.to_matrix()
    else:
        um = u if isinstance(u, Matrix) else Matrix.parse(u)
    n = um.dim
    if k is not None and k + 1 != n:
        raise ValueError(f"matrix size {n} does not match k={k}")
    if any(um[r, c] != 0 for r in range(n) for c in range(r)):
        raise ValueError("conjugating matrix must be upper triangular to preserve UT(k+1)")
    uinv = um.inverse()
    g = UnipotentMatrix.symbolic(n - 1).to_matrix()
    conj = (um.map(Fraction) @ g) @ uinv.map(Fraction)
    for r in range(n):
        for c in range(r + 1):
            if _as_multipoly(conj[r, c]) != (1 if r == c else 0):
                raise ValueError("conjugation does not preserve UT(k+1)")
    phi = CoordinateMap(n - 1, {(i, j): _as_multipoly(conj[j - 1, i + j - 1])
                                for i, j in coordinates(n - 1)})
    if not preserves_lattice(phi):
        raise ValueError("u does not normalize the lattice UT(k+1, Z)")
    return phi


def heisenberg_automorphism(lin):
    """Lattice automorphism of UT(3) with level-1 linear part ``lin`` in GL2(Z).

    For lin = [[a, b], [c, d]] with det = +-1:
    (x, y, z) -> (ax + by, cx + dy, det*z + ac*x(x-1)/2 + bc*x*y + bd*y(y-1)/2).
    """
    (a, b), (c, d) = lin
    det = a * d - b * c
    if abs(det) != 1:
        raise ValueError("linear part must have determinant +-1")
    x = MultiPoly.var(xvar(1, 1))
    y = MultiPoly.var(xvar(1, 2))
    z = MultiPoly.var(xvar(2, 1))
    half = Fraction(1, 2)
    top = (z * det + x * (x - 1) * (a * c * half) + x * y * (b * c)
           + y * (y - 1) * (b * d * half))
    return CoordinateMap(2, {(1, 1): x * a + y * b, (1, 2): x * c + y * d, (2, 1): top})


def verify_homomorphism(phi):
    """Check phi(g g') = phi(g) phi(g') as a polynomial identity in two symbolic elements."""
    g = UnipotentMatrix.symbolic(phi.k, 0)
    h = UnipotentMatrix.symbolic(phi.k, 1)
    lhs = phi(g * h)
    rhs_g = phi(g)
    values = {xvar(i, j): MultiPoly.var(xvar(i, j, 1)) for i, j in coordinates(phi.k)}
    rhs_h = UnipotentMatrix(phi.k, {ij: _as_multipoly(p.evaluate(values))
                                    for ij, p in phi.polys.items()})
    rhs = rhs_g * rhs_h
    return all(_as_multipoly(lhs.x[ij]) == _as_multipoly(rhs.x[ij]) for ij in lhs.x)


@dataclass(frozen=True)
class LinearParts:
    """Per-level linear maps A_1..A_k; A_i acts on the level-i coordinate vector."""

    mats: tuple

    def __getitem__(self, i):
        return self.mats[i - 1]

    def __len__(self):
        return len(self.mats)

    def __iter__(self):
        return iter(self.mats)


def _linear_block(phi, i):
    size = phi.k + 1 - i
    return Matrix([[phi.polys[(i, j)].coefficient([(xvar(i, jj), 1)]) for jj in range(1, size + 1)]
                   for j in range(1, size + 1)]).map(lambda q: int(q) if q.denominator == 1 else q)


def linear_parts(phi):
    mats = []
    for i in range(1, phi.k + 1):
        a = _linear_block(phi, i)
        if a.det() == 0:
            raise ValueError(f"level-{i} linear part is singular: map is not an automorphism")
        mats.append(a)
    return LinearParts(tuple(mats))


def remainder(phi, i, j, lin=None):
    """phi[i,j] minus its level-i linear part."""
    a = lin if lin is not None else _linear_block(phi, i)
    p = phi.polys[(i, j)]
    for jj in range(1, phi.k + 2 - i):
        p = p - MultiPoly.var(xvar(i, jj)) * a[j - 1, jj - 1]
    return p


@dataclass(frozen=True)
class RemainderCheck:
    i: int
    j: int
    remainder: MultiPoly
    lower_levels_only: bool
    degree: int
    bound: int

    @property
    def holds(self):
        return self.lower_levels_only and self.degree <= self.bound

    @property
    def tight(self):
        return self.degree == self.bound


def check_remainder_degrees(phi):
    """For each coordinate, split phi[i,j] = (linear in level i) + remainder and
    check that the remainder only uses levels < i and has weighted degree <= 2^(i-1).
    """
    report = []
    for i in range(1, phi.k + 1):
        lin = _linear_block(phi, i)
        for j in range(1, phi.k + 2 - i):
            f = remainder(phi, i, j, lin)
            lower = all(v[1] < i for v in f.variables())
            report.append(RemainderCheck(i, j, f, lower, level_weighted_degree(f), 2 ** (i - 1)))
    return report
