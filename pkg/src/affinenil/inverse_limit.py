"""Finite towers of affine systems linked by factor maps.

``levels[0]`` is the coarsest system; ``factor_maps[i]`` maps level i+1 onto
level i and must intertwine the dynamics.  An infinite inverse limit is
represented by its finite truncations; the metric sum_i 2^-i rho_i then has
tail at most 2^-depth.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

from . import nil_affine, torus
from .matrix import Matrix
from .nil_affine import NilAffineMap, as_nilpoint
from .nilgroup import UnipotentMatrix, coordinates, xvar
from .rational import circle_distance, frac
from .torus import TorusAffineMap, as_point


class TorusFactor:
    """x -> P x mod 1 for an integer m x d matrix P."""

    kind = "matrix"

    def __init__(self, rows):
        rows = tuple(tuple(int(v) for v in r) for r in rows)
        if not rows or len({len(r) for r in rows}) != 1:
            raise ValueError("factor matrix must be a non-empty rectangular integer array")
        self.rows = rows

    @classmethod
    def projection(cls, d, coords):
        """Keep the listed 1-based coordinates of T^d."""
        return cls([[int(c == j + 1) for j in range(d)] for c in coords])

    def __call__(self, x):
        return tuple(frac(sum(a * v for a, v in zip(r, x))) for r in self.rows)

    def is_lipschitz(self):
        return all(sum(abs(a) for a in r) <= 1 for r in self.rows)

    def is_surjective(self):
        gram = Matrix([[sum(a * b for a, b in zip(r, s)) for s in self.rows] for r in self.rows])
        return gram.det() != 0

    def intertwines(self, lower, upper):
        if not (isinstance(lower, TorusAffineMap) and isinstance(upper, TorusAffineMap)):
            return False, "matrix factor maps join two torus levels"
        if len(self.rows) != lower.dim or len(self.rows[0]) != upper.dim:
            return False, "factor matrix shape does not match the levels"
        P = self.rows
        A_hi, A_lo = upper.A.rows, lower.A.rows
        PA = [[sum(P[r][s] * A_hi[s][c] for s in range(upper.dim)) for c in range(upper.dim)]
              for r in range(lower.dim)]
        AP = [[sum(A_lo[r][s] * P[s][c] for s in range(lower.dim)) for c in range(upper.dim)]
              for r in range(lower.dim)]
        if PA != AP:
            return False, "linear parts do not intertwine (A_i P != P A_{i+1})"
        if self(upper.alpha) != lower.alpha:
            return False, "translations do not match modulo 1"
        return True, ""

    def to_json(self):
        return {"matrix": [list(r) for r in self.rows]}


class NilBlock:
    """UT(k+1) -> UT(k'+1): the principal block on matrix indices first..last (1-based)."""

    kind = "project"

    def __init__(self, first, last):
        if not 1 <= first < last:
            raise ValueError("block must span at least two matrix indices")
        self.first, self.last = first, last
        self.k = last - first

    def _big(self, i, j):
        return (i, self.first - 1 + j)

    def __call__(self, g):
        if g.k + 1 < self.last:
            raise ValueError("block exceeds the matrix size")
        return UnipotentMatrix(self.k, {(i, j): g.x[self._big(i, j)] for i, j in coordinates(self.k)})

    def is_lipschitz(self):
        return True

    def is_surjective(self):
        return True

    def intertwines(self, lower, upper):
        if not (isinstance(lower, NilAffineMap) and isinstance(upper, NilAffineMap)):
            return False, "block projections join two nil levels"
        if lower.k != self.k or upper.k + 1 < self.last:
            return False, "block size does not match the levels"
        inside = {self._big(i, j): (i, j) for i, j in coordinates(self.k)}
        for (i, j), (bi, bj) in ((ij, self._big(*ij)) for ij in coordinates(self.k)):
            p = upper.phi.polys[(bi, bj)]
            if any((v[1], v[2]) not in inside for v in p.variables()):
                return False, f"coordinate {i},{j} depends on coordinates outside the block"
            renamed = p.rename(lambda v: xvar(*inside[(v[1], v[2])]))
            if renamed != lower.phi.polys[(i, j)]:
                return False, f"automorphisms disagree at coordinate {i},{j}"
        if self(upper.g0) != lower.g0:
            return False, "translations g0 do not match on the block"
        return True, ""

    def to_json(self):
        return {"kind": "project", "block": [self.first, self.last]}


class Abelianize:
    """UT(k+1) -> T^k: keep the level-1 coordinates."""

    kind = "abelianize"

    def __call__(self, g):
        return tuple(frac(v) for v in g.level(1))

    def is_lipschitz(self):
        return True

    def is_surjective(self):
        return True

    def intertwines(self, lower, upper):
        if not (isinstance(lower, TorusAffineMap) and isinstance(upper, NilAffineMap)):
            return False, "abelianization maps a nil level onto a torus level"
        if lower.dim != upper.k:
            return False, "torus dimension must equal k"
        for j in range(1, upper.k + 1):
            p = upper.phi.polys[(1, j)]
            expect = {((xvar(1, jj), 1),): Fraction(lower.A[j - 1, jj - 1])
                      for jj in range(1, upper.k + 1) if lower.A[j - 1, jj - 1] != 0}
            if p.terms != expect:
                return False, f"level-1 coordinate {j} is not the torus linear map"
        if self(upper.g0) != lower.alpha:
            return False, "translations do not match modulo 1"
        return True, ""

    def to_json(self):
        return {"kind": "abelianize"}


@dataclass(frozen=True)
class Tower:
    levels: tuple
    factor_maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "factor_maps", tuple(self.factor_maps))
        if len(self.factor_maps) != len(self.levels) - 1:
            raise ValueError("a tower with L levels needs L-1 factor maps")

    def to_json(self):
        return {"levels": [lv.to_json() for lv in self.levels],
                "factor_maps": [f.to_json() for f in self.factor_maps]}


@dataclass(frozen=True)
class TowerValidation:
    ok: bool
    level: int = -1
    reason: str = ""

    def __bool__(self):
        return self.ok


def _apply(system, x):
    if isinstance(system, TorusAffineMap):
        return torus.apply(system, x)
    return system.apply(x)


def _random_point(system, rng):
    if isinstance(system, TorusAffineMap):
        return tuple(Fraction(rng.randrange(60), 60) for _ in range(system.dim))
    return UnipotentMatrix(system.k, {ij: Fraction(rng.randrange(60), 60)
                                      for ij in coordinates(system.k)})


def validate_tower(t, spot_checks=5, seed=0):
    """Exact intertwining check per factor map, then random spot checks.

    Returns a falsy TowerValidation naming the first failing factor map.
    """
    rng = random.Random(seed)
    for i, (f, lower, upper) in enumerate(zip(t.factor_maps, t.levels, t.levels[1:])):
        if not f.is_surjective():
            return TowerValidation(False, i, "factor map is not surjective")
        ok, why = f.intertwines(lower, upper)
        if not ok:
            return TowerValidation(False, i, why)
        for _ in range(spot_checks):
            x = _random_point(upper, rng)
            if f(_apply(upper, x)) != _apply(lower, f(x)):
                return TowerValidation(False, i, "spot check failed")
    return TowerValidation(True)


def tower_point(t, top):
    """Compatible point determined by its finest coordinate."""
    top = as_point(top) if isinstance(t.levels[-1], TorusAffineMap) else as_nilpoint(top)
    pts = [top]
    for f in reversed(t.factor_maps):
        pts.append(f(pts[-1]))
    return tuple(reversed(pts))


def is_compatible(t, point):
    return all(f(point[i + 1]) == point[i] for i, f in enumerate(t.factor_maps))


def tower_step(t, point):
    return tuple(_apply(s, x) for s, x in zip(t.levels, point))


def level_distance(x, y):
    """max coordinatewise circle distance on a torus point or fundamental-domain rep."""
    if isinstance(x, UnipotentMatrix):
        x, y = list(x.x.values()), list(y.x.values())
    return max((circle_distance(a, b) for a, b in zip(x, y)), default=Fraction(0))


def tower_metric(x, y, depth=None):
    """sum_{i=1}^{depth} 2^-i rho_i(x_i, y_i) with level i = 1 the coarsest."""
    depth = len(x) if depth is None else min(depth, len(x))
    return sum((Fraction(1, 2 ** i) * level_distance(x[i - 1], y[i - 1]) for i in range(1, depth + 1)),
               Fraction(0))


def return_times_nested(t, point, eps, window):
    """Per-level return-time sets for the same eps; finer levels return less often."""
    for i, f in enumerate(t.factor_maps):
        if not f.is_lipschitz():
            raise ValueError(f"factor map {i} is not 1-Lipschitz; nesting is not guaranteed")
    out = []
    for system, x in zip(t.levels, point):
        if isinstance(system, TorusAffineMap):
            out.append(torus.return_times_direct(system, x, eps, window))
        else:
            out.append(nil_affine.return_times_direct(system, x, eps, window))
    return out
