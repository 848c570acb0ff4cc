"""Deterministic random corpora shared by the unit and acceptance tests."""

import random
from fractions import Fraction

from affinenil.inverse_limit import Abelianize, NilBlock, TorusFactor, Tower
from affinenil.matrix import Matrix
from affinenil.nil_affine import NilAffineMap
from affinenil.nilgroup import (
    CoordinateMap,
    UnipotentMatrix,
    coordinates,
    heisenberg_automorphism,
    inner_automorphism,
)
from affinenil.torus import TorusAffineMap

# zero-entropy building blocks: finite order and unipotent
BLOCKS = {
    1: [[[1]], [[-1]]],
    2: [
        [[0, -1], [1, 0]],   # order 4
        [[0, -1], [1, -1]],  # order 3
        [[1, -1], [1, 0]],   # order 6
        [[1, 1], [0, 1]],    # unipotent
        [[-1, 1], [0, -1]],  # -(unipotent)
        [[0, 1], [1, 0]],    # order 2
    ],
}


def rand_fraction(rng, max_den=12):
    q = rng.randint(1, max_den)
    return Fraction(rng.randrange(q), q)


def block_diag(blocks):
    d = sum(len(b) for b in blocks)
    out = [[0] * d for _ in range(d)]
    at = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[at + i][at + j] = v
        at += len(b)
    return Matrix(out)


def random_unimodular(rng, d, shears=2):
    m = Matrix.identity(d)
    for _ in range(shears):
        if d < 2:
            break
        i, j = rng.sample(range(d), 2)
        e = [[int(r == c) for c in range(d)] for r in range(d)]
        e[i][j] = rng.choice([-1, 1])
        m = m @ Matrix(e)
    return m


def random_zero_entropy_matrix(rng, d):
    """P B P^-1 with B block diagonal in finite-order / unipotent blocks,
    plus an occasional strictly lower triangular perturbation (still unipotent)."""
    blocks = []
    left = d
    while left:
        size = 2 if left >= 2 and rng.random() < 0.6 else 1
        blocks.append(rng.choice(BLOCKS[size]))
        left -= size
    B = block_diag(blocks)
    if all(len(b) == 1 and b[0][0] == 1 for b in blocks) and d > 1:
        rows = B.tolist()
        for i in range(1, d):
            for j in range(i):
                rows[i][j] = rng.randint(-2, 2)
        B = Matrix(rows)
    P = random_unimodular(rng, d, rng.randint(0, 3))
    return (P @ B @ P.inverse()).map(int)


def torus_corpus(count=200, seed=1, max_dim=4, bound=3, max_den=7):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = rng.randint(1, max_dim)
        A = random_zero_entropy_matrix(rng, d)
        if max(abs(v) for row in A.tolist() for v in row) > bound:
            continue
        alpha = [rand_fraction(rng, max_den) for _ in range(d)]
        point = tuple(rand_fraction(rng, max_den) for _ in range(d))
        out.append((TorusAffineMap(A, alpha), point))
    return out


def kronecker_corpus(count=500, seed=2, bound=5):
    """Uniform random integer matrices plus constructed zero-entropy ones,
    all with entries in [-bound, bound] and dimension <= 4."""
    rng = random.Random(seed)
    out = []
    while len(out) < count // 2:
        d = rng.randint(1, 4)
        out.append(Matrix([[rng.randint(-bound, bound) for _ in range(d)] for _ in range(d)]))
    while len(out) < count:
        d = rng.randint(1, 4)
        A = random_zero_entropy_matrix(rng, d)
        if rng.random() < 0.2:
            # singular zero-entropy: nilpotent part
            A = Matrix([[0 if r <= c else rng.randint(-2, 2) for c in range(d)] for r in range(d)])
        if max(abs(v) for row in A.tolist() for v in row) <= bound:
            out.append(A)
    return out


def random_unipotent(rng, k, lo=-2, hi=2):
    return UnipotentMatrix(k, {ij: Fraction(rng.randint(lo, hi)) for ij in coordinates(k)})


def random_signed_upper(rng, k, diagonal_only=False):
    """Upper-triangular integer matrix with +-1 diagonal; conjugation by it
    preserves UT(k+1, Z)."""
    n = k + 1
    rows = [[0] * n for _ in range(n)]
    for r in range(n):
        rows[r][r] = rng.choice([-1, 1])
        for c in range(r + 1, n):
            rows[r][c] = 0 if diagonal_only else rng.randint(-2, 2)
    return Matrix(rows)


def _random_conjugator(rng, k):
    roll = rng.random()
    if roll < 0.3:
        return random_signed_upper(rng, k, diagonal_only=True)
    if roll < 0.5:
        return random_signed_upper(rng, k)
    return random_unipotent(rng, k)


def random_inner_composition(rng, k, factors=None):
    factors = rng.randint(1, 4) if factors is None else factors
    phi = CoordinateMap.identity(k)
    for _ in range(factors):
        u = _random_conjugator(rng, k)
        phi = phi.compose(inner_automorphism(u, k))
    return phi


HEIS_LINEAR = [
    [[1, 0], [0, 1]],
    [[0, -1], [1, 0]],
    [[0, -1], [1, -1]],
    [[1, -1], [1, 0]],
    [[1, 1], [0, 1]],
    [[1, 0], [2, 1]],
    [[-1, 0], [0, -1]],
    [[0, 1], [1, 0]],
]


def random_nil_map(rng, k, max_den=8, linear=None):
    if linear is not None or (k == 2 and rng.random() < 0.4):
        phi = heisenberg_automorphism(linear or rng.choice(HEIS_LINEAR))
        if rng.random() < 0.5:
            phi = phi.compose(random_inner_composition(rng, k, 1))
    elif rng.random() < 0.15:
        phi = CoordinateMap.identity(k)
    else:
        phi = random_inner_composition(rng, k)
    g0 = UnipotentMatrix(k, {ij: rand_fraction(rng, max_den) for ij in coordinates(k)})
    return NilAffineMap(g0, phi)


def random_nil_point(rng, k, max_den=8):
    return UnipotentMatrix(k, {ij: rand_fraction(rng, max_den) for ij in coordinates(k)})


def nil_corpus(count=50, seed=3, max_k=3):
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        k = 1 + idx % max_k
        linear = None
        if k == 2 and idx // max_k < len(HEIS_LINEAR):
            linear = HEIS_LINEAR[idx // max_k]
        out.append((random_nil_map(rng, k, linear=linear), random_nil_point(rng, k)))
    return out


def automorphism_sweep(count=100, seed=4, max_k=4):
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        k = 1 + idx % max_k
        out.append(random_inner_composition(rng, k, rng.randint(1, 4)))
    return out


# -- towers ----------------------------------------------------------------

def _skew_chain(rng, depth):
    """Lower-unitriangular skew product on T^depth; each prefix is a factor."""
    rows = [[0] * depth for _ in range(depth)]
    for i in range(depth):
        rows[i][i] = 1
        for j in range(i):
            rows[i][j] = rng.randint(-1, 2)
    if depth > 1 and rows[1][0] == 0:
        rows[1][0] = 1
    alpha = [rand_fraction(rng, 40) for _ in range(depth)]
    return rows, alpha


def projection_tower(rng, depth):
    rows, alpha = _skew_chain(rng, depth)
    levels = [TorusAffineMap([r[:d] for r in rows[:d]], alpha[:d]) for d in range(1, depth + 1)]
    maps = [TorusFactor.projection(d + 1, range(1, d + 1)) for d in range(1, depth)]
    return Tower(levels, maps)


def nil_projection_tower(rng, k):
    """T^k <- UT(k+1) via level-1 coordinates, or UT(k) <- UT(k+1) via a corner block."""
    g0 = UnipotentMatrix(k, {ij: rand_fraction(rng, 40) for ij in coordinates(k)})
    top = NilAffineMap(g0, CoordinateMap.identity(k))
    torus_level = TorusAffineMap(Matrix.identity(k), g0.level(1))
    if k >= 2 and rng.random() < 0.5:
        block = NilBlock(1, k)
        mid = NilAffineMap(block(g0), CoordinateMap.identity(k - 1))
        low = TorusAffineMap(Matrix.identity(k - 1), block(g0).level(1))
        return Tower([low, mid, top], [Abelianize(), block])
    return Tower([torus_level, top], [Abelianize()])


def tower_corpus(count=10, seed=5):
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        if idx % 2 == 0:
            out.append(projection_tower(rng, rng.randint(2, 4)))
        else:
            out.append(nil_projection_tower(rng, rng.randint(2, 3)))
    return out
