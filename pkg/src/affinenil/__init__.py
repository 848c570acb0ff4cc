"""Exact zero-entropy tests and polynomial orbit forms for affine maps on
tori and on the nilmanifolds UT(k+1, R)/UT(k+1, Z)."""

from .exact_algebra import (
    char_poly,
    eigen_spectrum,
    entropy,
    faulhaber_sum,
    is_unipotent,
    is_zero_entropy,
    unipotency_order,
    unipotent_power_symbolic,
)
from .gp import GPExpr, gp_degree
from .inverse_limit import (
    Abelianize,
    NilBlock,
    TorusFactor,
    Tower,
    return_times_nested,
    tower_metric,
    tower_point,
    validate_tower,
)
from .matrix import Matrix
from .nil_affine import GPOrbit, NilAffineMap, gp_degree_bounds, gp_orbit, residue_decomposition
from .nilgroup import (
    CoordinateMap,
    UnipotentMatrix,
    check_remainder_degrees,
    heisenberg_automorphism,
    inner_automorphism,
    level_weighted_degree,
    linear_parts,
    reduce_mod_lattice,
    verify_homomorphism,
)
from .poly import UniPoly
from .torus import (
    PolynomialOrbit,
    ReturnTimeSet,
    TorusAffineMap,
    entropy_estimate_separated,
    eval_orbit,
    polynomial_orbit,
    return_times_direct,
    return_times_symbolic,
)

__version__ = "0.1.0"
