"""JSON system descriptors: torus systems, nil systems and towers.

    {"type": "torus", "A": [[1, 0], [1, 1]], "alpha": ["1/5", "0"], "point": ["0", "0"]}
    {"type": "nil", "k": 2, "g0": {"1,1": "1/2", ...},
     "phi": {"kind": "identity"}
          | {"kind": "inner", "u": {"1,1": 1, ...}}        (unipotent u)
          | {"kind": "inner", "matrix": [[1, 0, 0], ...]}   (upper-triangular u)
          | {"kind": "heisenberg", "linear": [[0, -1], [1, 0]]}
          | {"kind": "map", "coords": {"2,1": [{"coef": "1", "mono": {"2,1": 1}}, ...]}}
          | {"kind": "compose", "maps": [phi_1, phi_2, ...]}   (phi_1 o phi_2 o ...)
     "point": {"1,1": "1/4", ...}}
    {"type": "tower", "levels": [system, ...],
     "factor_maps": [{"matrix": [[1, 0]]} | {"kind": "project", "coords": [1]}
                     | {"kind": "project", "block": [1, 2]} | {"kind": "abelianize"}]}

Errors carry a JSON path (and line/column for syntax errors).
"""

import json
from dataclasses import dataclass

from .inverse_limit import Abelianize, NilBlock, TorusFactor, Tower
from .matrix import Matrix
from .nil_affine import NilAffineMap, as_nilpoint
from .nilgroup import CoordinateMap, UnipotentMatrix, heisenberg_automorphism, inner_automorphism
from .rational import to_fraction
from .torus import TorusAffineMap, as_point


class DescriptorError(ValueError):
    def __init__(self, message, path="$"):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class Descriptor:
    kind: str
    system: object
    point: object = None


def loads(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})") from None
    return parse(data)


def load(path):
    with open(path) as fh:
        return loads(fh.read())


def _need(data, key, path):
    if not isinstance(data, dict):
        raise DescriptorError("expected an object", path)
    if key not in data:
        raise DescriptorError(f"missing field {key!r}", path)
    return data[key]


def _wrap(path, fn, *args):
    try:
        return fn(*args)
    except DescriptorError:
        raise
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise DescriptorError(str(exc), path) from None


def parse(data, path="$"):
    kind = data.get("type") if isinstance(data, dict) else None
    if kind is None and isinstance(data, dict) and "levels" in data:
        kind = "tower"
    if kind == "torus":
        system = parse_torus(data, path)
        point = data.get("point")
        point = _wrap(f"{path}.point", as_point, point) if point is not None else None
        if point is not None and len(point) != system.dim:
            raise DescriptorError("point dimension does not match A", f"{path}.point")
        return Descriptor("torus", system, point)
    if kind == "nil":
        system = parse_nil(data, path)
        point = data.get("point")
        if point is not None:
            point = _wrap(f"{path}.point", lambda p: as_nilpoint(UnipotentMatrix.parse(system.k, p)), point)
        return Descriptor("nil", system, point)
    if kind == "tower":
        return Descriptor("tower", parse_tower(data, path))
    raise DescriptorError(f"unknown or missing system type {kind!r}", f"{path}.type")


def parse_torus(data, path="$"):
    A = _need(data, "A", path)
    alpha = _need(data, "alpha", path)
    if not isinstance(A, list) or not all(isinstance(r, list) for r in A):
        raise DescriptorError("A must be an array of arrays", f"{path}.A")
    for r, row in enumerate(A):
        for c, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, int):
                raise DescriptorError("matrix entries must be integers", f"{path}.A[{r}][{c}]")
    for j, a in enumerate(alpha):
        _wrap(f"{path}.alpha[{j}]", to_fraction, a)
    A = _wrap(f"{path}.A", Matrix, A)
    return _wrap(path, lambda: TorusAffineMap(A, alpha))


def parse_phi(data, k, path):
    kind = _need(data, "kind", path)
    if kind == "identity":
        return CoordinateMap.identity(k)
    if kind == "inner":
        if "u" in data:
            u = data["u"]
            if isinstance(u, dict):
                u = _wrap(f"{path}.u", UnipotentMatrix.parse, k, u)
            return _wrap(f"{path}.u", inner_automorphism, u, k)
        return _wrap(f"{path}.matrix", inner_automorphism, _need(data, "matrix", path), k)
    if kind == "heisenberg":
        if k != 2:
            raise DescriptorError("heisenberg automorphisms need k = 2", f"{path}.kind")
        return _wrap(f"{path}.linear", heisenberg_automorphism, _need(data, "linear", path))
    if kind == "map":
        return _wrap(f"{path}.coords", CoordinateMap.parse, k, _need(data, "coords", path))
    if kind == "compose":
        maps = _need(data, "maps", path)
        out = CoordinateMap.identity(k)
        for i, m in enumerate(maps):
            out = out.compose(parse_phi(m, k, f"{path}.maps[{i}]"))
        return out
    raise DescriptorError(f"unknown automorphism kind {kind!r}", f"{path}.kind")


def parse_nil(data, path="$"):
    k = _need(data, "k", path)
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise DescriptorError("k must be a positive integer", f"{path}.k")
    g0 = _wrap(f"{path}.g0", UnipotentMatrix.parse, k, data.get("g0", {}))
    phi = parse_phi(data.get("phi", {"kind": "identity"}), k, f"{path}.phi")
    return _wrap(path, NilAffineMap, g0, phi)


def parse_factor(data, lower, upper, path):
    if "matrix" in data:
        return _wrap(f"{path}.matrix", TorusFactor, data["matrix"])
    kind = _need(data, "kind", path)
    if kind == "abelianize":
        return Abelianize()
    if kind == "project":
        if "block" in data:
            first, last = data["block"]
            return _wrap(f"{path}.block", NilBlock, first, last)
        coords = _need(data, "coords", path)
        if isinstance(upper, TorusAffineMap):
            return _wrap(f"{path}.coords", TorusFactor.projection, upper.dim, coords)
        if len(coords) == 2:
            return _wrap(f"{path}.coords", NilBlock, *coords)
        raise DescriptorError("nil projections take a [first, last] block", f"{path}.coords")
    raise DescriptorError(f"unknown factor map kind {kind!r}", f"{path}.kind")


def parse_tower(data, path="$"):
    levels_data = _need(data, "levels", path)
    levels = []
    for i, lv in enumerate(levels_data):
        d = parse(lv, f"{path}.levels[{i}]")
        if d.kind == "tower":
            raise DescriptorError("towers cannot be nested", f"{path}.levels[{i}]")
        levels.append(d.system)
    fm_data = data.get("factor_maps", [])
    if len(fm_data) != len(levels) - 1:
        raise DescriptorError("need exactly one factor map per adjacent pair of levels", f"{path}.factor_maps")
    maps = [parse_factor(f, levels[i], levels[i + 1], f"{path}.factor_maps[{i}]")
            for i, f in enumerate(fm_data)]
    return Tower(levels, maps)
