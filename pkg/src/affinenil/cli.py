"""Command-line front end.

Reads a system descriptor (file or stdin), runs one analysis and prints a
JSON report {command, inputs, results, verdicts, timing}.  Exit codes:
0 ok, 1 validation error, 2 verification mismatch.
"""

import argparse
import csv
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import nil_affine, torus
from .descriptors import DescriptorError, loads
from .exact_algebra import RootFindingError, entropy, is_zero_entropy, unipotency_order
from .inverse_limit import is_compatible, return_times_nested, tower_point, tower_step, validate_tower
from .nil_affine import as_nilpoint, gp_degree_bounds, gp_orbit
from .nilgroup import UnipotentMatrix, check_remainder_degrees, reduce_mod_lattice
from .rational import fmt
from .torus import TorusAffineMap, as_point

EXIT_OK, EXIT_INVALID, EXIT_MISMATCH = 0, 1, 2
DEFAULT_EPS = ("1/4", "1/10", "1/100")


class ValidationError(ValueError):
    pass


def _positive_entropy_error():
    return ValidationError("positive entropy: polynomial orbits require every linear part to have "
                           "all eigenvalues roots of unity")


# -- points -----------------------------------------------------------------

def _parse_point(text, desc):
    system = desc.system
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        data = [s.strip() for s in text.split(",")]
    try:
        if isinstance(system, TorusAffineMap):
            pt = as_point(data)
            if len(pt) != system.dim:
                raise ValueError(f"point has {len(pt)} coordinates, system is on T^{system.dim}")
            return pt
        if not isinstance(data, dict):
            raise ValueError('nil points are entry maps such as {"1,1": "1/4"}')
        return as_nilpoint(UnipotentMatrix.parse(system.k, data))
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"--point: {exc}") from None


def _start_point(args, desc):
    if args.point is not None:
        return _parse_point(args.point, desc)
    if desc.point is not None:
        return desc.point
    if isinstance(desc.system, TorusAffineMap):
        return tuple(Fraction(0) for _ in range(desc.system.dim))
    return UnipotentMatrix.identity(desc.system.k)


def _point_json(x):
    if isinstance(x, UnipotentMatrix):
        return x.to_json()
    return [fmt(v) for v in x]


def _point_row(x):
    if isinstance(x, UnipotentMatrix):
        return [fmt(x.x[ij]) for ij in sorted(x.x)]
    return [fmt(v) for v in x]


def _orbit(system, x, count):
    if isinstance(system, TorusAffineMap):
        return torus.orbit(system, x, count)
    return system.orbit(x, count)


def _eps_list(args):
    raw = args.eps if args.eps else list(DEFAULT_EPS)
    out = []
    for e in raw:
        try:
            out.append(torus._check_eps(e))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"--eps {e}: {exc}") from None
    return out


def _require(desc, *kinds):
    if desc.kind not in kinds:
        raise ValidationError(f"this command needs a {' or '.join(kinds)} system, got {desc.kind}")


def _linear_matrices(system):
    if isinstance(system, TorusAffineMap):
        return [system.A]
    return list(system.linear)


def _order(system):
    try:
        if isinstance(system, TorusAffineMap):
            return unipotency_order(system.A)
        return system.b
    except ValueError:
        raise _positive_entropy_error() from None


# -- commands ---------------------------------------------------------------

def cmd_entropy(args, desc):
    systems = desc.system.levels if desc.kind == "tower" else [desc.system]
    scale = 1 / math.log(2) if args.bits else 1.0
    per_level = []
    for s in systems:
        try:
            # the entropy of an affine map on UT(k+1)/UT(k+1, Z) is the sum over
            # the graded torus pieces, whose linear maps are the linear parts
            per_level.append([entropy(a) * scale for a in _linear_matrices(s)])
        except RootFindingError as exc:
            raise ValidationError(str(exc)) from None
    results = {"unit": "bits" if args.bits else "nats"}
    if desc.kind == "torus":
        results["entropy"] = per_level[0][0]
    elif desc.kind == "nil":
        results["entropy"] = sum(per_level[0])
        results["linear_part_entropies"] = per_level[0]
    else:
        results["level_entropies"] = [sum(v) for v in per_level]
    return results, {}


def cmd_check_zero_entropy(args, desc):
    systems = desc.system.levels if desc.kind == "tower" else [desc.system]
    flags = [all(is_zero_entropy(a) for a in _linear_matrices(s)) for s in systems]
    results = {"zero_entropy": all(flags)}
    if desc.kind == "nil":
        results["linear_parts"] = [is_zero_entropy(a) for a in desc.system.linear]
    if desc.kind == "tower":
        results["levels"] = flags
    return results, {}


def cmd_unipotency_order(args, desc):
    _require(desc, "torus", "nil")
    results = {"b": _order(desc.system)}
    if desc.kind == "nil":
        results["linear_part_orders"] = [unipotency_order(a) for a in desc.system.linear]
    return results, {}


def cmd_orbit(args, desc):
    _require(desc, "torus", "nil")
    if args.n < 0:
        raise ValidationError("--n must be >= 0")
    x = _start_point(args, desc)
    pts = _orbit(desc.system, x, args.n)
    if args.dump_orbit:
        with open(args.dump_orbit, "w", newline="") as fh:
            w = csv.writer(fh)
            if isinstance(pts[0], UnipotentMatrix):
                w.writerow(["n"] + [f"x{i}{j}" for i, j in sorted(pts[0].x)])
            else:
                w.writerow(["n"] + [f"x{j}" for j in range(1, len(pts[0]) + 1)])
            for n, p in enumerate(pts):
                w.writerow([n] + _point_row(p))
    return {"orbit": [_point_json(p) for p in pts]}, {}


def cmd_poly_orbit(args, desc):
    _require(desc, "torus")
    m = desc.system
    if not is_zero_entropy(m.A):
        raise _positive_entropy_error()
    try:
        orb = torus.polynomial_orbit(m, _start_point(args, desc))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    results = orb.to_json()
    results["max_degree"] = orb.max_degree()
    direct = torus.orbit(m, orb.base, args.check)
    ok = all(torus.eval_orbit(orb, n) == p for n, p in enumerate(direct))
    return results, {"degree_within_dimension": orb.max_degree() <= m.dim,
                     f"matches_direct_n_le_{args.check}": ok}


def _nil_zero_entropy(nmap):
    if not nmap.is_zero_entropy():
        raise _positive_entropy_error()


def cmd_gp_orbit(args, desc):
    _require(desc, "nil")
    nmap = desc.system
    _nil_zero_entropy(nmap)
    orb = gp_orbit(nmap, _start_point(args, desc))
    bounds = gp_degree_bounds(nmap)
    degrees = orb.degrees()
    results = orb.to_json()
    results["variable"] = "n stands for t in tau^(t*b + r)"
    results["degrees"] = [{f"{i},{j}": d for (i, j), d in sorted(row.items())} for row in degrees]
    results["degree_bounds"] = [{f"{i},{j}": d for (i, j), d in sorted(row.items())} for row in bounds]
    direct = nmap.orbit(orb.base, args.check)
    ok = all(orb.eval(n) == p for n, p in enumerate(direct))
    within = all(degrees[r][ij] <= bounds[r][ij] for r in range(orb.b) for ij in degrees[r])
    return results, {f"matches_direct_n_le_{args.check}": ok, "degree_within_bound": within}


def _return_times(desc, x, eps, window, method):
    m = desc.system
    out = {}
    if method in ("direct", "both"):
        if desc.kind == "torus":
            out["direct"] = torus.return_times_direct(m, x, eps, window)
        else:
            out["direct"] = nil_affine.return_times_direct(m, x, eps, window)
    if method in ("symbolic", "both"):
        if desc.kind == "torus":
            if not is_zero_entropy(m.A):
                raise _positive_entropy_error()
            try:
                orb = torus.polynomial_orbit(m, x)
            except ValueError as exc:
                raise ValidationError(str(exc)) from None
            out["symbolic"] = torus.return_times_symbolic(orb, eps, window)
        else:
            _nil_zero_entropy(m)
            out["symbolic"] = nil_affine.return_times_gp(gp_orbit(m, x), eps, window)
    return out


def cmd_return_times(args, desc):
    _require(desc, "torus", "nil")
    if args.window < 0:
        raise ValidationError("--window must be >= 0")
    x = _start_point(args, desc)
    eps_list = _eps_list(args)
    per_eps = []
    for eps in eps_list:
        sets = _return_times(desc, x, eps, args.window, args.method)
        first = next(iter(sets.values()))
        entry = {"eps": fmt(eps), "window": args.window, "times": list(first.times)}
        if args.method == "both":
            entry["match"] = sets["direct"] == sets["symbolic"]
        per_eps.append(entry)
    verdicts = {}
    if args.method == "both":
        verdicts["match"] = all(e["match"] for e in per_eps)
    if len(per_eps) == 1:
        return per_eps[0], verdicts
    return {"sets": per_eps}, verdicts


def _float_zero_entropy(a):
    lam = np.linalg.eigvals(np.array(a.tolist(), dtype=float)) if a.dim else np.array([])
    return bool(np.all(np.abs(lam) <= 1 + 1e-6))


def _verify_torus(args, desc, x):
    m = desc.system
    results, verdicts = {}, {}
    zero = is_zero_entropy(m.A)
    results["zero_entropy"] = zero
    verdicts["kronecker_matches_float_eigenvalues"] = zero == _float_zero_entropy(m.A)
    try:
        verdicts["entropy_zero_iff_zero_entropy"] = (entropy(m.A) == 0.0) == zero
    except RootFindingError:
        verdicts["entropy_zero_iff_zero_entropy"] = False
    if not zero or abs(m.A.det()) != 1:
        results["skipped"] = "polynomial orbit checks need zero entropy and det(A) = +-1"
        return results, verdicts
    orb = torus.polynomial_orbit(m, x)
    results["b"] = orb.b
    results["max_degree"] = orb.max_degree()
    verdicts["degree_within_dimension"] = orb.max_degree() <= m.dim
    direct = torus.orbit(m, orb.base, args.n)
    verdicts["poly_orbit_matches_direct"] = all(torus.eval_orbit(orb, n) == p for n, p in enumerate(direct))
    verdicts["return_times_match"] = all(
        torus.return_times_direct(m, x, eps, args.window) == torus.return_times_symbolic(orb, eps, args.window)
        for eps in _eps_list(args))
    return results, verdicts


def _verify_nil(args, desc, x):
    nmap = desc.system
    results, verdicts = {}, {}
    # construction already checked the homomorphism identity and the lattice
    verdicts["homomorphism"] = True
    verdicts["preserves_lattice"] = True
    checks = check_remainder_degrees(nmap.phi)
    verdicts["remainder_degrees"] = all(c.holds for c in checks)
    zero = nmap.is_zero_entropy()
    results["zero_entropy"] = zero
    verdicts["kronecker_matches_float_eigenvalues"] = all(
        is_zero_entropy(a) == _float_zero_entropy(a) for a in nmap.linear)
    if not zero:
        results["skipped"] = "orbit checks need zero entropy"
        return results, verdicts
    results["b"] = nmap.b
    orb = gp_orbit(nmap, x)
    direct = nmap.orbit(orb.base, args.n)
    verdicts["gp_orbit_matches_direct"] = all(orb.eval(n) == p for n, p in enumerate(direct))
    # evaluate the polynomial coset first, then reduce: must agree with the symbolic reduction
    reduced = []
    for n in range(args.n + 1):
        t, r = divmod(n, orb.b)
        reduced.append(reduce_mod_lattice(orb.polys[r].map(lambda p: p(t)))[0])
    verdicts["reduce_then_evaluate_commutes"] = all(orb.eval(n) == g for n, g in enumerate(reduced))
    bounds = gp_degree_bounds(nmap)
    degrees = orb.degrees()
    verdicts["gp_degree_within_bound"] = all(degrees[r][ij] <= bounds[r][ij]
                                             for r in range(orb.b) for ij in degrees[r])
    verdicts["return_times_match"] = all(
        nil_affine.return_times_direct(nmap, x, eps, args.window) == nil_affine.return_times_gp(orb, eps, args.window)
        for eps in _eps_list(args))
    samples = max(args.n // nmap.b, 1)
    subs = nil_affine.residue_decomposition(nmap, x, samples)
    full = nmap.orbit(x, nmap.b * samples)
    verdicts["residue_decomposition_partitions_orbit"] = all(
        subs[r - 1][m] == full[r + m * nmap.b] for r in range(1, nmap.b + 1) for m in range(samples)
        if r + m * nmap.b <= nmap.b * samples)
    return results, verdicts


def _verify_tower(args, desc):
    t = desc.system
    results, verdicts = {}, {}
    check = validate_tower(t)
    verdicts["valid"] = check.ok
    if not check.ok:
        results["failure"] = {"factor_map": check.level, "reason": check.reason}
        return results, verdicts
    pts = _tower_start(args, desc)
    cur = pts
    ok = True
    for _ in range(min(args.n, 200)):
        cur = tower_step(t, cur)
        ok = ok and is_compatible(t, cur)
    verdicts["compatibility_preserved"] = ok
    nested = True
    for eps in _eps_list(args):
        sets = return_times_nested(t, pts, eps, args.window)
        nested = nested and all(b.issubset(a) for a, b in zip(sets, sets[1:]))
    verdicts["nested"] = nested
    return results, verdicts


def cmd_verify(args, desc):
    if desc.kind == "tower":
        return _verify_tower(args, desc)
    x = _start_point(args, desc)
    if desc.kind == "torus":
        return _verify_torus(args, desc, x)
    return _verify_nil(args, desc, x)


def _tower_start(args, desc):
    t = desc.system
    top_desc = type(desc)("torus" if isinstance(t.levels[-1], TorusAffineMap) else "nil", t.levels[-1])
    return tower_point(t, _start_point(args, top_desc))


def cmd_tower(args, desc):
    _require(desc, "tower")
    t = desc.system
    check = validate_tower(t)
    if not check.ok:
        raise ValidationError(f"factor map {check.level}: {check.reason}")
    pts = _tower_start(args, desc)
    per_eps = []
    nested = True
    for eps in _eps_list(args):
        try:
            sets = return_times_nested(t, pts, eps, args.window)
        except ValueError as exc:
            raise ValidationError(str(exc)) from None
        ok = all(b.issubset(a) for a, b in zip(sets, sets[1:]))
        nested = nested and ok
        per_eps.append({"eps": fmt(eps), "levels": [s.to_json() for s in sets], "nested": ok})
    results = {"point": [_point_json(p) for p in pts], "return_times": per_eps}
    return results, {"valid": True, "nested": nested}


COMMANDS = {
    "entropy": cmd_entropy,
    "check-zero-entropy": cmd_check_zero_entropy,
    "unipotency-order": cmd_unipotency_order,
    "orbit": cmd_orbit,
    "poly-orbit": cmd_poly_orbit,
    "gp-orbit": cmd_gp_orbit,
    "return-times": cmd_return_times,
    "verify": cmd_verify,
    "tower": cmd_tower,
}


# -- argument parsing and output ---------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="affinenil", description="Exact analysis of affine maps on tori and nilmanifolds.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", nargs="?", default="-", help="system JSON file ('-' or omitted: stdin)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--point", help='start point: "1/4,0" for tori, {"1,1": "1/4"} for nil systems')
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("entropy", parents=[common], help="topological entropy of the linear part(s)")
    s.add_argument("--bits", action="store_true", help="report log base 2")
    sub.add_parser("check-zero-entropy", parents=[common], help="exact zero-entropy test")
    sub.add_parser("unipotency-order", parents=[common], help="smallest b with A^b unipotent")
    s = sub.add_parser("orbit", parents=[common], help="exact orbit x, tau x, ..., tau^n x")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--dump-orbit", metavar="CSV", help="also write the orbit as CSV")
    s = sub.add_parser("poly-orbit", parents=[common], help="per-residue polynomial orbit on a torus")
    s.add_argument("--check", type=int, default=200, help="cross-check against iteration up to this n")
    s = sub.add_parser("gp-orbit", parents=[common], help="generalized-polynomial orbit on a nilmanifold")
    s.add_argument("--check", type=int, default=200, help="cross-check against iteration up to this n")
    s = sub.add_parser("return-times", parents=[common], help="return times to an eps-neighbourhood")
    s.add_argument("--eps", action="append", required=True, help="0 < eps < 1/2, rational; repeatable")
    s.add_argument("--window", type=int, required=True)
    s.add_argument("--method", choices=("direct", "symbolic", "both"), default="direct")
    s = sub.add_parser("verify", parents=[common], help="full cross-check suite")
    s.add_argument("--n", type=int, default=500, help="orbit length for orbit comparisons")
    s.add_argument("--window", type=int, default=1000)
    s.add_argument("--eps", action="append", help="default: 1/4, 1/10, 1/100")
    s = sub.add_parser("tower", parents=[common], help="validate a tower and compare nested return times")
    s.add_argument("--window", type=int, default=100)
    s.add_argument("--eps", action="append", help="default: 1/4, 1/10, 1/100")
    return p


def _read_input(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None


def _inputs(args, desc):
    echo = {k: v for k, v in sorted(vars(args).items())
            if k not in ("command", "format", "no_timing", "system") and v is not None and v is not False}
    echo["file"] = args.system
    if desc is not None:
        echo["system"] = desc.system.to_json()
    return echo


def _text(report, indent=0):
    lines = []
    pad = "  " * indent
    for key, val in report.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.extend(_text(val, indent + 1))
        else:
            if isinstance(val, list) and len(val) > 12 and not any(isinstance(v, (dict, list)) for v in val):
                val = f"{val[:12]}... ({len(val)} items)"
            elif isinstance(val, (list, bool)) or val is None:
                val = json.dumps(val)
            lines.append(f"{pad}{key:<40} {val}" if indent else f"{pad}{key}: {val}")
    return lines


def render(report, fmt_="json"):
    if fmt_ == "text":
        return "\n".join(_text(report))
    return json.dumps(report, indent=2, sort_keys=True)


def run(argv=None):
    """Parse argv, run the command and return (exit code, report dict, output format)."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    desc = None
    report = {"command": args.command}
    try:
        desc = loads(_read_input(args.system))
        results, verdicts = COMMANDS[args.command](args, desc)
        code = EXIT_OK if all(verdicts.values()) else EXIT_MISMATCH
        report.update(inputs=_inputs(args, desc), results=results, verdicts=verdicts,
                      status="ok" if code == EXIT_OK else "mismatch")
    except DescriptorError as exc:
        code = EXIT_INVALID
        report.update(inputs=_inputs(args, None), status="invalid", error={"message": str(exc), "path": exc.path})
    except (ValidationError, ValueError) as exc:
        code = EXIT_INVALID
        report.update(inputs=_inputs(args, desc), status="invalid", error={"message": str(exc)})
    if not args.no_timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, report, args.format


def main(argv=None):
    code, report, fmt_ = run(argv)
    print(render(report, fmt_))
    if code == EXIT_INVALID:
        print(f"error: {report['error']['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
