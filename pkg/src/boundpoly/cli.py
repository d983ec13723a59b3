"""Command-line interface.

Exit codes: 0 ok, 2 input error, 3 not a Delzant lattice polytope,
4 unbounded or empty, 5 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import BUNDLED, bundled_text
from .counting import (
    EnumerationGuardError,
    count_lattice_points,
    counting_polynomials,
    quantization_weights,
)
from .exact import UniPoly, format_rational, substitute_scaled
from .polytope import (
    DegenerateError,
    HRep,
    InputError,
    NotSimpleError,
    PolytopeError,
    ValidationError,
    enumerate_vertices,
    is_delzant,
    is_integral,
    is_simple,
    parse_hrep,
    require_delzant,
)
from .volume import (
    InterpolationError,
    InvariantViolation,
    boundary_volume,
    boundary_volume_polynomial,
    volume_polynomial,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_DELZANT = 3
EXIT_DEGENERATE = 4
EXIT_MISMATCH = 5


def _rational(q: Fraction):
    return q.numerator if q.denominator == 1 else format_rational(q)


def _poly_doc(p: UniPoly) -> dict:
    return {"text": p.render(), "coefficients": [_rational(c) for c in p.coeffs]}


def _emit(doc: dict, text_lines: list[str], fmt: str) -> None:
    if fmt == "structured":
        print(json.dumps(doc, indent=2))
    else:
        print("\n".join(text_lines))


def _read_polytope(source: str) -> HRep:
    path = Path(source)
    if path.is_file():
        try:
            text = path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot read {source}: {exc}") from None
    elif source in BUNDLED:
        text = bundled_text(source)
    else:
        raise InputError(f"no such file: {source}")
    return parse_hrep(text)


def cmd_check(args) -> int:
    h = _read_polytope(args.file)
    v = enumerate_vertices(h)
    integral = is_integral(v)
    simple = is_simple(v, h)
    try:
        delzant = is_delzant(h, v)
    except NotSimpleError:
        delzant = False
    doc = {
        "digest": h.digest(),
        "dimension": h.dimension,
        "facets": h.nfacets,
        "vertices": len(v.vertices),
        "integral": integral,
        "simple": simple,
        "delzant": delzant,
    }
    lines = [
        f"digest: {doc['digest']}",
        f"dimension: {h.dimension}  facets: {h.nfacets}  vertices: {len(v.vertices)}",
        f"integral: {str(integral).lower()}",
        f"simple: {str(simple).lower()}",
        f"Delzant: {str(delzant).lower()}",
    ]
    _emit(doc, lines, args.format)
    return EXIT_OK if integral and delzant else EXIT_NOT_DELZANT


def cmd_polynomials(args) -> int:
    h = _read_polytope(args.file)
    cp = counting_polynomials(h)
    doc = {
        "digest": cp.digest,
        "dimension": h.dimension,
        "polynomials": {
            "ehrhart": _poly_doc(cp.ehrhart),
            "interior": _poly_doc(cp.interior),
            "boundary": _poly_doc(cp.boundary),
        },
    }
    lines = [
        f"ehrhart:  {cp.ehrhart.render()}",
        f"interior: {cp.interior.render()}",
        f"boundary: {cp.boundary.render()}",
    ]
    _emit(doc, lines, args.format)
    return EXIT_OK


def cmd_count(args) -> int:
    h = _read_polytope(args.file)
    require_delzant(h)
    if args.k < 1:
        raise InputError("--k must be a positive integer")
    rep = count_lattice_points(h, args.k, weights=args.weights)
    doc = {"digest": h.digest(), "k": rep.k, "total": rep.total, "boundary": rep.boundary, "interior": rep.interior}
    lines = [f"k: {rep.k}", f"total: {rep.total}", f"boundary: {rep.boundary}", f"interior: {rep.interior}"]
    if args.weights:
        if args.boundary_only:
            pts = list(rep.weights)
        else:
            pts = quantization_weights(h, args.k, boundary_only=False)
        doc["weights"] = [list(p) for p in pts]
        doc["weights_scope"] = "boundary" if args.boundary_only else "all"
        lines.append(f"weights ({doc['weights_scope']}, {len(pts)}):")
        lines += ["  " + " ".join(str(x) for x in p) for p in pts]
    _emit(doc, lines, args.format)
    return EXIT_OK


def run_verification(h: HRep, kmax: int) -> dict:
    """Compute every polynomial and check the invariants and oracle counts.

    Returns the report document; ``report["pass"]`` is the overall verdict.
    """
    n = h.dimension
    v = require_delzant(h)
    cp = counting_polynomials(h, cross_check=False)
    vp = volume_polynomial(h)
    bvp = boundary_volume_polynomial(vp)
    bvol = boundary_volume(h, v)
    ehr, inter, bnd = cp.ehrhart, cp.interior, cp.boundary

    checks = []

    def check(name: str, ok: bool, detail: str = "") -> None:
        checks.append({"name": name, "pass": bool(ok), "detail": detail})

    check("subtraction_identity", ehr - inter == bnd, f"ehrhart - interior = {(ehr - inter).render()}")
    check("degree", bnd.degree() == n - 1 and ehr.degree() == n,
          f"deg boundary = {bnd.degree()}, deg ehrhart = {ehr.degree()}")
    check("leading_coefficient", bnd.leading_coefficient() == bvol,
          f"leading {format_rational(bnd.leading_coefficient())}, boundary volume {format_rational(bvol)}")
    lac = [n - 2 * j for j in range(1, n // 2 + 1)]
    check("lacunarity", all(bnd.coefficient(j) == 0 for j in lac),
          "zero coefficients at degrees " + ", ".join(map(str, lac)) if lac else "nothing to check")
    sign = 1 if n % 2 == 0 else -1
    check("reciprocity", inter == ehr.reflect() * sign, "interior(k) = (-1)^n ehrhart(-k)")
    scaled = substitute_scaled(bvp.poly, h.offsets)
    check("derivative_identity", scaled == UniPoly.monomial(n - 1, bvol),
          f"sum of partials at k*mu = {scaled.render()}")

    oracle = []
    for k in range(1, kmax + 1):
        rep = count_lattice_points(h, k)
        row = {
            "k": k,
            "total": rep.total,
            "boundary": rep.boundary,
            "interior": rep.interior,
            "ehrhart": _rational(ehr(k)),
            "boundary_poly": _rational(bnd(k)),
            "interior_poly": _rational(inter(k)),
        }
        row["pass"] = ehr(k) == rep.total and bnd(k) == rep.boundary and inter(k) == rep.interior
        oracle.append(row)
    check("oracle", all(r["pass"] for r in oracle), f"k = 1..{kmax}")

    return {
        "digest": cp.digest,
        "dimension": n,
        "validation": {"integral": True, "simple": True, "delzant": True},
        "polynomials": {
            "ehrhart": _poly_doc(ehr),
            "interior": _poly_doc(inter),
            "boundary": _poly_doc(bnd),
        },
        "oracle": oracle,
        "checks": checks,
        "pass": all(c["pass"] for c in checks),
    }


def cmd_verify(args) -> int:
    if args.kmax < 1:
        raise InputError("--kmax must be a positive integer")
    h = _read_polytope(args.file)
    report = run_verification(h, args.kmax)
    lines = [
        f"digest: {report['digest']}",
        "validation: integral, simple, Delzant",
    ]
    for name, p in report["polynomials"].items():
        lines.append(f"{name}: {p['text']}")
    lines.append("oracle:")
    for r in report["oracle"]:
        mark = "ok" if r["pass"] else "FAIL"
        lines.append(f"  k={r['k']}: total {r['total']} boundary {r['boundary']} interior {r['interior']}  {mark}")
    lines.append("checks:")
    for c in report["checks"]:
        lines.append(f"  {'PASS' if c['pass'] else 'FAIL'}  {c['name']}: {c['detail']}")
    lines.append("result: " + ("PASS" if report["pass"] else "FAIL"))
    _emit(report, lines, args.format)
    return EXIT_OK if report["pass"] else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="human-readable text (default) or a JSON document")

    parser = argparse.ArgumentParser(
        prog="boundpoly",
        description="Exact lattice-point counting polynomials of Delzant lattice polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate integrality, simplicity and the Delzant condition")
    p.add_argument("file", help="polytope JSON file, or the name of a bundled example")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("polynomials", parents=[common], help="print the Ehrhart, interior and boundary polynomials")
    p.add_argument("file")
    p.set_defaults(func=cmd_polynomials)

    p = sub.add_parser("count", parents=[common], help="count lattice points of the k-th dilate by enumeration")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--weights", action="store_true", help="also list the lattice points")
    p.add_argument("--boundary-only", action="store_true", help="restrict the listed points to the boundary")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", parents=[common], help="check every identity and compare with enumeration")
    p.add_argument("file")
    p.add_argument("--kmax", type=int, default=5)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            return _dispatch(args)
        finally:
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)


def _dispatch(args) -> int:
    try:
        return args.func(args)
    except (InputError, EnumerationGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DELZANT
    except (InvariantViolation, InterpolationError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except PolytopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
