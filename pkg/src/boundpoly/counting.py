"""The three counting polynomials of a Delzant lattice polytope and the
brute-force lattice-point oracle they are checked against.

* Ehrhart polynomial: ``prod Td(d_i)`` applied to the volume polynomial.
* Interior polynomial: ``prod Td(-d_i)`` applied to the volume polynomial.
* Boundary polynomial: ``prod Â(d_i) * (1/Â)(sum d_i)`` applied to the
  boundary volume polynomial, all specialised at ``lam = k * mu``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .exact import UniPoly, substitute_scaled
from .polytope import HRep, PolytopeError, enumerate_vertices, is_integral, require_delzant
from .series import apply_operator, boundary_operator, todd_operator
from .volume import InvariantViolation, boundary_volume_polynomial, volume_polynomial

GUARD_ENV = "BOUNDPOLY_MAX_CELLS"
DEFAULT_MAX_CELLS = 10**8


class EnumerationGuardError(PolytopeError):
    """The bounding box of the dilate has too many lattice cells to scan."""


@dataclass(frozen=True)
class CountingPolynomials:
    ehrhart: UniPoly
    interior: UniPoly
    boundary: UniPoly
    digest: str


@dataclass(frozen=True)
class CountReport:
    k: int
    total: int
    boundary: int
    interior: int
    weights: tuple[tuple[int, ...], ...] | None = None


def ehrhart_polynomial(h: HRep) -> UniPoly:
    require_delzant(h)
    vp = volume_polynomial(h)
    D = todd_operator(h.nfacets, h.dimension)
    return substitute_scaled(apply_operator(D, vp.poly), h.offsets)


def interior_polynomial(h: HRep) -> UniPoly:
    require_delzant(h)
    vp = volume_polynomial(h)
    D = todd_operator(h.nfacets, h.dimension, negate=True)
    return substitute_scaled(apply_operator(D, vp.poly), h.offsets)


def boundary_polynomial(h: HRep) -> UniPoly:
    require_delzant(h)
    bvp = boundary_volume_polynomial(volume_polynomial(h), h)
    D = boundary_operator(h.nfacets, h.dimension - 1)
    return substitute_scaled(apply_operator(D, bvp.poly), h.offsets)


def boundary_polynomial_by_subtraction(h: HRep) -> UniPoly:
    return ehrhart_polynomial(h) - interior_polynomial(h)


def counting_polynomials(h: HRep, *, cross_check: bool = True) -> CountingPolynomials:
    """All three polynomials from a single volume polynomial.

    With ``cross_check`` the boundary polynomial is compared against the
    difference of the other two, and a mismatch raises.
    """
    require_delzant(h)
    n, d = h.dimension, h.nfacets
    vp = volume_polynomial(h)
    bvp = boundary_volume_polynomial(vp, h)
    ehr = substitute_scaled(apply_operator(todd_operator(d, n), vp.poly), h.offsets)
    inter = substitute_scaled(apply_operator(todd_operator(d, n, negate=True), vp.poly), h.offsets)
    bnd = substitute_scaled(apply_operator(boundary_operator(d, n - 1), bvp.poly), h.offsets)
    if cross_check and ehr - inter != bnd:
        raise InvariantViolation(f"boundary polynomial {bnd} differs from ehrhart - interior = {ehr - inter}")
    return CountingPolynomials(ehr, inter, bnd, h.digest())


# ---------------------------------------------------------------------------
# oracle


def max_cells() -> int:
    raw = os.environ.get(GUARD_ENV)
    if not raw:
        return DEFAULT_MAX_CELLS
    try:
        return int(raw)
    except ValueError:
        raise EnumerationGuardError(f"{GUARD_ENV} must be an integer, got {raw!r}") from None


def _scan(h: HRep, k: int):
    """Yield ``(point, on_boundary)`` for every lattice point of ``k * P``.

    Constraints are scaled to integers; the last coordinate is scanned only
    over the interval the constraints leave open for the fixed prefix.
    """
    if k < 1:
        raise ValueError("dilation factor must be a positive integer")
    v = enumerate_vertices(h)
    if not is_integral(v):
        raise PolytopeError("lattice-point counts need an integral polytope")
    n = h.dimension
    lo = [min(int(p[j]) for p in v.vertices) * k for j in range(n)]
    hi = [max(int(p[j]) for p in v.vertices) * k for j in range(n)]
    cells = math.prod(b - a + 1 for a, b in zip(lo, hi))
    limit = max_cells()
    if cells > limit:
        raise EnumerationGuardError(f"bounding box of {k}P has {cells} cells, limit is {limit} (set {GUARD_ENV})")

    den = math.lcm(*(o.denominator for o in h.offsets))
    rhs = [int(o * den) * k for o in h.offsets]
    normals = [tuple(den * a for a in nv) for nv in h.normals]
    last = n - 1

    def rec(prefix: list[int], partial: list[int]):
        j = len(prefix)
        if j == last:
            a, b = lo[last], hi[last]
            for c, r, s in zip(normals, rhs, partial):
                coef, room = c[last], r - s
                if coef > 0:
                    b = min(b, room // coef)
                elif coef < 0:
                    a = max(a, -(room // -coef))
                elif room < 0:
                    return
            for x in range(a, b + 1):
                tight = any(s + c[last] * x == r for c, r, s in zip(normals, rhs, partial))
                yield (tuple(prefix) + (x,), tight)
            return
        for x in range(lo[j], hi[j] + 1):
            yield from rec(prefix + [x], [s + c[j] * x for c, s in zip(normals, partial)])

    yield from rec([], [0] * len(normals))


def count_lattice_points(h: HRep, k: int, weights: bool = False) -> CountReport:
    total = bnd = 0
    pts = []
    for p, tight in _scan(h, k):
        total += 1
        if tight:
            bnd += 1
            if weights:
                pts.append(p)
    return CountReport(k, total, bnd, total - bnd, tuple(sorted(pts)) if weights else None)


def quantization_weights(h: HRep, k: int, boundary_only: bool = True) -> list[tuple[int, ...]]:
    """Lattice points of ``k * P`` (or only its boundary), sorted lexicographically."""
    return sorted(p for p, tight in _scan(h, k) if tight or not boundary_only)
