"""Half-space presentation of lattice polytopes, vertex enumeration, validation.

A polytope is ``{x : <x, n_i> <= mu_i for all i}`` with primitive integer
normals ``n_i``.  Facet indices are 0-based and follow the order of the input
document everywhere downstream.
"""

from __future__ import annotations

import functools
import hashlib
import itertools
import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    SingularMatrixError,
    as_fraction,
    determinant,
    format_rational,
    rank,
    solve_linear_system,
)

MAX_DIMENSION = 4
SOFT_MAX_FACETS = 12


class PolytopeError(Exception):
    """Base class for everything this package raises about polytopes."""


class InputError(PolytopeError):
    """Malformed document, out-of-range sizes, or a redundant half-space."""


class RedundantHalfSpaceError(InputError):
    pass


class DegenerateError(PolytopeError):
    """The half-spaces do not cut out a full-dimensional polytope."""


class UnboundedError(DegenerateError):
    pass


class EmptyPolytopeError(DegenerateError):
    pass


class ValidationError(PolytopeError):
    """A well-formed polytope that is not a Delzant lattice polytope."""


class NotIntegralError(ValidationError):
    pass


class NotSimpleError(ValidationError):
    pass


class NotDelzantError(ValidationError):
    pass


@dataclass(frozen=True)
class HRep:
    dimension: int
    normals: tuple[tuple[int, ...], ...]
    offsets: tuple[Fraction, ...]

    @property
    def nfacets(self) -> int:
        return len(self.normals)

    def with_offsets(self, offsets: Sequence) -> "HRep":
        if len(offsets) != self.nfacets:
            raise ValueError("offset count does not match facet count")
        return HRep(self.dimension, self.normals, tuple(as_fraction(o) for o in offsets))

    def dilate(self, k) -> "HRep":
        k = as_fraction(k)
        return self.with_offsets([k * m for m in self.offsets])

    def to_document(self) -> dict:
        return {
            "dimension": self.dimension,
            "normals": [list(v) for v in self.normals],
            "offsets": [
                o.numerator if o.denominator == 1 else format_rational(o) for o in self.offsets
            ],
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class VRep:
    dimension: int
    vertices: tuple[tuple[Fraction, ...], ...]
    incidence: tuple[frozenset[int], ...]


CombinatorialType = frozenset  # frozenset of frozensets of facet indices


def primitivize(v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Divide an integer vector by the gcd of its entries, keeping its direction."""
    v = tuple(int(x) for x in v)
    g = math.gcd(*v) if v else 0
    if g == 0:
        raise ValueError("cannot primitivize the zero vector")
    return tuple(x // g for x in v), g


def _inner(x: Sequence, y: Sequence):
    return sum(a * b for a, b in zip(x, y))


def product(p: HRep, q: HRep) -> HRep:
    """Cartesian product; facets of ``p`` come first."""
    n, m = p.dimension, q.dimension
    normals = [tuple(v) + (0,) * m for v in p.normals] + [(0,) * n + tuple(v) for v in q.normals]
    return HRep(n + m, tuple(normals), p.offsets + q.offsets)


# ---------------------------------------------------------------------------
# parsing


def _load_document(document) -> dict:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise InputError("polytope document must be a JSON object")
    missing = {"dimension", "normals", "offsets"} - document.keys()
    if missing:
        raise InputError(f"missing keys: {', '.join(sorted(missing))}")
    return document


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse_hrep(document) -> HRep:
    """Build a validated :class:`HRep` from a dict or JSON text.

    Non-primitive normals are divided by their gcd (with a warning) and the
    offset rescaled to match.  The result is checked to be bounded,
    full-dimensional and free of redundant half-spaces.
    """
    doc = _load_document(document)
    n = doc["dimension"]
    if not _is_int(n) or n < 1:
        raise InputError("dimension must be a positive integer")
    if n > MAX_DIMENSION:
        raise InputError(f"dimension {n} exceeds the supported maximum of {MAX_DIMENSION}")
    normals_in, offsets_in = doc["normals"], doc["offsets"]
    if not isinstance(normals_in, list) or not isinstance(offsets_in, list):
        raise InputError("normals and offsets must be arrays")
    if len(normals_in) != len(offsets_in):
        raise InputError(f"{len(normals_in)} normals but {len(offsets_in)} offsets")

    normals, offsets = [], []
    for i, (v, o) in enumerate(zip(normals_in, offsets_in)):
        if not isinstance(v, list) or len(v) != n or not all(_is_int(x) for x in v):
            raise InputError(f"normal {i} must be a list of {n} integers")
        if not (_is_int(o) or isinstance(o, str)):
            raise InputError(f"offset {i} must be an integer or a 'p/q' string")
        try:
            off = as_fraction(o)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"offset {i} is not a rational: {o!r}") from None
        if not any(v):
            raise InputError(f"normal {i} is the zero vector")
        prim, g = primitivize(v)
        if g != 1:
            warnings.warn(
                f"normal {i} {tuple(v)} is not primitive; using {prim} with offset {format_rational(off / g)}",
                stacklevel=2,
            )
        normals.append(prim)
        offsets.append(off / g)

    if len(normals) > SOFT_MAX_FACETS:
        warnings.warn(f"{len(normals)} facets is beyond the comfortable range (<= {SOFT_MAX_FACETS})", stacklevel=2)

    h = HRep(n, tuple(normals), tuple(offsets))
    validate_hrep(h)
    return h


def validate_hrep(h: HRep) -> VRep:
    """Check boundedness, nonemptiness, full dimension and irredundancy."""
    n, d = h.dimension, h.nfacets
    seen = {}
    for i, v in enumerate(h.normals):
        if v in seen:
            raise RedundantHalfSpaceError(f"facets {seen[v]} and {i} share the normal {v}")
        seen[v] = i
    if d < n + 1 or not _is_bounded(h):
        raise UnboundedError("half-spaces do not bound a polytope")
    vrep = enumerate_vertices(h)
    if not vrep.vertices:
        raise EmptyPolytopeError("half-spaces have empty intersection")
    if affine_dimension(vrep.vertices) < n:
        raise EmptyPolytopeError("polytope is not full-dimensional")
    for i in range(d):
        on = [v for v, act in zip(vrep.vertices, vrep.incidence) if i in act]
        if not on or affine_dimension(on) != n - 1:
            raise RedundantHalfSpaceError(f"half-space {i} does not support a facet")
    return vrep


def _nullspace_direction(rows: Sequence[Sequence[int]], n: int) -> tuple[Fraction, ...] | None:
    """A spanning vector of the kernel of ``rows`` when it is one-dimensional."""
    if not rows:
        return (Fraction(1),) if n == 1 else None
    if rank(rows) != n - 1:
        return None
    # fix one free coordinate to 1 and solve for the rest
    for free in range(n):
        others = [j for j in range(n) if j != free]
        A = [[r[j] for j in others] for r in rows]
        b = [-r[free] for r in rows]
        try:
            # rows has n-1 rows; pick an invertible square subsystem
            sol = solve_linear_system(A, b)
        except SingularMatrixError:
            continue
        y = [Fraction(0)] * n
        y[free] = Fraction(1)
        for j, val in zip(others, sol):
            y[j] = val
        return tuple(y)
    return None


def _is_bounded(h: HRep) -> bool:
    """No nonzero direction ``y`` with ``<y, n_i> <= 0`` for every facet."""
    n = h.dimension
    if rank(h.normals) < n:
        return False
    # the recession cone is pointed; it is nonzero iff it has an extreme ray,
    # which is cut out by n-1 independent tight constraints
    for subset in itertools.combinations(h.normals, n - 1):
        y = _nullspace_direction(subset, n)
        if y is None:
            continue
        for s in (1, -1):
            if all(s * _inner(y, v) <= 0 for v in h.normals):
                return False
    return True


def affine_dimension(points: Sequence[Sequence]) -> int:
    if not points:
        return -1
    p0 = points[0]
    diffs = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return rank(diffs) if diffs else 0


# ---------------------------------------------------------------------------
# vertices and validation


@functools.lru_cache(maxsize=64)
def _vertex_systems(normals: tuple[tuple[int, ...], ...]) -> list[tuple[tuple[int, ...], int, list[list[int]]]]:
    """Nonsingular n-subsets of the normals with determinant and integer adjugate.

    Depends only on the normals, so it is shared by every offset vector.
    """
    n = len(normals[0])
    out = []
    for subset in itertools.combinations(range(len(normals)), n):
        A = [normals[i] for i in subset]
        det = determinant(A)
        if det == 0:
            continue
        cols = [solve_linear_system(A, [int(r == c) for r in range(n)]) for c in range(n)]
        adj = [[int(cols[c][r] * det) for c in range(n)] for r in range(n)]
        out.append((subset, int(det), adj))
    return out


def enumerate_vertices(h: HRep) -> VRep:
    """Solve every nonsingular n-subset of facet equations; keep feasible points."""
    n = h.dimension
    found: dict[tuple[Fraction, ...], frozenset[int]] = {}
    for subset, det, adj in _vertex_systems(h.normals):
        rhs = [h.offsets[i] for i in subset]
        x = tuple(sum((a * b for a, b in zip(row, rhs)), Fraction(0)) / det for row in adj)
        if x in found:
            continue
        slacks = [h.offsets[i] - _inner(x, h.normals[i]) for i in range(h.nfacets)]
        if all(s >= 0 for s in slacks):
            found[x] = frozenset(i for i, s in enumerate(slacks) if s == 0)
    verts = sorted(found)
    return VRep(n, tuple(verts), tuple(found[v] for v in verts))


def combinatorial_type(h: HRep) -> CombinatorialType:
    return frozenset(enumerate_vertices(h).incidence)


def is_integral(v: VRep) -> bool:
    return all(x.denominator == 1 for p in v.vertices for x in p)


def _active_normals(h: HRep, act: frozenset[int]) -> list[tuple[int, ...]]:
    return [h.normals[i] for i in sorted(act)]


def is_simple(v: VRep, h: HRep | None = None) -> bool:
    """Every vertex on exactly n facets with independent edge directions.

    Without ``h`` only the incidence count is available; edge independence
    at an n-valent vertex is equivalent to independence of its n active
    normals, which needs the normals.
    """
    n = v.dimension
    for act in v.incidence:
        if len(act) != n:
            return False
        if h is not None and determinant(_active_normals(h, act)) == 0:
            return False
    return True


def _primitive_direction(vec: Sequence[Fraction]) -> tuple[int, ...]:
    lcm = math.lcm(*(x.denominator for x in vec))
    ints = [int(x * lcm) for x in vec]
    return primitivize(ints)[0]


def edge_vectors(h: HRep, act: frozenset[int]) -> list[tuple[int, ...]]:
    """Primitive integer edge directions at a simple vertex with active facets ``act``.

    The edge leaving facet ``j`` keeps every other active facet tight and
    moves strictly inside facet ``j``.
    """
    idx = sorted(act)
    A = [h.normals[i] for i in idx]
    n = h.dimension
    out = []
    for j in range(n):
        rhs = [0] * n
        rhs[j] = -1
        out.append(_primitive_direction(solve_linear_system(A, rhs)))
    return out


def is_delzant(h: HRep, v: VRep) -> bool:
    """Integral, and at each vertex the primitive edge vectors have determinant +-1.

    Raises :class:`NotSimpleError` for non-simple input rather than
    answering ``False``.
    """
    if not is_simple(v, h):
        raise NotSimpleError("polytope is not simple")
    if not is_integral(v):
        return False
    return all(abs(determinant(edge_vectors(h, act))) == 1 for act in v.incidence)


def require_delzant(h: HRep) -> VRep:
    """Vertex data of ``h``, raising the appropriate ValidationError if ``h`` is not Delzant integral."""
    v = enumerate_vertices(h)
    if not is_integral(v):
        raise NotIntegralError("polytope has non-integral vertices")
    if not is_delzant(h, v):
        raise NotDelzantError("edge vectors do not form a lattice basis at some vertex")
    return v


def hrep_from_vertices(vrep: VRep) -> HRep:
    """Supporting half-spaces of the convex hull of a full-dimensional vertex set.

    Brute force over n-subsets of vertices; only meant for round-trip checks
    on small polytopes.
    """
    pts = list(vrep.vertices)
    n = vrep.dimension
    facets: dict[tuple[int, ...], Fraction] = {}
    for subset in itertools.combinations(pts, n):
        p0 = subset[0]
        rows = [[a - b for a, b in zip(p, p0)] for p in subset[1:]]
        y = _nullspace_direction(rows, n) if rows else (Fraction(1),)
        if y is None:
            continue
        normal = _primitive_direction(y)
        vals = [_inner(normal, p) for p in pts]
        c = _inner(normal, p0)
        if all(x <= c for x in vals):
            pass
        elif all(x >= c for x in vals):
            normal = tuple(-a for a in normal)
            c = -c
        else:
            continue
        on = [p for p in pts if _inner(normal, p) == c]
        if affine_dimension(on) == n - 1:
            facets[normal] = c
    normals = sorted(facets)
    return HRep(n, tuple(normals), tuple(facets[v] for v in normals))
