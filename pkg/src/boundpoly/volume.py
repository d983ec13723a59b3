"""Exact volumes of polytopes, their facets, and the parametric volume polynomial.

The volume polynomial of ``h`` is ``vol(P(lam))`` where
``P(lam) = {x : <x, n_i> <= lam_i}``; within the chamber of the base offsets it
is a polynomial of degree ``n`` in the ``lam_i``.  It is recovered by exact
interpolation from volumes of perturbed polytopes and checked on held-out
offsets before being returned.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import (
    MultiPoly,
    SingularMatrixError,
    as_fraction,
    determinant,
    monomials_up_to,
    solve_linear_system,
)
from .polytope import (
    CombinatorialType,
    HRep,
    NotSimpleError,
    PolytopeError,
    VRep,
    _vertex_systems,
    affine_dimension,
    enumerate_vertices,
    is_simple,
)


class VolumeError(PolytopeError):
    pass


class InterpolationError(VolumeError):
    """Interpolation could not stay inside the chamber or the system was singular."""


class InvariantViolation(PolytopeError):
    """Two independent computations of the same quantity disagree."""


@dataclass(frozen=True)
class VolumePolynomial:
    poly: MultiPoly
    mu: tuple[Fraction, ...]
    ctype: CombinatorialType


@dataclass(frozen=True)
class BoundaryVolumePolynomial:
    poly: MultiPoly
    mu: tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# triangulation


def simplex_volume(vertices: Sequence[Sequence]) -> Fraction:
    """``|det(v1 - v0, ..., vn - v0)| / n!``; zero for a degenerate simplex."""
    pts = [[as_fraction(x) for x in p] for p in vertices]
    n = len(pts) - 1
    if n < 0 or any(len(p) != n for p in pts):
        raise ValueError("need n+1 points in R^n")
    if n == 0:
        return Fraction(1)
    p0 = pts[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in pts[1:]]
    return abs(determinant(rows)) / math.factorial(n)


def _subfaces(vrep: VRep, face: frozenset[int], dim: int, dims: dict) -> list[frozenset[int]]:
    out = set()
    for i in set().union(*(vrep.incidence[v] for v in face)):
        sub = frozenset(v for v in face if i in vrep.incidence[v])
        if sub == face or sub in out:
            continue
        if sub not in dims:
            dims[sub] = affine_dimension([vrep.vertices[v] for v in sub])
        if dims[sub] == dim - 1:
            out.add(sub)
    return sorted(out, key=sorted)


def triangulate_face(vrep: VRep, face: frozenset[int], dim: int, _memo: dict | None = None) -> list[tuple[int, ...]]:
    """Pulling triangulation of a face given by vertex indices.

    Each returned simplex is a tuple of ``dim + 1`` vertex indices.
    """
    memo = {} if _memo is None else _memo
    key = (face, dim)
    if key in memo:
        return memo[key]
    if dim == 0:
        out = [tuple(face)]
    else:
        dims = memo.setdefault("dims", {})
        base = min(face)
        out = []
        for sub in _subfaces(vrep, face, dim, dims):
            if base in sub:
                continue
            for simplex in triangulate_face(vrep, sub, dim - 1, memo):
                out.append((base,) + simplex)
    memo[key] = out
    return out


def polytope_volume(v: VRep) -> Fraction:
    """Euclidean volume by coning boundary simplices to a base vertex."""
    n = v.dimension
    if affine_dimension(v.vertices) != n:
        raise VolumeError("polytope is not full-dimensional")
    full = frozenset(range(len(v.vertices)))
    return sum(
        (simplex_volume([v.vertices[i] for i in s]) for s in triangulate_face(v, full, n)),
        Fraction(0),
    )


# ---------------------------------------------------------------------------
# facets


def kernel_lattice_basis(normal: Sequence[int]) -> list[list[int]]:
    """Unimodular ``U`` (row-major) with ``normal @ U = (+-1, 0, ..., 0)``.

    For a primitive ``normal`` the columns 1..n-1 of ``U`` are a basis of the
    lattice ``{x in Z^n : <x, normal> = 0}``.
    """
    n = len(normal)
    r = list(normal)
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst: int, src: int, q: int) -> None:
        # column dst -= q * column src
        r[dst] -= q * r[src]
        for row in U:
            row[dst] -= q * row[src]

    while sum(1 for x in r if x) > 1:
        piv = min((j for j in range(n) if r[j]), key=lambda j: abs(r[j]))
        for j in range(n):
            if j != piv and r[j]:
                colop(j, piv, r[j] // r[piv])
    piv = next(j for j in range(n) if r[j])
    if abs(r[piv]) != 1:
        raise ValueError(f"normal {tuple(normal)} is not primitive")
    if piv != 0:
        r[0], r[piv] = r[piv], r[0]
        for row in U:
            row[0], row[piv] = row[piv], row[0]
    return U


def _facet_simplices(h: HRep, v: VRep, i: int) -> list[list[tuple[Fraction, ...]]]:
    face = frozenset(j for j, act in enumerate(v.incidence) if i in act)
    if not face:
        raise VolumeError(f"facet {i} is empty; the half-space is redundant")
    n = h.dimension
    if affine_dimension([v.vertices[j] for j in face]) != n - 1:
        raise VolumeError(f"facet {i} is not (n-1)-dimensional; the half-space is redundant")
    return [[v.vertices[j] for j in s] for s in triangulate_face(v, face, n - 1)]


def facet_volume_normalized(h: HRep, v: VRep, i: int) -> Fraction:
    """Volume of facet ``i`` relative to the lattice in its hyperplane.

    Computed per simplex in lattice coordinates, and cross-checked against
    the squared Euclidean volume divided by ``|n_i|^2``.
    """
    n = h.dimension
    normal = h.normals[i]
    U = kernel_lattice_basis(normal)
    norm_sq = sum(a * a for a in normal)
    fact = math.factorial(n - 1)
    total = Fraction(0)
    for simplex in _facet_simplices(h, v, i):
        p0 = simplex[0]
        diffs = [[a - b for a, b in zip(p, p0)] for p in simplex[1:]]
        coords = [solve_linear_system(U, d)[1:] for d in diffs]
        lattice_vol = abs(determinant(coords)) / fact if coords else Fraction(1)
        gram = [[sum(a * b for a, b in zip(x, y)) for y in diffs] for x in diffs]
        eucl_sq = (determinant(gram) if gram else Fraction(1)) / (fact * fact)
        if lattice_vol * lattice_vol * norm_sq != eucl_sq:
            raise InvariantViolation(
                f"facet {i}: lattice volume {lattice_vol} disagrees with Euclidean volume^2 {eucl_sq}/|n|^2"
            )
        total += lattice_vol
    return total


def boundary_volume(h: HRep, v: VRep) -> Fraction:
    return sum((facet_volume_normalized(h, v, i) for i in range(h.nfacets)), Fraction(0))


# ---------------------------------------------------------------------------
# volume polynomial


def _step_denominator(h: HRep, v: VRep) -> int:
    """Bound D such that moving every facet by less than 1/D keeps every vertex.

    At vertex ``x`` with active set ``A``, an inactive facet ``j`` with slack
    ``s`` stays slack while ``|t|_inf * (1 + |n_j^T N_A^{-1}|_1) < s``.
    """
    D = 1
    for x, act in zip(v.vertices, v.incidence):
        idx = sorted(act)
        NA_T = [[h.normals[i][r] for i in idx] for r in range(h.dimension)]
        for j in range(h.nfacets):
            if j in act:
                continue
            slack = h.offsets[j] - sum(a * b for a, b in zip(x, h.normals[j]))
            coef = solve_linear_system(NA_T, list(h.normals[j]))
            sens = 1 + sum(abs(c) for c in coef)
            D = max(D, math.ceil(sens / slack))
    return D


class _RowReducer:
    """Incremental row echelon form, used to pick unisolvent sample points greedily."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: dict[int, list[Fraction]] = {}

    def add(self, row: Sequence[Fraction]) -> bool:
        r = list(row)
        for c in range(self.ncols):
            if r[c] == 0:
                continue
            if c in self.rows:
                piv = self.rows[c]
                f = r[c] / piv[c]
                r = [a - f * b for a, b in zip(r, piv)]
            else:
                self.rows[c] = r
                return True
        return False


def _monomial_row(point: Sequence[Fraction], monos: Sequence[tuple[int, ...]]) -> list[Fraction]:
    out = []
    for e in monos:
        val = Fraction(1)
        for x, k in zip(point, e):
            if k:
                val *= x**k
        out.append(val)
    return out


def _vectors_with_l1(s: int, nvars: int, bound: int):
    if nvars == 0:
        if s == 0:
            yield ()
        return
    for a in range(min(s, bound) + 1):
        for rest in _vectors_with_l1(s - a, nvars - 1, bound):
            if a:
                yield (a,) + rest
                yield (-a,) + rest
            else:
                yield (0,) + rest


def _candidate_offsets(bound: int, nvars: int):
    """Integer points of [-bound, bound]^nvars.

    The nonnegative points of l1 norm <= bound come first: they form the
    principal lattice, which is unisolvent for degree <= bound.  Everything
    else follows in order of increasing l1 norm.
    """
    for s in range(bound + 1):
        for t in _vectors_with_l1(s, nvars, bound):
            if min(t, default=0) >= 0:
                yield t
    for s in range(bound * nvars + 1):
        for t in _vectors_with_l1(s, nvars, bound):
            if s > bound or min(t, default=0) < 0:
                yield t


def _chamber_sampler(h: HRep, v: VRep):
    """Volume at nearby offsets, or None once the offsets leave the chamber.

    Each base vertex is re-solved from its own active facets.  If all of them
    keep strictly positive slack on their inactive facets, their normal cones
    still cover R^n, so no vertex appeared or vanished and the base
    triangulation (which only depends on the face lattice) stays valid.
    """
    n = h.dimension
    systems = {subset: (det, adj) for subset, det, adj in _vertex_systems(h.normals)}
    solvers = []
    for act in v.incidence:
        subset = tuple(sorted(act))
        det, adj = systems[subset]
        inactive = [j for j in range(h.nfacets) if j not in act]
        solvers.append((subset, det, adj, inactive))
    simplices = triangulate_face(v, frozenset(range(len(v.vertices))), n)
    fact = math.factorial(n)

    def sample(offsets) -> Fraction | None:
        offsets = [as_fraction(o) for o in offsets]
        verts = []
        for subset, det, adj, inactive in solvers:
            rhs = [offsets[i] for i in subset]
            x = [sum((a * b for a, b in zip(row, rhs)), Fraction(0)) / det for row in adj]
            for j in inactive:
                if sum(a * b for a, b in zip(h.normals[j], x)) >= offsets[j]:
                    return None
            verts.append(x)
        total = Fraction(0)
        for s in simplices:
            p0 = verts[s[0]]
            total += abs(determinant([[a - b for a, b in zip(verts[i], p0)] for i in s[1:]]))
        return total / fact

    return sample


def _full_sampler(h: HRep, ctype: CombinatorialType):
    """Same contract as the chamber sampler, from a fresh vertex enumeration."""

    def sample(offsets) -> Fraction | None:
        vp = enumerate_vertices(h.with_offsets(offsets))
        if frozenset(vp.incidence) != ctype:
            return None
        return polytope_volume(vp)

    return sample


def volume_polynomial(h: HRep, *, holdout: int = 5, seed: int = 0) -> VolumePolynomial:
    """Cached wrapper around :func:`interpolate_volume_polynomial`."""
    return _cached_volume_polynomial(h, holdout, seed)


@functools.lru_cache(maxsize=128)
def _cached_volume_polynomial(h: HRep, holdout: int, seed: int) -> VolumePolynomial:
    return interpolate_volume_polynomial(h, holdout=holdout, seed=seed)


def interpolate_volume_polynomial(h: HRep, *, holdout: int = 5, seed: int = 0) -> VolumePolynomial:
    """Interpolate ``vol(P(lam))`` near ``lam = mu`` exactly.

    Translating a polytope by ``a`` shifts ``lam`` by ``N a`` without changing
    its volume, so only the facets outside one vertex basis ``B`` need to be
    perturbed: interpolation runs over ``d - n`` variables and the result is
    pulled back to all ``d`` offsets.  Every sample is required to have the
    combinatorial type of ``h``; the perturbation box halves on a mismatch.
    """
    n, d = h.dimension, h.nfacets
    v = enumerate_vertices(h)
    if not is_simple(v, h):
        raise NotSimpleError("volume polynomial requires a simple polytope")
    ctype = frozenset(v.incidence)
    mu = h.offsets

    B = sorted(v.incidence[0])
    free = [j for j in range(d) if j not in B]
    m = len(free)
    monos = monomials_up_to(m, n)
    base_step = Fraction(1, 4 * _step_denominator(h, v))

    sample = _chamber_sampler(h, v)

    def collect(step: Fraction, greedy: bool):
        reducer = _RowReducer(len(monos)) if greedy else None
        points, values = [], []
        for t in _candidate_offsets(n, m):
            row = _monomial_row(t, monos)
            if reducer is not None and not reducer.add(row):
                continue
            offs = list(mu)
            for j, x in zip(free, t):
                offs[j] += step * x
            val = sample(offs)
            if val is None:
                return None
            points.append(row)
            values.append(val)
            if len(points) == len(monos):
                break
        return points, values

    step = base_step
    for _attempt in range(11):
        got = collect(step, greedy=False)
        if got is not None:
            break
        step /= 2
    else:
        raise InterpolationError("perturbed samples kept leaving the chamber of the base offsets")
    try:
        coeffs = solve_linear_system(*got)
    except SingularMatrixError:
        got = collect(step, greedy=True)
        if got is None or len(got[0]) != len(monos):
            raise InterpolationError("could not find a unisolvent sample set") from None
        coeffs = solve_linear_system(*got)

    # rows were in grid units t / step
    local = MultiPoly(m, {e: c / step ** sum(e) for e, c in zip(monos, coeffs)})

    # pull back: t_j = lam_j - mu_j - <n_j, N_B^{-1} (lam_B - mu_B)>
    NB = [h.normals[i] for i in B]
    lam = [MultiPoly.variable(d, i) for i in range(d)]
    lam_B_shift = [lam[i] - mu[i] for i in B]
    subs = []
    for j in free:
        # coefficients w with n_j = w @ N_B, so <n_j, N_B^{-1} s> = <w, s>
        w = solve_linear_system([[NB[r][c] for r in range(n)] for c in range(n)], list(h.normals[j]))
        expr = lam[j] - mu[j]
        for wi, s in zip(w, lam_B_shift):
            if wi:
                expr = expr - s * wi
        subs.append(expr)
    poly = local.compose(subs)

    vp = VolumePolynomial(poly, tuple(mu), ctype)
    _verify_holdout(h, vp, B, step, holdout, seed, _full_sampler(h, ctype))
    if poly.total_degree() != n:
        raise InterpolationError(f"volume polynomial has degree {poly.total_degree()}, expected {n}")
    return vp


def _verify_holdout(h, vp, basis, step, count, seed, sample) -> None:
    # samples never moved the basis facets, so perturbing one guarantees a fresh point
    rng = random.Random(seed)
    n, d = h.dimension, h.nfacets
    checked, tries = 0, 0
    while checked < count and tries < 50 * count:
        tries += 1
        t = [Fraction(rng.randint(-n, n), 1) * step / 2 for _ in range(d)]
        if not any(t[i] for i in basis):
            continue
        offs = [m + x for m, x in zip(vp.mu, t)]
        actual = sample(offs)
        if actual is None:
            continue
        if vp.poly(offs) != actual:
            raise InvariantViolation(
                f"volume polynomial gives {vp.poly(offs)} at held-out offsets, direct volume is {actual}"
            )
        checked += 1
    if checked < count:
        raise InterpolationError("could not place held-out samples inside the chamber")


def boundary_volume_polynomial(vp: VolumePolynomial, h: HRep | None = None) -> BoundaryVolumePolynomial:
    """Sum of the partial derivatives of the volume polynomial.

    With ``h`` given, its value at the base offsets is checked against the
    facet-by-facet boundary volume.
    """
    p = vp.poly
    total = MultiPoly(p.nvars)
    for i in range(p.nvars):
        total = total + p.partial(i)
    if h is not None:
        direct = boundary_volume(h, enumerate_vertices(h))
        if total(vp.mu) != direct:
            raise InvariantViolation(
                f"derivative of volume polynomial gives {total(vp.mu)} at mu, facet sum gives {direct}"
            )
    return BoundaryVolumePolynomial(total, vp.mu)
