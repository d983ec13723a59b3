import math
from fractions import Fraction as F

import pytest

import boundpoly.volume as volume
from boundpoly.exact import MultiPoly
from boundpoly.polytope import enumerate_vertices, parse_hrep, product
from boundpoly.volume import (
    boundary_volume,
    boundary_volume_polynomial,
    facet_volume_normalized,
    polytope_volume,
    simplex_volume,
    volume_polynomial,
)
from conftest import simplex_doc


def lam(d):
    return [MultiPoly.variable(d, i) for i in range(d)]


def test_simplex_volumes():
    assert simplex_volume([(0, 0), (1, 0), (0, 1)]) == F(1, 2)
    assert simplex_volume([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]) == F(1, 6)
    assert simplex_volume([(0, 0), (3, 0), (0, 2)]) == 3
    assert simplex_volume([(0, 0), (1, 1), (2, 2)]) == 0


@pytest.mark.parametrize(
    "name, expected",
    [("unit_square", 1), ("unit_cube", 1), ("cube4", 1), ("delta2", F(1, 2)), ("delta3", F(1, 6)),
     ("delta4", F(1, 24)), ("trapezoid", F(3, 2)), ("rectangle_2x3", 6), ("prism", F(1, 2))],
)
def test_polytope_volume(bundled, name, expected):
    assert polytope_volume(enumerate_vertices(bundled[name])) == expected


def test_polytope_volume_against_convex_hull(bundled):
    spatial = pytest.importorskip("scipy.spatial")
    for name, h in bundled.items():
        v = enumerate_vertices(h)
        pts = [[float(x) for x in p] for p in v.vertices]
        hull = spatial.ConvexHull(pts)
        assert float(polytope_volume(v)) == pytest.approx(hull.volume, rel=1e-12), name


def test_facet_volumes_of_simplices(bundled):
    h = bundled["delta2"]
    v = enumerate_vertices(h)
    # the hypotenuse has Euclidean length sqrt 2 and lattice length 1
    assert [facet_volume_normalized(h, v, i) for i in range(3)] == [1, 1, 1]
    h = bundled["delta3"]
    v = enumerate_vertices(h)
    assert facet_volume_normalized(h, v, 3) == F(1, 2)


@pytest.mark.parametrize("name, expected", [("delta2", 3), ("delta3", 2), ("delta4", F(5, 6)),
                                            ("unit_square", 4), ("unit_cube", 6), ("trapezoid", 5),
                                            ("rectangle_2x3", 10), ("prism", 4), ("cube4", 8)])
def test_boundary_volume(bundled, name, expected):
    h = bundled[name]
    assert boundary_volume(h, enumerate_vertices(h)) == expected


def test_segment_volume_polynomial(interval):
    a, b = lam(2)
    assert volume_polynomial(interval).poly == a + b


def test_square_volume_polynomial(bundled):
    l1, l2, l3, l4 = lam(4)
    assert volume_polynomial(bundled["unit_square"]).poly == (l1 + l3) * (l2 + l4)


def test_triangle_volume_polynomial(bundled):
    l1, l2, l3 = lam(3)
    assert volume_polynomial(bundled["delta2"]).poly == (l1 + l2 + l3) ** 2 * F(1, 2)


def test_trapezoid_volume_polynomial(bundled):
    # y in [-l1, l3], x in [-l2, l4 - y]: integrate the width over y
    l1, l2, l3, l4 = lam(4)
    expected = (l2 + l4) * (l1 + l3) - (l3 * l3 - l1 * l1) * F(1, 2)
    assert volume_polynomial(bundled["trapezoid"]).poly == expected


def test_volume_polynomial_at_mu(bundled):
    for name, h in bundled.items():
        vp = volume_polynomial(h)
        assert vp.poly(h.offsets) == polytope_volume(enumerate_vertices(h)), name


def test_homogeneous_of_degree_n(bundled):
    for name, h in bundled.items():
        p = volume_polynomial(h).poly
        assert all(sum(e) == h.dimension for e, _ in p.items()), name


def test_boundary_volume_polynomial_identity(bundled):
    for name, h in bundled.items():
        vp = volume_polynomial(h)
        bvp = boundary_volume_polynomial(vp, h)
        total = MultiPoly(h.nfacets)
        for i in range(h.nfacets):
            total = total + vp.poly.partial(i)
        assert bvp.poly == total
        assert bvp.poly(h.offsets) == boundary_volume(h, enumerate_vertices(h)), name


SHIFTS = [
    lambda mu: [2 * m for m in mu],
    lambda mu: [m + F(1, 7) * (i % 2) for i, m in enumerate(mu)],
    lambda mu: [m + F(1, 5) if i == len(mu) - 1 else m for i, m in enumerate(mu)],
]


@pytest.mark.parametrize("shift", range(len(SHIFTS)))
def test_partial_derivatives_are_facet_volumes(bundled, shift):
    for name, h in bundled.items():
        p = volume_polynomial(h).poly
        moved = h.with_offsets(SHIFTS[shift](h.offsets))
        v = enumerate_vertices(moved)
        for i in range(h.nfacets):
            assert p.partial(i)(moved.offsets) == facet_volume_normalized(moved, v, i), (name, i)


def test_volume_polynomial_of_product(bundled, interval):
    h = product(bundled["delta2"], interval)
    l = lam(5)
    assert volume_polynomial(h).poly == (l[0] + l[1] + l[2]) ** 2 * F(1, 2) * (l[3] + l[4])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_simplex_family_volume_polynomial(n):
    l = lam(n + 1)
    expected = sum(l[1:], l[0]) ** n * F(1, math.factorial(n))
    assert volume_polynomial(parse_hrep(simplex_doc(n))).poly == expected


def test_greedy_fallback_after_singular_system(bundled, monkeypatch):
    real = volume.solve_linear_system
    calls = []

    def flaky(A, b):
        # the interpolation system: degree <= 2 in the 2 free offsets has 6 monomials
        if len(A) == 6:
            calls.append(A)
            if len(calls) == 1:
                raise volume.SingularMatrixError("forced")
        return real(A, b)

    monkeypatch.setattr(volume, "solve_linear_system", flaky)
    h = bundled["trapezoid"]
    direct = volume.interpolate_volume_polynomial(h)
    assert len(calls) == 2
    monkeypatch.undo()
    assert direct.poly == volume.interpolate_volume_polynomial(h).poly


def test_step_halves_when_samples_leave_chamber(bundled, monkeypatch):
    h = bundled["trapezoid"]
    expected = volume.interpolate_volume_polynomial(h).poly
    # a far too coarse step: the first attempts must leave the chamber
    monkeypatch.setattr(volume, "_step_denominator", lambda h, v: F(1, 64))
    assert volume.interpolate_volume_polynomial(h).poly == expected
