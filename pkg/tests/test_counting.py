import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundpoly import BUNDLED, load_bundled
from boundpoly.counting import (
    GUARD_ENV,
    EnumerationGuardError,
    boundary_polynomial,
    boundary_polynomial_by_subtraction,
    count_lattice_points,
    counting_polynomials,
    ehrhart_polynomial,
    interior_polynomial,
    quantization_weights,
)
from boundpoly.exact import UniPoly
from boundpoly.polytope import NotDelzantError, NotSimpleError, enumerate_vertices, parse_hrep, product
from boundpoly.volume import boundary_volume
from conftest import SQUARE_PYRAMID, WIDE_TRIANGLE


def k():
    return UniPoly([0, 1])


def naive_counts(h, dil):
    """Scan the whole bounding box with no pruning."""
    v = enumerate_vertices(h)
    n = h.dimension
    ranges = [range(int(min(p[j] for p in v.vertices)) * dil, int(max(p[j] for p in v.vertices)) * dil + 1)
              for j in range(n)]
    total = bnd = 0
    for x in itertools.product(*ranges):
        vals = [sum(a * b for a, b in zip(nv, x)) for nv in h.normals]
        if all(s <= dil * o for s, o in zip(vals, h.offsets)):
            total += 1
            bnd += any(s == dil * o for s, o in zip(vals, h.offsets))
    return total, bnd


def test_interval(interval):
    assert ehrhart_polynomial(interval) == k() + 1
    assert interior_polynomial(interval) == k() - 1
    assert boundary_polynomial(interval) == UniPoly([2])
    assert boundary_polynomial_by_subtraction(interval) == UniPoly([2])


def test_triangle(bundled):
    h = bundled["delta2"]
    assert ehrhart_polynomial(h) == (k() + 1) * (k() + 2) * F(1, 2)
    assert interior_polynomial(h) == (k() - 1) * (k() - 2) * F(1, 2)
    assert boundary_polynomial(h) == k() * 3


def test_square(bundled):
    h = bundled["unit_square"]
    assert ehrhart_polynomial(h) == (k() + 1) * (k() + 1)
    assert interior_polynomial(h) == (k() - 1) * (k() - 1)
    assert boundary_polynomial_by_subtraction(h) == k() * 4


@pytest.mark.parametrize("name, text", [
    ("delta2", "3*k"), ("delta3", "2*k^2 + 2"), ("delta4", "5/6*k^3 + 25/6*k"),
    ("unit_cube", "6*k^2 + 2"), ("cube4", "8*k^3 + 8*k"), ("rectangle_2x3", "10*k"),
    ("trapezoid", "5*k"), ("prism", "4*k^2 + 2"), ("unit_square", "4*k"),
])
def test_boundary_polynomials(bundled, name, text):
    assert boundary_polynomial(bundled[name]).render() == text


def test_count_examples(bundled):
    rep = count_lattice_points(bundled["delta2"], 1)
    assert (rep.total, rep.boundary, rep.interior) == (3, 3, 0)
    assert count_lattice_points(bundled["delta3"], 2).boundary == 10
    assert count_lattice_points(bundled["delta4"], 2).boundary == 15
    assert [count_lattice_points(bundled["delta2"], j).interior for j in (1, 2, 3)] == [0, 0, 1]
    assert [count_lattice_points(bundled["delta2"], j).total for j in (1, 2, 3)] == [3, 6, 10]


def test_weights(bundled, interval):
    assert quantization_weights(bundled["delta2"], 1) == [(0, 0), (0, 1), (1, 0)]
    assert quantization_weights(bundled["delta3"], 1) == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert quantization_weights(interval, 3) == [(0,), (3,)]
    assert len(quantization_weights(bundled["unit_square"], 2, boundary_only=False)) == 9


def test_report_weights_match_boundary(bundled):
    for h in bundled.values():
        rep = count_lattice_points(h, 2, weights=True)
        assert len(rep.weights) == rep.boundary
        assert list(rep.weights) == quantization_weights(h, 2)
        assert rep.total == rep.boundary + rep.interior


@pytest.mark.parametrize("name", BUNDLED)
def test_pruned_scan_matches_naive_scan(name):
    h = load_bundled(name)
    for dil in (1, 2, 3):
        rep = count_lattice_points(h, dil)
        assert (rep.total, rep.boundary) == naive_counts(h, dil)


def test_guard(bundled, monkeypatch):
    monkeypatch.setenv(GUARD_ENV, "100")
    count_lattice_points(bundled["delta2"], 5)
    with pytest.raises(EnumerationGuardError):
        count_lattice_points(bundled["cube4"], 5)
    monkeypatch.setenv(GUARD_ENV, "lots")
    with pytest.raises(EnumerationGuardError):
        count_lattice_points(bundled["delta2"], 1)


def test_invalid_dilation(bundled):
    with pytest.raises(ValueError):
        count_lattice_points(bundled["delta2"], 0)


def test_polynomials_need_delzant():
    with pytest.raises(NotDelzantError):
        boundary_polynomial(parse_hrep(WIDE_TRIANGLE))
    with pytest.raises(NotSimpleError):
        ehrhart_polynomial(parse_hrep(SQUARE_PYRAMID))


def test_counting_polynomials_bundle(bundled):
    cp = counting_polynomials(bundled["prism"])
    assert cp.digest == bundled["prism"].digest()
    assert cp.ehrhart - cp.interior == cp.boundary


# -- properties on randomized Delzant inputs --------------------------------

SMALL = ["delta2", "delta3", "unit_square", "unit_cube", "rectangle_2x3", "trapezoid", "prism"]


def check_counting_invariants(h):
    n = h.dimension
    cp = counting_polynomials(h)
    bnd = cp.boundary
    assert bnd.degree() == n - 1
    assert cp.ehrhart.degree() == n
    assert bnd.leading_coefficient() == boundary_volume(h, enumerate_vertices(h))
    assert all(bnd.coefficient(n - 2 * j) == 0 for j in range(1, n // 2 + 1))
    assert cp.interior == cp.ehrhart.reflect() * (-1) ** n
    return cp


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(SMALL), st.integers(1, 4))
def test_dilates(name, dil):
    h = load_bundled(name)
    base = counting_polynomials(h)
    cp = check_counting_invariants(h.dilate(dil))
    # the t-th dilate of (dil * P) is the (dil * t)-th dilate of P
    for t in (1, 2):
        assert cp.boundary(t) == base.boundary(dil * t)
        assert cp.ehrhart(t) == base.ehrhart(dil * t)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(["delta2", "unit_square", "trapezoid", "rectangle_2x3"]),
       st.sampled_from(["delta2", "unit_square", "trapezoid"]))
def test_products(a, b):
    p, q = load_bundled(a), load_bundled(b)
    cp = check_counting_invariants(product(p, q))
    ep, eq = counting_polynomials(p).ehrhart, counting_polynomials(q).ehrhart
    assert cp.ehrhart == ep * eq
    assert cp.interior == counting_polynomials(p).interior * counting_polynomials(q).interior
    rep = count_lattice_points(product(p, q), 2)
    assert cp.boundary(2) == rep.boundary


@pytest.mark.parametrize("name", BUNDLED)
def test_integer_values(name):
    bnd = boundary_polynomial(load_bundled(name))
    for t in range(1, 21):
        v = bnd(t)
        assert v.denominator == 1 and v >= 0
