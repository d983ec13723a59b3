"""Exact lattice-point counting polynomials for Delzant lattice polytopes.

The boundary count ``#(k dP ∩ Z^n)`` is computed by applying the operator
``prod Â(d_i) * (1/Â)(sum d_i)`` to the boundary volume polynomial, next to
the Ehrhart polynomial (Todd operator) and the interior polynomial (Todd
operator at ``-d_i``).  Everything is exact rational arithmetic and can be
checked against brute-force enumeration.
"""

from importlib import resources

from .counting import (
    CountingPolynomials,
    CountReport,
    EnumerationGuardError,
    boundary_polynomial,
    boundary_polynomial_by_subtraction,
    count_lattice_points,
    counting_polynomials,
    ehrhart_polynomial,
    interior_polynomial,
    quantization_weights,
)
from .exact import MultiPoly, UniPoly, solve_linear_system, substitute_scaled
from .polytope import (
    HRep,
    VRep,
    combinatorial_type,
    enumerate_vertices,
    is_delzant,
    is_integral,
    is_simple,
    parse_hrep,
    primitivize,
)
from .volume import (
    boundary_volume,
    boundary_volume_polynomial,
    facet_volume_normalized,
    polytope_volume,
    simplex_volume,
    volume_polynomial,
)

BUNDLED = (
    "delta2",
    "delta3",
    "delta4",
    "unit_square",
    "unit_cube",
    "cube4",
    "rectangle_2x3",
    "trapezoid",
    "prism",
)


def bundled_text(name: str) -> str:
    if name not in BUNDLED:
        raise KeyError(f"no bundled polytope named {name!r}")
    return resources.files(__package__).joinpath("data", f"{name}.json").read_text(encoding="utf-8")


def load_bundled(name: str) -> HRep:
    return parse_hrep(bundled_text(name))


__all__ = [
    "BUNDLED",
    "CountReport",
    "CountingPolynomials",
    "EnumerationGuardError",
    "HRep",
    "MultiPoly",
    "UniPoly",
    "VRep",
    "boundary_polynomial",
    "boundary_polynomial_by_subtraction",
    "boundary_volume",
    "boundary_volume_polynomial",
    "bundled_text",
    "combinatorial_type",
    "count_lattice_points",
    "counting_polynomials",
    "ehrhart_polynomial",
    "enumerate_vertices",
    "facet_volume_normalized",
    "interior_polynomial",
    "is_delzant",
    "is_integral",
    "is_simple",
    "load_bundled",
    "parse_hrep",
    "polytope_volume",
    "primitivize",
    "quantization_weights",
    "simplex_volume",
    "solve_linear_system",
    "substitute_scaled",
    "volume_polynomial",
]
