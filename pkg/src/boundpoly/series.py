"""Truncated power series for Td, Â and friends, and the constant-coefficient
differential operators built from them.

Every coefficient is derived by exact series arithmetic from the defining
functions (``x / (1 - e^-x)``, ``sinh(x/2) / (x/2)``, ...); no tables.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import MultiPoly

KINDS = ("Todd", "ToddNeg", "Ahat", "AhatInv", "ExpHalf")


@dataclass(frozen=True)
class SeriesCoeffs:
    kind: str
    coeffs: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)


def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> tuple[Fraction, ...]:
    out = [Fraction(0)] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return tuple(out)


def series_inverse(a: Sequence[Fraction], order: int) -> tuple[Fraction, ...]:
    """Reciprocal of a series with ``a[0] != 0``, truncated at ``order``."""
    if not a or a[0] == 0:
        raise ZeroDivisionError("series with zero constant term has no reciprocal")
    a = list(a) + [Fraction(0)] * max(0, order + 1 - len(a))
    inv = [Fraction(1) / a[0]]
    for m in range(1, order + 1):
        s = sum((a[j] * inv[m - j] for j in range(1, m + 1)), Fraction(0))
        inv.append(-s / a[0])
    return tuple(inv)


def exp_coeffs(scale: Fraction, order: int) -> tuple[Fraction, ...]:
    """Coefficients of ``exp(scale * x)``."""
    scale = Fraction(scale)
    return tuple(scale**j / math.factorial(j) for j in range(order + 1))


def _check_order(order: int) -> None:
    if order < 0:
        raise ValueError("order must be non-negative")


def ahat_inv_coeffs(order: int) -> SeriesCoeffs:
    """``sinh(x/2) / (x/2) = sum (x/2)^(2j) / (2j+1)!``."""
    _check_order(order)
    cs = [
        Fraction(1, 4 ** (m // 2) * math.factorial(m + 1)) if m % 2 == 0 else Fraction(0)
        for m in range(order + 1)
    ]
    return SeriesCoeffs("AhatInv", tuple(cs))


def ahat_coeffs(order: int) -> SeriesCoeffs:
    _check_order(order)
    return SeriesCoeffs("Ahat", series_inverse(ahat_inv_coeffs(order).coeffs, order))


def todd_coeffs(order: int, negate: bool = False) -> SeriesCoeffs:
    """Coefficients of ``Td(x) = x / (1 - e^-x)``, or of ``Td(-x)``.

    ``(1 - e^-x) / x = sum (-1)^m x^m / (m+1)!`` is inverted as a series.
    """
    _check_order(order)
    quotient = [Fraction((-1) ** m, math.factorial(m + 1)) for m in range(order + 1)]
    cs = series_inverse(quotient, order)
    if negate:
        cs = tuple(c if j % 2 == 0 else -c for j, c in enumerate(cs))
    return SeriesCoeffs("ToddNeg" if negate else "Todd", cs)


def exp_half_coeffs(order: int) -> SeriesCoeffs:
    _check_order(order)
    return SeriesCoeffs("ExpHalf", exp_coeffs(Fraction(1, 2), order))


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class DiffOperator:
    """``sum_alpha coeff_alpha * d^alpha`` in ``nvars`` commuting derivatives.

    The symbol is stored as a :class:`MultiPoly`; terms above ``truncation``
    have been discarded.
    """

    symbol: MultiPoly
    truncation: int

    @property
    def nvars(self) -> int:
        return self.symbol.nvars

    def __mul__(self, other: "DiffOperator") -> "DiffOperator":
        t = min(self.truncation, other.truncation)
        return DiffOperator(_truncate(self.symbol * other.symbol, t), t)

    def __call__(self, p: MultiPoly) -> MultiPoly:
        return apply_operator(self, p)


def _truncate(p: MultiPoly, order: int) -> MultiPoly:
    return MultiPoly(p.nvars, {e: c for e, c in p.items() if sum(e) <= order})


def _univariate_symbol(s: SeriesCoeffs, nvars: int, i: int, truncation: int) -> MultiPoly:
    terms = {}
    for j in range(truncation + 1):
        if s[j]:
            e = [0] * nvars
            e[i] = j
            terms[tuple(e)] = s[j]
    return MultiPoly(nvars, terms)


def _diagonal_symbol(s: SeriesCoeffs, nvars: int, truncation: int) -> MultiPoly:
    """``sum_m s_m (x_1 + ... + x_d)^m`` expanded with multinomial coefficients."""
    terms: dict[tuple[int, ...], Fraction] = {}
    for m in range(truncation + 1):
        if not s[m]:
            continue
        fm = math.factorial(m)
        for combo in itertools.combinations_with_replacement(range(nvars), m):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            multinom = fm
            for k in e:
                multinom //= math.factorial(k)
            terms[tuple(e)] = s[m] * multinom
    return MultiPoly(nvars, terms)


def build_product_operator(
    per_variable: Sequence[SeriesCoeffs],
    diagonal: SeriesCoeffs | None = None,
    truncation: int = 0,
) -> DiffOperator:
    """``prod_i S_i(d_i)``, times ``S_diag(d_1 + ... + d_d)`` when given, truncated."""
    if truncation < 0:
        raise ValueError("truncation must be non-negative")
    d = len(per_variable)
    series = list(per_variable) + ([diagonal] if diagonal is not None else [])
    for s in series:
        if s.order < truncation:
            raise ValueError(f"{s.kind} series of order {s.order} is too short for truncation {truncation}")
    sym = MultiPoly.constant(d)
    for i, s in enumerate(per_variable):
        sym = _truncate(sym * _univariate_symbol(s, d, i, truncation), truncation)
    if diagonal is not None:
        sym = _truncate(sym * _diagonal_symbol(diagonal, d, truncation), truncation)
    return DiffOperator(sym, truncation)


def todd_operator(nvars: int, truncation: int, negate: bool = False) -> DiffOperator:
    s = todd_coeffs(truncation, negate)
    return build_product_operator([s] * nvars, None, truncation)


def boundary_operator(nvars: int, truncation: int) -> DiffOperator:
    """``prod_i Â(d_i) * (1/Â)(d_1 + ... + d_d)``."""
    return build_product_operator(
        [ahat_coeffs(truncation)] * nvars, ahat_inv_coeffs(truncation), truncation
    )


def _falling(e: int, a: int) -> int:
    out = 1
    for j in range(a):
        out *= e - j
    return out


def apply_operator(D: DiffOperator, p: MultiPoly) -> MultiPoly:
    """``sum_alpha coeff_alpha * d^alpha p``.

    The operator must not have been truncated below the degree of ``p``,
    otherwise derivatives that do not annihilate ``p`` would be missing.
    """
    if D.nvars != p.nvars:
        raise ValueError(f"operator acts on {D.nvars} variables, polynomial has {p.nvars}")
    if p.total_degree() > D.truncation:
        raise ValueError(
            f"operator truncated at order {D.truncation} cannot act on a degree {p.total_degree()} polynomial"
        )
    out: dict[tuple[int, ...], Fraction] = {}
    for alpha, c in D.symbol.items():
        for e, v in p.items():
            if any(a > x for a, x in zip(alpha, e)):
                continue
            k = c * v
            for a, x in zip(alpha, e):
                if a:
                    k *= _falling(x, a)
            ne = tuple(x - a for a, x in zip(alpha, e))
            out[ne] = out.get(ne, Fraction(0)) + k
    return MultiPoly(p.nvars, out)
