"""Exact rational linear algebra and polynomial arithmetic.

Scalars are :class:`fractions.Fraction` throughout; nothing in here ever
touches a float.  Two polynomial types are provided:

* :class:`MultiPoly` -- sparse polynomial in ``nvars`` variables, stored as a
  map from exponent tuples to nonzero coefficients.
* :class:`UniPoly` -- dense univariate polynomial in the dilation variable
  ``k``.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DimensionMismatchError",
    "SingularMatrixError",
    "MultiPoly",
    "UniPoly",
    "as_fraction",
    "format_rational",
    "determinant",
    "rank",
    "solve_linear_system",
    "poly_add",
    "poly_mul",
    "poly_partial",
    "substitute_scaled",
]


class DimensionMismatchError(ValueError):
    """Operands have incompatible shapes or variable counts."""


class SingularMatrixError(ValueError):
    """A square system has no unique solution."""


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently smuggle rounding error in.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# dense linear algebra


def _check_matrix(A: Sequence[Sequence]) -> list[list[Fraction]]:
    rows = [[as_fraction(x) for x in row] for row in A]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise DimensionMismatchError("ragged matrix")
    return rows


def _integer_rows(rows: list[list[Fraction]]) -> tuple[list[list[int]], list[int]]:
    """Scale each row by the lcm of its denominators; return rows and scales."""
    out, scales = [], []
    for r in rows:
        L = math.lcm(*(x.denominator for x in r)) if r else 1
        out.append([x.numerator * (L // x.denominator) for x in r])
        scales.append(L)
    return out, scales


def _bareiss(M: list[list[int]], ncols: int, full_pivot: bool) -> tuple[int, int, list[int]]:
    """Fraction-free elimination of ``M`` in place on its first ``ncols`` columns.

    Extra trailing columns ride along (used for right-hand sides).  Returns
    ``(rank, sign, cols)`` where ``sign`` tracks row/column swaps and ``cols``
    is the column permutation applied.  Pivots maximise ``|entry|``.
    """
    nrows = len(M)
    cols = list(range(ncols))
    sign, prev, r = 1, 1, 0
    for c in range(ncols):
        if r == nrows:
            break
        if full_pivot:
            best, bv = None, 0
            for i in range(r, nrows):
                row = M[i]
                for j in range(c, ncols):
                    if abs(row[j]) > bv:
                        best, bv = (i, j), abs(row[j])
            if best is None:
                break
            pi, pj = best
            if pj != c:
                for row in M:
                    row[c], row[pj] = row[pj], row[c]
                cols[c], cols[pj] = cols[pj], cols[c]
                sign = -sign
        else:
            pi = max(range(r, nrows), key=lambda i: abs(M[i][c]))
            if M[pi][c] == 0:
                continue
        if pi != r:
            M[r], M[pi] = M[pi], M[r]
            sign = -sign
        piv = M[r]
        p = piv[c]
        width = len(piv)
        for i in range(r + 1, nrows):
            row = M[i]
            f = row[c]
            if f:
                for j in range(c + 1, width):
                    row[j] = (row[j] * p - f * piv[j]) // prev
            else:
                for j in range(c + 1, width):
                    row[j] = (row[j] * p) // prev
            row[c] = 0
        prev = p
        r += 1
    return r, sign, cols


def determinant(A: Sequence[Sequence]) -> Fraction:
    rows = _check_matrix(A)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    M, scales = _integer_rows(rows)
    rk, sign, _ = _bareiss(M, n, full_pivot=False)
    if rk < n:
        return Fraction(0)
    return Fraction(sign * M[n - 1][n - 1], math.prod(scales))


def rank(A: Sequence[Sequence]) -> int:
    rows = _check_matrix(A)
    if not rows or not rows[0]:
        return 0
    M, _ = _integer_rows(rows)
    return _bareiss(M, len(M[0]), full_pivot=True)[0]


def solve_linear_system(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``A x = b`` exactly.

    Rows are cleared of denominators, then eliminated fraction-free with full
    pivoting on entry magnitude; with exact arithmetic the pivot order only
    affects intermediate sizes.  Raises :class:`DimensionMismatchError` for
    shape problems and :class:`SingularMatrixError` when ``A`` is singular.
    """
    rows = _check_matrix(A)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("coefficient matrix is not square")
    if len(b) != n:
        raise DimensionMismatchError(f"right-hand side has length {len(b)}, expected {n}")
    aug = [r + [as_fraction(x)] for r, x in zip(rows, b)]
    M, _ = _integer_rows(aug)
    rk, _, cols = _bareiss(M, n, full_pivot=True)
    if rk < n:
        raise SingularMatrixError(f"matrix is singular (rank {rk} < {n})")
    y = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        row = M[i]
        acc = Fraction(row[n])
        for j in range(i + 1, n):
            if row[j]:
                acc -= row[j] * y[j]
        y[i] = acc / row[i]
    x = [Fraction(0)] * n
    for j, orig in enumerate(cols):
        x[orig] = y[j]
    return x


# ---------------------------------------------------------------------------
# polynomials


def _monomial_str(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _render_terms(terms: Iterable[tuple[Fraction, str]]) -> str:
    out = []
    for coeff, mono in terms:
        sign = "-" if coeff < 0 else "+"
        mag = abs(coeff)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out) if out else "0"


class MultiPoly:
    """Sparse polynomial over the rationals in ``nvars`` commuting variables.

    Instances are immutable.  Zero coefficients are never stored.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        if nvars < 0:
            raise ValueError("nvars must be non-negative")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, Fraction(0)) + c
                if not clean[exps]:
                    del clean[exps]
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, nvars: int, c=1) -> "MultiPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "MultiPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "MultiPoly":
        """``const + sum(coeffs[i] * x_i)``."""
        nvars = len(coeffs)
        terms = {(0,) * nvars: const}
        for i, c in enumerate(coeffs):
            e = [0] * nvars
            e[i] = 1
            terms[tuple(e)] = c
        return cls(nvars, terms)

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def _check(self, other: "MultiPoly") -> None:
        if not isinstance(other, MultiPoly):
            raise TypeError(f"expected MultiPoly, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise DimensionMismatchError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.constant(self.nvars, as_fraction(other))

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            c = as_fraction(other)
            if not c:
                return MultiPoly(self.nvars)
            return MultiPoly._raw(self.nvars, {e: c * v for e, v in self._terms.items()})
        self._check(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, m: int) -> "MultiPoly":
        if m < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.nvars)
        for _ in range(m):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def partial(self, i: int) -> "MultiPoly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return MultiPoly._raw(self.nvars, out)

    def __call__(self, *point) -> Fraction:
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = tuple(point[0])
        if len(point) != self.nvars:
            raise DimensionMismatchError(f"expected {self.nvars} values, got {len(point)}")
        pt = [as_fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, k in zip(pt, e):
                if k:
                    term *= x**k
            total += term
        return total

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute ``subs[i]`` for variable ``i``; all ``subs`` share a variable count."""
        if len(subs) != self.nvars:
            raise DimensionMismatchError(f"expected {self.nvars} substitutions, got {len(subs)}")
        if not subs:
            return self
        m = subs[0].nvars
        for s in subs:
            if s.nvars != m:
                raise DimensionMismatchError("substitutions disagree on variable count")
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.constant(m)} for _ in subs]

        def pw(i: int, k: int) -> MultiPoly:
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k - 1) * subs[i]
            return cache[k]

        out = MultiPoly(m)
        for e, c in self._terms.items():
            term = MultiPoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    term = term * pw(i, k)
            out = out + term
        return out

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0])))

    def render(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = [f"l{i + 1}" for i in range(self.nvars)]
        return _render_terms((c, _monomial_str(e, names)) for e, c in self.sorted_terms())

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MultiPoly({self.nvars}, {self.render()!r})"


def poly_add(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p + q


def poly_mul(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    p._check(q)
    return p * q


def poly_partial(p: MultiPoly, i: int) -> MultiPoly:
    return p.partial(i)


class UniPoly:
    """Dense univariate polynomial with rational coefficients ``a_0 .. a_m``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, c=1) -> "UniPoly":
        return cls([0] * degree + [c])

    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def leading_coefficient(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coefficient(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def __call__(self, k) -> Fraction:
        k = as_fraction(k)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * k + c
        return acc

    def _lift(self, other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly([other])

    def __add__(self, other) -> "UniPoly":
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(self.coefficient(j) + other.coefficient(j) for j in range(n))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def reflect(self) -> "UniPoly":
        """The polynomial ``k -> p(-k)``."""
        return UniPoly(c if j % 2 == 0 else -c for j, c in enumerate(self.coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == UniPoly([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def render(self, var: str = "k") -> str:
        terms = []
        for j in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[j]
            if c:
                mono = "" if j == 0 else (var if j == 1 else f"{var}^{j}")
                terms.append((c, mono))
        return _render_terms(terms)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"UniPoly({self.render()!r})"


def substitute_scaled(p: MultiPoly, mu: Sequence) -> UniPoly:
    """Return ``q(k) = p(k*mu_1, ..., k*mu_d)``."""
    if len(mu) != p.nvars:
        raise DimensionMismatchError(f"offset vector has length {len(mu)}, polynomial has {p.nvars} variables")
    mu = [as_fraction(m) for m in mu]
    out: dict[int, Fraction] = {}
    for e, c in p.items():
        v = c
        for m, k in zip(mu, e):
            if k:
                v *= m**k
        deg = sum(e)
        out[deg] = out.get(deg, Fraction(0)) + v
    top = max(out, default=-1)
    return UniPoly(out.get(j, 0) for j in range(top + 1))


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= ``degree``, graded order."""
    out = []
    for deg in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out
