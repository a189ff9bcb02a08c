"""Sparse polynomials in concentrations and rate symbols, exact coefficients.

A term is keyed by ``(rate_exponents, conc_exponents)`` where
``rate_exponents`` is a name-sorted tuple of ``(name, power)`` pairs and
``conc_exponents`` is a length-n tuple.  Coefficients are Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import UnboundRateError

RateKey = tuple[tuple[str, int], ...]
ConcKey = tuple[int, ...]
TermKey = tuple[RateKey, ConcKey]


@dataclass(frozen=True)
class Monomial:
    coefficient: Fraction
    rate_exponents: RateKey
    conc_exponents: ConcKey


def _mul_rate_keys(a: RateKey, b: RateKey) -> RateKey:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        d[name] = d.get(name, 0) + e
    return tuple(sorted(d.items()))


class SparsePolynomial:
    """Immutable polynomial over Q in ``nvars`` concentrations and named rates."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[TermKey, Fraction]] = None):
        self.nvars = nvars
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                if len(key[1]) != nvars:
                    raise ValueError("exponent vector has the wrong length")
                clean[key] = c
        self._terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "SparsePolynomial":
        return cls(nvars, {((), (0,) * nvars): Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, j: int) -> "SparsePolynomial":
        e = [0] * nvars
        e[j] = 1
        return cls(nvars, {((), tuple(e)): Fraction(1)})

    @classmethod
    def rate(cls, nvars: int, name: str) -> "SparsePolynomial":
        return cls(nvars, {(((name, 1),), (0,) * nvars): Fraction(1)})

    @classmethod
    def term(cls, nvars: int, coef, rates: Mapping[str, int], conc: Sequence[int]):
        key = (tuple(sorted((k, v) for k, v in rates.items() if v)), tuple(conc))
        return cls(nvars, {key: Fraction(coef)})

    @property
    def terms(self) -> dict[TermKey, Fraction]:
        return dict(self._terms)

    @property
    def monomials(self) -> list[Monomial]:
        return [Monomial(c, r, x) for (r, x), c in sorted(self._terms.items())]

    def is_zero(self) -> bool:
        return not self._terms

    def rate_symbols(self) -> set[str]:
        return {name for (r, _), _c in self._terms.items() for name, _e in r}

    def _check(self, other: "SparsePolynomial"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in different variable sets")

    def _coerce(self, other) -> "SparsePolynomial":
        if isinstance(other, SparsePolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePolynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return SparsePolynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePolynomial(self.nvars, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[TermKey, Fraction] = {}
        for (ra, xa), ca in self._terms.items():
            for (rb, xb), cb in other._terms.items():
                key = (_mul_rate_keys(ra, rb), tuple(p + q for p, q in zip(xa, xb)))
                out[key] = out.get(key, 0) + ca * cb
        return SparsePolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePolynomial.constant(self.nvars, other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def diff(self, j: int) -> "SparsePolynomial":
        """Formal partial derivative with respect to concentration ``j``."""
        out = {}
        for (r, x), c in self._terms.items():
            if x[j]:
                e = list(x)
                e[j] -= 1
                out[(r, tuple(e))] = c * x[j]
        return SparsePolynomial(self.nvars, out)

    def substitute_rates(self, values: Mapping[str, object]) -> "SparsePolynomial":
        """Replace the named rate symbols by exact numbers (ints or Fractions)."""
        out: dict[TermKey, Fraction] = {}
        for (r, x), c in self._terms.items():
            kept = []
            for name, e in r:
                if name in values:
                    c = c * Fraction(values[name]) ** e
                else:
                    kept.append((name, e))
            key = (tuple(kept), x)
            out[key] = out.get(key, 0) + c
        return SparsePolynomial(self.nvars, out)

    def evaluate(
        self,
        x: Sequence[float],
        rates: Optional[Mapping[str, float]] = None,
        default: Optional[float] = None,
    ) -> float:
        """Float value at ``x``; the monomial sum is compensated (math.fsum)."""
        rates = rates or {}
        vals = []
        for (r, e), c in self._terms.items():
            v = float(c)
            for name, p in r:
                v *= _lookup(name, rates, default) ** p
            for xi, p in zip(x, e):
                if p:
                    v *= xi**p
            vals.append(v)
        return math.fsum(vals)

    def format(self, names: Optional[Sequence[str]] = None) -> str:
        names = list(names) if names else [f"x{i + 1}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for (r, x), c in sorted(self._terms.items(), key=_display_key):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in r]
            factors += [
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(x) if e
            ]
            mag = abs(c)
            if factors:
                body = "*".join(factors)
                text = body if mag == 1 else f"{mag}*{body}"
            else:
                text = str(mag)
            parts.append(("-" if c < 0 else "+", text))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, text in parts[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self):
        return f"SparsePolynomial({self.format()})"

    def to_json(self) -> list[dict]:
        return [
            {
                "coefficient": str(m.coefficient),
                "rates": {n: e for n, e in m.rate_exponents},
                "exponents": list(m.conc_exponents),
            }
            for m in self.monomials
        ]


def _display_key(item):
    (r, x), _c = item
    return (sum(x) + sum(e for _, e in r), tuple(-e for e in x), r)


def _lookup(name: str, rates: Mapping[str, float], default: Optional[float]) -> float:
    if name in rates:
        return float(rates[name])
    parts = name.split("+")
    if len(parts) > 1:
        return math.fsum(_lookup(p, rates, default) for p in parts)
    if default is not None:
        return float(default)
    raise UnboundRateError(name)


class PolyMatrix:
    """Dense matrix of SparsePolynomial entries."""

    def __init__(self, entries: Iterable[Iterable[SparsePolynomial]]):
        self.entries = tuple(tuple(row) for row in entries)
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.entries), len(self.entries[0]) if self.entries else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, PolyMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows])

    def substitute_rates(self, values) -> "PolyMatrix":
        return PolyMatrix([[p.substitute_rates(values) for p in row] for row in self.entries])

    def evaluate(self, x, rates=None, default=None) -> np.ndarray:
        rows, cols = self.shape
        out = np.empty((rows, cols))
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.entries[i][j].evaluate(x, rates, default)
        return out

    def det(self) -> SparsePolynomial:
        """Symbolic determinant by Laplace expansion over column subsets.

        Cost grows like ``n * 2**n`` polynomial products; intended for the
        small minors this package inspects.
        """
        n, m = self.shape
        if n != m:
            raise ValueError("determinant of a non-square matrix")
        if n == 0:
            raise ValueError("empty matrix")
        nvars = self.entries[0][0].nvars
        if n > 12:
            raise ValueError("symbolic determinant limited to 12 x 12")
        entries = self.entries

        @lru_cache(maxsize=None)
        def minor(row: int, cols: tuple[int, ...]) -> SparsePolynomial:
            # determinant of rows row..n-1 restricted to cols
            if row == n - 1:
                return entries[row][cols[0]]
            total = SparsePolynomial(nvars)
            for pos, c in enumerate(cols):
                a = entries[row][c]
                if a.is_zero():
                    continue
                rest = cols[:pos] + cols[pos + 1 :]
                term = a * minor(row + 1, rest)
                total = total + term if pos % 2 == 0 else total - term
            return total

        return minor(0, tuple(range(n)))

    def format(self, names=None) -> list[list[str]]:
        return [[p.format(names) for p in row] for row in self.entries]
