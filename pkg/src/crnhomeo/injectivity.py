"""Injectivity by exhaustive enumeration of n-reaction subsets.

For every set ``S`` of ``n`` reactions we compute ``det(Y_S)`` (source
vectors as columns) and ``det(Y_S - Y'_S)``.  The network is injective iff
the nonzero products all share one sign and at least one exists.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import CapacityError
from .exact import bareiss_det
from .massaction import build_jacobian, rate_assignment
from .model import ReactionNetwork, monomial

DEFAULT_SUBSET_CAP = 2_000_000


class InjectivityVerdict(str, enum.Enum):
    INJECTIVE = "INJECTIVE"
    NOT_INJECTIVE_SIGN_CONFLICT = "NOT_INJECTIVE_SIGN_CONFLICT"
    DEGENERATE_ALL_ZERO = "DEGENERATE_ALL_ZERO"


@dataclass(frozen=True)
class SubsetProduct:
    """One n-subset of reactions with its two exact determinants.

    ``det_diff`` uses the source-minus-target convention.  The
    target-minus-source product is ``reaction_vector_product``.
    """

    subset: tuple[int, ...]
    det_source: int
    det_diff: int

    @property
    def product(self) -> int:
        return self.det_source * self.det_diff

    @property
    def reaction_vector_product(self) -> int:
        return (-1) ** len(self.subset) * self.product

    def to_json(self, net: Optional[ReactionNetwork] = None) -> dict:
        d = {
            "subset": list(self.subset),
            "det_source": self.det_source,
            "det_diff": self.det_diff,
            "product": self.product,
            "reaction_vector_product": self.reaction_vector_product,
        }
        if net is not None:
            d["reactions"] = [net.format_reaction(j) for j in self.subset]
        return d


@dataclass
class InjectivityReport:
    verdict: InjectivityVerdict
    witnesses: list[SubsetProduct]
    positive: int
    negative: int
    zero: int
    products: list[SubsetProduct] = field(default_factory=list, repr=False)

    @property
    def total(self) -> int:
        return self.positive + self.negative + self.zero

    @property
    def injective(self) -> bool:
        return self.verdict is InjectivityVerdict.INJECTIVE

    def to_json(self, net=None, full: bool = False) -> dict:
        d = {
            "verdict": self.verdict.value,
            "counts": {
                "positive": self.positive,
                "negative": self.negative,
                "zero": self.zero,
                "total": self.total,
            },
            "witnesses": [w.to_json(net) for w in self.witnesses],
        }
        if full:
            d["products"] = [p.to_json() for p in self.products]
        return d


def _subset_product(sources, diffs, subset) -> SubsetProduct:
    ys = [sources[j] for j in subset]
    ds = [diffs[j] for j in subset]
    # columns are reactions; det is transpose-invariant so rows work too
    det_s = bareiss_det(ys)
    return SubsetProduct(tuple(subset), det_s, bareiss_det(ds))


def subset_products(
    net: ReactionNetwork, cap: int = DEFAULT_SUBSET_CAP
) -> list[SubsetProduct]:
    """Exact determinant data for every n-subset, in lexicographic order."""
    n, m = net.n_species, net.n_reactions
    if m < n:
        return []
    total = math.comb(m, n)
    if total > cap:
        raise CapacityError(f"{total} reaction subsets exceed the cap of {cap}")
    sources = [r.source for r in net.reactions]
    diffs = [tuple(s - t for s, t in zip(r.source, r.target)) for r in net.reactions]
    return [_subset_product(sources, diffs, s) for s in combinations(range(m), n)]


def verdict_from_products(products: Sequence[SubsetProduct]) -> InjectivityReport:
    pos = [p for p in products if p.product > 0]
    neg = [p for p in products if p.product < 0]
    zero = len(products) - len(pos) - len(neg)
    if pos and neg:
        verdict = InjectivityVerdict.NOT_INJECTIVE_SIGN_CONFLICT
        witnesses = [pos[0], neg[0]]
    elif pos or neg:
        verdict = InjectivityVerdict.INJECTIVE
        witnesses = [(pos or neg)[0]]
    else:
        verdict = InjectivityVerdict.DEGENERATE_ALL_ZERO
        witnesses = []
    return InjectivityReport(verdict, witnesses, len(pos), len(neg), zero, list(products))


def injectivity_verdict(
    net: ReactionNetwork, cap: int = DEFAULT_SUBSET_CAP
) -> InjectivityReport:
    return verdict_from_products(subset_products(net, cap))


def _fraction_det(a: list[list[Fraction]]) -> Fraction:
    n = len(a)
    a = [row[:] for row in a]
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if a[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            a[i], a[piv] = a[piv], a[i]
            det = -det
        det *= a[i][i]
        for r in range(i + 1, n):
            f = a[r][i] / a[i][i]
            if f:
                for c in range(i, n):
                    a[r][c] -= f * a[i][c]
    return det


def _exact_jacobian(net: ReactionNetwork, x: Sequence[Fraction], kv: Sequence[Fraction]):
    n = net.n_species
    jac = [[Fraction(0)] * n for _ in range(n)]
    for kr, r in zip(kv, net.reactions):
        vec = r.vector
        for j, yj in enumerate(r.source):
            if not yj:
                continue
            e = list(r.source)
            e[j] -= 1
            d = kr * yj * math.prod(xi**p for xi, p in zip(x, e))
            for i, vi in enumerate(vec):
                if vi:
                    jac[i][j] += vi * d
    return jac


def cauchy_binet_residual(
    net: ReactionNetwork,
    x: Sequence[float],
    k: Optional[Mapping[str, float]] = None,
    default: Optional[float] = None,
    products: Optional[Sequence[SubsetProduct]] = None,
    exact: bool = True,
) -> float:
    """Relative mismatch between ``det J(x,k) * prod(x)`` and its subset expansion.

    The expansion is ``sum_S det(Y_S) det(Y'_S - Y_S) prod_{r in S} k_r x^{y_r}``.
    By default the Jacobian is evaluated at the given floats in exact rational
    arithmetic, so the result is free of cancellation error; with
    ``exact=False`` the left side is a numpy LU determinant instead.
    """
    if any(not v > 0 for v in x):
        raise ValueError("x must be strictly positive")
    rates = rate_assignment(net, k, default=default)
    if products is None:
        products = subset_products(net)
    nonzero = [p for p in products if p.product]
    if exact:
        xf = [Fraction(v) for v in x]
        kv = [Fraction(rates[r.rate.name]) for r in net.reactions]
        flux = [kr * math.prod(xi**p for xi, p in zip(xf, r.source)) for kr, r in zip(kv, net.reactions)]
        lhs = _fraction_det(_exact_jacobian(net, xf, kv)) * math.prod(xf)
        rhs = sum(
            (p.reaction_vector_product * math.prod(flux[j] for j in p.subset) for p in nonzero),
            Fraction(0),
        )
        return float(abs(lhs - rhs) / (1 + abs(lhs)))
    jac = build_jacobian(net).evaluate(x, rates)
    lhs = float(np.linalg.det(jac)) * math.prod(x) if net.n_species else 1.0
    kv = [rates[r.rate.name] for r in net.reactions]
    flux = [kr * monomial(x, r.source) for kr, r in zip(kv, net.reactions)]
    rhs = math.fsum(
        p.reaction_vector_product * math.prod(flux[j] for j in p.subset) for p in nonzero
    )
    return abs(lhs - rhs) / (1.0 + abs(lhs))
