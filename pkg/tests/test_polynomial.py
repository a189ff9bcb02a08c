import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crnhomeo.errors import UnboundRateError
from crnhomeo.polynomial import PolyMatrix, SparsePolynomial

N = 3


def random_poly(rng, nterms=4, deg=2):
    p = SparsePolynomial(N)
    for _ in range(nterms):
        rates = {f"k{rng.randint(1, 3)}": rng.randint(1, 2)} if rng.random() < 0.5 else {}
        conc = [rng.randint(0, deg) for _ in range(N)]
        p = p + SparsePolynomial.term(N, Fraction(rng.randint(-5, 5), rng.randint(1, 3)), rates, conc)
    return p


RATES = {"k1": 0.7, "k2": 1.3, "k3": 2.1}


@settings(max_examples=200)
@given(st.integers(0, 10**6))
def test_ring_operations_commute_with_evaluation(seed):
    rng = random.Random(seed)
    p, q = random_poly(rng), random_poly(rng)
    x = [rng.uniform(0.5, 2) for _ in range(N)]
    pv, qv = p.evaluate(x, RATES), q.evaluate(x, RATES)
    assert (p + q).evaluate(x, RATES) == pytest.approx(pv + qv, rel=1e-12, abs=1e-12)
    assert (p - q).evaluate(x, RATES) == pytest.approx(pv - qv, rel=1e-12, abs=1e-12)
    assert (p * q).evaluate(x, RATES) == pytest.approx(pv * qv, rel=1e-12, abs=1e-12)
    assert p * q == q * p
    assert (p - p).is_zero()


@settings(max_examples=100)
@given(st.integers(0, 10**6))
def test_diff_matches_central_difference(seed):
    rng = random.Random(seed)
    p = random_poly(rng)
    x = [rng.uniform(0.5, 2) for _ in range(N)]
    for j in range(N):
        h = 1e-6
        xp, xm = list(x), list(x)
        xp[j] += h
        xm[j] -= h
        fd = (p.evaluate(xp, RATES) - p.evaluate(xm, RATES)) / (2 * h)
        assert p.diff(j).evaluate(x, RATES) == pytest.approx(fd, rel=1e-6, abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_symbolic_det_matches_numeric(seed, size):
    rng = random.Random(seed)
    m = PolyMatrix([[random_poly(rng, nterms=2, deg=1) for _ in range(size)] for _ in range(size)])
    x = [rng.uniform(0.5, 2) for _ in range(N)]
    want = np.linalg.det(m.evaluate(x, RATES))
    got = m.det().evaluate(x, RATES)
    assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


def test_exact_coefficients_and_substitution():
    x1 = SparsePolynomial.variable(2, 0)
    k = SparsePolynomial.rate(2, "k")
    p = Fraction(1, 3) * k * x1 + Fraction(2, 3) * k * x1
    assert p == k * x1
    assert p.substitute_rates({"k": Fraction(3, 2)}) == SparsePolynomial.constant(2, Fraction(3, 2)) * x1
    assert p.rate_symbols() == {"k"}


def test_merged_rate_names_evaluate_as_sums():
    p = SparsePolynomial.rate(1, "k4+k12")
    assert p.evaluate([1.0], {"k4": 2.0, "k12": 0.5}) == 2.5
    with pytest.raises(UnboundRateError):
        p.evaluate([1.0], {"k4": 2.0})
    assert p.evaluate([1.0], {}, default=1.0) == 2.0


def test_format_is_canonical():
    x1, x3 = SparsePolynomial.variable(3, 0), SparsePolynomial.variable(3, 2)
    p = x3 - 2 * x1 * x3
    assert p.format(["X1", "X2", "X3"]) == "X3 - 2*X1*X3"
    assert (x3 - x1 * x3 * 2) == p
    assert SparsePolynomial(3).format() == "0"
