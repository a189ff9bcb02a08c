import math
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_network, random_point
from crnhomeo.errors import CapacityError
from crnhomeo.homeostasis import associated_network
from crnhomeo.injectivity import (
    InjectivityVerdict,
    SubsetProduct,
    cauchy_binet_residual,
    injectivity_verdict,
    subset_products,
)
from crnhomeo.massaction import build_jacobian, rate_assignment
from crnhomeo.parser import parse_network


def product_for(net, reactions):
    labels = [net.format_reaction(j) for j in range(net.n_reactions)]
    subset = tuple(sorted(labels.index(r) for r in reactions))
    return next(p for p in subset_products(net) if p.subset == subset)


def test_g1_witness_subset(g1):
    assoc = associated_network(g1)
    p = product_for(assoc, ["X1 + X2 -> X1", "X2 + X3 -> 0", "X3 + X4 -> 0", "X4 -> X1"])
    assert p.det_source == 1 and p.det_diff == 1 and p.product == 1
    rep = injectivity_verdict(assoc)
    assert rep.verdict is InjectivityVerdict.INJECTIVE
    assert rep.witnesses == [p]


def test_enzyme_subset(enzyme):
    p = product_for(enzyme, ["E + S -> ES", "ES -> E + P", "E -> 0", "P -> 0"])
    assert abs(p.det_source) == 1 and abs(p.det_diff) == 1
    assert p.reaction_vector_product == 1
    assert injectivity_verdict(enzyme).verdict is InjectivityVerdict.INJECTIVE


def test_g3_associated_is_degenerate(g3):
    rep = injectivity_verdict(associated_network(g3))
    assert rep.verdict is InjectivityVerdict.DEGENERATE_ALL_ZERO
    assert rep.total == math.comb(5, 3) and rep.zero == rep.total
    assert rep.witnesses == []


def test_one_species_sign_conflict():
    net = parse_network("2X1 -> 3X1\n2X1 -> X1")
    products = sorted(p.product for p in subset_products(net))
    assert products == [-2, 2]
    rep = injectivity_verdict(net)
    assert rep.verdict is InjectivityVerdict.NOT_INJECTIVE_SIGN_CONFLICT
    assert len(rep.witnesses) == 2


def test_cap_is_enforced(g1):
    with pytest.raises(CapacityError):
        subset_products(g1, cap=10)


def test_fewer_reactions_than_species():
    net = parse_network("species: A B C\nA -> B")
    rep = injectivity_verdict(net)
    assert rep.total == 0 and rep.verdict is InjectivityVerdict.DEGENERATE_ALL_ZERO


def test_cauchy_binet_on_examples(g2, g3):
    assert cauchy_binet_residual(g2, [1, 1, 1], default=1.0) <= 1e-9
    assoc = associated_network(g3)
    rng = random.Random(5)
    x = random_point(rng, 3)
    rates = {name: rng.uniform(0.5, 2) for name in assoc.rate_names()}
    jac = build_jacobian(assoc).evaluate(x, rate_assignment(assoc, rates))
    assert abs(np.linalg.det(jac)) <= 1e-12
    assert cauchy_binet_residual(assoc, x, rates) <= 1e-12


def test_g2_lhs_matches_brute_force(g2):
    # J at x = (1,1,1), unit rates, zeta = 1, from the hand-derived field
    jac = np.array([[-5.0, 2.0, 0.0], [2.0, -1.0, 0.0], [1.0, -1.0, -1.0]])
    want = jac[0, 0] * (jac[1, 1] * jac[2, 2]) - jac[0, 1] * (jac[1, 0] * jac[2, 2])
    got = np.linalg.det(build_jacobian(g2).evaluate([1, 1, 1], rate_assignment(g2, zeta=1.0, default=1.0)))
    assert got == pytest.approx(want, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_cauchy_binet_identity(seed):
    rng = random.Random(seed)
    net = random_network(rng)
    x = random_point(rng, net.n_species)
    assert cauchy_binet_residual(net, x) <= 1e-9


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_reaction_order_does_not_matter(seed):
    rng = random.Random(seed)
    net = random_network(rng)
    shuffled = list(net.reactions)
    rng.shuffle(shuffled)
    other = net.with_reactions(shuffled)
    a, b = injectivity_verdict(net), injectivity_verdict(other)
    assert a.verdict == b.verdict
    assert Counter(p.product for p in a.products) == Counter(p.product for p in b.products)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_sign_convention_flip(seed):
    net = random_network(random.Random(seed))
    n = net.n_species
    for p in subset_products(net):
        assert p.reaction_vector_product == (p.product if n % 2 == 0 else -p.product)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_injective_networks_have_sign_definite_jacobian(seed):
    rng = random.Random(seed)
    net = random_network(rng)
    if not injectivity_verdict(net).injective:
        return
    jac = build_jacobian(net)
    signs = set()
    for _ in range(100):
        x = random_point(rng, net.n_species, 0.1, 10.0)
        rates = {name: rng.uniform(0.1, 10.0) for name in net.rate_names()}
        d = np.linalg.det(jac.evaluate(x, rates))
        assert abs(d) > 1e-12
        signs.add(d > 0)
    assert len(signs) == 1


def test_reversible_pair_matches_split_form(enzyme):
    split = parse_network(
        "species: E S ES P\nE + S -> ES\nES -> E + S\nES -> E + P\nP -> S\nE -> 0\nP -> 0"
    )
    assert Counter(p.product for p in subset_products(split)) == Counter(
        p.product for p in subset_products(enzyme)
    )


def test_residual_detects_a_wrong_expansion(g2):
    products = subset_products(g2)
    tampered = [SubsetProduct(p.subset, p.det_source, -p.det_diff) for p in products]
    x = [0.7, 1.3, 0.9]
    assert cauchy_binet_residual(g2, x, default=1.0, products=products) == 0.0
    assert cauchy_binet_residual(g2, x, default=1.0, products=tampered) > 1e-3


def test_lu_route_agrees_on_well_scaled_input(g2):
    assert cauchy_binet_residual(g2, [1, 1, 1], default=1.0, exact=False) <= 1e-12
