import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_network
from crnhomeo.errors import NetworkError
from crnhomeo.homeostasis import associated_network
from crnhomeo.model import (
    RateSymbol,
    Reaction,
    ReactionNetwork,
    is_complex_balanced,
    permute_species,
    resolve_rate,
    stoich_subspace_dim,
    stoichiometric_matrix,
)
from crnhomeo.parser import parse_network


def column(net, text):
    j = [net.format_reaction(i) for i in range(net.n_reactions)].index(text)
    return [row[j] for row in stoichiometric_matrix(net)]


def two_species(k1, k2):
    return ReactionNetwork(
        ("X1", "X2"),
        (
            Reaction((1, 0), (0, 1), RateSymbol("a", k1)),
            Reaction((0, 1), (1, 0), RateSymbol("b", k2)),
        ),
    )


def test_stoichiometric_columns(g1, g3):
    assert column(g3, "X1 + X3 -> X2") == [-1, 1, -1]
    assert column(g1, "X4 -> X1") == [1, 0, 0, -1]


def test_trivial_reaction_rejected():
    with pytest.raises(NetworkError):
        Reaction((1, 0), (1, 0), RateSymbol("k"))


def test_subspace_dimensions(g2, g3):
    assert stoich_subspace_dim(g2) == 3
    assert stoich_subspace_dim(two_species(1, 1)) == 1
    # every 3-subset product of the associated G3 vanishes, yet its reaction
    # vectors span all of Q^3: (0,1,-1), (1,0,-1), (0,0,1)
    assert stoich_subspace_dim(associated_network(g3)) == 3


def test_complex_balance():
    assert is_complex_balanced(two_species(1, 1), {}, [1, 1])
    assert not is_complex_balanced(two_species(2, 1), {}, [1, 1])
    assert is_complex_balanced(two_species(2, 1), {}, [1, 2])


def test_complex_balance_domain_errors():
    with pytest.raises(ValueError):
        is_complex_balanced(two_species(1, 1), {}, [0, 1])
    with pytest.raises(NetworkError):
        two_species(-1, 1)


def test_duplicates_merge_by_summing_rates():
    net = ReactionNetwork(
        ("A", "B"),
        (
            Reaction((1, 0), (0, 1), RateSymbol("k1", 1.5)),
            Reaction((1, 0), (0, 1), RateSymbol("k2", 2.0)),
        ),
    )
    assert net.n_reactions == 1
    rate = net.reactions[0].rate
    assert rate.name == "k1+k2" and rate.value == 3.5
    symbolic = ReactionNetwork(
        ("A", "B"),
        (Reaction((1, 0), (0, 1), RateSymbol("k1")), Reaction((1, 0), (0, 1), RateSymbol("k2"))),
    )
    assert resolve_rate(symbolic.reactions[0].rate, {"k1": 1, "k2": 4}) == 5


def test_network_invariants():
    with pytest.raises(NetworkError):
        ReactionNetwork(("A", "A"))
    with pytest.raises(NetworkError):
        ReactionNetwork(("A", "B"), (), 1, 1)
    with pytest.raises(NetworkError):
        ReactionNetwork(tuple(f"S{i}" for i in range(65)))
    with pytest.raises(NetworkError):
        ReactionNetwork(
            ("A", "B"),
            (
                Reaction((1, 0), (0, 1), RateSymbol("zeta", is_input=True)),
                Reaction((0, 1), (1, 0), RateSymbol("zeta2", is_input=True)),
            ),
        )


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_rank_bounds_and_monotonicity(seed):
    rng = random.Random(seed)
    net = random_network(rng)
    d = stoich_subspace_dim(net)
    assert d <= min(net.n_species, net.n_reactions)
    extra = random_network(random.Random(seed + 1), n_min=net.n_species, n_max=net.n_species)
    existing = {(r.source, r.target) for r in net.reactions}
    added = [r for r in extra.reactions if (r.source, r.target) not in existing]
    if added:
        r = added[0]
        bigger = net.with_reactions(net.reactions + (Reaction(r.source, r.target, RateSymbol("knew")),))
        assert stoich_subspace_dim(bigger) >= d


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_stoichiometric_matrix_permutation_equivariant(seed):
    rng = random.Random(seed)
    net = random_network(rng)
    order = list(range(net.n_species))
    rng.shuffle(order)
    a = stoichiometric_matrix(net)
    b = stoichiometric_matrix(permute_species(net, order))
    assert b == [a[o] for o in order]


def test_species_ids(g1):
    ids = g1.species_ids
    assert [i.index for i in ids] == [0, 1, 2, 3]
    assert g1.input_species.name == "X1" and g1.output_species.name == "X4"


def test_round_trip_with_parser(g2):
    from crnhomeo.parser import format_network

    assert parse_network(format_network(g2)) == g2
