import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_network
from crnhomeo import EXAMPLES, example_text, load_example
from crnhomeo.errors import ParseError
from crnhomeo.homeostasis import associated_network
from crnhomeo.parser import canonicalize, format_network, parse_network, read_network


def reaction_lines(text):
    return [ln for ln in text.splitlines() if "->" in ln]


def test_g1_counts(g1):
    assert g1.n_species == 4
    assert g1.n_reactions == 12
    # reversible pairs share one printed line
    assert len(reaction_lines(format_network(g1))) == 8


def test_associated_g2_counts(g2):
    assoc = associated_network(g2)
    assert assoc.n_reactions == 7
    assert len(reaction_lines(format_network(assoc))) == 6


def test_zeta_flag(g1):
    j = g1.input_reaction()
    r = g1.reactions[j]
    assert r.rate.name == "zeta" and r.rate.is_input
    assert r.source == (0, 0, 0, 0) and r.target == (1, 0, 0, 0)


def test_complex_forms():
    net = parse_network("2A + B -> ∅ ; k=2.5\n0 -> 3C ; 4")
    assert net.species == ("A", "B", "C")
    rx = {net.format_reaction(j): net.reactions[j].rate for j in range(2)}
    assert rx["2A + B -> 0"].value == 2.5
    assert rx["0 -> 3C"].value == 4.0


def test_headers_select_input_and_output():
    net = parse_network("species: A B C\ninput: B\noutput: A\nA -> B\nB -> C")
    assert net.input_species.name == "B" and net.output_species.name == "A"


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("A -> B ; k1\nA -> B ; k2", 2, 1),
        ("A -> A", 1, 1),
        ("A -> B ; zeta\nB -> A ; zeta", 2, 1),
        ("species: A B\nA -> C", 2, 1),
        ("A -> B ; k1 = ", 1, 9),
        ("A => B", 1, 1),
        ("\n\n2 -> B", 3, 1),
    ],
)
def test_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert info.value.line == line and info.value.column == column
    assert str(info.value).startswith(f"line {line}, column {column}: ")


@pytest.mark.parametrize("name", EXAMPLES)
def test_examples_round_trip(name):
    net = load_example(name)
    assert parse_network(format_network(net)) == net
    assert parse_network(example_text(name)) == net


def test_read_network(tmp_path):
    path = tmp_path / "net.crn"
    path.write_text(example_text("g3"), encoding="utf-8")
    assert read_network(path) == load_example("g3")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_random_round_trip(seed):
    net = random_network(random.Random(seed))
    back = parse_network(format_network(net))
    assert back.species == net.species
    assert {(r.source, r.target, r.rate) for r in back.reactions} == {
        (r.source, r.target, r.rate) for r in net.reactions
    }
    assert canonicalize(back) == back
    assert parse_network(format_network(back)) == back


def test_reaction_order_is_canonical():
    a = parse_network("species: A B C\nA -> B\nB -> C\nC -> A")
    b = parse_network("species: A B C\nC -> A\nA -> B\nB -> C")
    assert [(r.source, r.target) for r in a.reactions] == [(r.source, r.target) for r in b.reactions]


def test_default_rate_names_avoid_explicit_ones():
    net = parse_network("species: A B\n0 -> A ; k1\nA -> B\nB -> 0")
    assert len(set(net.rate_names())) == 3
