import random
import sys

import pytest

from crnhomeo import load_example
from crnhomeo.model import RateSymbol, Reaction, ReactionNetwork


@pytest.fixture(scope="session")
def g1():
    return load_example("g1")


@pytest.fixture(scope="session")
def g2():
    return load_example("g2")


@pytest.fixture(scope="session")
def g3():
    return load_example("g3")


@pytest.fixture(scope="session")
def enzyme():
    return load_example("enzyme")


def random_network(
    rng: random.Random, n_max=5, m_max=8, coeff_max=3, n_min=2, reversible=0.0
) -> ReactionNetwork:
    """Random integer network with distinct nontrivial reactions and valued rates.

    With probability ``reversible`` a drawn reaction also gets its reverse,
    tagged as a pair.
    """
    n = rng.randint(n_min, n_max)
    m = rng.randint(1, m_max)

    def cplx():
        return tuple(rng.randint(0, coeff_max) if rng.random() < 0.45 else 0 for _ in range(n))

    seen = set()
    reactions = []
    tries = 0
    while len(reactions) < m and tries < 200:
        tries += 1
        s, t = cplx(), cplx()
        if s == t or (s, t) in seen:
            continue
        seen.add((s, t))
        tag = None
        if (t, s) not in seen and len(reactions) + 1 < m and rng.random() < reversible:
            seen.add((t, s))
            tag = len(reactions)
            reactions.append(Reaction(t, s, _rate(rng, len(reactions)), tag))
        reactions.append(Reaction(s, t, _rate(rng, len(reactions)), tag))
    return ReactionNetwork(tuple(f"X{i + 1}" for i in range(n)), tuple(reactions))


def _rate(rng, j):
    return RateSymbol(f"k{j + 1}", round(rng.uniform(0.5, 2.0), 3))


def random_point(rng: random.Random, n: int, lo=0.5, hi=2.0):
    return [rng.uniform(lo, hi) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(20240613)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
