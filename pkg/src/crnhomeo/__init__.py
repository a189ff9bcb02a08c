"""Structural and numerical homeostasis analysis for mass-action reaction networks."""

from importlib import resources

__version__ = "0.1.0"

from .model import RateSymbol, Reaction, ReactionNetwork  # noqa: E402
from .parser import format_network, parse_network  # noqa: E402

EXAMPLES = ("enzyme", "g1", "g2", "g3")


def example_text(name: str) -> str:
    return resources.files(__package__).joinpath("data", f"{name}.crn").read_text("utf-8")


def load_example(name: str) -> ReactionNetwork:
    """One of the bundled networks: ``enzyme``, ``g1``, ``g2`` or ``g3``."""
    if name not in EXAMPLES:
        raise KeyError(f"no bundled network {name!r}; choose from {EXAMPLES}")
    return parse_network(example_text(name))


__all__ = [
    "RateSymbol",
    "Reaction",
    "ReactionNetwork",
    "format_network",
    "parse_network",
    "load_example",
    "example_text",
    "EXAMPLES",
]
