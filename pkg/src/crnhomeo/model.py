"""Reaction networks as Euclidean embedded graphs.

A network is a list of named species and a list of irreversible reactions
``source -> target`` whose complexes are vectors of nonnegative integer
stoichiometric coefficients.  Reversible reactions are stored as two
reactions sharing a ``pair`` tag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, NamedTuple, Optional, Sequence

from .errors import NetworkError, UnboundRateError
from .exact import rational_rank

MAX_SPECIES = 64

Complex = tuple[int, ...]


class SpeciesId(NamedTuple):
    index: int
    name: str


@dataclass(frozen=True)
class RateSymbol:
    """Symbolic rate constant, optionally carrying a value.

    A name of the form ``a+b`` denotes the sum of the rates ``a`` and ``b``;
    such names are produced when duplicate reactions are merged.
    """

    name: str
    value: Optional[float] = None
    is_input: bool = False

    def __post_init__(self):
        if not self.name:
            raise NetworkError("rate symbol needs a name")
        if self.value is not None and not self.value > 0:
            raise NetworkError(f"rate {self.name} must be positive, got {self.value}")

    @property
    def parts(self) -> tuple[str, ...]:
        return tuple(self.name.split("+"))


@dataclass(frozen=True)
class Reaction:
    source: Complex
    target: Complex
    rate: RateSymbol
    pair: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(int(c) for c in self.source))
        object.__setattr__(self, "target", tuple(int(c) for c in self.target))
        if len(self.source) != len(self.target):
            raise NetworkError("source and target have different lengths")
        if any(c < 0 for c in self.source + self.target):
            raise NetworkError("stoichiometric coefficients must be nonnegative")
        if self.source == self.target:
            raise NetworkError("trivial reaction: source equals target")

    @property
    def vector(self) -> tuple[int, ...]:
        """Net stoichiometric vector ``target - source``."""
        return tuple(t - s for s, t in zip(self.source, self.target))


def merge_rates(rates: Sequence[RateSymbol]) -> RateSymbol:
    """Rate of a reaction obtained by merging duplicates: the sum."""
    if len(rates) == 1:
        return rates[0]
    parts: list[str] = []
    for r in rates:
        parts.extend(p for p in r.parts if p not in parts)
    values = [r.value for r in rates]
    value = math.fsum(values) if all(v is not None for v in values) else None
    return RateSymbol("+".join(parts), value, any(r.is_input for r in rates))


@dataclass(frozen=True)
class ReactionNetwork:
    """Species plus reactions, with designated input and output species.

    Construction merges duplicate ``(source, target)`` pairs by summing
    their rates and drops ``pair`` tags that no longer join two mutually
    reverse reactions.
    """

    species: tuple[str, ...]
    reactions: tuple[Reaction, ...] = ()
    input_index: int = 0
    output_index: int = -1
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        species = tuple(self.species)
        n = len(species)
        if n == 0:
            raise NetworkError("a network needs at least one species")
        if n > MAX_SPECIES:
            raise NetworkError(f"at most {MAX_SPECIES} species are supported")
        if len(set(species)) != n or not all(species):
            raise NetworkError("species names must be unique and nonempty")
        inp = self.input_index % n
        out = self.output_index % n
        if n >= 2 and inp == out:
            raise NetworkError("input and output species must differ")
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "input_index", inp)
        object.__setattr__(self, "output_index", out)

        reactions = _merge_duplicates(self.reactions)
        for r in reactions:
            if len(r.source) != n:
                raise NetworkError(
                    f"complex length {len(r.source)} does not match {n} species"
                )
        reactions = _normalize_pairs(reactions)
        names = [r.rate.name for r in reactions]
        if len(set(names)) != len(names):
            dup = next(x for x in names if names.count(x) > 1)
            raise NetworkError(f"rate symbol {dup!r} used by more than one reaction")
        if sum(r.rate.is_input for r in reactions) > 1:
            raise NetworkError("at most one rate may be flagged as the input parameter")
        object.__setattr__(self, "reactions", reactions)

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    @property
    def species_ids(self) -> list[SpeciesId]:
        return [SpeciesId(i, s) for i, s in enumerate(self.species)]

    @property
    def input_species(self) -> SpeciesId:
        return SpeciesId(self.input_index, self.species[self.input_index])

    @property
    def output_species(self) -> SpeciesId:
        return SpeciesId(self.output_index, self.species[self.output_index])

    def index(self, name: str) -> int:
        try:
            return self.species.index(name)
        except ValueError:
            raise NetworkError(f"unknown species {name!r}") from None

    def input_reaction(self) -> Optional[int]:
        """Index of the reaction whose rate is flagged as the input parameter."""
        for j, r in enumerate(self.reactions):
            if r.rate.is_input:
                return j
        return None

    def with_reactions(self, reactions: Sequence[Reaction]) -> "ReactionNetwork":
        return replace(self, reactions=tuple(reactions))

    def rate_names(self) -> list[str]:
        return [r.rate.name for r in self.reactions]

    def complexes(self) -> list[Complex]:
        """Distinct complexes in order of first appearance."""
        seen: dict[Complex, None] = {}
        for r in self.reactions:
            seen.setdefault(r.source)
            seen.setdefault(r.target)
        return list(seen)

    def format_complex(self, c: Complex) -> str:
        terms = []
        for name, coef in zip(self.species, c):
            if coef == 1:
                terms.append(name)
            elif coef > 1:
                terms.append(f"{coef}{name}")
        return " + ".join(terms) if terms else "0"

    def format_reaction(self, j: int) -> str:
        r = self.reactions[j]
        return f"{self.format_complex(r.source)} -> {self.format_complex(r.target)}"


def _merge_duplicates(reactions: Sequence[Reaction]) -> tuple[Reaction, ...]:
    groups: dict[tuple[Complex, Complex], list[Reaction]] = {}
    for r in reactions:
        groups.setdefault((r.source, r.target), []).append(r)
    merged = []
    for (src, tgt), rs in groups.items():
        if len(rs) == 1:
            merged.append(rs[0])
            continue
        pair = next((r.pair for r in rs if r.pair is not None), None)
        merged.append(Reaction(src, tgt, merge_rates([r.rate for r in rs]), pair))
    return tuple(merged)


def _normalize_pairs(reactions: tuple[Reaction, ...]) -> tuple[Reaction, ...]:
    members: dict[int, list[int]] = {}
    for j, r in enumerate(reactions):
        if r.pair is not None:
            members.setdefault(r.pair, []).append(j)
    valid = set()
    for tag, idx in members.items():
        if len(idx) == 2:
            a, b = reactions[idx[0]], reactions[idx[1]]
            if a.source == b.target and a.target == b.source:
                valid.add(tag)
    return tuple(
        r if r.pair is None or r.pair in valid else replace(r, pair=None)
        for r in reactions
    )


def reversible_partner(net: ReactionNetwork, j: int) -> Optional[int]:
    tag = net.reactions[j].pair
    if tag is None:
        return None
    for i, r in enumerate(net.reactions):
        if i != j and r.pair == tag:
            return i
    return None


def stoichiometric_matrix(net: ReactionNetwork) -> list[list[int]]:
    """Integer n x m matrix whose column j is ``target_j - source_j``."""
    cols = [r.vector for r in net.reactions]
    return [[c[i] for c in cols] for i in range(net.n_species)]


def stoich_subspace_dim(net: ReactionNetwork) -> int:
    """Exact rank of the stoichiometric matrix."""
    if not net.reactions:
        return 0
    return rational_rank(stoichiometric_matrix(net))


def resolve_rate(
    rate: RateSymbol,
    assignment: Optional[Mapping[str, float]] = None,
    default: Optional[float] = None,
) -> float:
    """Numeric value of a rate symbol.

    Lookup order: explicit assignment by name, the symbol's own value, the sum
    of its parts (for merged symbols), then ``default``.
    """
    assignment = assignment or {}
    if rate.name in assignment:
        return float(assignment[rate.name])
    if rate.value is not None:
        return float(rate.value)
    parts = rate.parts
    if len(parts) > 1:
        return math.fsum(
            resolve_rate(RateSymbol(p), assignment, default) for p in parts
        )
    if default is not None:
        return float(default)
    raise UnboundRateError(rate.name)


def rate_vector(
    net: ReactionNetwork,
    assignment: Optional[Mapping[str, float]] = None,
    default: Optional[float] = None,
) -> list[float]:
    return [resolve_rate(r.rate, assignment, default) for r in net.reactions]


def monomial(x: Sequence[float], y: Complex) -> float:
    out = 1.0
    for xi, yi in zip(x, y):
        if yi:
            out *= xi**yi
    return out


def is_complex_balanced(
    net: ReactionNetwork,
    k: Optional[Mapping[str, float]],
    x0: Sequence[float],
    tol: float = 1e-12,
    default: Optional[float] = None,
) -> bool:
    """Whether every complex has balanced in- and outflux at ``x0``."""
    if len(x0) != net.n_species or any(not v > 0 for v in x0):
        raise ValueError("x0 must be a strictly positive point")
    rates = rate_vector(net, k, default)
    if any(not v > 0 for v in rates):
        raise ValueError("rate constants must be strictly positive")
    outflow: dict[Complex, list[float]] = {c: [] for c in net.complexes()}
    inflow: dict[Complex, list[float]] = {c: [] for c in net.complexes()}
    for r, kr in zip(net.reactions, rates):
        flux = kr * monomial(x0, r.source)
        outflow[r.source].append(flux)
        inflow[r.target].append(flux)
    return all(
        abs(math.fsum(outflow[c]) - math.fsum(inflow[c])) <= tol for c in outflow
    )


def permute_species(net: ReactionNetwork, order: Sequence[int]) -> ReactionNetwork:
    """Network with species reordered so new species ``i`` is old ``order[i]``."""
    order = list(order)
    if sorted(order) != list(range(net.n_species)):
        raise NetworkError("order must be a permutation of the species indices")
    inv = {old: new for new, old in enumerate(order)}
    reactions = [
        Reaction(
            tuple(r.source[o] for o in order),
            tuple(r.target[o] for o in order),
            r.rate,
            r.pair,
        )
        for r in net.reactions
    ]
    return ReactionNetwork(
        tuple(net.species[o] for o in order),
        tuple(reactions),
        inv[net.input_index],
        inv[net.output_index],
        net.notes,
    )


def input_output_order(net: ReactionNetwork) -> list[int]:
    """Species order placing the input first and the output last."""
    inp, out = net.input_index, net.output_index
    middle = [i for i in range(net.n_species) if i not in (inp, out)]
    return [inp] + middle + [out]
