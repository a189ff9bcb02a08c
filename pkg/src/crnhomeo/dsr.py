"""Directed species-reaction (DSR) graphs and the cycle criterion for injectivity.

Edge construction for a species ``s`` and an irreversible reaction
``y -> y'``:

* ``y_s > 0`` and ``y'_s == y_s``: one negative edge, species to reaction.
* ``y_s > 0`` and ``y'_s == 0``: one negative edge usable in both directions.
* ``y_s == 0`` and ``y'_s > 0``: one positive edge, reaction to species.
* ``y_s > 0``, ``y'_s > 0``, unequal: a negative species-to-reaction edge
  labelled ``y_s`` plus a reaction-to-species edge with the sign of
  ``y'_s - y_s`` labelled ``|y'_s - y_s|``.

A merged reversible node gives bidirectional edges: negative (label ``y_s``)
for species of the source side, positive (label ``y'_s``) for the target
side, and both of them for species on both sides with different
coefficients.  A species with equal coefficients on both sides of a
reversible reaction is a catalyst and gets the single species-to-reaction
negative edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import NamedTuple, Optional, Sequence

import networkx as nx

from .errors import CapacityError
from .injectivity import DEFAULT_SUBSET_CAP, SubsetProduct, subset_products
from .model import ReactionNetwork, reversible_partner

DEFAULT_CYCLE_CAP = 100_000

Node = tuple[str, int]  # ("S", species index) or ("R", reaction-node index)


@dataclass(frozen=True)
class DSREdge:
    id: int
    species: int
    reaction_node: int
    sign: int
    label: int
    to_reaction: bool
    to_species: bool

    def __post_init__(self):
        if not (self.to_reaction or self.to_species):
            raise ValueError("edge needs at least one direction")
        if self.label < 1:
            raise ValueError("edge labels are positive integers")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def positive(self) -> bool:
        return self.sign > 0

    @property
    def directions(self) -> frozenset[str]:
        d = set()
        if self.to_reaction:
            d.add("species->reaction")
        if self.to_species:
            d.add("reaction->species")
        return frozenset(d)

    def allows(self, to_reaction: bool) -> bool:
        return self.to_reaction if to_reaction else self.to_species


@dataclass
class DSRGraph:
    species: tuple[str, ...]
    reaction_nodes: list[tuple[int, ...]]
    node_labels: list[str]
    edges: list[DSREdge]

    def arcs(self):
        """Directed arcs ``(tail, head, edge)`` allowed by the edge directions."""
        for e in self.edges:
            s, r = ("S", e.species), ("R", e.reaction_node)
            if e.to_reaction:
                yield s, r, e
            if e.to_species:
                yield r, s, e

    def node_name(self, node: Node) -> str:
        kind, i = node
        return self.species[i] if kind == "S" else f"({self.node_labels[i]})"


@dataclass(frozen=True)
class DSRCycle:
    """A node-simple cycle; ``to_reaction[i]`` gives the traversal of ``edges[i]``.

    ``nodes[i]`` is the tail of ``edges[i]``.
    """

    nodes: tuple[Node, ...]
    edges: tuple[DSREdge, ...]
    to_reaction: tuple[bool, ...]
    reversible: bool = False

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def positive_edges(self) -> int:
        return sum(e.positive for e in self.edges)

    @property
    def edge_ids(self) -> frozenset[int]:
        return frozenset(e.id for e in self.edges)

    @property
    def is_e_cycle(self) -> bool:
        return self.positive_edges % 2 == (self.length // 2) % 2

    @property
    def is_s_cycle(self) -> bool:
        odd = math.prod(e.label for e in self.edges[0::2])
        even = math.prod(e.label for e in self.edges[1::2])
        return odd == even

    def reversed(self) -> "DSRCycle":
        if not self.reversible:
            raise ValueError("reverse traversal violates an edge direction")
        k = self.length
        nodes = tuple(self.nodes[(1 - i) % k] for i in range(k))
        edges = tuple(self.edges[(-i) % k] for i in range(k))
        dirs = tuple(not self.to_reaction[(-i) % k] for i in range(k))
        return DSRCycle(nodes, edges, dirs, True)

    def describe(self, g: DSRGraph) -> str:
        names = [g.node_name(v) for v in self.nodes]
        return "-".join(names + [names[0]])


class CycleClass(NamedTuple):
    parity: str  # "e" or "o"
    s_cycle: bool


@dataclass
class DSRCriterionReport:
    condition1: bool
    condition2: bool
    condition3: bool
    cycles: list[DSRCycle]
    violating_cycles: list[int] = field(default_factory=list)
    violating_pairs: list[tuple[int, int]] = field(default_factory=list)
    witness: Optional[SubsetProduct] = None
    graph: Optional[DSRGraph] = field(default=None, repr=False)

    @property
    def passes(self) -> bool:
        return self.condition1 and self.condition2 and self.condition3

    def failed_conditions(self) -> list[int]:
        flags = (self.condition1, self.condition2, self.condition3)
        return [i + 1 for i, ok in enumerate(flags) if not ok]

    def to_json(self, net: Optional[ReactionNetwork] = None) -> dict:
        g = self.graph
        return {
            "passes": self.passes,
            "condition1": self.condition1,
            "condition2": self.condition2,
            "condition3": self.condition3,
            "cycles": [
                {
                    "path": c.describe(g) if g else None,
                    "length": c.length,
                    "positive_edges": c.positive_edges,
                    "parity": classify_cycle(c).parity,
                    "s_cycle": c.is_s_cycle,
                }
                for c in self.cycles
            ],
            "violating_cycles": self.violating_cycles,
            "violating_pairs": [list(p) for p in self.violating_pairs],
            "witness": self.witness.to_json(net) if self.witness else None,
        }


def _edges_for_irreversible(y, yp):
    """(species, sign, label, to_reaction, to_species) tuples for y -> y'."""
    out = []
    for s, (a, b) in enumerate(zip(y, yp)):
        if a == 0 and b == 0:
            continue
        if a > 0 and b == a:
            out.append((s, -1, a, True, False))
        elif a > 0 and b == 0:
            out.append((s, -1, a, True, True))
        elif a == 0:
            out.append((s, 1, b, False, True))
        else:
            out.append((s, -1, a, True, False))
            out.append((s, 1 if b > a else -1, abs(b - a), False, True))
    return out


def _edges_for_reversible(y, yp):
    """Edges of a merged pair: bidirectional, negative on the source side and
    positive on the target side, so the result is orientation independent."""
    out = []
    for s, (a, b) in enumerate(zip(y, yp)):
        if a == 0 and b == 0:
            continue
        if a == b:
            out.append((s, -1, a, True, False))
            continue
        if a > 0:
            out.append((s, -1, a, True, True))
        if b > 0:
            out.append((s, 1, b, True, True))
    return out


def build_dsr(net: ReactionNetwork, split_reversible: bool = False) -> DSRGraph:
    """DSR graph of ``net``; reversible pairs share a node unless split."""
    nodes: list[tuple[int, ...]] = []
    labels: list[str] = []
    specs = []
    done: set[int] = set()
    for j, r in enumerate(net.reactions):
        if j in done:
            continue
        partner = None if split_reversible else reversible_partner(net, j)
        node = len(nodes)
        if partner is not None:
            done.add(partner)
            nodes.append((j, partner))
            labels.append(
                f"{net.format_complex(r.source)} <-> {net.format_complex(r.target)}"
            )
            specs += [(node, *t) for t in _edges_for_reversible(r.source, r.target)]
        else:
            nodes.append((j,))
            labels.append(net.format_reaction(j))
            specs += [(node, *t) for t in _edges_for_irreversible(r.source, r.target)]
    edges = [
        DSREdge(i, s, node, sign, label, tr, ts)
        for i, (node, s, sign, label, tr, ts) in enumerate(specs)
    ]
    return DSRGraph(tuple(net.species), nodes, labels, edges)


def _node_key(v: Node):
    return (0 if v[0] == "S" else 1, v[1])


def _canonical(cycle: DSRCycle) -> DSRCycle:
    """Rotate to start at the smallest node; pick the smaller valid orientation."""
    options = [cycle] + ([cycle.reversed()] if cycle.reversible else [])
    best = None
    for c in options:
        start = min(range(c.length), key=lambda i: _node_key(c.nodes[i]))
        rot = DSRCycle(
            c.nodes[start:] + c.nodes[:start],
            c.edges[start:] + c.edges[:start],
            c.to_reaction[start:] + c.to_reaction[:start],
            c.reversible,
        )
        key = tuple(e.id for e in rot.edges)
        if best is None or key < best[0]:
            best = (key, rot)
    return best[1]


def enumerate_cycles(g: DSRGraph, cap: int = DEFAULT_CYCLE_CAP) -> list[DSRCycle]:
    """All node-simple directed cycles, each once up to rotation and reversal.

    Node cycles come from Johnson's algorithm (networkx); parallel edges are
    then expanded, with the constraint that a 2-cycle uses two distinct edges.
    """
    if cap < 1:
        raise ValueError("cap must be positive")
    arcs: dict[tuple[Node, Node], list[DSREdge]] = {}
    dg = nx.DiGraph()
    for i in range(len(g.species)):
        dg.add_node(("S", i))
    for j in range(len(g.reaction_nodes)):
        dg.add_node(("R", j))
    for tail, head, e in g.arcs():
        arcs.setdefault((tail, head), []).append(e)
        dg.add_edge(tail, head)

    found: dict[frozenset[int], DSRCycle] = {}
    for node_cycle in nx.simple_cycles(dg):
        k = len(node_cycle)
        hops = [arcs[(node_cycle[i], node_cycle[(i + 1) % k])] for i in range(k)]
        for choice in product(*hops):
            ids = frozenset(e.id for e in choice)
            if len(ids) != k:
                continue
            if ids in found:
                # same edge set met again: the reverse traversal is also valid
                prev = found[ids]
                found[ids] = DSRCycle(prev.nodes, prev.edges, prev.to_reaction, True)
                continue
            dirs = tuple(v[0] == "S" for v in node_cycle)
            found[ids] = DSRCycle(tuple(node_cycle), tuple(choice), dirs, False)
            if len(found) > cap:
                raise CapacityError(f"more than {cap} cycles in the DSR graph")
    cycles = [_canonical(c) for c in found.values()]
    cycles.sort(key=lambda c: (c.length, tuple(e.id for e in c.edges)))
    return cycles


def classify_cycle(c: DSRCycle) -> CycleClass:
    return CycleClass("e" if c.is_e_cycle else "o", c.is_s_cycle)


def _shared_components(c: DSRCycle, shared: set[int]) -> list[int]:
    """Edge counts of the connected components of the shared edge set."""
    g = nx.Graph()
    edges = [e for e in c.edges if e.id in shared]
    for e in edges:
        g.add_edge(("S", e.species), ("R", e.reaction_node))
    return [
        sum(("S", e.species) in comp for e in edges)
        for comp in nx.connected_components(g)
    ]


def odd_intersection(c1: DSRCycle, c2: DSRCycle) -> bool:
    """Whether the cycles, compatibly oriented, meet in odd-length components only.

    The shared edges must be traversed the same way by both cycles under some
    valid choice of orientations.
    """
    shared = set(c1.edge_ids & c2.edge_ids)
    if not shared:
        return False
    d1 = {e.id: t for e, t in zip(c1.edges, c1.to_reaction)}
    d2 = {e.id: t for e, t in zip(c2.edges, c2.to_reaction)}
    same = all(d1[i] == d2[i] for i in shared)
    flipped = all(d1[i] != d2[i] for i in shared)
    compatible = same or (flipped and (c1.reversible or c2.reversible))
    if not compatible:
        return False
    return all(n % 2 == 1 for n in _shared_components(c1, shared))


def dsr_criterion(
    net: ReactionNetwork,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    split_reversible: bool = False,
    products: Optional[Sequence[SubsetProduct]] = None,
) -> DSRCriterionReport:
    """Evaluate the three DSR conditions; passing them implies injectivity."""
    g = build_dsr(net, split_reversible)
    cycles = enumerate_cycles(g, cycle_cap)
    e_cycles = [i for i, c in enumerate(cycles) if c.is_e_cycle]
    bad_cycles = [i for i in e_cycles if not cycles[i].is_s_cycle]
    bad_pairs = [
        (i, j) for i, j in combinations(e_cycles, 2) if odd_intersection(cycles[i], cycles[j])
    ]
    if products is None:
        products = subset_products(net, subset_cap)
    witness = next((p for p in products if p.product != 0), None)
    return DSRCriterionReport(
        condition1=not bad_cycles,
        condition2=not bad_pairs,
        condition3=witness is not None,
        cycles=cycles,
        violating_cycles=bad_cycles,
        violating_pairs=bad_pairs,
        witness=witness,
        graph=g,
    )


def to_dot(g: DSRGraph) -> str:
    """Graphviz text: dashed negative edges, bold positive edges."""
    lines = ["digraph DSR {", "  node [fontname=Helvetica];"]
    for i, s in enumerate(g.species):
        lines.append(f'  S{i} [label="{s}", shape=ellipse];')
    for j, lab in enumerate(g.node_labels):
        lines.append(f'  R{j} [label="{lab}", shape=box];')
    for e in g.edges:
        style = "bold" if e.positive else "dashed"
        if e.to_reaction and e.to_species:
            d = "both"
        elif e.to_reaction:
            d = "forward"
        else:
            d = "back"
        label = f', label="{e.label}"' if e.label != 1 else ""
        lines.append(f"  S{e.species} -> R{e.reaction_node} [style={style}, dir={d}{label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
