"""Homeostasis-associated network and the structural homeostasis verdict."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .dsr import DEFAULT_CYCLE_CAP, DSRCriterionReport, dsr_criterion
from .errors import CapacityError, NetworkError
from .injectivity import (
    DEFAULT_SUBSET_CAP,
    InjectivityReport,
    subset_products,
    verdict_from_products,
)
from .massaction import build_jacobian
from .model import (
    RateSymbol,
    Reaction,
    ReactionNetwork,
    input_output_order,
    permute_species,
    stoich_subspace_dim,
)
from .polynomial import PolyMatrix, SparsePolynomial


class VerdictKind(str, enum.Enum):
    NO_INFINITESIMAL_HOMEOSTASIS = "NO_INFINITESIMAL_HOMEOSTASIS"
    PERFECT_HOMEOSTASIS = "PERFECT_HOMEOSTASIS"
    UNDETERMINED = "UNDETERMINED"


def neutralize_input(net: ReactionNetwork) -> ReactionNetwork:
    """Give every target the input coefficient of its source.

    Reactions that become trivial are dropped; duplicates merge by summing
    rates (done by the network constructor).
    """
    i = net.input_index
    out = []
    for r in net.reactions:
        if r.target[i] == r.source[i]:
            out.append(r)
            continue
        tgt = list(r.target)
        tgt[i] = r.source[i]
        if tuple(tgt) != r.source:
            out.append(Reaction(r.source, tuple(tgt), r.rate, r.pair))
    return net.with_reactions(out)


def return_rate_name(net: ReactionNetwork) -> str:
    base = f"k_{net.output_species.name}_{net.input_species.name}"
    names = set()
    for r in net.reactions:
        names.update(r.rate.parts)
    name, n = base, 1
    while name in names:
        n += 1
        name = f"{base}_{n}"
    return name


def associated_network(net: ReactionNetwork) -> ReactionNetwork:
    """Homeostasis-associated network, with species reordered input-first, output-last.

    The input's coefficient is neutralised in every reaction, then the
    output-to-input reaction is added with a fresh rate symbol.
    """
    if net.n_species < 2:
        raise NetworkError("homeostasis needs at least two species")
    base = neutralize_input(permute_species(net, input_output_order(net)))
    n = base.n_species
    src = tuple(1 if i == n - 1 else 0 for i in range(n))
    tgt = tuple(1 if i == 0 else 0 for i in range(n))
    added = Reaction(src, tgt, RateSymbol(return_rate_name(base)))
    return base.with_reactions(base.reactions + (added,))


@dataclass
class MinorB:
    """Jacobian minor with the input row and the output column removed."""

    matrix: PolyMatrix
    species_order: list[int]

    def det(self) -> SparsePolynomial:
        return self.matrix.det()

    @property
    def entries(self):
        return self.matrix.entries


def minor_B(net: ReactionNetwork) -> MinorB:
    if net.n_species < 2:
        raise NetworkError("the minor needs at least two species")
    order = input_output_order(net)
    jac = build_jacobian(permute_species(net, order))
    n = net.n_species
    return MinorB(jac.submatrix(range(1, n), range(0, n - 1)), order)


@dataclass
class HomeostasisVerdict:
    kind: VerdictKind
    associated: ReactionNetwork
    injectivity: InjectivityReport
    dsr: Optional[DSRCriterionReport]
    conservation_warning: bool
    stoich_dim: int
    associated_stoich_dim: int
    species_order: list[int]
    diagnostics: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.kind.value,
            "species_order": [self.associated.species[i] for i in range(len(self.species_order))],
            "conservation_warning": self.conservation_warning,
            "stoichiometric_dimension": self.stoich_dim,
            "associated_stoichiometric_dimension": self.associated_stoich_dim,
            "injectivity": self.injectivity.to_json(self.associated),
            "dsr": self.dsr.to_json(self.associated) if self.dsr else None,
            "diagnostics": list(self.diagnostics),
        }


def structural_verdict(
    net: ReactionNetwork,
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    split_reversible: bool = False,
) -> HomeostasisVerdict:
    """Decide from structure whether homeostasis is excluded, forced, or open.

    Raises CapacityError only if the subset enumeration overflows; a cycle
    overflow yields UNDETERMINED with a diagnostic.
    """
    assoc = associated_network(net)
    products = subset_products(assoc, subset_cap)
    inj = verdict_from_products(products)
    diagnostics = [
        "integer stoichiometry only",
        "duplicate reactions produced by the transform are merged by summing rates",
    ]
    report = None
    try:
        report = dsr_criterion(
            assoc, cycle_cap, subset_cap, split_reversible, products=products
        )
    except CapacityError as exc:
        diagnostics.append(f"DSR cycle analysis aborted: {exc}")
    if report is not None and report.passes and inj.injective:
        kind = VerdictKind.NO_INFINITESIMAL_HOMEOSTASIS
    elif report is not None and report.passes:
        # only reachable when a species sits on both sides of a reaction
        kind = VerdictKind.UNDETERMINED
        diagnostics.append(
            "DSR criterion passed but the subset products conflict in sign; "
            "the graph rules for species on both sides of a reaction do not certify injectivity"
        )
    elif inj.verdict.value == "DEGENERATE_ALL_ZERO":
        kind = VerdictKind.PERFECT_HOMEOSTASIS
    else:
        kind = VerdictKind.UNDETERMINED
        if report is not None:
            diagnostics.append(
                "DSR conditions failing: " + ", ".join(map(str, report.failed_conditions()))
            )
    n = net.n_species
    dim = stoich_subspace_dim(net)
    return HomeostasisVerdict(
        kind=kind,
        associated=assoc,
        injectivity=inj,
        dsr=report,
        conservation_warning=dim < n,
        stoich_dim=dim,
        associated_stoich_dim=stoich_subspace_dim(assoc),
        species_order=input_output_order(net),
        diagnostics=diagnostics,
    )
