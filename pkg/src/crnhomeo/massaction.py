"""Mass-action vector field and Jacobian as exact symbolic objects."""

from __future__ import annotations

from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .errors import ConfigurationError
from .model import ReactionNetwork, resolve_rate
from .polynomial import PolyMatrix, SparsePolynomial

ZETA = "zeta"


def input_parameter(net: ReactionNetwork) -> str:
    """Name of the symbol that plays the role of the input parameter."""
    j = net.input_reaction()
    return net.reactions[j].rate.name if j is not None else ZETA


def has_inflow_to_input(net: ReactionNetwork) -> bool:
    zero = (0,) * net.n_species
    return any(
        r.source == zero and r.target[net.input_index] == 1 and sum(r.target) == 1
        for r in net.reactions
    )


def additive_input(net: ReactionNetwork) -> bool:
    """Whether the input parameter enters as an extra additive term.

    That is the case when no rate is flagged: the parameter is then added to
    the input species' equation on top of the network's own reactions.
    """
    if net.input_reaction() is not None:
        return False
    if has_inflow_to_input(net):
        return True
    raise ConfigurationError(
        "no rate is flagged as zeta and there is no inflow reaction to the input "
        f"species {net.input_species.name}"
    )


def build_rhs(net: ReactionNetwork, with_input: bool = False) -> list[SparsePolynomial]:
    """Right-hand side ``sum_r k_r x^{y_r} (y'_r - y_r)``, one polynomial per species.

    With ``with_input`` the input parameter is made explicit: a flagged rate
    already is the parameter, otherwise an additive ``zeta`` is placed in the
    input species' component.
    """
    n = net.n_species
    comps: list[dict] = [dict() for _ in range(n)]
    for r in net.reactions:
        rkey = ((r.rate.name, 1),)
        for i, d in enumerate(r.vector):
            if d:
                key = (rkey, r.source)
                comps[i][key] = comps[i].get(key, 0) + d
    rhs = [SparsePolynomial(n, c) for c in comps]
    if with_input and additive_input(net):
        i = net.input_index
        rhs[i] = rhs[i] + SparsePolynomial.rate(n, ZETA)
    return rhs


def build_jacobian(net: ReactionNetwork) -> PolyMatrix:
    """Formal Jacobian ``d f_i / d x_j`` of the mass-action field."""
    rhs = build_rhs(net)
    n = net.n_species
    return PolyMatrix([[f.diff(j) for j in range(n)] for f in rhs])


def rate_assignment(
    net: ReactionNetwork,
    k: Optional[Mapping[str, float]] = None,
    zeta: Optional[float] = None,
    default: Optional[float] = None,
) -> dict[str, float]:
    """Numeric value for every rate symbol in ``net`` (and the input parameter)."""
    k = dict(k or {})
    if zeta is not None:
        k[input_parameter(net)] = zeta
    out = {}
    for r in net.reactions:
        out[r.rate.name] = resolve_rate(r.rate, k, default)
    if zeta is not None:
        out[input_parameter(net)] = float(zeta)
    elif ZETA in k:
        out[ZETA] = float(k[ZETA])
    return out


def evaluate(
    p: Union[SparsePolynomial, PolyMatrix, Sequence[SparsePolynomial]],
    x: Sequence[float],
    k: Optional[Mapping[str, float]] = None,
    default: Optional[float] = None,
):
    """Evaluate a polynomial, a vector of them, or a PolyMatrix at ``(x, k)``."""
    if isinstance(p, SparsePolynomial):
        return p.evaluate(x, k, default)
    if isinstance(p, PolyMatrix):
        return p.evaluate(x, k, default)
    return np.array([q.evaluate(x, k, default) for q in p])


def odes_as_text(net: ReactionNetwork, with_input: bool = True) -> str:
    try:
        rhs = build_rhs(net, with_input)
    except ConfigurationError:
        rhs = build_rhs(net)
    return "\n".join(
        f"d{name}/dt = {f.format(net.species)}" for name, f in zip(net.species, rhs)
    )


def odes_as_json(net: ReactionNetwork, with_input: bool = True) -> dict:
    try:
        rhs = build_rhs(net, with_input)
    except ConfigurationError:
        rhs = build_rhs(net)
    jac = build_jacobian(net)
    return {
        "species": list(net.species),
        "input_parameter": input_parameter(net),
        "rhs": [
            {"species": s, "text": f.format(net.species), "terms": f.to_json()}
            for s, f in zip(net.species, rhs)
        ],
        "jacobian": jac.format(net.species),
    }
