"""Reading and writing the ``.crn`` text format.

Example::

    species: X1 X2 X3
    input: X1
    output: X3
    # comments run to end of line
    2X1 <-> X2 ; k1, k2=0.5
    X1 + X3 -> X1 + 2X3
    0 <-> X1 ; zeta, k5

A rate token is ``name``, ``name=value`` or a bare positive number.  The
name ``zeta`` marks the input parameter.  Unnamed rates are called ``k{i}``
after their position in canonical order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .errors import NetworkError, ParseError
from .model import RateSymbol, Reaction, ReactionNetwork, reversible_partner

INPUT_RATE_NAME = "zeta"

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_TERM_RE = re.compile(rf"^\s*(\d*)\s*({_NAME})\s*$")
_RATE_RE = re.compile(rf"^\s*(?:({_NAME}(?:\+{_NAME})*)\s*(?:=\s*(\S+))?|(\S+))\s*$")
_HEADER_RE = re.compile(r"^\s*(species|input|output)\s*:(.*)$", re.IGNORECASE)


@dataclass
class _Entry:
    lhs: dict[str, int]
    rhs: dict[str, int]
    reversible: bool
    rates: list[Optional[tuple[Optional[str], Optional[float]]]]
    line: int


def _parse_complex(text: str, line: int, col: int) -> dict[str, int]:
    stripped = text.strip()
    if stripped in ("0", "∅"):
        return {}
    if not stripped:
        raise ParseError("empty complex (write 0 for the empty complex)", line, col + 1)
    coeffs: dict[str, int] = {}
    offset = col
    for term in text.split("+"):
        m = _TERM_RE.match(term)
        if not m:
            lead = len(term) - len(term.lstrip())
            raise ParseError(f"bad term {term.strip()!r}", line, offset + lead + 1)
        c = int(m.group(1)) if m.group(1) else 1
        if c == 0:
            raise ParseError("zero stoichiometric coefficient", line, offset + 1)
        coeffs[m.group(2)] = coeffs.get(m.group(2), 0) + c
        offset += len(term) + 1
    return coeffs


def _parse_rate(token: str, line: int, col: int):
    if not token.strip():
        return None
    m = _RATE_RE.match(token)
    if not m:
        raise ParseError(f"bad rate {token.strip()!r}", line, col + 1)
    name, value, bare = m.groups()
    if bare is not None:
        name, value = None, bare
    if value is not None:
        try:
            value = float(value)
        except ValueError:
            raise ParseError(f"bad rate value {value!r}", line, col + 1) from None
        if not value > 0:
            raise ParseError("rate values must be positive", line, col + 1)
    return name, value


def _parse_reaction(body: str, line: int) -> _Entry:
    rate_text = ""
    if ";" in body:
        body, rate_text = body.split(";", 1)
    if "<->" in body:
        lhs, rhs = body.split("<->", 1)
        reversible = True
        arrow = len(lhs) + 3
    elif "->" in body:
        lhs, rhs = body.split("->", 1)
        reversible = False
        arrow = len(lhs) + 2
    else:
        raise ParseError("expected '->' or '<->'", line, 1)
    if "->" in rhs:
        raise ParseError("more than one arrow", line, arrow + rhs.index("->") + 1)
    left = _parse_complex(lhs, line, 0)
    right = _parse_complex(rhs, line, arrow)
    if left == right:
        raise ParseError("trivial reaction: source equals target", line, 1)
    col = len(body) + 1
    tokens = rate_text.split(",") if rate_text.strip() else []
    if len(tokens) > (2 if reversible else 1):
        raise ParseError("too many rate tokens", line, col + 1)
    rates = []
    for tok in tokens:
        rates.append(_parse_rate(tok, line, col))
        col += len(tok) + 1
    rates += [None] * ((2 if reversible else 1) - len(rates))
    return _Entry(left, right, reversible, rates, line)


def parse_network(text: str) -> ReactionNetwork:
    """Parse ``.crn`` text into a network in canonical reaction order."""
    declared: Optional[list[str]] = None
    input_name = output_name = None
    entries: list[_Entry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        if not body.strip():
            continue
        h = _HEADER_RE.match(body)
        if h:
            key, value = h.group(1).lower(), h.group(2)
            names = value.replace(",", " ").split()
            for nm in names:
                if not re.fullmatch(_NAME, nm):
                    raise ParseError(f"bad species name {nm!r}", lineno, body.index(nm) + 1)
            if key == "species":
                if declared is not None:
                    raise ParseError("species declared twice", lineno, 1)
                if len(set(names)) != len(names):
                    raise ParseError("duplicate species in declaration", lineno, 1)
                declared = names
            else:
                if len(names) != 1:
                    raise ParseError(f"{key} takes exactly one species", lineno, 1)
                if key == "input":
                    input_name = names[0]
                else:
                    output_name = names[0]
            continue
        entries.append(_parse_reaction(body, lineno))

    if declared is not None:
        species = list(declared)
        for e in entries:
            for nm in list(e.lhs) + list(e.rhs):
                if nm not in species:
                    raise ParseError(f"unknown species {nm!r}", e.line, 1)
    else:
        species = []
        for e in entries:
            for nm in list(e.lhs) + list(e.rhs):
                if nm not in species:
                    species.append(nm)
        for nm in (input_name, output_name):
            if nm is not None and nm not in species:
                species.append(nm)
    for nm in (input_name, output_name):
        if nm is not None and nm not in species:
            raise ParseError(f"unknown species {nm!r}")

    def vec(d: dict[str, int]) -> tuple[int, ...]:
        return tuple(d.get(s, 0) for s in species)

    seen: dict[tuple, int] = {}
    for e in entries:
        pairs = [(vec(e.lhs), vec(e.rhs))]
        if e.reversible:
            pairs.append((vec(e.rhs), vec(e.lhs)))
        for p in pairs:
            if p in seen:
                raise ParseError(f"duplicate reaction (first on line {seen[p]})", e.line, 1)
            seen[p] = e.line

    entries.sort(key=lambda e: (vec(e.lhs), vec(e.rhs)), reverse=True)
    explicit = {
        part for e in entries for r in e.rates if r is not None and r[0] for part in r[0].split("+")
    }
    reactions: list[Reaction] = []
    n_flags = 0
    pair_tag = 0
    for e in entries:
        directions = [(vec(e.lhs), vec(e.rhs))]
        if e.reversible:
            directions.append((vec(e.rhs), vec(e.lhs)))
        tag = None
        if e.reversible:
            tag = pair_tag
            pair_tag += 1
        for (src, tgt), rate in zip(directions, e.rates):
            name, value = rate if rate is not None else (None, None)
            if name is None:
                i = len(reactions) + 1
                while f"k{i}" in explicit:
                    i += 1
                name = f"k{i}"
                explicit.add(name)
            flagged = INPUT_RATE_NAME in name.split("+")
            n_flags += flagged
            if n_flags > 1:
                raise ParseError("more than one rate flagged as zeta", e.line, 1)
            reactions.append(Reaction(src, tgt, RateSymbol(name, value, flagged), tag))

    n = len(species)
    if n == 0:
        raise ParseError("network has no species")
    try:
        return ReactionNetwork(
            tuple(species),
            tuple(reactions),
            species.index(input_name) if input_name else 0,
            species.index(output_name) if output_name else n - 1,
        )
    except NetworkError as exc:
        raise ParseError(str(exc)) from exc


def _format_rate(rate: RateSymbol) -> str:
    if rate.value is None:
        return rate.name
    return f"{rate.name}={rate.value!r}"


def format_network(net: ReactionNetwork) -> str:
    """Text form of ``net``; reversible pairs are written with ``<->``."""
    lines = [
        "species: " + " ".join(net.species),
        f"input: {net.input_species.name}",
        f"output: {net.output_species.name}",
    ]
    done: set[int] = set()
    for j, r in enumerate(net.reactions):
        if j in done:
            continue
        partner = reversible_partner(net, j)
        lhs = net.format_complex(r.source)
        rhs = net.format_complex(r.target)
        if partner is not None and partner > j:
            done.add(partner)
            rev = net.reactions[partner]
            lines.append(f"{lhs} <-> {rhs} ; {_format_rate(r.rate)}, {_format_rate(rev.rate)}")
        else:
            lines.append(f"{lhs} -> {rhs} ; {_format_rate(r.rate)}")
    return "\n".join(lines) + "\n"


def canonicalize(net: ReactionNetwork) -> ReactionNetwork:
    """Canonical reaction order and pair numbering, via a text round trip."""
    return parse_network(format_network(net))


def read_network(path) -> ReactionNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())
