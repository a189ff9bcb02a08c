"""Command-line front end: ``crnhomeo <command> [file.crn] [options]``.

Exit status is 0 on success, 1 when an enumeration cap makes the analysis
impossible, and 2 on bad input or usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import replace
from typing import Optional, Sequence

from . import __version__
from .dsr import DEFAULT_CYCLE_CAP, build_dsr, dsr_criterion, to_dot
from .errors import CapacityError, ConfigurationError, CRNError
from .homeostasis import associated_network, structural_verdict
from .injectivity import DEFAULT_SUBSET_CAP, injectivity_verdict
from .massaction import odes_as_json, odes_as_text
from .model import ReactionNetwork
from .numeric import branch_sweep, locate_homeostasis_point
from .parser import format_network, parse_network


def _zeta_range(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, steps = text.split(":")
        return float(lo), float(hi), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:steps, got {text!r}") from None


def _binding(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    try:
        if not sep or not name:
            raise ValueError
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", nargs="?", default="-", help="network file (.crn); '-' for stdin")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--input", dest="input_species", help="input species name")
    common.add_argument("--output", dest="output_species", help="output species name")
    common.add_argument("--split-reversible", action="store_true")
    common.add_argument("--cap-subsets", type=int, default=DEFAULT_SUBSET_CAP)
    common.add_argument("--cap-cycles", type=int, default=DEFAULT_CYCLE_CAP)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--rate", type=_binding, action="append", default=[],
                        help="bind one rate, name=value (repeatable)")
    common.add_argument("--rates", type=_binding, default=None,
                        help="k=VALUE binds every unbound rate (default k=1)")
    common.add_argument("--zeta", type=_zeta_range, default=(0.1, 2.0, 64),
                        help="sweep range lo:hi:steps")
    common.add_argument("--csv", action="store_true")
    common.add_argument("--dot", action="store_true")
    common.add_argument("--numeric", action="store_true")
    common.add_argument("--dump-odes", action="store_true")

    p = argparse.ArgumentParser(prog="crnhomeo", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"crnhomeo {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="structural verdict (+ optional sweep)")
    sub.add_parser("transform", parents=[common], help="print the homeostasis-associated network")
    sub.add_parser("dsr", parents=[common], help="DSR graph criterion")
    sub.add_parser("injectivity", parents=[common], help="subset determinant test")
    sub.add_parser("sweep", parents=[common], help="equilibrium branch over zeta")
    sub.add_parser("odes", parents=[common], help="print the mass-action ODEs")
    return p


def _load(args) -> ReactionNetwork:
    if args.file == "-":
        text = sys.stdin.read()
    else:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    net = parse_network(text)
    if args.input_species:
        net = replace(net, input_index=net.index(args.input_species))
    if args.output_species:
        net = replace(net, output_index=net.index(args.output_species))
    return net


def _rates(args) -> tuple[dict, float]:
    default = args.rates[1] if args.rates else 1.0
    return dict(args.rate), default


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _complex(v: complex) -> list[float]:
    return [v.real, v.imag]


def _sample_json(s) -> dict:
    return {
        "zeta": s.zeta,
        "x": list(s.equilibrium.x),
        "residual": s.equilibrium.residual,
        "eigenvalues": [_complex(v) for v in s.equilibrium.jacobian_eigenvalues],
        "stable": s.stable,
        "detB": s.detB,
        "detJ": s.detJ,
        "io_derivative": s.io_derivative,
    }


def _point_json(p) -> dict:
    return {
        "zeta_star": p.zeta_star,
        "x_star": list(p.x_star),
        "stable": p.stable,
        "kind": p.kind,
        "detB": p.detB,
        "zeta_interval": list(p.zeta_interval) if p.zeta_interval else None,
        "iterations": p.iterations,
        "diagnostic": p.diagnostic,
    }


def _numeric(net, args) -> tuple:
    k, default = _rates(args)
    lo, hi, steps = args.zeta
    branch = branch_sweep(net, k, (lo, hi), steps, default=default, seed=args.seed)
    return branch, locate_homeostasis_point(branch)


def _cmd_analyze(net, args, out) -> int:
    t0 = time.perf_counter()
    verdict = structural_verdict(net, args.cap_cycles, args.cap_subsets, args.split_reversible)
    elapsed = time.perf_counter() - t0
    numeric = None
    if args.numeric:
        branch, points = _numeric(net, args)
        numeric = {
            "zeta_range": list(args.zeta),
            "samples": [_sample_json(s) for s in branch],
            "gaps": [list(g) for g in branch.gaps],
            "points": [_point_json(p) for p in points],
        }
    if args.json:
        report = {
            "tool": "crnhomeo",
            "version": __version__,
            "seed": args.seed,
            "network": format_network(net),
            "associated_network": format_network(verdict.associated),
            "structural": verdict.to_json(),
            "numeric": numeric,
        }
        if args.dump_odes:
            report["odes"] = odes_as_json(net)
        out.write(_dump(report) + "\n")
        return 0
    out.write(f"verdict: {verdict.kind.value}\n")
    if verdict.conservation_warning:
        out.write(
            f"warning: stoichiometric subspace has dimension {verdict.stoich_dim} < "
            f"{net.n_species}; infinitesimal homeostasis does not apply\n"
        )
    assoc = verdict.associated
    out.write(f"input: {net.input_species.name}  output: {net.output_species.name}\n")
    out.write("associated network:\n")
    for line in format_network(assoc).splitlines()[3:]:
        out.write(f"  {line}\n")
    inj = verdict.injectivity
    out.write(
        f"subset products: {inj.positive} positive, {inj.negative} negative, "
        f"{inj.zero} zero ({inj.verdict.value})\n"
    )
    for w in inj.witnesses:
        rx = "; ".join(assoc.format_reaction(j) for j in w.subset)
        out.write(
            f"  witness {{{rx}}}: det(Y)={w.det_source} det(Y'-Y)="
            f"{(-1) ** len(w.subset) * w.det_diff} product={w.reaction_vector_product}\n"
        )
    if verdict.dsr is not None:
        _write_dsr(verdict.dsr, out)
    for d in verdict.diagnostics:
        out.write(f"note: {d}\n")
    if args.dump_odes:
        out.write(odes_as_text(net) + "\n")
    if numeric is not None:
        out.write(f"sweep: {len(numeric['samples'])} samples, {len(numeric['gaps'])} gaps\n")
        for p in numeric["points"]:
            x = ", ".join(f"{v:.10g}" for v in p["x_star"])
            out.write(
                f"  {p['kind']} homeostasis at zeta={p['zeta_star']:.10g}, x=({x}), "
                f"stable={p['stable']}\n"
            )
    out.write(f"time: {elapsed:.3f} s\n")
    return 0


def _write_dsr(report, out) -> None:
    g = report.graph
    out.write(
        f"DSR criterion: {'pass' if report.passes else 'fail'} "
        f"(1:{'ok' if report.condition1 else 'FAIL'} "
        f"2:{'ok' if report.condition2 else 'FAIL'} "
        f"3:{'ok' if report.condition3 else 'FAIL'})\n"
    )
    for i, c in enumerate(report.cycles):
        kind = ("e" if c.is_e_cycle else "o") + ("s" if c.is_s_cycle else "")
        out.write(f"  cycle {i} [{kind}, length {c.length}]: {c.describe(g)}\n")
    for i in report.violating_cycles:
        out.write(f"  e-cycle {i} is not an s-cycle\n")
    for i, j in report.violating_pairs:
        out.write(f"  e-cycles {i} and {j} have an odd intersection\n")


def _cmd_transform(net, args, out) -> int:
    assoc = associated_network(net)
    if args.json:
        out.write(_dump({"network": format_network(assoc), "species": list(assoc.species)}) + "\n")
    else:
        out.write(format_network(assoc))
    return 0


def _cmd_dsr(net, args, out) -> int:
    if args.dot:
        out.write(to_dot(build_dsr(net, args.split_reversible)))
        return 0
    report = dsr_criterion(net, args.cap_cycles, args.cap_subsets, args.split_reversible)
    if args.json:
        out.write(_dump(report.to_json(net)) + "\n")
    else:
        _write_dsr(report, out)
    return 0


def _cmd_injectivity(net, args, out) -> int:
    rep = injectivity_verdict(net, args.cap_subsets)
    if args.json:
        out.write(_dump(rep.to_json(net, full=True)) + "\n")
        return 0
    out.write(f"verdict: {rep.verdict.value}\n")
    out.write(f"products: {rep.positive} positive, {rep.negative} negative, {rep.zero} zero\n")
    for w in rep.witnesses:
        rx = "; ".join(net.format_reaction(j) for j in w.subset)
        out.write(f"  witness {{{rx}}}: product {w.product}\n")
    return 0


def _cmd_sweep(net, args, out) -> int:
    branch, points = _numeric(net, args)
    if args.json:
        out.write(_dump({
            "samples": [_sample_json(s) for s in branch],
            "gaps": [list(g) for g in branch.gaps],
            "points": [_point_json(p) for p in points],
        }) + "\n")
        return 0
    n = net.n_species
    header = ["zeta"] + [f"x_{i + 1}" for i in range(n)] + ["detB", "detJ", "dxn_dzeta", "stable"]
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for s in branch:
            w.writerow([repr(s.zeta), *map(repr, s.equilibrium.x), repr(s.detB),
                        repr(s.detJ), repr(s.io_derivative), s.stable])
        out.write(buf.getvalue())
        return 0
    out.write("  ".join(f"{h:>12}" for h in header) + "\n")
    for s in branch:
        vals = [s.zeta, *s.equilibrium.x, s.detB, s.detJ, s.io_derivative]
        out.write("  ".join(f"{v:12.6g}" for v in vals) + f"  {str(s.stable):>12}\n")
    for p in points:
        out.write(f"{p.kind} homeostasis at zeta={p.zeta_star:.10g}\n")
    return 0


def _cmd_odes(net, args, out) -> int:
    if args.json:
        out.write(_dump(odes_as_json(net)) + "\n")
    else:
        out.write(odes_as_text(net) + "\n")
    return 0


COMMANDS = {
    "analyze": _cmd_analyze,
    "transform": _cmd_transform,
    "dsr": _cmd_dsr,
    "injectivity": _cmd_injectivity,
    "sweep": _cmd_sweep,
    "odes": _cmd_odes,
}


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        net = _load(args)
    except (OSError, CRNError) as exc:
        sys.stderr.write(f"crnhomeo: {exc}\n")
        return 2
    try:
        return COMMANDS[args.command](net, args, out)
    except CapacityError as exc:
        sys.stderr.write(f"crnhomeo: {exc}\n")
        return 1
    except (ConfigurationError, CRNError) as exc:
        sys.stderr.write(f"crnhomeo: {exc}\n")
        return 2


def main() -> None:
    sys.exit(run())
