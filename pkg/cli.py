"""
Command-line front end.

    python cli.py classify-parabolics --type E --rank 6
    python cli.py leaf-dim --file data/calogero_n4.json
    python cli.py cdybe-check --algebra sl3 --tau 0.3,0.8 --samples 20 --seed 1

JSON goes to stdout, logs to stderr. Exit codes: 0 pass, 1 failed check, 2 bad input.
"""
import argparse
import json
import logging
import sys

from catalog import EXAMPLE_TAGS, build_example
from config import CHECK_TOLERANCE, CONTOUR_RADIUS, configure_logging
from dataformat import (
    load_singularity_data,
    parse_tau,
    save_singularity_data,
)
from errors import InputError, SklyaninError
from geom import CHAIN_TAGS
from reports import (
    SCHEMA_VERSION,
    cdybe_report,
    divisor_report,
    ellfun_report,
    genus_report,
    hecke_report,
    leaf_report,
    parabolics_report,
    parse_cartan,
    projection_report,
    rootsys_report,
    toric_hilbert_report,
    toric_rays_report,
)
from rootsys import BasisTag, LatticeVector

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that raises instead of exiting, so run() owns the exit code."""

    def error(self, message):
        raise InputError(message)


def _add_type_arguments(parser, required=True):
    parser.add_argument("--type", required=required, help='Cartan family ("E") or label ("E6")')
    parser.add_argument("--rank", type=int, help="Rank, unless --type carries it")


def _add_data_arguments(parser):
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--file", help="Singularity data in JSON (schema 1)")
    source.add_argument("--example", choices=EXAMPLE_TAGS, help="Built-in worked configuration")
    parser.add_argument("--n", type=int, default=3, help="Size parameter of --example")
    parser.add_argument("--k", type=int, default=1, help="Grassmannian index for --example grassmann")
    parser.add_argument("--tau", default="0,1", help="re,im of tau for --example (default 0,1)")
    parser.add_argument("--emit", help="Write the normalized singularity data to this file")


def build_parser():
    parser = _Parser(
        prog="sklyanin",
        description="Sklyanin systems on an elliptic curve: leaves, r-matrices, spectral curves",
    )
    parser.add_argument("--pretty", action="store_true", help="Human-readable table instead of JSON")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--out", help="Also write the JSON report to this file")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    rootsys = commands.add_parser("rootsys", help="Root system data")
    rootsys_commands = rootsys.add_subparsers(dest="action", parser_class=_Parser)
    rootsys_commands.required = True
    _add_type_arguments(rootsys_commands.add_parser("info", help="Roots, weights and Cartan matrix"))

    for name, help_text in (("leaf-dim", "Symplectic leaf dimension"), ("hecke-dim", "Hecke correspondence dimension")):
        _add_data_arguments(commands.add_parser(name, help=help_text))

    classify = commands.add_parser("classify-parabolics", help="Compact-orbit simple roots")
    _add_type_arguments(classify, required=False)
    classify.add_argument("--max-rank", type=int, help="Classify every type up to this rank")

    ellfun = commands.add_parser("ellfun", help="Elliptic function checks")
    ellfun_commands = ellfun.add_subparsers(dest="action", parser_class=_Parser)
    ellfun_commands.required = True
    check = ellfun_commands.add_parser("check", help="Periodicities, residues, derivative oracle")
    check.add_argument("--tau", required=True)
    check.add_argument("--samples", type=int, default=100)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--tol", type=float, default=1e-10)

    cdybe = commands.add_parser("cdybe-check", help="Classical dynamical Yang-Baxter residual sweep")
    cdybe.add_argument("--algebra", default="sl2", help="sl2, sl3 or sln:N (any N >= 2; slow past N = 5)")
    cdybe.add_argument("--tau", required=True)
    cdybe.add_argument("--samples", type=int, default=20)
    cdybe.add_argument("--tol", type=float, default=CHECK_TOLERANCE)
    cdybe.add_argument("--seed", type=int, default=0)

    project = commands.add_parser("project-check", help="Projection kernels, idempotence, skew adjointness")
    project.add_argument("--algebra", default="sl2")
    project.add_argument("--tau", required=True)
    project.add_argument("--seed", type=int, default=0)
    project.add_argument("--radius", type=float, default=CONTOUR_RADIUS)

    genus = commands.add_parser("genus", help="Genus / Prym chain of a worked example")
    genus.add_argument("--example", required=True, choices=CHAIN_TAGS)
    genus.add_argument("--n", type=int, required=True)
    genus.add_argument("--k", type=int, default=1)

    toric = commands.add_parser("toric", help="Rank-2 cones and X(O) rays")
    toric_commands = toric.add_subparsers(dest="action", parser_class=_Parser)
    toric_commands.required = True
    hilbert = toric_commands.add_parser("hilbert", help="SL(2) model with orbit {ka, -ka}")
    hilbert.add_argument("--k", type=int, required=True)
    rays = toric_commands.add_parser("rays", help="Rays (1, a) over the W-orbit of a coweight")
    _add_type_arguments(rays)
    rays.add_argument("--coweight", required=True, help='Comma-separated coordinates, "p/q" allowed')
    rays.add_argument(
        "--basis",
        default=BasisTag.FUNDAMENTAL_COWEIGHT.value,
        choices=[tag.value for tag in BasisTag if tag != BasisTag.FUNDAMENTAL_WEIGHT],
    )
    rays.add_argument("--lattice", default="adjoint", choices=("adjoint", "simply_connected"))

    divisor = commands.add_parser("divisor-equiv", help="Linear equivalence by degree and Abel sum")
    divisor.add_argument("--tau", default="0,1")
    divisor.add_argument("--lhs", help='"a,b:m;a,b:m" with points a + b tau')
    divisor.add_argument("--rhs")
    divisor.add_argument("--example", choices=("calogero", "quadric"))
    divisor.add_argument("--n", type=int, default=3)
    divisor.add_argument("--shift", help="a,b offset applied to p2 of the Calogero example")
    return parser


def _load_data(args):
    if args.file:
        sd = load_singularity_data(args.file)
    else:
        sd = build_example(args.example, args.n, k=args.k, tau=parse_tau(args.tau))
    if args.emit:
        save_singularity_data(sd, args.emit)
    return sd


def dispatch(args):
    """Run one parsed command and return its report."""
    if args.command == "rootsys":
        return rootsys_report(parse_cartan(args.type, args.rank))
    if args.command == "leaf-dim":
        return leaf_report(_load_data(args))
    if args.command == "hecke-dim":
        return hecke_report(_load_data(args))
    if args.command == "classify-parabolics":
        if args.type:
            return parabolics_report(cartan_type=parse_cartan(args.type, args.rank))
        if args.max_rank is None:
            raise InputError("classify-parabolics needs --type or --max-rank")
        return parabolics_report(max_rank=args.max_rank)
    if args.command == "ellfun":
        return ellfun_report(parse_tau(args.tau), args.samples, args.seed, args.tol)
    if args.command == "cdybe-check":
        return cdybe_report(args.algebra, parse_tau(args.tau), args.samples, args.seed, args.tol)
    if args.command == "project-check":
        return projection_report(args.algebra, parse_tau(args.tau), args.seed, args.radius)
    if args.command == "genus":
        return genus_report(args.example, args.n, args.k)
    if args.command == "toric":
        if args.action == "hilbert":
            return toric_hilbert_report(args.k)
        coords = [c.strip() for c in args.coweight.split(",")]
        return toric_rays_report(
            parse_cartan(args.type, args.rank), LatticeVector(tuple(coords), args.basis), args.lattice
        )
    if args.command == "divisor-equiv":
        return divisor_report(
            parse_tau(args.tau), args.lhs, args.rhs, example=args.example, n=args.n, shift=args.shift
        )
    raise InputError(f"Unknown command {args.command!r}")


def _format_value(value):
    if isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value):
        return "[" + ", ".join(str(v) for v in value) + "]"
    if isinstance(value, (dict, list)):
        return json.dumps(value)
    return str(value)


def render_pretty(report):
    """Two-column table; a list of row dicts under "rows" becomes its own table."""
    lines = []
    scalars = {k: v for k, v in report.items() if k != "rows"}
    width = max((len(k) for k in scalars), default=0)
    for key, value in scalars.items():
        if isinstance(value, dict):
            lines.append(f"{key}:")
            inner = max((len(k) for k in value), default=0)
            for sub_key, sub_value in value.items():
                lines.append(f"  {sub_key.ljust(inner)}  {_format_value(sub_value)}")
        else:
            lines.append(f"{key.ljust(width)}  {_format_value(value)}")

    rows = report.get("rows")
    if rows:
        columns = list(rows[0].keys())
        cells = [[_format_value(row.get(c)) for c in columns] for row in rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
        lines.append("")
        lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)))
        lines.append("  ".join("-" * w for w in widths))
        for r in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(r, widths)))
    return "\n".join(lines)


def _emit(report, pretty, out, stream):
    text = render_pretty(report) if pretty else json.dumps(report, indent=2)
    print(text, file=stream)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            json.dump(report, f, indent=2)


def run(argv=None, stream=None):
    """Parse argv, run the command, print its report; returns the exit code."""
    stream = stream or sys.stdout
    parser = build_parser()
    pretty = False
    try:
        args = parser.parse_args(argv)
        pretty = args.pretty
        configure_logging(level="DEBUG" if args.verbose else None, to_file=False)
        report = dispatch(args)
        _emit(report, pretty, args.out, stream)
        if not report.get("pass", True):
            logger.warning(f"{report.get('command')} failed its checks")
            return EXIT_FAILED
        return EXIT_OK
    except InputError as e:
        logger.error(f"Input error: {str(e)}")
        _emit({"schema": SCHEMA_VERSION, "error": str(e), "pass": False}, pretty, None, stream)
        return EXIT_INPUT
    except SklyaninError as e:
        logger.error(f"Check failed: {str(e)}", exc_info=True)
        _emit({"schema": SCHEMA_VERSION, "error": str(e), "pass": False}, pretty, None, stream)
        return EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
