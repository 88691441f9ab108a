"""Command line interface for tcs-forge.

Certificates go to stdout as sorted JSON; logs go to stderr. Exit codes:
0 pass, 1 fail, 2 inconclusive, 3 empty search result, 64 usage, 65 data format.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from .charts import (
    BlowupCentre,
    anticanonical_base_curve,
    blowup_chart,
    double_cover_chart,
    restrict_to_S,
)
from .checks import recheck, run_check
from .config import Settings
from .errors import (
    EXIT_EMPTY,
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_PASS,
    EXIT_USAGE,
    DataFormatError,
    InputError,
    TcsForgeError,
)
from .exporter import CandidateExporter
from .hs_search import run_search, spec_from_model
from .loaders import (
    chart_to_json,
    load_chart,
    parse_model,
    read_json,
    resolve_search_spec,
    write_json,
)
from .models import BlowupCentreModel, Certificate, LatticeModel, Verdict
from .suites import SUITES, run_suite

logger = logging.getLogger(__name__)

LATTICE_OPS = {
    "signature": "lattice.signature",
    "saturate": "lattice.saturate",
    "orth": "lattice.orth_complement",
    "enum": "lattice.enum_vectors_with_square",
    "divisibility": "lattice.vector_divisibility",
    "square": "lattice.square",
}


class UsageArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code instead of 2."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rows(text: str) -> list[list[int]]:
    """Parse '1,0;0,1' into rows."""
    return [_vector(row) for row in text.split(";") if row.strip()]


def _mukai(text: str) -> dict:
    """Parse 'r;l1,l2,...;s' into a Mukai vector."""
    parts = text.split(";")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected 'r;l1,...;s', got {text!r}")
    try:
        return {"r": int(parts[0]), "l": _vector(parts[1]), "s": int(parts[2])}
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed Mukai vector {text!r}") from None


def _emit(certificates: Sequence[Certificate]) -> None:
    if len(certificates) == 1:
        print(certificates[0].to_json())
    else:
        print(
            json.dumps(
                [c.model_dump(mode="json") for c in certificates], sort_keys=True, indent=2
            )
        )


def _exit_code(certificates: Sequence[Certificate]) -> int:
    verdicts = {c.verdict for c in certificates}
    if Verdict.FAIL in verdicts:
        return EXIT_FAIL
    if Verdict.INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _lattice_data(path: str, ample: list[int] | None = None) -> dict:
    data = read_json(path)
    parse_model(LatticeModel, data, path)
    if ample is not None:
        data = dict(data, ample=ample)
    return data


# Subcommands


def cmd_verify(args, settings: Settings) -> int:
    certificates = run_suite(args.name, settings)
    _emit(certificates)
    return _exit_code(certificates)


def cmd_stability(args, settings: Settings) -> int:
    if args.chart:
        chart = load_chart(args.chart)
        N = chart.restriction.lattice
        c1 = args.c1
        if len(c1) == chart.rank:
            c1 = list(restrict_to_S(chart, c1))
        if args.ample is None:
            raise InputError("--ample is required with --chart")
        lattice = {"gram": [list(row) for row in N.gram], "ample": args.ample}
    elif args.lattice:
        lattice = _lattice_data(args.lattice, args.ample)
        c1 = args.c1
    else:
        raise InputError("one of --chart or --lattice is required")
    cert = run_check(
        "k3.destabilizer_search", {"lattice": lattice, "c1": c1, "rk": args.rk}, settings
    )
    _emit([cert])
    return _exit_code([cert])


def cmd_moduli(args, settings: Settings) -> int:
    inputs: dict = {"lattice": _lattice_data(args.lattice)}
    if args.mukai is not None:
        inputs["mukai"] = args.mukai
    elif args.c1 is not None and args.c2 is not None:
        inputs.update(rk=args.rk, c1=args.c1, c2=args.c2)
    else:
        raise InputError("give --mukai, or --c1 and --c2")
    cert = run_check("mukai.moduli_dim", inputs, settings)
    _emit([cert])
    return _exit_code([cert])


def cmd_lattice(args, settings: Settings) -> int:
    inputs: dict = {"lattice": _lattice_data(args.lattice)}
    if args.op in ("saturate", "orth"):
        if args.gens is None:
            raise InputError(f"lattice {args.op} needs --gens")
        inputs["gens"] = args.gens
    elif args.op == "enum":
        if args.square is None:
            raise InputError("lattice enum needs --square")
        inputs.update(square=args.square, bound=args.bound)
    elif args.op in ("divisibility", "square"):
        if args.vector is None:
            raise InputError(f"lattice {args.op} needs --vector")
        inputs["vector"] = args.vector
    cert = run_check(LATTICE_OPS[args.op], inputs, settings)
    _emit([cert])
    return _exit_code([cert])


def cmd_chart(args, settings: Settings) -> int:
    if args.kind == "blowup":
        fano_data = read_json(args.fano)
        fano = load_chart(fano_data)
        inputs: dict = {"fano": fano_data}
        if args.base_locus:
            centre = anticanonical_base_curve(fano)
            inputs["base_locus"] = True
        elif args.centre:
            model = parse_model(BlowupCentreModel, read_json(args.centre), args.centre)
            centre = BlowupCentre(tuple(model.degrees), model.genus)
            inputs["centre"] = {"degrees": model.degrees, "genus": model.genus}
        else:
            raise InputError("chart blowup needs --base-locus or --centre")
        if args.name:
            inputs["name"] = args.name
        chart = blowup_chart(fano, centre, name=args.name)
        cert = run_check("chart.blowup", inputs, settings)
    else:
        base_data = read_json(args.base)
        base = load_chart(base_data)
        chart = double_cover_chart(base, args.half_branch, name=args.name)
        inputs = {"base": base_data, "half_branch": args.half_branch}
        if args.name:
            inputs["name"] = args.name
        cert = run_check("chart.double_cover", inputs, settings)
    if args.out:
        write_json(args.out, chart_to_json(chart))
    _emit([cert])
    return _exit_code([cert])


def cmd_search(args, settings: Settings) -> int:
    spec = spec_from_model(resolve_search_spec(args.spec))
    result = run_search(spec, settings)
    out = Path(args.out)
    CandidateExporter(out.parent).export_candidates(result, out.name)
    if args.summary:
        summary = Path(args.summary)
        CandidateExporter(summary.parent).export_rejection_summary(result, summary.name)
    for pair in result.pairs:
        logger.info(
            f"Candidate: ({pair.plus.label}, {pair.plus.curve}) / "
            f"({pair.minus.label}, {pair.minus.curve})"
        )
    return EXIT_PASS if result.pairs else EXIT_EMPTY


def cmd_recheck(args, settings: Settings) -> int:
    try:
        cert = Certificate.from_json(Path(args.certificate).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise DataFormatError(f"File not found: {args.certificate}") from e
    except ValidationError as e:
        raise DataFormatError(f"{args.certificate} is not a certificate:\n{e}") from e
    fresh, agrees = recheck(cert, settings)
    _emit([fresh])
    return EXIT_PASS if agrees else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = UsageArgumentParser(
        prog="tcs-forge",
        description="Exact arithmetic and certificates for twisted connected sum building blocks",
    )
    parser.add_argument("--log-level", help="Override TCS_FORGE_LOG_LEVEL")
    parser.add_argument("--threads", type=int, help="Worker threads (overrides TCS_FORGE_THREADS)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=UsageArgumentParser)

    p = sub.add_parser("verify", help="Run a bundled reproduction suite")
    p.add_argument("name", choices=sorted(SUITES))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stability", help="Destabilizer search for a rank-2 bundle on K3")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--chart", help="Block chart JSON; the lattice is its restriction to S")
    source.add_argument("--lattice", help="Lattice JSON")
    p.add_argument("--c1", type=_vector, required=True, help="c1, e.g. --c1=-1,1")
    p.add_argument("--rk", type=int, default=2)
    p.add_argument("--ample", type=_vector, help="Ample class in lattice coordinates")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("moduli", help="Expected dimension of a moduli space of sheaves")
    p.add_argument("--lattice", required=True, help="Lattice JSON")
    p.add_argument("--mukai", type=_mukai, help="Mukai vector 'r;l1,...;s'")
    p.add_argument("--rk", type=int, default=2)
    p.add_argument("--c1", type=_vector)
    p.add_argument("--c2", type=int)
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("lattice", help="Lattice operations")
    p.add_argument("op", choices=sorted(LATTICE_OPS))
    p.add_argument("--lattice", required=True, help="Lattice JSON")
    p.add_argument("--gens", type=_rows, help="Generators '1,0;0,1'")
    p.add_argument("--square", type=int)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--vector", type=_vector)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("chart", help="Build a chart and check its invariants")
    kinds = p.add_subparsers(dest="kind", required=True, parser_class=UsageArgumentParser)
    b = kinds.add_parser("blowup", help="Blow up a Fano chart along a curve")
    b.add_argument("--fano", required=True, help="Fano chart JSON")
    b.add_argument("--base-locus", action="store_true", help="Blow up the anticanonical base curve")
    b.add_argument("--centre", help="Curve JSON with 'degrees' and 'genus'")
    b.add_argument("--name")
    b.add_argument("--out", help="Write the block chart JSON here")
    b.set_defaults(func=cmd_chart)
    d = kinds.add_parser("doublecover", help="Double cover of a Fano chart")
    d.add_argument("--base", required=True, help="Fano chart JSON")
    d.add_argument("--half-branch", type=_vector, required=True, help="Half the branch class")
    d.add_argument("--name")
    d.add_argument("--out", help="Write the cover chart JSON here")
    d.set_defaults(func=cmd_chart)

    p = sub.add_parser("search", help="Search Hartshorne-Serre parameters")
    p.add_argument("--spec", required=True, help="Search spec JSON")
    p.add_argument("--out", required=True, help="Candidate pairs JSON")
    p.add_argument("--summary", help="Rejection tally CSV")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("recheck", help="Recompute a certificate from its inputs")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_recheck)
    return parser


def main(argv: Sequence[str] | None = None) -> None:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    try:
        settings = Settings()
        update = {}
        if args.threads is not None:
            update["threads"] = args.threads
        if args.log_level is not None:
            update["log_level"] = args.log_level
        settings = Settings(**(settings.model_dump() | update))
    except ValidationError as e:
        print(f"tcs-forge: invalid settings:\n{e}", file=sys.stderr)
        sys.exit(EXIT_USAGE)

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        code = args.func(args, settings)
    except TcsForgeError as e:
        logger.error(f"{type(e).__name__}: {e}")
        code = e.exit_code
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        code = EXIT_FAIL
    sys.exit(code)


if __name__ == "__main__":
    main()
