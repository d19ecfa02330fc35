"""Command-line entry point: ``python -m ainfree <command>``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 when the
input cannot be used.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence

from pydantic import BaseModel, ValidationError

from .config import configure_logging
from .data_loader import DataLoader, write_document
from .errors import AinfreeError
from .models import SuiteReport, TreesReport
from .verifier import Verifier

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="ainfree", description="Free A∞-categories over differential graded quivers.")
    parser.add_argument("--log-level", default=None, help="Logging level (default: AINFREE_LOG_LEVEL or INFO)")
    commands = parser.add_subparsers(dest="command", required=True)

    trees = commands.add_parser("trees", help="List plane trees with n leaves")
    trees.add_argument("n", type=int)
    trees.add_argument("--contractions", action="store_true", help="Include edge contractions and their signs")

    verify = commands.add_parser("verify", help="Check the A∞ identities")
    verify.add_argument("file", help="Quiver file (free, equivalence) or category file (an-category)")
    verify.add_argument("--mode", choices=["free", "an-category", "equivalence"], default="free")
    verify.add_argument("--leaves", type=int, default=None)
    verify.add_argument("--arity", type=int, default=None)
    verify.add_argument("--category", help="Target category file (equivalence mode)")
    verify.add_argument("--map", help="Quiver map f̄ (equivalence mode)")
    verify.add_argument("--map-g", help="Quiver map ḡ (equivalence mode)")

    extend = commands.add_parser("extend", help="Extend a quiver map to a strict A∞-functor")
    extend.add_argument("quiver")
    extend.add_argument("map")
    extend.add_argument("--category", required=True)
    extend.add_argument("--leaves", type=int, default=None)
    extend.add_argument("--out", default=None, help="Write the functor file here instead of stdout")

    restrict = commands.add_parser("restrict", help="Read a functor file back and write its quiver map")
    restrict.add_argument("quiver")
    restrict.add_argument("functor")
    restrict.add_argument("--category", required=True)
    restrict.add_argument("--out", default=None, help="Write the map file here instead of stdout")

    lift = commands.add_parser("lift", help="Lift A₁ transformations between two quiver maps")
    lift.add_argument("quiver")
    lift.add_argument("--category", required=True)
    lift.add_argument("--map", required=True)
    lift.add_argument("--map-g", required=True)
    lift.add_argument("--leaves", type=int, default=None)
    lift.add_argument("--out", default=None)

    report = commands.add_parser("report", help="Tree counts, sign cancellation and optionally a free category check")
    report.add_argument("--quiver", default=None)
    report.add_argument("--leaves", type=int, default=None)
    return parser.parse_args(argv)


def _emit(document: BaseModel, out: Optional[str] = None) -> None:
    text = write_document(document, out)
    if out is None:
        print(text)


def _status(report: SuiteReport) -> int:
    for check in report.checks:
        if not check.passed:
            logger.warning("Check failed: %s", check.name)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_trees(args: argparse.Namespace, verifier: Verifier) -> int:
    report: TreesReport = verifier.trees(args.n, args.contractions)
    _emit(report)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, verifier: Verifier) -> int:
    loader = DataLoader(args.file)
    if args.mode == "free":
        report = verifier.verify_free(loader.load_quiver(), args.leaves, args.arity)
    elif args.mode == "an-category":
        report = verifier.verify_category(loader.load_category(), args.arity or args.leaves)
    else:
        if not (args.category and args.map and args.map_g):
            raise AinfreeError("Equivalence mode needs --category, --map and --map-g")
        quiver = loader.load_quiver()
        category = DataLoader(args.category).load_category()
        f_map = DataLoader(args.map).load_map(quiver, category)
        g_map = DataLoader(args.map_g).load_map(quiver, category)
        report = verifier.verify_equivalence(quiver, category, f_map, g_map, args.leaves)
    _emit(report)
    return _status(report)


def cmd_extend(args: argparse.Namespace, verifier: Verifier) -> int:
    quiver = DataLoader(args.quiver).load_quiver()
    category = DataLoader(args.category).load_category()
    qmap = DataLoader(args.map).load_map(quiver, category)
    document, check = verifier.extend(quiver, qmap, args.leaves)
    _emit(document, args.out)
    if not check.passed:
        logger.warning("The extension fails the functor identities on %s", check.counterexample.word)
        return EXIT_FAILED
    return EXIT_OK


def cmd_restrict(args: argparse.Namespace, verifier: Verifier) -> int:
    quiver = DataLoader(args.quiver).load_quiver()
    category = DataLoader(args.category).load_category()
    f = DataLoader(args.functor).load_functor(quiver, category)
    document, check = verifier.restrict(f)
    _emit(document, args.out)
    if not check.passed:
        logger.warning("The functor file fails the functor identities on %s", check.counterexample.word)
        return EXIT_FAILED
    return EXIT_OK


def cmd_lift(args: argparse.Namespace, verifier: Verifier) -> int:
    quiver = DataLoader(args.quiver).load_quiver()
    category = DataLoader(args.category).load_category()
    f_map = DataLoader(args.map).load_map(quiver, category)
    g_map = DataLoader(args.map_g).load_map(quiver, category)
    document, checks = verifier.lift(quiver, f_map, g_map, args.leaves)
    _emit(document, args.out)
    return EXIT_OK if all(check.passed for check in checks) else EXIT_FAILED


def cmd_report(args: argparse.Namespace, verifier: Verifier) -> int:
    quiver = DataLoader(args.quiver).load_quiver() if args.quiver else None
    report = verifier.report(quiver, args.leaves)
    _emit(report)
    return _status(report)


COMMANDS = {
    "trees": cmd_trees,
    "verify": cmd_verify,
    "extend": cmd_extend,
    "restrict": cmd_restrict,
    "lift": cmd_lift,
    "report": cmd_report,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args, Verifier())
    except (AinfreeError, ValidationError, OSError) as e:
        logger.error("%s", e)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
