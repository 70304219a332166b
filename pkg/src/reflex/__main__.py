import argparse
import logging
import os
import pathlib
import sys
from typing import Callable
from typing import List
from typing import NoReturn
from typing import Optional

from . import engine
from . import errors
from .catalog import CATALOG_ENV
from .catalog import load_catalog
from .colors import colored
from .formatter import print_summary
from .report import Report
from .report import now
from .types import Assumption
from .types import GroupChoice

LOGGER = logging.getLogger(__file__)

EXIT_NEGATIVE_VERDICT = 2


def _verbose_to_log_level(verbose_level: int) -> int:  # pragma: no cover
    if verbose_level == 0:
        return logging.WARNING
    elif verbose_level == 1:
        return logging.INFO
    else:
        return logging.DEBUG


def _exit_with_code(exception: BaseException) -> NoReturn:  # pragma: no cover
    sys.exit(1)


def produce_error_message(exception: BaseException) -> str:
    msg = f"{exception}\n"
    if isinstance(exception, errors.ReflexError) and hasattr(exception, "HELP_TEXT"):
        msg += getattr(exception, "HELP_TEXT")
    return colored(msg, "red")


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")
    return number


def _name_list(value: str) -> List[str]:
    names = [name.strip() for name in value.split(",") if name.strip()]
    if not names:
        raise argparse.ArgumentTypeError("expected a comma separated list of names")
    return names


def _add_group_option(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--group",
        type=GroupChoice,
        choices=[GroupChoice.FULL_PLUS, GroupChoice.STABLE],
        default=GroupChoice.FULL_PLUS,
        metavar="{full_plus,stable}",
        help="Arithmetic group of an orthogonal lattice (Hermitian lattices always use "
        "the full unitary group)",
    )


def generate_cli_parser() -> argparse.ArgumentParser:
    general_options_parser = argparse.ArgumentParser(add_help=False)
    general_options_parser.add_argument("-v", "--verbose", action="count", default=0)
    general_options_parser.add_argument(
        "--no-color",
        action="store_true",
        default=False,
        help="Deactivate colored output",
    )
    general_options_parser.add_argument(
        "--catalog",
        default=None,
        help=f"Directory with catalog JSON files (default: ${CATALOG_ENV}, "
        "else built-ins only)",
    )
    general_options_parser.add_argument(
        "--budget-nodes",
        type=_positive_int,
        default=None,
        help="Maximum number of search nodes per enumeration or witness search",
    )
    general_options_parser.add_argument(
        "--budget-results",
        type=_positive_int,
        default=None,
        help="Stop an enumeration after this many vectors",
    )
    general_options_parser.add_argument(
        "--workers",
        type=_positive_int,
        default=1,
        help="Number of processes used by enumerations",
    )
    general_options_parser.add_argument(
        "--output",
        default="-",
        help="Where to write the JSON report ('-' for stdout, the default)",
    )
    general_options_parser.add_argument(
        "--summary",
        action="store_true",
        default=False,
        help="Print a human readable summary of the report on stderr",
    )
    general_options_parser.add_argument(
        "--timestamp",
        action="store_true",
        dest="timestamp",
        default=True,
        help="Include the creation time in the report (the default)",
    )
    general_options_parser.add_argument(
        "--no-timestamp",
        action="store_false",
        dest="timestamp",
        help="Leave the creation time out so reports are byte-identical across runs",
    )

    parser = argparse.ArgumentParser(
        prog="reflex",
        description="Exact lattice computations for reflective modular forms and the "
        "birational type of modular varieties",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, dest="global_verbose"
    )
    parser.add_argument(
        "--no-color",
        action="store_true",
        dest="global_no_color",
        help="Deactivate colored output",
    )

    parser.add_argument_group("command")
    subparsers = parser.add_subparsers(
        title="commands",
        help="What should be computed (use <command> --help for a command-specific "
        "help section).",
        dest="command",
    )
    subparsers.required = True

    lattice_parser = subparsers.add_parser("lattice", help="Inspect a catalog lattice")
    lattice_commands = lattice_parser.add_subparsers(dest="lattice_command")
    lattice_commands.required = True
    info_parser = lattice_commands.add_parser(
        "info", help="Invariants of a lattice", parents=[general_options_parser]
    )
    info_parser.set_defaults(func=process_lattice_info)
    info_parser.add_argument("name", help="Name of the lattice")
    roots_parser = lattice_commands.add_parser(
        "roots",
        help="Count vectors of a given norm in a definite lattice",
        parents=[general_options_parser],
    )
    roots_parser.set_defaults(func=process_lattice_roots)
    roots_parser.add_argument("name", help="Name of the lattice")
    roots_parser.add_argument(
        "--norm", type=int, default=-2, help="Norm to count (default -2)"
    )

    herm_parser = subparsers.add_parser("herm", help="Hermitian lattice tools")
    herm_commands = herm_parser.add_subparsers(dest="herm_command")
    herm_commands.required = True
    trace_parser = herm_commands.add_parser(
        "trace-form",
        help="Trace form of a Hermitian lattice",
        parents=[general_options_parser],
    )
    trace_parser.set_defaults(func=process_trace_form)
    trace_parser.add_argument("name", help="Name of the Hermitian lattice")

    ramify_parser = subparsers.add_parser(
        "ramify", help="Branch divisor report", parents=[general_options_parser]
    )
    ramify_parser.set_defaults(func=process_ramify)
    target = ramify_parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--lattice", help="Orthogonal (or Hermitian) lattice name")
    target.add_argument("--herm", help="Hermitian lattice name")
    ramify_parser.add_argument(
        "--norm-bound",
        type=int,
        default=None,
        help="Most negative norm of the classes examined (default -4, or -2 for "
        "Hermitian lattices)",
    )
    _add_group_option(ramify_parser)

    classify_parser = subparsers.add_parser(
        "classify",
        help="Slope and verdict for a lattice and a reflective form",
        parents=[general_options_parser],
    )
    classify_parser.set_defaults(func=process_classify)
    classify_parser.add_argument("--lattice", required=True, help="Lattice name")
    classify_parser.add_argument(
        "--form",
        required=True,
        help="Form name; append '|' to restrict an orthogonal form to a ball",
    )
    classify_parser.add_argument(
        "--assumption",
        type=Assumption,
        choices=list(Assumption),
        default=Assumption.I,
        metavar="{i,ii}",
        help="Divisor condition to check (default i)",
    )
    _add_group_option(classify_parser)

    combine_parser = subparsers.add_parser(
        "combine",
        help="Find a product of forms whose divisor is the branch divisor",
        parents=[general_options_parser],
    )
    combine_parser.set_defaults(func=process_combine)
    combine_parser.add_argument("--lattice", required=True, help="Lattice name")
    combine_parser.add_argument(
        "--forms", required=True, type=_name_list, help="Comma separated form names"
    )
    _add_group_option(combine_parser)

    cusp_parser = subparsers.add_parser(
        "cusp", help="Naked cusp analysis", parents=[general_options_parser]
    )
    cusp_parser.set_defaults(func=process_cusp)
    cusp_parser.add_argument("--lattice", required=True, help="Orthogonal lattice name")
    cusp_parser.add_argument(
        "--cusps", required=True, type=_name_list, help="Comma separated cusp names"
    )
    _add_group_option(cusp_parser)

    ledger_parser = subparsers.add_parser("ledger", help="Reflective form ledger")
    ledger_commands = ledger_parser.add_subparsers(dest="ledger_command")
    ledger_commands.required = True
    list_parser = ledger_commands.add_parser(
        "list", help="List the known forms", parents=[general_options_parser]
    )
    list_parser.set_defaults(func=process_ledger_list)
    list_parser.add_argument("--ambient", default=None, help="Only forms on this lattice")
    show_parser = ledger_commands.add_parser(
        "show", help="Show one form", parents=[general_options_parser]
    )
    show_parser.set_defaults(func=process_ledger_show)
    show_parser.add_argument("name", help="Name of the form")

    return parser


def _settings(args: argparse.Namespace) -> engine.Settings:
    return engine.Settings(
        budget_nodes=args.budget_nodes,
        budget_results=args.budget_results,
        workers=args.workers,
    )


def process_lattice_info(args: argparse.Namespace) -> Report:
    return engine.lattice_info(load_catalog(args.catalog), args.name)


def process_lattice_roots(args: argparse.Namespace) -> Report:
    return engine.lattice_roots(load_catalog(args.catalog), args.name, args.norm,
                                _settings(args))


def process_trace_form(args: argparse.Namespace) -> Report:
    return engine.herm_trace_form(load_catalog(args.catalog), args.name)


def process_ramify(args: argparse.Namespace) -> Report:
    catalog = load_catalog(args.catalog)
    if args.herm is not None:
        catalog.herm_lattice(args.herm)
    return engine.ramify_lattice(
        catalog, args.herm or args.lattice, args.group, _settings(args), args.norm_bound
    )


def process_classify(args: argparse.Namespace) -> Report:
    return engine.classify(
        load_catalog(args.catalog), args.lattice, args.form, args.group, args.assumption,
        _settings(args),
    )


def process_combine(args: argparse.Namespace) -> Report:
    return engine.combine(
        load_catalog(args.catalog), args.lattice, args.forms, args.group, _settings(args)
    )


def process_cusp(args: argparse.Namespace) -> Report:
    return engine.cusp_analysis(
        load_catalog(args.catalog), args.lattice, args.cusps, args.group, _settings(args)
    )


def process_ledger_list(args: argparse.Namespace) -> Report:
    return engine.ledger_list(load_catalog(args.catalog), args.ambient)


def process_ledger_show(args: argparse.Namespace) -> Report:
    return engine.ledger_show(load_catalog(args.catalog), args.name)


def write_report(report: Report, output: str) -> None:
    text = report.to_json()
    if output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = pathlib.Path(output)
    path.write_text(text)
    LOGGER.info("Report written to %s", path)


def run(args: argparse.Namespace) -> int:
    func: Callable[[argparse.Namespace], Report] = args.func
    report = func(args)
    if args.timestamp:
        report.timestamp = now()
    write_report(report, args.output)
    if args.summary:
        print_summary(report)
    return EXIT_NEGATIVE_VERDICT if report.negative else 0


def main(argv: Optional[List[str]] = None) -> None:
    parser = generate_cli_parser()
    args = parser.parse_args(argv)

    args.no_color = args.no_color or args.global_no_color
    args.verbose = max(args.verbose, args.global_verbose)

    logging.basicConfig(
        level=_verbose_to_log_level(args.verbose),
        format="%(levelname)s(%(funcName)s): %(message)s",
    )

    if args.no_color:
        os.environ["NO_COLOR"] = "1"

    try:
        code = run(args)
    except (errors.ReflexError, OSError) as the_error:
        print(produce_error_message(the_error), file=sys.stderr)
        _exit_with_code(the_error)
    if code:
        sys.exit(code)


if __name__ == "__main__":  # pragma: no cover
    main()
