import argparse
import contextlib
import logging
import sys

from functools import partial

from lmshift.conjugacy import BlockMapError, ConjugacyPair
from lmshift.definitions import (
    DefinitionError,
    load_block_map,
    load_params,
    load_shift,
)
from lmshift.lmstructure import ProfileBounds
from lmshift.main import (
    PASS,
    SUITES,
    SuiteError,
    language_pipeline,
    transfer_pipeline,
    verify_pipeline,
)
from lmshift.output import records_output, text_output
from lmshift.synchronization import DEFAULT_DEPTH, DEFAULT_MAXLEN
from lmshift.words import EnumerationBoundError

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--log-level",
        default="WARNING",
        help="Set the logging level (default: WARNING)",
    )
    output = common.add_argument_group(
        "Output",
        description=(
            "Select the output format and destination. Text is meant for "
            "reading, records (one key=value record per line) for scripts."
        ),
    )
    output.add_argument(
        "--format",
        choices=["text", "records"],
        default="text",
        help="Output format (default: text)",
    )
    output.add_argument(
        "--failures-only",
        action="store_true",
        help="Only list failing records in text output",
    )
    output.add_argument("--out", help="Write the report to this file, not stdout")
    output.add_argument(
        "--timing",
        action="store_true",
        help="Add elapsed-time records (makes output non-deterministic)",
    )
    return common


def _at_least(minimum):
    """Argument type for integers no smaller than ``minimum``."""

    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid integer '{text}'") from None
        if value < minimum:
            raise argparse.ArgumentTypeError(f"must be at least {minimum}, got {value}")
        return value

    return parse


def _add_bounds(parser):
    bounds = parser.add_argument_group(
        "Bounds",
        description="Search bounds for certificates and word enumeration.",
    )
    bounds.add_argument(
        "--maxlen",
        type=_at_least(1),
        default=DEFAULT_MAXLEN,
        help=f"Longest word checked (default: {DEFAULT_MAXLEN})",
    )
    bounds.add_argument(
        "--depth",
        type=_at_least(1),
        default=DEFAULT_DEPTH,
        help=f"Context length for synchronization certificates (default: {DEFAULT_DEPTH})",
    )
    bounds.add_argument(
        "--bridge-bound",
        type=_at_least(ProfileBounds.MIN_D),
        default=ProfileBounds().d,
        help="Longest bridge word in the profile sets (default: %(default)s)",
    )
    bounds.add_argument(
        "--run-bound",
        type=_at_least(ProfileBounds.MIN_K),
        default=ProfileBounds().k,
        help="Longest run of a fixed-point symbol in the profile (default: %(default)s)",
    )


def make_parser():
    """Make the command line parser for the lmshift CLI."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="lmshift",
        description=(
            "Check subshifts given as definition files for the structure of "
            "Lind-Marcus type one-counter shifts. Files are paths or "
            "builtin:<name> for the bundled examples. The exit status is 0 "
            "when every check passes, 1 when one fails, and 2 for usage and "
            "file errors."
        ),
    )
    commands = parser.add_subparsers(dest="command", required=True)

    language = commands.add_parser(
        "language",
        parents=[common],
        help="List the admissible words of one length",
    )
    language.add_argument("file", help="Shift definition file")
    language.add_argument(
        "--length", type=_at_least(0), default=1, help="Word length (default: 1)"
    )

    verify = commands.add_parser(
        "verify",
        parents=[common],
        help="Run a verification suite",
    )
    verify.add_argument("file", help="Shift definition file")
    verify.add_argument(
        "--suite",
        choices=list(SUITES),
        required=True,
        help="Suite to run",
    )
    _add_bounds(verify)

    transfer = commands.add_parser(
        "transfer",
        parents=[common],
        help="Carry Lind-Marcus parameters along a conjugacy",
    )
    transfer.add_argument("source", help="Shift the parameters are carried to")
    transfer.add_argument("target", help="Shift with known parameters")
    transfer.add_argument("forward", help="One-block map from source to target")
    transfer.add_argument("inverse", help="Block map from target back to source")
    transfer.add_argument("params", help="Parameters of the target")
    _add_bounds(transfer)
    return parser


def select_output(opts):
    """Use CLI arguments to select the output format.

    Parameters
    ----------
    opts : argparse.Namespace
        The command line arguments.
    """
    if opts.format == "records":
        output = records_output
    elif opts.format == "text":
        output = partial(text_output, show_passing=not opts.failures_only)
    else:  # pragma: no cover
        raise RuntimeError("This should never happen")
    return output


def select_pipeline(opts):
    """Use CLI arguments to load the inputs and select the pipeline.

    Parameters
    ----------
    opts : argparse.Namespace
        The command line arguments.

    Returns
    -------
    Callable[..., dict]
        The pipeline with its inputs bound; it takes ``timing``.
    """
    if opts.command == "language":
        return partial(language_pipeline, load_shift(opts.file), opts.length)

    bounds = ProfileBounds(opts.bridge_bound, opts.run_bound)
    if opts.command == "verify":
        return partial(
            verify_pipeline,
            load_shift(opts.file),
            opts.suite,
            maxlen=opts.maxlen,
            depth=opts.depth,
            bounds=bounds,
        )
    elif opts.command == "transfer":
        source = load_shift(opts.source)
        target = load_shift(opts.target)
        forward = load_block_map(opts.forward, source.alphabet, target.alphabet)
        inverse = load_block_map(opts.inverse, target.alphabet, source.alphabet)
        params = load_params(opts.params, target.alphabet)
        return partial(
            transfer_pipeline,
            ConjugacyPair(source, target, forward, inverse),
            params,
            maxlen=opts.maxlen,
            depth=opts.depth,
            bounds=bounds,
        )
    else:  # pragma: no cover
        raise RuntimeError("This should never happen")


def cli_main(argv=None):
    parser = make_parser()
    opts = parser.parse_args(argv)
    logging.basicConfig(level=opts.log_level)
    output = select_output(opts)

    try:
        pipeline = select_pipeline(opts)
        results = pipeline(timing=opts.timing)
    except (
        DefinitionError,
        BlockMapError,
        EnumerationBoundError,
        SuiteError,
    ) as exc:
        print(f"lmshift: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if opts.out is None:
        output(results)
    else:
        with open(opts.out, "w") as stream, contextlib.redirect_stdout(stream):
            output(results)
    return EXIT_PASS if results["verdict"] == PASS else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(cli_main())
