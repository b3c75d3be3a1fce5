import argparse
import sys

from ddkit.commands.common import add_sequence_arguments, sequence_from_args
from ddkit.core.sequences import sequence_to_csv


def register(subparsers):
    parser = subparsers.add_parser("seq", help="print a pulse sequence as CSV")
    add_sequence_arguments(parser)
    parser.set_defaults(handler=cmd_seq)


def cmd_seq(args: argparse.Namespace) -> int:
    """
    Emit the sequence CSV (index,time,axis) on standard output

    Args:
        args (argparse.Namespace): family, n, m, total_time, axis

    Returns:
        int: 0

    Raises:
        CommandError: exit code 2 for invalid sequence parameters
    """
    seq = sequence_from_args(args)
    sys.stdout.write(sequence_to_csv(seq))
    return 0
