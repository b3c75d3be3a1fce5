import argparse

from ddkit.core.sequences import FAMILIES, build_sequence
from ddkit.exceptions import CommandError, SequenceError
from ddkit.schemas.sequence import PulseSequence


def add_sequence_arguments(parser: argparse.ArgumentParser, total_time_default=None):
    parser.add_argument("--family", choices=FAMILIES, required=True, help="sequence family")
    parser.add_argument("--n", type=int, default=1, help="order, level or block count of the family")
    parser.add_argument("--m", type=int, default=None, help="cudd concatenation level / qdd outer order (default: n)")
    parser.add_argument("--total-time", type=float, default=total_time_default,
                        required=total_time_default is None, help="total evolution time T")
    parser.add_argument("--axis", choices=("X", "Y", "Z"), default=None,
                        help="pulse axis for free/hahn/udd/cpmg/pdd (default X)")


def sequence_from_args(args: argparse.Namespace) -> PulseSequence:
    """Build the requested sequence; bad parameters become exit code 2."""
    try:
        return build_sequence(args.family, args.n, args.m, args.total_time, args.axis)
    except SequenceError as e:
        raise CommandError(exit_code=2, detail=str(e))
