import argparse
import sys

import pandas as pd

from ddkit.commands.common import add_sequence_arguments, sequence_from_args
from ddkit.core.sequences import filter_taylor_check, lambdas
from ddkit.exceptions import CommandError, ConsistencyError, SequenceError
from ddkit.utils import frame_to_csv


def register(subparsers):
    parser = subparsers.add_parser("lambda", help="tabulate the moment sums Lambda_p")
    add_sequence_arguments(parser, total_time_default=1.0)
    parser.add_argument("--max-p", type=int, required=True, help="largest p")
    parser.add_argument("--check", action="store_true",
                        help="cross-check against the Taylor coefficients of the filter function")
    parser.set_defaults(handler=cmd_lambda)


def cmd_lambda(args: argparse.Namespace) -> int:
    """
    Emit `p,lambda_p` for p = 1..max_p

    Raises:
        CommandError: exit 2 on bad arguments, exit 1 when the Taylor cross-check fails
    """
    seq = sequence_from_args(args)
    try:
        values = filter_taylor_check(seq, args.max_p) if args.check else lambdas(seq, args.max_p)
    except SequenceError as e:
        raise CommandError(exit_code=2, detail=str(e))
    except ConsistencyError as e:
        raise CommandError(exit_code=1, detail=str(e))
    frame = pd.DataFrame({"p": range(1, len(values) + 1), "lambda_p": values})
    sys.stdout.write(frame_to_csv(frame))
    return 0
