import argparse
import sys

import numpy as np
import pandas as pd

from ddkit.commands.common import add_sequence_arguments, sequence_from_args
from ddkit.core.sequences import filter_function
from ddkit.exceptions import CommandError, SequenceError
from ddkit.utils import frame_to_csv


def register(subparsers):
    parser = subparsers.add_parser("filter", help="tabulate the filter function f(omega)")
    add_sequence_arguments(parser)
    parser.add_argument("--omega-max", type=float, required=True, help="largest angular frequency")
    parser.add_argument("--points", type=int, default=256, help="number of frequencies from 0 to omega-max")
    parser.set_defaults(handler=cmd_filter)


def cmd_filter(args: argparse.Namespace) -> int:
    """Emit `omega,re_f,im_f,abs_f2` on an even grid over [0, omega_max]."""
    if args.omega_max <= 0 or args.points < 2:
        raise CommandError(exit_code=2, detail="need --omega-max > 0 and --points >= 2")
    seq = sequence_from_args(args)
    omega = np.linspace(0.0, args.omega_max, args.points)
    try:
        values = filter_function(seq, omega)
    except SequenceError as e:
        raise CommandError(exit_code=2, detail=str(e))
    frame = pd.DataFrame({"omega": omega, "re_f": values.real, "im_f": values.imag, "abs_f2": np.abs(values) ** 2})
    sys.stdout.write(frame_to_csv(frame))
    return 0
