import argparse
import sys

import pandas as pd

from ddkit.core.orderfit import DEFAULT_CEILING, DEFAULT_FLOOR, fit_order
from ddkit.exceptions import CommandError, SequenceError
from ddkit.utils import frame_to_csv


def register(subparsers):
    parser = subparsers.add_parser("fit", help="fit a power law to one column of a sweep CSV")
    parser.add_argument("--input", required=True, help="sweep CSV ('#' lines are skipped)")
    parser.add_argument("--column", required=True, help="error column to fit")
    parser.add_argument("--time-column", default="T")
    parser.add_argument("--floor", type=float, default=DEFAULT_FLOOR)
    parser.add_argument("--ceiling", type=float, default=DEFAULT_CEILING)
    parser.set_defaults(handler=cmd_fit)


def cmd_fit(args: argparse.Namespace) -> int:
    """
    Emit `slope,intercept,r_squared,points_used,window_lo,window_hi`

    Returns:
        int: 0 for a valid fit, 1 when fewer than four points survive the window

    Raises:
        CommandError: exit 2 for unreadable input or a missing column
    """
    try:
        frame = pd.read_csv(args.input, comment="#")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise CommandError(exit_code=2, detail=f"cannot read {args.input}: {e}")
    for column in (args.time_column, args.column):
        if column not in frame.columns:
            raise CommandError(exit_code=2, detail=f"{args.input} has no column {column!r}")
    try:
        result = fit_order(list(zip(frame[args.time_column], frame[args.column])), args.floor, args.ceiling)
    except SequenceError as e:
        raise CommandError(exit_code=2, detail=str(e))

    window = result.window or (float("nan"), float("nan"))
    out = pd.DataFrame([{
        "slope": result.slope,
        "intercept": result.intercept,
        "r_squared": result.r_squared,
        "points_used": result.points_used,
        "window_lo": window[0],
        "window_hi": window[1],
    }])
    sys.stdout.write(frame_to_csv(out))
    return 0 if result.valid else 1
