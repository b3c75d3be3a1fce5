"""Power-law exponents of error-vs-time sweeps."""

import logging
from typing import List, Sequence, Tuple

import numpy as np

from ddkit.exceptions import SequenceError
from ddkit.schemas.report import OrderFitResult

logger = logging.getLogger(__name__)

DEFAULT_FLOOR = 1e-12
DEFAULT_CEILING = 1e-1
MIN_PAIRS = 6
MIN_POINTS = 4


def make_time_grid(t_max: float, points: int = 12, ratio: float = 2 ** 0.5) -> List[float]:
    """
    Geometric grid T_max / ratio^k, k = points-1 .. 0, returned ascending

    Raises:
        SequenceError: on ratio <= 1, points < 1 or t_max <= 0
    """
    if ratio <= 1:
        raise SequenceError(f"ratio must exceed 1, got {ratio}")
    if int(points) != points or points < 1:
        raise SequenceError(f"points must be a positive integer, got {points!r}")
    if t_max <= 0:
        raise SequenceError(f"t_max must be positive, got {t_max}")
    return [t_max / ratio**k for k in range(int(points) - 1, -1, -1)]


def fit_order(pairs: Sequence[Tuple[float, float]], floor: float = DEFAULT_FLOOR,
              ceiling: float = DEFAULT_CEILING) -> OrderFitResult:
    """
    Least-squares slope of log(error) against log(T) inside (floor, ceiling)

    Args:
        pairs (Sequence[tuple[float, float]]): (T, error) with T strictly increasing;
            NaN or infinite errors are left out of the fit
        floor (float): errors at or below are rounding noise
        ceiling (float): errors at or above are outside the asymptotic regime

    Returns:
        OrderFitResult: flagged invalid when fewer than four points survive

    Raises:
        SequenceError: for fewer than six pairs, unsorted T or negative errors
    """
    data = np.asarray(pairs, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < MIN_PAIRS:
        raise SequenceError(f"need at least {MIN_PAIRS} (T, error) pairs")
    times, errors = data[:, 0], data[:, 1]
    if np.any(times <= 0) or np.any(np.diff(times) <= 0):
        raise SequenceError("T values must be positive and strictly increasing")
    finite = np.isfinite(errors)
    if np.any(errors[finite] < 0):
        raise SequenceError("errors must be non-negative")
    if not np.all(finite):
        logger.info(f"Skipping {int(np.count_nonzero(~finite))} points without a finite error")

    keep = finite & (errors > floor) & (errors < ceiling)
    used = int(np.count_nonzero(keep))
    if used < MIN_POINTS:
        logger.info(f"Only {used} points inside ({floor:g}, {ceiling:g}); fit marked invalid")
        return OrderFitResult(points_used=used)

    x, y = np.log(times[keep]), np.log(errors[keep])
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    spread = np.sum((y - y.mean()) ** 2)
    r_squared = 1.0 - float(np.sum(residual**2)) / float(spread) if spread > 0 else 1.0
    return OrderFitResult(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=min(1.0, max(0.0, r_squared)),
        points_used=used,
        window=(float(times[keep][0]), float(times[keep][-1])),
        valid=True,
    )
