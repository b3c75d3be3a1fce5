"""
Pulse-sequence generators and their analytic decoupling diagnostics.

Every generator expands its construction into a flat list of (time, Pauli)
events, merges events that share a time in the Pauli group modulo phase and
folds out whatever lands on the endpoints. What is left are the interior pulses
of a PulseSequence.
"""

import io
import logging
import math
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ddkit.core import pauli
from ddkit.exceptions import ConsistencyError, SequenceError
from ddkit.schemas.sequence import Pulse, PulseSequence

logger = logging.getLogger(__name__)

# relative time tolerance when grouping events of an expanded recursion
MERGE_TOLERANCE = 1e-12
# below this |omega| T the filter function is summed from its Taylor series
SERIES_THRESHOLD = 1.0
# terms kept beyond the first order a sequence can cancel
SERIES_TERMS = 24
# a moment within this many ulps (per power) of its terms is an exact cancellation
CANCELLATION_FACTOR = 8.0
EPS = float(np.finfo(float).eps)
TAYLOR_TOLERANCE = 1e-9

FAMILIES = ("free", "hahn", "udd", "cpmg", "pdd", "cdd", "cdd4", "cudd", "qdd")

Event = Tuple[float, str]


def _check_count(name: str, value: int, minimum: int) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise SequenceError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


def _check_duration(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise SequenceError(f"{name} must be a positive duration, got {value!r}")
    return value


def _check_axis(axis: str) -> str:
    if axis not in ("X", "Y", "Z"):
        raise SequenceError(f"axis must be one of X, Y, Z, got {axis!r}")
    return axis


def udd_fractions(n: int) -> np.ndarray:
    """
    sin^2(j pi / (2N+2)) for j = 1..N

    Values within rounding of a multiple of 1/4 are snapped onto it, so UDD-2
    coincides bitwise with a CPMG block.
    """
    j = np.arange(1, n + 1)
    fractions = np.sin(j * np.pi / (2 * n + 2)) ** 2
    quarters = np.round(fractions * 4) / 4
    snap = np.abs(fractions - quarters) < 4 * np.finfo(float).eps
    return np.where(snap, quarters, fractions)


def canonicalize(events: Iterable[Event], total_time: float, label: str) -> PulseSequence:
    """
    Merge same-time events and fold out the endpoints

    Args:
        events (Iterable[Event]): (time, axis) pairs in time order; operators at equal
            times are listed in the order they act
        total_time (float): T
        label (str): label of the resulting sequence

    Returns:
        PulseSequence: the interior pulses
    """
    tol = MERGE_TOLERANCE * total_time
    groups: List[List] = []
    for time, axis in sorted(events, key=lambda e: e[0]):
        if groups and abs(time - groups[-1][0]) <= tol:
            groups[-1][1].append(axis)
        else:
            groups.append([time, [axis]])

    pulses = []
    for time, axes in groups:
        merged = pauli.product(axes)
        if merged == "I" or time <= tol or time >= total_time - tol:
            continue
        pulses.append(Pulse(time=time, axis=merged))
    return PulseSequence(total_time=total_time, pulses=tuple(pulses), label=label)


def from_times(times: Sequence[float], total_time: float, axis: str = "X", label: str = "custom") -> PulseSequence:
    total_time = _check_duration("total_time", total_time)
    _check_axis(axis)
    try:
        return PulseSequence(
            total_time=total_time,
            pulses=tuple(Pulse(time=float(t), axis=axis) for t in times),
            label=label,
        )
    except ValueError as e:
        raise SequenceError(str(e)) from e


def generate_free(total_time: float) -> PulseSequence:
    return PulseSequence(total_time=_check_duration("total_time", total_time), label="free")


def generate_udd(n: int, total_time: float, axis: str = "X") -> PulseSequence:
    """
    Uhrig sequence: N pulses at T sin^2(j pi / (2N+2))

    Args:
        n (int): number of pulses, N >= 1
        total_time (float): T > 0
        axis (str): pulse axis, X for pure dephasing, Z for the relaxation variant

    Returns:
        PulseSequence: labelled "udd:N"

    Raises:
        SequenceError: on N < 1 or T <= 0
    """
    n = _check_count("N", n, 1)
    total_time = _check_duration("total_time", total_time)
    return from_times(total_time * udd_fractions(n), total_time, _check_axis(axis), f"udd:{n}")


def generate_hahn(total_time: float, axis: str = "X") -> PulseSequence:
    seq = generate_udd(1, total_time, axis)
    return seq.model_copy(update={"label": "hahn"})


def generate_cpmg(n_blocks: int, total_time: float, axis: str = "X") -> PulseSequence:
    """Blocks of length 4 tau with pulses at tau and 3 tau."""
    n_blocks = _check_count("n_blocks", n_blocks, 1)
    total_time = _check_duration("total_time", total_time)
    k = np.arange(n_blocks)
    odd = np.sort(np.concatenate((4 * k + 1, 4 * k + 3)))
    times = total_time * (odd / (4 * n_blocks))
    return from_times(times, total_time, _check_axis(axis), f"cpmg:{n_blocks}")


def generate_pdd(n: int, total_time: float, axis: str = "X") -> PulseSequence:
    """Periodic DD: N equally spaced pulses at j T / (N+1)."""
    n = _check_count("N", n, 1)
    total_time = _check_duration("total_time", total_time)
    times = total_time * (np.arange(1, n + 1) / (n + 1))
    return from_times(times, total_time, _check_axis(axis), f"pdd:{n}")


def cdd_dephasing_events(level: int, start: int = 0) -> List[Tuple[int, str]]:
    """Events of U_n = X U_{n-1} X U_{n-1} in units of tau, endpoints included."""
    if level == 0:
        return []
    half = 2 ** (level - 1)
    return (
        cdd_dephasing_events(level - 1, start)
        + [(start + half, "X")]
        + cdd_dephasing_events(level - 1, start + half)
        + [(start + 2 * half, "X")]
    )


def cdd_general_events(level: int, start: int = 0) -> List[Tuple[int, str]]:
    """Events of U_n = U_{n-1} [X U X][Y U Y][Z U Z] in units of tau, endpoints included."""
    if level == 0:
        return []
    quarter = 4 ** (level - 1)
    events = []
    for k, axis in enumerate(("Z", "Y", "X")):
        s = start + k * quarter
        events += [(s, axis)] + cdd_general_events(level - 1, s) + [(s + quarter, axis)]
    return events + cdd_general_events(level - 1, start + 3 * quarter)


def generate_cdd_dephasing(level: int, tau: float) -> PulseSequence:
    """
    Concatenated DD against pure dephasing over T = 2^n tau

    Raises:
        SequenceError: on negative level or non-positive tau
    """
    level = _check_count("level", level, 0)
    tau = _check_duration("tau", tau)
    events = [(units * tau, axis) for units, axis in cdd_dephasing_events(level)]
    return canonicalize(events, tau * 2**level, f"cdd:{level}")


def generate_cdd_general(level: int, tau: float) -> PulseSequence:
    level = _check_count("level", level, 0)
    tau = _check_duration("tau", tau)
    events = [(units * tau, axis) for units, axis in cdd_general_events(level)]
    return canonicalize(events, tau * 4**level, f"cdd4:{level}")


def cudd_events(n: int, level: int, block: int = 0) -> List[Tuple[float, str]]:
    """CDD recursion with a Z-axis UDD-N block in place of free evolution, in units of tau_inner."""
    if level == 0:
        return [(block + f, "Z") for f in udd_fractions(n)]
    half = 2 ** (level - 1)
    return (
        cudd_events(n, level - 1, block)
        + [(block + half, "X")]
        + cudd_events(n, level - 1, block + half)
        + [(block + 2 * half, "X")]
    )


def generate_cudd(n: int, level: int, tau_inner: float) -> PulseSequence:
    n = _check_count("N", n, 1)
    level = _check_count("m", level, 0)
    tau_inner = _check_duration("tau_inner", tau_inner)
    events = [(units * tau_inner, axis) for units, axis in cudd_events(n, level)]
    return canonicalize(events, tau_inner * 2**level, f"cudd:{n}:{level}")


def generate_qdd(outer: int, inner: int, total_time: float) -> PulseSequence:
    """
    Quadratic DD: X pulses at UDD-M times, each outer interval filled with a Z-axis UDD-N

    Args:
        outer (int): outer order M
        inner (int): inner order N; N = 0 reduces to UDD-M
        total_time (float): T

    Returns:
        PulseSequence: at most M + (M+1) N pulses
    """
    outer = _check_count("M", outer, 0)
    inner = _check_count("N", inner, 0)
    total_time = _check_duration("total_time", total_time)
    edges = np.concatenate(([0.0], total_time * udd_fractions(outer), [total_time]))
    inner_fractions = udd_fractions(inner)
    events: List[Event] = []
    for a, b in zip(edges[:-1], edges[1:]):
        events += [(a + (b - a) * f, "Z") for f in inner_fractions]
        if b < total_time:
            events.append((b, "X"))
    return canonicalize(events, total_time, f"qdd:{outer}:{inner}")


def build_sequence(family: str, n: int = 0, m: Optional[int] = None, total_time: float = 1.0,
                   axis: Optional[str] = None) -> PulseSequence:
    """
    Build any supported family from the (family, n, m, T) parameters the CLI and configs use

    cdd, cdd4 and cudd derive their base duration from T; m defaults to n for cudd and qdd.
    """
    if family not in FAMILIES:
        raise SequenceError(f"unknown family {family!r}, expected one of {', '.join(FAMILIES)}")
    total_time = _check_duration("total_time", total_time)
    if family == "free":
        return generate_free(total_time)
    if family == "hahn":
        return generate_hahn(total_time, axis or "X")
    if family == "udd":
        return generate_udd(n, total_time, axis or "X")
    if family == "cpmg":
        return generate_cpmg(n, total_time, axis or "X")
    if family == "pdd":
        return generate_pdd(n, total_time, axis or "X")
    if family == "cdd":
        level = _check_count("level", n, 0)
        return generate_cdd_dephasing(level, total_time / 2**level)
    if family == "cdd4":
        level = _check_count("level", n, 0)
        return generate_cdd_general(level, total_time / 4**level)
    level = n if m is None else m
    if family == "cudd":
        level = _check_count("m", level, 0)
        return generate_cudd(n, level, total_time / 2**level)
    return generate_qdd(level, n, total_time)


def require_single_axis(seq: PulseSequence) -> None:
    if seq.count and seq.axis is None:
        raise SequenceError(f"sequence {seq.label!r} mixes pulse axes; the modulation function is undefined")


def normalized_boundaries(seq: PulseSequence) -> np.ndarray:
    x = seq.boundaries / seq.total_time
    x[-1] = 1.0
    return x


def lambda_p(seq: PulseSequence, p: int) -> float:
    """
    Signed moment sum Lambda_p = sum_j (-1)^j [(T_{j+1}/T)^p - (T_j/T)^p]

    Args:
        seq (PulseSequence): single-axis sequence
        p (int): moment order >= 1

    Returns:
        float: Lambda_p, accumulated with compensated summation
    """
    p = _check_count("p", p, 1)
    require_single_axis(seq)
    x = normalized_boundaries(seq)
    terms = []
    for j in range(len(x) - 1):
        sign = 1.0 if j % 2 == 0 else -1.0
        terms.append(sign * x[j + 1] ** p)
        terms.append(-sign * x[j] ** p)
    return math.fsum(terms)


def lambdas(seq: PulseSequence, max_p: int) -> List[float]:
    return [lambda_p(seq, p) for p in range(1, max_p + 1)]


class ModulationFunction:
    """
    F_N(t) = (-1)^j on [T_j, T_{j+1}), evaluable on scalars or arrays

    Args:
        sequence (PulseSequence): single-axis sequence
    """

    def __init__(self, sequence: PulseSequence):
        require_single_axis(sequence)
        self.sequence = sequence
        self._times = sequence.times

    def __call__(self, t):
        flips = np.searchsorted(self._times, np.asarray(t, dtype=float), side="right")
        values = np.where(flips % 2 == 0, 1.0, -1.0)
        return float(values) if np.ndim(values) == 0 else values


def modulation(seq: PulseSequence) -> ModulationFunction:
    return ModulationFunction(seq)


def series_coefficients(seq: PulseSequence, n_terms: int) -> np.ndarray:
    """
    Lambda_p / p! for p = 1..n_terms

    Moments that cancel down to the rounding of their terms are set to exact zeros,
    so that the leading surviving moment sets the low-frequency behaviour.
    """
    x = normalized_boundaries(seq)
    coefficients = np.zeros(n_terms)
    inverse_factorial = 1.0
    for p in range(1, n_terms + 1):
        inverse_factorial /= p
        value = lambda_p(seq, p)
        magnitude = 2.0 * float(np.sum(x**p))
        if abs(value) > CANCELLATION_FACTOR * p * EPS * magnitude:
            coefficients[p - 1] = value * inverse_factorial
    return coefficients


def filter_function(seq: PulseSequence, omega):
    """
    f(omega) = integral_0^T F_N(t) exp(i omega t) dt

    For |omega| T below SERIES_THRESHOLD f is summed from its Taylor series in Lambda_p,
    which avoids the 1/omega cancellation of the closed form.

    Args:
        seq (PulseSequence): single-axis sequence
        omega (float | np.ndarray): angular frequency

    Returns:
        complex | np.ndarray: filter function values
    """
    require_single_axis(seq)
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    total_time = seq.total_time
    edges = seq.boundaries
    signs = np.where(np.arange(len(edges) - 1) % 2 == 0, 1.0, -1.0)

    result = np.empty(omega_arr.shape, dtype=complex)
    small = np.abs(omega_arr) * total_time < SERIES_THRESHOLD
    if np.any(~small):
        w = omega_arr[~small][:, None]
        phases = np.exp(1j * w * edges[None, :])
        jumps = (phases[:, 1:] - phases[:, :-1]) @ signs
        result[~small] = jumps / (1j * omega_arr[~small])
    if np.any(small):
        # N + 1 is the highest order a single-axis sequence of N pulses can cancel
        coefficients = series_coefficients(seq, seq.count + 1 + SERIES_TERMS)
        z = 1j * omega_arr[small] * total_time
        result[small] = total_time * np.polynomial.polynomial.polyval(z, coefficients)
    return complex(result[0]) if np.ndim(omega) == 0 else result


def _taylor_coefficient(x: np.ndarray, m: int, points: int) -> float:
    """m-th Taylor coefficient of sum_j (-1)^j (e^{z x_{j+1}} - e^{z x_j}) from a Cauchy contour."""
    radius = float(max(m, 1))
    z = radius * np.exp(2j * np.pi * np.arange(points) / points)
    signs = np.where(np.arange(len(x) - 1) % 2 == 0, 1.0, -1.0)
    exps = np.exp(z[:, None] * x[None, :])
    g = (exps[:, 1:] - exps[:, :-1]) @ signs
    coefficients = np.fft.fft(g) / points
    return float(coefficients[m].real / radius**m)


def filter_taylor_check(seq: PulseSequence, max_n: int) -> List[float]:
    """
    Lambda_1..Lambda_max_n, cross-checked against the Taylor coefficients of f at omega = 0

    Raises:
        ConsistencyError: if the two evaluations differ by more than 1e-9 relative
    """
    max_n = _check_count("max_n", max_n, 1)
    direct = lambdas(seq, max_n)
    x = normalized_boundaries(seq)
    points = 4 * max_n + 32
    for m, expected in enumerate(direct, start=1):
        extracted = _taylor_coefficient(x, m, points) * math.factorial(m)
        if abs(extracted - expected) > TAYLOR_TOLERANCE * max(1.0, abs(expected)):
            logger.error(f"Taylor check failed for {seq.label} at p={m}: {extracted!r} vs {expected!r}")
            raise ConsistencyError(
                f"Lambda_{m} of {seq.label}: direct {expected:.17g}, Taylor {extracted:.17g}"
            )
    return direct


def theta_samples(seq: PulseSequence, grid_size: int = 4096) -> Tuple[np.ndarray, np.ndarray]:
    """f_N(theta) = F_N(T sin^2(theta/2)) on the midpoint grid (k + 1/2) pi / M."""
    grid_size = _check_count("grid_size", grid_size, 2)
    theta = (np.arange(grid_size) + 0.5) * np.pi / grid_size
    return theta, modulation(seq)(seq.total_time * np.sin(theta / 2) ** 2)


def sequence_to_csv(seq: PulseSequence) -> str:
    frame = pd.DataFrame({
        "index": np.arange(seq.count, dtype=int),
        "time": seq.times,
        "axis": list(seq.axes),
    })
    header = f"# total_time={seq.total_time:.17g} parity={seq.parity} label={seq.label}\n"
    return header + frame.to_csv(index=False, float_format="%.17g", lineterminator="\n")


def read_sequence_csv(path: Union[str, Path]) -> PulseSequence:
    """
    Read a sequence written by sequence_to_csv

    Raises:
        SequenceError: when the comment line is missing or the rows are malformed
    """
    text = Path(path).read_text()
    first, _, body = text.partition("\n")
    if not first.startswith("#"):
        raise SequenceError(f"{path}: missing '# total_time=...' header")
    fields = dict(item.split("=", 1) for item in first.lstrip("# ").split() if "=" in item)
    if "total_time" not in fields:
        raise SequenceError(f"{path}: header lacks total_time")
    frame = pd.read_csv(io.StringIO(body), dtype={"axis": str})
    try:
        return PulseSequence(
            total_time=float(fields["total_time"]),
            pulses=tuple(Pulse(time=float(t), axis=a) for t, a in zip(frame["time"], frame["axis"])),
            label=fields.get("label", ""),
        )
    except (ValueError, KeyError) as e:
        raise SequenceError(f"{path}: {e}") from e
