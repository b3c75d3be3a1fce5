"""
Sweep runners behind `ddkit run`.

Each engine turns one total time T into one CSV row; the rows are computed in
parallel and assembled in grid order, then the configured column is fitted.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd
from pydantic import ValidationError

from ddkit.core import classicalnoise, finitebath, orderfit, sequences, spinboson, stateprotect
from ddkit.exceptions import ConfigError, SequenceError
from ddkit.schemas import ExperimentConfig, FitReport, NoiseSpectrum, OrderFitResult
from ddkit.utils import config_hash, parallel_map, provenance

logger = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    sweep: pd.DataFrame
    fit: OrderFitResult
    report: FitReport
    provenance: Dict[str, object]
    trace: Optional[pd.DataFrame] = None


def load_config(path: Path, seed: Optional[int] = None) -> Tuple[ExperimentConfig, Path]:
    """
    Read, validate and seed an experiment config

    Relative file references inside the config resolve against the config's directory.

    Args:
        path (Path): JSON config
        seed (int, optional): replaces every seed inside the config

    Returns:
        tuple[ExperimentConfig, Path]: the validated config and its directory

    Raises:
        ConfigError: on unreadable JSON, schema violations or missing referenced files
    """
    path = Path(path)
    try:
        payload = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    try:
        config = ExperimentConfig.model_validate(payload)
    except ValidationError as e:
        raise ConfigError(f"invalid config {path}:\n{e}") from e

    if seed is not None:
        for section in ("bath", "noise", "system"):
            part = getattr(config, section)
            if part is not None:
                config = config.model_copy(update={section: part.model_copy(update={"seed": seed})})

    try:
        _sequence_at(config, config.sweep.t_max)
    except SequenceError as e:
        raise ConfigError(f"invalid sequence in {path}: {e}") from e

    base = path.parent
    for ref in (config.modes.file if config.modes else None, config.noise.table if config.noise else None):
        if ref is not None and not (base / ref).is_file():
            raise ConfigError(f"referenced file {ref!r} does not exist")
    return config, base


def config_seed(config: ExperimentConfig) -> Optional[int]:
    for section in ("bath", "noise", "system"):
        part = getattr(config, section)
        if part is not None:
            return part.seed
    return None


def _sequence_at(config: ExperimentConfig, total_time: float):
    spec = config.sequence
    return sequences.build_sequence(spec.family, spec.n, spec.m, total_time, spec.axis)


def load_spectrum(config: ExperimentConfig, base: Path) -> NoiseSpectrum:
    noise = config.noise
    fields = dict(kind=noise.kind, amplitude=noise.amplitude, cutoff=noise.cutoff, omega_min=noise.omega_min)
    if noise.kind == "tabulated":
        table = pd.read_csv(base / noise.table, comment="#")
        if not {"omega", "S"} <= set(table.columns):
            raise ConfigError(f"{noise.table}: expected columns omega,S")
        fields.update(omega=tuple(table["omega"]), values=tuple(table["S"]))
    try:
        return NoiseSpectrum(**fields)
    except ValidationError as e:
        raise ConfigError(f"invalid spectrum: {e}") from e


def _spinboson_rows(config: ExperimentConfig, base: Path):
    spec = config.modes
    if spec.file is not None:
        modes = spinboson.load_modes_csv(base / spec.file)
    elif spec.inline is not None:
        modes = list(spec.inline)
    else:
        modes = spinboson.ohmic_modes(spec.ohmic.alpha, spec.ohmic.omega_c, spec.ohmic.count)

    def row(t):
        deficit = spinboson.decoherence(modes, _sequence_at(config, t))
        return {"T": t, "L": 1.0 - deficit, "deficit": deficit}

    def trace(t):
        return spinboson.coherence(modes, _sequence_at(config, t)).to_frame()

    return row, {"modes": len(modes)}, trace


def _finitebath_rows(config: ExperimentConfig, base: Path):
    spec = config.bath
    H = finitebath.random_hamiltonian(spec.dim, spec.alpha, spec.beta, spec.seed, spec.pure_dephasing)
    H.propagator  # diagonalize before the workers share H

    def row(t):
        metrics = finitebath.error_metrics(H, _sequence_at(config, t))
        return {"T": t, **metrics.model_dump()}

    meta = {"dim": spec.dim, "alpha": spec.alpha, "beta": spec.beta, "pure_dephasing": spec.pure_dephasing}
    return row, meta, None


def _noise_rows(config: ExperimentConfig, base: Path):
    spec = config.noise
    spectrum = load_spectrum(config, base)

    def row(t):
        seq = _sequence_at(config, t)
        chi = classicalnoise.decoherence_exponent(spectrum, seq)
        mc, stderr = classicalnoise.mc_coherence(spectrum, seq, spec.realizations, spec.seed, method=spec.method)
        return {"sequence": seq.label, "N": seq.count, "T": t, "chi_analytic": chi,
                "coherence_mc": mc, "stderr": stderr}

    meta = {"spectrum": spectrum.kind, "amplitude": spectrum.amplitude, "realizations": spec.realizations}
    return row, meta, None


def _protect_rows(config: ExperimentConfig, base: Path):
    spec = config.system
    system = stateprotect.random_protected_system(spec.dim, spec.seed, spec.norm)
    system.propagator, system.pulse
    order = config.sequence.n

    def row(t):
        metrics = stateprotect.protection_error(system, stateprotect.protected_propagator(system, order, t))
        return {"T": t, "commutator_error": metrics.commutator_error, "leakage": metrics.leakage}

    return row, {"dim": spec.dim, "norm": spec.norm}, None


ENGINES: Dict[str, Callable] = {
    "spinboson": _spinboson_rows,
    "finitebath": _finitebath_rows,
    "noise": _noise_rows,
    "protect": _protect_rows,
}


def verdict(fit: OrderFitResult, claimed: float, tolerance: float, mode: str) -> bool:
    if not fit.valid:
        return False
    if mode == "at_least":
        return fit.slope >= claimed - tolerance
    if mode == "at_most":
        return fit.slope <= claimed + tolerance
    return abs(fit.slope - claimed) <= tolerance


def run_experiment(config: ExperimentConfig, base: Path, threads: int = 1) -> ExperimentResult:
    """
    Sweep the configured engine over the T grid and fit the configured column

    Args:
        config (ExperimentConfig): validated config
        base (Path): directory against which referenced files resolve
        threads (int): worker threads for the sweep points

    Returns:
        ExperimentResult: sweep table, fit, report and provenance fields
    """
    row, meta, trace_at = ENGINES[config.engine](config, base)
    grid = orderfit.make_time_grid(config.sweep.t_max, config.sweep.points, config.sweep.ratio)
    logger.info(f"Sweeping {config.engine} / {config.sequence.family} over {len(grid)} points with {threads} thread(s)")
    rows: List[dict] = parallel_map(row, grid, threads)
    sweep = pd.DataFrame(rows)

    fit_spec = config.fit
    fit = orderfit.fit_order(list(zip(sweep["T"], sweep[fit_spec.metric])), fit_spec.floor, fit_spec.ceiling)
    passed = verdict(fit, fit_spec.claimed_order, fit_spec.tolerance, fit_spec.mode)

    fields = provenance(
        config_hash(config.model_dump(mode="json")),
        config_seed(config),
        {"engine": config.engine, "family": config.sequence.family, "n": config.sequence.n, **meta},
    )
    report = FitReport(
        engine=config.engine,
        family=config.sequence.family,
        metric=fit_spec.metric,
        slope=fit.slope,
        intercept=fit.intercept,
        r_squared=fit.r_squared,
        points_used=fit.points_used,
        window=fit.window,
        claimed_order=fit_spec.claimed_order,
        tolerance=fit_spec.tolerance,
        mode=fit_spec.mode,
        low_confidence=fit.low_confidence,
        passed=passed,
        provenance=fields,
    )
    if fit.valid:
        logger.info(f"Fitted slope {fit.slope:.4f} (claimed {fit_spec.claimed_order}), R^2={fit.r_squared:.5f}, pass={passed}")
    else:
        logger.info(f"Fit invalid with {fit.points_used} usable points")

    trace = None
    if config.output.trace is not None and trace_at is not None:
        trace = trace_at(config.sweep.t_max)
    return ExperimentResult(sweep=sweep, fit=fit, report=report, provenance=fields, trace=trace)
