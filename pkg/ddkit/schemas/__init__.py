"""
    Purpose: pydantic schemas for everything ddkit reads or writes: pulse sequences,
    bath modes and noise spectra, experiment configs, fit reports and ledger rows

    Usage: engines build and return these models, the command line validates JSON configs
    against ExperimentConfig and serializes FitReport into the run report
"""
from .sequence import Pulse, PulseSequence
from .bath import BosonMode, NoiseSpectrum
from .report import ErrorMetrics, FitReport, OrderFitResult, ProtectionMetrics, RunRecordOut
from .experiment import ExperimentConfig
