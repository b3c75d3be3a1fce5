from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


# Schema for one harmonic bath mode
class BosonMode(BaseModel):
    model_config = ConfigDict(frozen=True)

    omega: float = Field(gt=0)  # zero-frequency modes make kappa / (2 omega) singular
    kappa: float


# Schema for a one-sided noise power spectrum S(omega)
class NoiseSpectrum(BaseModel):
    """
    One-sided power spectral density with C(tau) = (1/pi) int_0^inf S(w) cos(w tau) dw

    Attributes:
        kind (str): ohmic_sharp (A w below cutoff), inverse_quartic_soft (A / w^4,
            flat below omega_min) or tabulated (A times a linear interpolation)
        amplitude (float): A
        cutoff (float): hard cutoff for ohmic_sharp, numerical band limit otherwise
        omega_min (float): low-frequency regularizer of the soft spectrum, default 0.05 / T
        omega, values (tuple[float]): table for the tabulated kind
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["ohmic_sharp", "inverse_quartic_soft", "tabulated"]
    amplitude: float = Field(default=1.0, ge=0)
    cutoff: Optional[float] = Field(default=None, gt=0)
    omega_min: Optional[float] = Field(default=None, ge=0)
    omega: Optional[Tuple[float, ...]] = None
    values: Optional[Tuple[float, ...]] = None

    @model_validator(mode="after")
    def check_kind(self):
        if self.kind == "ohmic_sharp" and self.cutoff is None:
            raise ValueError("ohmic_sharp needs a cutoff")
        if self.kind == "tabulated":
            if self.omega is None or self.values is None or len(self.omega) != len(self.values) or len(self.omega) < 2:
                raise ValueError("tabulated spectra need matching omega/values tables of length >= 2")
            grid = np.asarray(self.omega)
            if grid[0] < 0 or np.any(np.diff(grid) <= 0):
                raise ValueError("tabulated omega must be non-negative and strictly increasing")
            if np.any(np.asarray(self.values) < 0):
                raise ValueError("tabulated S values must be non-negative")
        return self
