from datetime import datetime
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

# fits below this R^2 are reported as low confidence
LOW_CONFIDENCE_R2 = 0.995


# Schema for the four error channels of a finite-bath propagator
class ErrorMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    dephasing_error: float = Field(ge=0)  # ||U(+) - U(-)||_F
    relaxation_error: float = Field(ge=0)  # ||A_X|| + ||A_Y||
    # None when log V is undefined on the branch cut
    generator_dephasing: Optional[float] = Field(default=None, ge=0)  # T ||Z_eff||
    generator_relaxation: Optional[float] = Field(default=None, ge=0)  # T (||X_eff|| + ||Y_eff||)


# Schema for a state-protection diagnostic
class ProtectionMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    commutator_error: float = Field(ge=0)  # ||P U - U P||_F
    leakage: float  # 1 - |<psi|U|psi>|^2
    expectation_deficit: float  # |<psi|U^dag P U|psi> - 1|


# Schema for a log-log power-law fit
class OrderFitResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    slope: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: float = 0.0
    points_used: int = 0
    window: Optional[Tuple[float, float]] = None  # (T_min, T_max) of the surviving points
    valid: bool = False

    @property
    def low_confidence(self) -> bool:
        return self.r_squared < LOW_CONFIDENCE_R2


# Schema for the JSON report written by `run`
class FitReport(BaseModel):
    engine: str
    family: str
    metric: str
    slope: Optional[float] = None
    intercept: Optional[float] = None
    r_squared: float
    points_used: int
    window: Optional[Tuple[float, float]] = None
    claimed_order: float
    tolerance: float
    mode: str
    low_confidence: bool
    passed: bool = Field(serialization_alias="pass")
    provenance: dict


# Schema for reading rows of the run ledger
class RunRecordOut(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    id: int
    config_hash: str
    engine: str
    family: str
    order: int
    metric: str
    claimed_order: float
    slope: Optional[float] = None
    r_squared: float
    points_used: int
    passed: bool
    created_at: Optional[datetime] = None
