from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .bath import BosonMode

Family = Literal["free", "hahn", "udd", "cpmg", "pdd", "cdd", "cdd4", "cudd", "qdd"]
Engine = Literal["spinboson", "finitebath", "noise", "protect"]

# columns of each engine's sweep CSV that can be fitted
ENGINE_METRICS = {
    "spinboson": ("deficit",),
    "finitebath": ("dephasing_error", "relaxation_error", "generator_dephasing", "generator_relaxation"),
    "noise": ("chi_analytic",),
    "protect": ("commutator_error", "leakage"),
}


# Schema for the sequence family and its parameters
class SequenceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    family: Family
    n: int = Field(default=1, ge=0)  # order, level or pulse count depending on the family
    m: Optional[int] = Field(default=None, ge=0)  # concatenation level (cudd) or outer order (qdd)
    axis: Optional[Literal["X", "Y", "Z"]] = None


class OhmicModes(BaseModel):
    model_config = ConfigDict(extra="forbid")

    alpha: float = Field(ge=0)
    omega_c: float = Field(gt=0)
    count: int = Field(default=64, ge=1)


# Schema for the spin-boson mode list, exactly one source
class ModesSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    file: Optional[str] = None  # CSV omega,kappa
    inline: Optional[List[BosonMode]] = None
    ohmic: Optional[OhmicModes] = None

    @model_validator(mode="after")
    def exactly_one_source(self):
        given = [s for s in (self.file, self.inline, self.ohmic) if s is not None]
        if len(given) != 1:
            raise ValueError("modes need exactly one of file, inline or ohmic")
        return self


# Schema for a random finite-bath instance
class BathSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=2)
    alpha: float = Field(ge=0)
    beta: float = Field(ge=0)
    seed: int = Field(default=0, ge=0)
    pure_dephasing: bool = False


# Schema for the classical noise engine
class NoiseSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["ohmic_sharp", "inverse_quartic_soft", "tabulated"]
    amplitude: float = Field(default=1.0, ge=0)
    cutoff: Optional[float] = Field(default=None, gt=0)
    omega_min: Optional[float] = Field(default=None, ge=0)
    table: Optional[str] = None  # CSV omega,S for the tabulated kind
    realizations: int = Field(default=2000, ge=100)
    seed: int = Field(default=0, ge=0)
    method: Literal["spectral", "trajectory"] = "spectral"

    @model_validator(mode="after")
    def table_for_tabulated(self):
        if (self.kind == "tabulated") != (self.table is not None):
            raise ValueError("a table file is required for, and only for, the tabulated kind")
        return self


# Schema for a random state-protection instance
class ProtectSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int = Field(ge=2)
    seed: int = Field(default=0, ge=0)
    norm: float = Field(default=1.0, gt=0)


class SweepSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t_max: float = Field(gt=0)
    points: int = Field(default=12, ge=6)
    ratio: float = Field(default=2 ** 0.5, gt=1)


class FitSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    metric: str
    claimed_order: float
    tolerance: float = Field(default=0.3, ge=0)
    mode: Literal["band", "at_least", "at_most"] = "band"
    floor: float = Field(default=1e-12, gt=0)
    ceiling: float = Field(default=1e-1, gt=0)


class OutputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    csv: str
    report: str
    trace: Optional[str] = None  # spin-boson coherence trace at t_max


# Schema for a whole experiment document
class ExperimentConfig(BaseModel):
    """
    JSON experiment consumed by `ddkit run`

    Exactly the section matching `engine` must be present: `modes` (spinboson),
    `bath` (finitebath), `noise` (noise) or `system` (protect).
    """

    model_config = ConfigDict(extra="forbid")

    engine: Engine
    sequence: SequenceSpec
    modes: Optional[ModesSpec] = None
    bath: Optional[BathSpec] = None
    noise: Optional[NoiseSpec] = None
    system: Optional[ProtectSpec] = None
    sweep: SweepSpec
    fit: FitSpec
    output: OutputSpec

    @model_validator(mode="after")
    def check_engine_section(self):
        sections = {"spinboson": "modes", "finitebath": "bath", "noise": "noise", "protect": "system"}
        for engine, section in sections.items():
            present = getattr(self, section) is not None
            if present != (engine == self.engine):
                raise ValueError(f"engine {self.engine!r} {'needs' if not present else 'does not take'} a {section!r} section")
        if self.fit.metric not in ENGINE_METRICS[self.engine]:
            raise ValueError(f"metric {self.fit.metric!r} is not produced by engine {self.engine!r}")
        if self.engine == "protect" and self.sequence.family != "udd":
            raise ValueError("the protect engine places P_psi pulses at UDD times; use family 'udd'")
        if self.output.trace is not None and self.engine != "spinboson":
            raise ValueError("coherence traces are only produced by the spinboson engine")
        if self.fit.floor >= self.fit.ceiling:
            raise ValueError("fit floor must be below the ceiling")
        return self
