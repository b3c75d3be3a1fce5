from typing import Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ddkit.core import pauli

PauliAxis = Literal["X", "Y", "Z"]


# Schema for one instantaneous pi pulse
class Pulse(BaseModel):
    model_config = ConfigDict(frozen=True)

    time: float  # absolute time in [0, T]
    axis: PauliAxis


# Schema for a full pulse sequence, the universal control object
class PulseSequence(BaseModel):
    """
    Ordered instantaneous pulses on [0, T]

    Only interior pulses are stored. Operators that land on t=0 or t=T while a
    recursion is expanded are folded out; the product of the stored pulses is
    exposed as `parity`.

    Attributes:
        total_time (float): duration T > 0
        pulses (tuple[Pulse]): strictly increasing in time, no identity pulses
        label (str): free-form descriptor such as "udd:3"
    """

    model_config = ConfigDict(frozen=True)

    total_time: float
    pulses: Tuple[Pulse, ...] = ()
    label: str = ""

    @model_validator(mode="after")
    def check_pulses(self):
        if not np.isfinite(self.total_time) or self.total_time <= 0:
            raise ValueError(f"total_time must be positive, got {self.total_time}")
        previous = -np.inf
        for pulse in self.pulses:
            if not 0.0 <= pulse.time <= self.total_time:
                raise ValueError(f"pulse time {pulse.time} outside [0, {self.total_time}]")
            if pulse.time <= previous:
                raise ValueError("pulse times must be strictly increasing")
            previous = pulse.time
        return self

    @property
    def times(self) -> np.ndarray:
        return np.array([p.time for p in self.pulses], dtype=float)

    @property
    def axes(self) -> Tuple[str, ...]:
        return tuple(p.axis for p in self.pulses)

    @property
    def count(self) -> int:
        return len(self.pulses)

    @property
    def parity(self) -> str:
        return pauli.product(self.axes)

    @property
    def axis(self) -> Optional[str]:
        """The common axis of a single-axis sequence, None for mixed or empty sequences."""
        distinct = set(self.axes)
        return distinct.pop() if len(distinct) == 1 else None

    @property
    def boundaries(self) -> np.ndarray:
        """T_0 = 0, T_1 ... T_N, T_{N+1} = T"""
        return np.concatenate(([0.0], self.times, [self.total_time]))

    @property
    def min_interval(self) -> float:
        return float(np.min(np.diff(self.boundaries)))
