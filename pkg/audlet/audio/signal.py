from typing import Annotated

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class Signal(BaseModel):
    """Finite-length real signal, treated as one period of a periodic sequence."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    samples: np.ndarray
    sample_rate: Annotated[float, Field(gt=0.0)]

    @field_validator("samples", mode="before")
    @classmethod
    def _as_real_vector(cls, value: object) -> np.ndarray:
        samples = np.asarray(value)
        if np.iscomplexobj(samples):
            msg = "Signal samples must be real"
            raise ValueError(msg)
        samples = samples.astype(np.float64).reshape(-1)
        if not np.all(np.isfinite(samples)):
            msg = "Signal samples must be finite"
            raise ValueError(msg)
        return samples

    def __len__(self) -> int:
        return int(self.samples.shape[0])

    def __repr__(self) -> str:
        return str(self)

    def __str__(self) -> str:
        return f"Signal({len(self)} samples @ {self.sample_rate:g} Hz)"

    @property
    def length_secs(self) -> float:
        return len(self) / self.sample_rate

    @property
    def energy(self) -> float:
        return float(np.dot(self.samples, self.samples))

    def with_samples(self, samples: np.ndarray) -> "Signal":
        return Signal(samples=samples, sample_rate=self.sample_rate)
