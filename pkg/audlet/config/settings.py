import os

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from audlet.config.commons import (
    DEFAULT_CG_MAX_ITER,
    DEFAULT_CG_TOL,
    DEFAULT_MAX_LCM,
    DEFAULT_MAX_UNIFORM_CHANNELS,
)

load_dotenv()


class AudletSettings(BaseModel):
    """Runtime limits, overridable through AUDLET_* variables or a .env file."""

    max_lcm: int = Field(
        default_factory=lambda: int(
            os.environ.get("AUDLET_MAX_LCM", DEFAULT_MAX_LCM),
        ),
    )
    max_uniform_channels: int = Field(
        default_factory=lambda: int(
            os.environ.get("AUDLET_MAX_UNIFORM_CHANNELS", DEFAULT_MAX_UNIFORM_CHANNELS),
        ),
    )
    cg_tol: float = Field(
        default_factory=lambda: float(os.environ.get("AUDLET_CG_TOL", DEFAULT_CG_TOL)),
    )
    cg_max_iter: int = Field(
        default_factory=lambda: int(
            os.environ.get("AUDLET_CG_MAX_ITER", DEFAULT_CG_MAX_ITER),
        ),
    )


def get_settings() -> AudletSettings:
    return AudletSettings()
