from enum import StrEnum
from pathlib import Path
from typing import Annotated, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Discriminator,
    Field,
    FilePath,
    Tag,
    model_validator,
)

from audlet.config.commons import (
    DEFAULT_CG_MAX_ITER,
    DEFAULT_CG_TOL,
    GAMMATONE_BETA,
    GAMMATONE_IR_LENGTH,
    GAMMATONE_ORDER,
)


class ScaleKind(StrEnum):
    ERB = "erb"
    BARK = "bark"
    MEL = "mel"


class PrototypeKind(StrEnum):
    HANN = "hann"
    GAUSS = "gauss"
    ROEX = "roex"
    FIR = "fir"


class BankFamily(StrEnum):
    AUDLET = "audlet"
    GAMMATONE = "gammatone"
    ROEX = "roex"


class CenterSpacing(StrEnum):
    EXACT = "exact"
    FIT = "fit"


class BankRole(StrEnum):
    ANALYSIS = "analysis"
    SYNTHESIS = "synthesis"


class SynthesisMethod(StrEnum):
    PAINLESS = "painless"
    UNIFORM = "uniform"
    CG = "cg"
    REVERSED = "reversed"


class PrototypeSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: PrototypeKind = PrototypeKind.HANN
    # floor of the roex shape
    roex_r: Annotated[float, Field(ge=0.0, lt=1.0)] = 0.0
    # FIR prototypes: explicit taps or a scipy window name
    taps: tuple[float, ...] | None = None
    window: str | None = None

    @model_validator(mode="after")
    def _check_fir_source(self) -> "PrototypeSpec":
        if self.kind == PrototypeKind.FIR and not (self.taps or self.window):
            msg = "FIR prototype requires either taps or a window name"
            raise ValueError(msg)
        return self


class BankDesign(BaseModel):
    """Canonical parameters a filter bank is regenerated from."""

    model_config = ConfigDict(frozen=True)

    family: BankFamily = BankFamily.AUDLET
    scale: ScaleKind = ScaleKind.ERB
    sample_rate: Annotated[float, Field(gt=0.0)]
    signal_length: Annotated[int, Field(ge=2)]
    fmin: Annotated[float, Field(ge=0.0)] = 0.0
    # None means sample_rate / 2
    fmax: Annotated[float | None, Field(gt=0.0)] = None
    density: Annotated[float | None, Field(gt=0.0)] = 1.0
    count: Annotated[int | None, Field(ge=1)] = None
    spacing: CenterSpacing = CenterSpacing.EXACT
    prototype: PrototypeSpec = Field(default_factory=PrototypeSpec)
    bw_divisor: Annotated[float, Field(ge=1.0)] = 1.0

    # gammatone
    beta: Annotated[float, Field(gt=0.0)] = GAMMATONE_BETA
    order: Annotated[int, Field(ge=1)] = GAMMATONE_ORDER
    ir_length: Annotated[int, Field(ge=1)] = GAMMATONE_IR_LENGTH
    # roex
    roex_r: Annotated[float, Field(ge=0.0, lt=1.0)] = 0.0

    # explicit centers override the scale grid (gammatone / roex banks)
    centers: tuple[float, ...] | None = None

    @property
    def upper_frequency(self) -> float:
        return self.sample_rate / 2 if self.fmax is None else self.fmax


class BaseExperimentSchema(BaseModel):
    name: Annotated[str, Field(min_length=3)]
    sample_rate: Annotated[float, Field(gt=0.0)] = 16000.0
    scale: ScaleKind = ScaleKind.ERB
    density: Annotated[float, Field(gt=0.0)] = 1.0
    bw_divisor: Annotated[float, Field(ge=1.0)] = 1.0
    spacing: CenterSpacing = CenterSpacing.FIT
    redfacs: Annotated[list[float], Field(min_length=1)] = Field(
        default_factory=lambda: [0.38, 0.5, 1.0, 2.0],
    )
    ir_length: Annotated[int, Field(ge=1)] = GAMMATONE_IR_LENGTH
    cg_tol: Annotated[float, Field(gt=0.0)] = DEFAULT_CG_TOL
    cg_max_iter: Annotated[int, Field(ge=1)] = DEFAULT_CG_MAX_ITER
    seed: int = 0


class ExperimentType(StrEnum):
    COMPARISON = "comparison"
    SEPARATION = "separation"
    DENOISING = "denoising"


class ComparisonExperimentSchema(BaseExperimentSchema):
    experiment_type: Literal[ExperimentType.COMPARISON] = ExperimentType.COMPARISON
    signal_length: Annotated[int, Field(ge=2)] = 60480
    # random signal when no input is given
    input_path: FilePath | None = None
    include_roex: bool = True


class SeparationExperimentSchema(BaseExperimentSchema):
    experiment_type: Literal[ExperimentType.SEPARATION] = ExperimentType.SEPARATION
    # None mixes target and interferer
    mixture_path: FilePath | None = None
    target_path: FilePath
    interferer_path: FilePath
    # one mask per redundancy; empty means ideal binary masks from the stems
    mask_paths: list[FilePath] = Field(default_factory=list)
    target_name: str = "target"
    density: Annotated[float, Field(gt=0.0)] = 6.0
    bw_divisor: Annotated[float, Field(ge=1.0)] = 6.0
    # separated WAVs and their re-analysis spectrograms go here
    output_dir: Path | None = None


class DenoisingExperimentSchema(BaseExperimentSchema):
    experiment_type: Literal[ExperimentType.DENOISING] = ExperimentType.DENOISING
    input_path: FilePath
    # either explicit noise levels or input SNRs in dB
    sigmas: list[float] | None = None
    input_snrs: list[float] = Field(default_factory=lambda: [-5.0, 0.0, 10.0])
    # threshold eta = eta_factor * sigma unless a fixed eta is given
    eta_factor: Annotated[float, Field(ge=0.0)] = 1.0
    eta: Annotated[float | None, Field(ge=0.0)] = None
    density: Annotated[float, Field(gt=0.0)] = 6.0
    bw_divisor: Annotated[float, Field(ge=1.0)] = 6.0
    redfacs: Annotated[list[float], Field(min_length=1)] = Field(
        default_factory=lambda: [0.38, 1.0, 2.0],
    )
    output_dir: Path | None = None


def get_experiment_discriminator_value(v: dict[str, object] | object) -> str | None:
    if isinstance(v, dict):
        experiment_type = v.get("experiment_type")
        return experiment_type if isinstance(experiment_type, str) else None
    experiment_type = getattr(v, "experiment_type", None)
    return experiment_type if isinstance(experiment_type, str) else None


AllExperiments = Annotated[
    Annotated[ComparisonExperimentSchema, Tag(ExperimentType.COMPARISON)]
    | Annotated[SeparationExperimentSchema, Tag(ExperimentType.SEPARATION)]
    | Annotated[DenoisingExperimentSchema, Tag(ExperimentType.DENOISING)],
    Discriminator(get_experiment_discriminator_value),
]


class ExperimentConfig(BaseModel):
    experiment: AllExperiments
