#!/usr/bin/env python3
import json
from pathlib import Path
from typing import cast

import hydra
from omegaconf import DictConfig, OmegaConf

from audlet.config.schemas import (
    ComparisonExperimentSchema,
    DenoisingExperimentSchema,
    ExperimentConfig,
    SeparationExperimentSchema,
)
from audlet.experiments.comparison import ComparisonResult, run_comparison
from audlet.experiments.denoising import DenoisingResult, run_denoising
from audlet.experiments.separation import SeparationResult, run_separation
from audlet.logging import setup_logging

setup_logging()

ExperimentResult = ComparisonResult | SeparationResult | DenoisingResult


def initialize_config(cfg: DictConfig) -> ExperimentConfig:
    container = OmegaConf.to_container(cfg, resolve=True)
    return ExperimentConfig.model_validate(container)


def run_experiment(config: ExperimentConfig) -> tuple[ExperimentResult, float]:
    """Run the configured experiment and return it with its headline score.

    The score is the worst AUDlet reconstruction error for comparisons (lower is
    better) and the mean AUDlet SDR or SNR in dB otherwise.
    """
    experiment = config.experiment
    if isinstance(experiment, ComparisonExperimentSchema):
        comparison = run_comparison(experiment)
        return comparison, comparison.worst_audlet_error
    if isinstance(experiment, SeparationExperimentSchema):
        separation = run_separation(experiment)
        return separation, separation.mean_audlet_sdr
    if isinstance(experiment, DenoisingExperimentSchema):
        denoising = run_denoising(experiment)
        return denoising, denoising.mean_audlet_snr
    msg = f"Unknown experiment: {experiment}"
    raise TypeError(msg)


def persist_result(result: ExperimentResult, hydra_dir: str) -> None:
    hydra_dir_path = Path(hydra_dir)
    table = result.to_table() + "\n"
    (hydra_dir_path / "result.txt").write_text(table, encoding="utf-8")
    with (hydra_dir_path / "result.json").open("w", encoding="utf-8") as result_file:
        json.dump(result.model_dump(mode="json"), result_file, indent=4)


@hydra.main(version_base=None, config_path="config", config_name="config")
def hydra_app(cfg: DictConfig) -> float:
    hydra_dir: str = hydra.core.hydra_config.HydraConfig.get().runtime.output_dir

    config = initialize_config(cast("DictConfig", cfg))
    result, score = run_experiment(config)
    persist_result(result, hydra_dir)
    return score


if __name__ == "__main__":
    hydra_app()
