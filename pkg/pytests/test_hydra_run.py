import json

import pytest
from hydra import compose, initialize
from omegaconf import OmegaConf

from audlet.config.schemas import (
    ComparisonExperimentSchema,
    ExperimentConfig,
    SeparationExperimentSchema,
)
from audlet.experiments.comparison import ComparisonResult
from hydra_run import initialize_config, persist_result, run_experiment


@pytest.fixture
def small_comparison():
    return ExperimentConfig(
        experiment=ComparisonExperimentSchema(
            name="small-comparison",
            sample_rate=8000.0,
            signal_length=5040,
            redfacs=[1.0],
            include_roex=False,
        ),
    )


def test_composed_config_selects_comparison():
    with initialize(version_base=None, config_path="../config"):
        cfg = compose(config_name="config")
    config = initialize_config(cfg)
    assert isinstance(config.experiment, ComparisonExperimentSchema)
    assert config.experiment.signal_length == 60480
    assert config.experiment.redfacs == [0.38, 0.5, 1.0, 2.0]


def test_initialize_config_discriminates_experiments(tmp_path):
    target = tmp_path / "target.wav"
    target.write_bytes(b"")
    cfg = OmegaConf.create(
        {
            "experiment": {
                "experiment_type": "separation",
                "name": "separate",
                "target_path": str(target),
                "interferer_path": str(target),
            },
        },
    )
    config = initialize_config(cfg)
    assert isinstance(config.experiment, SeparationExperimentSchema)
    assert config.experiment.density == 6.0


def test_run_experiment_scores_worst_error(small_comparison):
    result, score = run_experiment(small_comparison)
    assert isinstance(result, ComparisonResult)
    assert score == result.worst_audlet_error
    assert score < 1e-10


def test_persist_result(small_comparison, tmp_path):
    result, _ = run_experiment(small_comparison)
    persist_result(result, str(tmp_path))
    assert (tmp_path / "result.txt").read_text(encoding="utf-8").startswith(
        "Relative reconstruction errors",
    )
    content = json.loads((tmp_path / "result.json").read_text(encoding="utf-8"))
    assert content["signal_length"] == 5040
    assert content["rows"][0]["audlet_method"] == "painless"
