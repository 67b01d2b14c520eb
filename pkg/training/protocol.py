"""
Reporting protocols: median run over seeds, and learning curves.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel

from dataset.schemas import Dataset
from exception.exception_handling import ConfigError
from gnn.params import ModelConfig, ModelParameters
from training.evaluation import EvalReport, evaluate
from training.trainer import TrainConfig, TrainReport, train

logger = logging.getLogger(__name__)


@dataclass
class SeedRun:
    seed: int
    accuracy: float
    report: EvalReport
    train_report: TrainReport
    params: ModelParameters


@dataclass
class MedianRun:
    report: EvalReport
    seed_accuracies: List[float]
    std: float
    seeds: List[int]
    median: SeedRun

    @property
    def accuracy(self) -> float:
        return self.report.accuracy


class CurvePoint(BaseModel):
    size: int
    accuracy: float
    std: float


def select_median(runs: Sequence[SeedRun]) -> SeedRun:
    """Middle run by test accuracy; ties keep seed order"""
    if len(runs) % 2 == 0:
        raise ConfigError(f"median run needs an odd number of seeds, got {len(runs)}")
    ranked = sorted(range(len(runs)), key=lambda i: (runs[i].accuracy, i))
    return runs[ranked[len(runs) // 2]]


def median_run(
    train_data: Dataset, val_data: Dataset, test_data: Dataset, cfg: ModelConfig, tcfg: TrainConfig
) -> MedianRun:
    if len(tcfg.seeds) % 2 == 0:
        raise ConfigError(f"median run needs an odd number of seeds, got {len(tcfg.seeds)}")

    runs = []
    for seed in tcfg.seeds:
        params, train_report = train(train_data, val_data, cfg.model_copy(update={"seed": seed}), tcfg, seed=seed)
        report = evaluate(params, test_data)
        logger.info(f"seed {seed}: test accuracy {report.accuracy:.4f} (selected epoch {train_report.selected_epoch})")
        runs.append(SeedRun(seed, report.accuracy, report, train_report, params))

    median = select_median(runs)
    accuracies = [run.accuracy for run in runs]
    return MedianRun(
        report=median.report,
        seed_accuracies=accuracies,
        std=float(np.std(accuracies)),
        seeds=list(tcfg.seeds),
        median=median,
    )


def learning_curve(
    train_data: Dataset,
    val_data: Dataset,
    test_data: Dataset,
    sizes: Sequence[int],
    cfg: ModelConfig,
    tcfg: TrainConfig,
    subset_seed: int = 0,
) -> List[CurvePoint]:
    """One median run per size on nested prefixes of a single seeded shuffle"""
    for size in sizes:
        if size < 1:
            raise ConfigError(f"training size must be at least 1, got {size}")
        if size > len(train_data):
            raise ConfigError(f"training size {size} exceeds the {len(train_data)} available pairs")

    order = np.random.default_rng(subset_seed).permutation(len(train_data))
    points = []
    for size in sizes:
        subset = train_data.subset(order[:size])
        result = median_run(subset, val_data, test_data, cfg, tcfg)
        logger.info(f"learning curve: {size} pairs -> {result.accuracy:.4f} (std {result.std:.4f})")
        points.append(CurvePoint(size=size, accuracy=result.accuracy, std=result.std))
    return points
