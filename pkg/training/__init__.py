from training.optimizer import SGD, Adam
from training.trainer import EpochRecord, TrainConfig, TrainReport, train
from training.evaluation import EvalItem, EvalReport, evaluate
from training.protocol import CurvePoint, MedianRun, SeedRun, learning_curve, median_run, select_median

__all__ = [
    "SGD",
    "Adam",
    "EpochRecord",
    "TrainConfig",
    "TrainReport",
    "train",
    "EvalItem",
    "EvalReport",
    "evaluate",
    "CurvePoint",
    "MedianRun",
    "SeedRun",
    "learning_curve",
    "median_run",
    "select_median",
]
