import logging
import time
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dataset.schemas import Dataset
from encoding.graph_encoder import encode_pair
from exception.exception_handling import TrainingError
from gnn.batch import PairBatch
from gnn.model import batch_loss, loss_and_gradients
from gnn.params import ModelConfig, ModelParameters, init_params
from training.evaluation import accuracy_and_loss, chunk_batches
from training.optimizer import SGD, Adam

logger = logging.getLogger(__name__)


class TrainConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    learning_rate: float = Field(0.001, gt=0, description="Constant; no schedule")
    batch_size: int = Field(128, ge=1, description="Counted in minimal pairs")
    max_epochs: int = Field(100, ge=1)
    early_stop_patience: int = Field(10, ge=1)
    seeds: Tuple[int, ...] = Field((1, 2, 3), min_length=1)
    optimizer: Literal["adam", "sgd"] = "adam"
    beta1: float = Field(0.9, gt=0, lt=1)
    beta2: float = Field(0.999, gt=0, lt=1)
    adam_epsilon: float = Field(1e-8, gt=0)
    order_augmentation: bool = True

    @model_validator(mode="after")
    def check_patience(self) -> "TrainConfig":
        if self.early_stop_patience > self.max_epochs:
            raise ValueError("early_stop_patience must not exceed max_epochs")
        return self

    def make_optimizer(self):
        if self.optimizer == "sgd":
            return SGD(lr=self.learning_rate)
        return Adam(lr=self.learning_rate, beta1=self.beta1, beta2=self.beta2, epsilon=self.adam_epsilon)


class EpochRecord(BaseModel):
    epoch: int
    train_loss: float
    val_loss: float
    val_accuracy: float


class TrainReport(BaseModel):
    seed: int
    batch_unit: str = "minimal pairs"
    batch_size: int
    initial_train_loss: float
    epochs: List[EpochRecord]
    selected_epoch: int
    best_val_accuracy: float
    stopped_early: bool
    # kept out of serialized reports so they stay byte-reproducible
    wall_clock_seconds: float = Field(0.0, exclude=True)

    @property
    def selected(self) -> EpochRecord:
        return self.epochs[self.selected_epoch - 1]


def _mean_train_loss(batches, params: ModelParameters, n: int) -> float:
    """Unaugmented loss over the whole training split"""
    return float(sum(batch_loss(pb, params) * pb.size for pb in batches) / n)


def train(
    train_data: Dataset,
    val_data: Dataset,
    cfg: ModelConfig,
    tcfg: TrainConfig,
    seed: Optional[int] = None,
) -> Tuple[ModelParameters, TrainReport]:
    """Returns the parameters of the best validation epoch (earliest on ties)"""
    if len(train_data) == 0:
        raise TrainingError("training split is empty")
    if len(val_data) == 0:
        raise TrainingError("validation split is empty")
    seed = tcfg.seeds[0] if seed is None else seed
    started = time.perf_counter()

    encoded = [encode_pair(pair) for pair in train_data.pairs]
    train_eval = chunk_batches(encoded)
    val_eval = chunk_batches([encode_pair(pair) for pair in val_data.pairs])

    params = init_params(cfg)
    optimizer = tcfg.make_optimizer()
    rng = np.random.default_rng(seed)
    n = len(encoded)

    initial_loss = _mean_train_loss(train_eval, params, n)
    logger.info(
        f"Training {cfg.architecture.value} d={cfg.hidden_dim} L={cfg.num_layers} on {n} pairs "
        f"(batch_size={tcfg.batch_size} minimal pairs, lr={tcfg.learning_rate}, seed={seed})"
    )

    epochs: List[EpochRecord] = []
    best_params, best_acc, selected_epoch = params.copy(), -1.0, 0
    stopped_early = False
    for epoch in range(1, tcfg.max_epochs + 1):
        order = rng.permutation(n)
        swap = rng.random(n) < 0.5 if tcfg.order_augmentation else np.zeros(n, dtype=bool)
        for batch_num, start in enumerate(range(0, n, tcfg.batch_size), start=1):
            idx = order[start : start + tcfg.batch_size]
            pb = PairBatch.from_pairs([encoded[i] for i in idx], swap[idx])
            loss, grads = loss_and_gradients(pb, params)
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss {loss} at epoch {epoch}, batch {batch_num} (seed={seed})")
            optimizer.step(params.tensors, grads)

        train_loss = _mean_train_loss(train_eval, params, n)
        val_acc, val_loss = accuracy_and_loss(val_eval, params)
        epochs.append(EpochRecord(epoch=epoch, train_loss=train_loss, val_loss=val_loss, val_accuracy=val_acc))
        logger.info(f"epoch {epoch}: train_loss={train_loss:.4f} val_loss={val_loss:.4f} val_acc={val_acc:.4f}")

        if val_acc > best_acc:
            best_params, best_acc, selected_epoch = params.copy(), val_acc, epoch
        elif epoch - selected_epoch >= tcfg.early_stop_patience:
            logger.warning(
                f"Early stop at epoch {epoch}: no validation gain for {tcfg.early_stop_patience} epochs"
            )
            stopped_early = True
            break

    report = TrainReport(
        seed=seed,
        batch_size=tcfg.batch_size,
        initial_train_loss=initial_loss,
        epochs=epochs,
        selected_epoch=selected_epoch,
        best_val_accuracy=best_acc,
        stopped_early=stopped_early,
        wall_clock_seconds=time.perf_counter() - started,
    )
    return best_params, report
