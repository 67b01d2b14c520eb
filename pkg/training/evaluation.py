from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from scipy.special import softmax

from dataset.schemas import Dataset, Label
from encoding.graph_encoder import EncodedPair, encode_pair
from exception.exception_handling import TrainingError
from gnn.batch import PairBatch
from gnn.model import cross_entropy, predict_logits
from gnn.params import ModelParameters

EVAL_CHUNK = 1024


class EvalItem(BaseModel):
    id: str
    label: Label
    prediction: Optional[Label] = Field(None, description="None when the two scores tie exactly")
    correct: bool
    margin: float = Field(..., ge=0.0, le=1.0, description="|softmax_A - softmax_B|")
    logit_a: float
    logit_b: float
    human_agreement: Optional[float] = None


class EvalReport(BaseModel):
    accuracy: float = Field(..., ge=0.0, le=1.0)
    n: int
    items: List[EvalItem]

    @property
    def correct_bits(self) -> np.ndarray:
        return np.asarray([item.correct for item in self.items], dtype=np.int64)

    @property
    def margins(self) -> np.ndarray:
        return np.asarray([item.margin for item in self.items])

    @property
    def ids(self) -> List[str]:
        return [item.id for item in self.items]


def chunk_batches(encoded: Sequence[EncodedPair], chunk: int = EVAL_CHUNK) -> List[PairBatch]:
    return [PairBatch.from_pairs(encoded[i : i + chunk]) for i in range(0, len(encoded), chunk)]


def batched_logits(batches: Sequence[PairBatch], p: ModelParameters, symmetrize: bool = True) -> np.ndarray:
    return np.concatenate([predict_logits(pb, p, symmetrize=symmetrize) for pb in batches], axis=0)


def decide(logits: np.ndarray) -> np.ndarray:
    """0 = A, 1 = B, -1 = exact tie"""
    return np.where(logits[:, 0] > logits[:, 1], 0, np.where(logits[:, 1] > logits[:, 0], 1, -1))


def accuracy_and_loss(batches: Sequence[PairBatch], p: ModelParameters):
    logits = batched_logits(batches, p)
    labels = np.concatenate([pb.labels for pb in batches])
    accuracy = float(np.mean(decide(logits) == labels))
    loss = float(np.mean(cross_entropy(logits, labels)))
    return accuracy, loss


def evaluate(p: ModelParameters, data: Dataset) -> EvalReport:
    """Symmetrized inference per pair; exact ties count as incorrect"""
    if len(data) == 0:
        raise TrainingError("cannot evaluate on an empty dataset")
    encoded = [encode_pair(pair) for pair in data.pairs]
    logits = batched_logits(chunk_batches(encoded), p)
    probs = softmax(logits, axis=1)
    decisions = decide(logits)

    items = []
    for pair, row, prob, decision in zip(data.pairs, logits, probs, decisions):
        prediction = None if decision < 0 else (Label.A if decision == 0 else Label.B)
        items.append(
            EvalItem(
                id=pair.id,
                label=pair.label,
                prediction=prediction,
                correct=prediction is pair.label,
                margin=min(1.0, abs(float(prob[0] - prob[1]))),
                logit_a=float(row[0]),
                logit_b=float(row[1]),
                human_agreement=pair.human_agreement,
            )
        )
    accuracy = sum(item.correct for item in items) / len(items)
    return EvalReport(accuracy=accuracy, n=len(items), items=items)
