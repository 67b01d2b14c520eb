"""
Confidence analysis: temperature scaling and rank correlation between model
confidence and human agreement.
"""
import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp, softmax
from scipy.stats import spearmanr

from dataset.schemas import Label
from exception.exception_handling import StatisticsError

logger = logging.getLogger(__name__)

T_MIN, T_MAX = 0.05, 20.0
T_TOL = 1e-4


class CorrelationReport(BaseModel):
    rho: Optional[float] = None
    p_value: Optional[float] = None
    n: int
    defined: bool
    reason: Optional[str] = None
    temperature: Optional[float] = None


def _label_indices(labels: Sequence) -> np.ndarray:
    return np.asarray([(0 if Label(l) is Label.A else 1) if isinstance(l, (str, Label)) else int(l) for l in labels])


def mean_nll(logits: np.ndarray, labels: np.ndarray, temperature: float) -> float:
    scaled = logits / temperature
    picked = scaled[np.arange(scaled.shape[0]), labels]
    return float(np.mean(logsumexp(scaled, axis=1) - picked))


def temperature_scale(logit_pairs: Sequence, labels: Sequence) -> float:
    """T in [0.05, 20] minimizing the mean validation cross-entropy of logits / T"""
    logits = np.asarray(logit_pairs, dtype=np.float64).reshape(-1, 2)
    y = _label_indices(labels)
    if logits.shape[0] == 0:
        raise StatisticsError("temperature scaling needs at least one item")
    if logits.shape[0] != y.shape[0]:
        raise StatisticsError(f"{logits.shape[0]} logit pairs but {y.shape[0]} labels")

    result = minimize_scalar(
        lambda t: mean_nll(logits, y, t),
        bounds=(T_MIN, T_MAX),
        method="bounded",
        options={"xatol": T_TOL},
    )
    temperature = float(result.x)
    logger.info(f"Fitted temperature T={temperature:.4f} on {logits.shape[0]} items")
    return temperature


def scaled_margins(logit_pairs: Sequence, temperature: float = 1.0) -> np.ndarray:
    """|softmax_A - softmax_B| of logits / T"""
    probs = softmax(np.asarray(logit_pairs, dtype=np.float64).reshape(-1, 2) / temperature, axis=1)
    return np.abs(probs[:, 0] - probs[:, 1])


def confidence_agreement_correlation(
    margins: Sequence[float], human_agreement: Sequence[float], temperature: Optional[float] = None
) -> CorrelationReport:
    """Spearman rank correlation; ties get average ranks"""
    m = np.asarray(margins, dtype=np.float64)
    h = np.asarray(human_agreement, dtype=np.float64)
    if m.shape != h.shape:
        raise StatisticsError(f"{m.size} margins but {h.size} agreement values")
    if m.size < 3:
        raise StatisticsError("rank correlation needs at least 3 items")
    if np.ptp(m) == 0 or np.ptp(h) == 0:
        return CorrelationReport(n=m.size, defined=False, reason="constant input", temperature=temperature)

    rho, p_value = spearmanr(m, h)
    return CorrelationReport(rho=float(rho), p_value=float(p_value), n=m.size, defined=True, temperature=temperature)
