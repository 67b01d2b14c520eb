from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from sklearn.metrics import confusion_matrix

from exception.exception_handling import StatisticsError


class AgreementReport(BaseModel):
    kappa: float = Field(..., ge=-1.0, le=1.0)
    observed_agreement: float
    chance_agreement: float
    N: int = Field(..., description="items")
    n: int = Field(2, description="raters")
    k: int = Field(..., description="categories")


def cohens_kappa(choices_x: Sequence, choices_y: Sequence, categories: Optional[Sequence] = None) -> AgreementReport:
    """Two-rater Cohen's kappa from the joint label table"""
    x = [str(getattr(c, "value", c)) for c in choices_x]
    y = [str(getattr(c, "value", c)) for c in choices_y]
    if len(x) != len(y):
        raise StatisticsError(f"rater label vectors differ in length: {len(x)} vs {len(y)}")
    if not x:
        raise StatisticsError("no items to compare")
    if categories is None:
        categories = sorted(set(x) | set(y))
    else:
        categories = [str(getattr(c, "value", c)) for c in categories]

    table = confusion_matrix(x, y, labels=categories).astype(np.float64)
    total = table.sum()
    if total != len(x):
        raise StatisticsError(f"labels outside the category set {categories}")

    p_o = float(np.trace(table) / total)
    p_e = float(np.sum(table.sum(axis=1) * table.sum(axis=0)) / total**2)
    if len(set(x) | set(y)) == 1:
        # both raters used one and the same category throughout
        kappa = 1.0
    else:
        kappa = (p_o - p_e) / (1.0 - p_e)
    return AgreementReport(
        kappa=float(np.clip(kappa, -1.0, 1.0)),
        observed_agreement=p_o,
        chance_agreement=p_e,
        N=len(x),
        n=2,
        k=len(categories),
    )


def joint_error_rate(correct_x: Sequence, correct_y: Sequence) -> float:
    """Fraction of items neither system gets right"""
    x = np.asarray(correct_x, dtype=bool)
    y = np.asarray(correct_y, dtype=bool)
    if x.shape != y.shape or x.size == 0:
        raise StatisticsError("correctness vectors must be nonempty and aligned")
    return float(np.mean(~x & ~y))
