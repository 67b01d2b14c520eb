"""
Two-tailed Monte-Carlo permutation tests.

p = (1 + #{|stat_perm| >= |stat_obs|}) / (R + 1)

Replications are drawn in fixed blocks, each block from its own generator
seeded by (seed, block index), so results do not depend on how the work is
split.
"""
import logging
from typing import Iterator, Literal, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from exception.exception_handling import StatisticsError

logger = logging.getLogger(__name__)

BLOCK = 1000
_TOL = 1e-12


class StatsConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    replications: int = Field(10_000, ge=1, description="R")
    alpha: float = Field(0.05, gt=0, lt=1)
    seed: int = Field(0, ge=0)


class PermutationResult(BaseModel):
    test: Literal["paired", "unpaired"]
    statistic: float
    p_value: float
    replications: int
    seed: int
    alpha: float
    n_x: int
    n_y: int

    @property
    def significant(self) -> bool:
        return self.p_value < self.alpha

    @property
    def verdict(self) -> str:
        return "significant" if self.significant else "not significant"


def _blocks(cfg: StatsConfig) -> Iterator[Tuple[np.random.Generator, int]]:
    for block, start in enumerate(range(0, cfg.replications, BLOCK)):
        yield np.random.default_rng([cfg.seed, block]), min(BLOCK, cfg.replications - start)


def _as_scores(values: Sequence, name: str) -> np.ndarray:
    scores = np.asarray(values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(scores)):
        raise StatisticsError(f"{name} contains non-finite values")
    return scores


def paired_permutation_test(correct_x: Sequence, correct_y: Sequence, cfg: StatsConfig = StatsConfig()) -> PermutationResult:
    """Each replication swaps every item's (x, y) pair with probability 1/2"""
    x = _as_scores(correct_x, "correct_x")
    y = _as_scores(correct_y, "correct_y")
    if x.shape != y.shape:
        raise StatisticsError(f"paired samples differ in length: {x.size} vs {y.size}")
    if x.size == 0:
        raise StatisticsError("paired samples are empty")

    z = x - y
    observed = abs(z.sum())
    count = 0
    for rng, size in _blocks(cfg):
        signs = rng.integers(0, 2, size=(size, z.size)) * 2 - 1
        count += int(np.sum(np.abs(signs @ z) >= observed - _TOL))

    p_value = (1 + count) / (cfg.replications + 1)
    logger.debug(f"paired permutation test: R={cfg.replications} seed={cfg.seed} p={p_value:.4f}")
    return PermutationResult(
        test="paired",
        statistic=float(x.mean() - y.mean()),
        p_value=p_value,
        replications=cfg.replications,
        seed=cfg.seed,
        alpha=cfg.alpha,
        n_x=x.size,
        n_y=y.size,
    )


def unpaired_permutation_test(correct_x: Sequence, correct_y: Sequence, cfg: StatsConfig = StatsConfig()) -> PermutationResult:
    """Each replication shuffles the pooled sample and re-splits it at the original sizes"""
    x = _as_scores(correct_x, "correct_x")
    y = _as_scores(correct_y, "correct_y")
    if x.size == 0 or y.size == 0:
        raise StatisticsError("unpaired test needs two nonempty samples")

    pooled = np.concatenate([x, y])
    nx = x.size
    observed = abs(x.mean() - y.mean())
    count = 0
    for rng, size in _blocks(cfg):
        shuffled = rng.permuted(np.tile(pooled, (size, 1)), axis=1)
        diffs = shuffled[:, :nx].mean(axis=1) - shuffled[:, nx:].mean(axis=1)
        count += int(np.sum(np.abs(diffs) >= observed - _TOL))

    p_value = (1 + count) / (cfg.replications + 1)
    logger.debug(f"unpaired permutation test: R={cfg.replications} seed={cfg.seed} p={p_value:.4f}")
    return PermutationResult(
        test="unpaired",
        statistic=float(x.mean() - y.mean()),
        p_value=p_value,
        replications=cfg.replications,
        seed=cfg.seed,
        alpha=cfg.alpha,
        n_x=x.size,
        n_y=y.size,
    )
