"""
Synthetic minimal-pair generator with a planted switch rule.

Every pair shares one random dependency tree between its two candidates.
Each candidate switches language on exactly one edge: its L2 region is one
whole subtree, the rest is L1. The natural region hangs from an allowed
edge, the manipulated one from a disallowed edge, and the two regions are
nested one node apart (a parent and its only child). g2 repeats the tree
with its relations resampled at the perturbation rate, identical for both
candidates, so only the language tags of g1 separate A from B.
"""
import json
import logging
import os
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dataset.io import PathLike, write_dataset
from dataset.schemas import (
    CandidateSentence,
    Dataset,
    DepRelTag,
    Label,
    LanguageTag,
    MinimalPair,
    ParseNode,
    SentenceGraph,
    Split,
    UD_RELATIONS,
    UposTag,
)
from exception.exception_handling import UnsatisfiableRuleError
from synth.rules import RuleFamily, SyntheticRule, node_depths

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 1000
MIN_NODES, MAX_NODES = 2, 64

_UPOS = tuple(UposTag)
_NON_ROOT = tuple(r for r in UD_RELATIONS if r is not DepRelTag.ROOT)


class GenConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_pairs: int = Field(..., ge=1)
    min_length: int = Field(5, ge=MIN_NODES, le=MAX_NODES)
    max_length: int = Field(15, ge=MIN_NODES, le=MAX_NODES)
    perturbation_prob: float = Field(0.1, ge=0.0, le=1.0)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_lengths(self) -> "GenConfig":
        if self.min_length > self.max_length:
            raise ValueError(f"min_length {self.min_length} exceeds max_length {self.max_length}")
        return self


def _random_tree(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """1-based heads (node 1 is the root, node i attaches to a uniform earlier node), UPOS and deprel indices"""
    heads = np.zeros(n, dtype=np.int64)
    if n > 1:
        heads[1:] = rng.integers(1, np.arange(2, n + 1))
    upos = rng.integers(len(_UPOS), size=n)
    deprel = rng.integers(len(_NON_ROOT), size=n)
    return heads, upos, deprel


def _subtree(heads: np.ndarray, top: int) -> np.ndarray:
    """Mask of `top` and its descendants (0-based); heads point to earlier nodes"""
    mask = np.zeros(heads.size, dtype=bool)
    mask[top] = True
    for i in range(top + 1, heads.size):
        head = heads[i] - 1
        if head >= 0 and mask[head]:
            mask[i] = True
    return mask


def _graph(heads: np.ndarray, upos: np.ndarray, deprel: Sequence[DepRelTag], langs: Sequence[LanguageTag]) -> SentenceGraph:
    return SentenceGraph(
        nodes=tuple(
            ParseNode(upos=_UPOS[upos[i]], lang=langs[i], head=int(heads[i]), deprel=deprel[i])
            for i in range(heads.size)
        )
    )


def _relations(heads: np.ndarray, deprel: np.ndarray) -> List[DepRelTag]:
    return [DepRelTag.ROOT if heads[i] == 0 else _NON_ROOT[deprel[i]] for i in range(heads.size)]


def _chains(heads: np.ndarray) -> List[Tuple[int, int]]:
    """(upper, lower) 0-based pairs where `lower` is the only child of the non-root node `upper`"""
    children = np.bincount(heads[1:] - 1, minlength=heads.size)
    return [(int(heads[i]) - 1, i) for i in range(1, heads.size) if heads[i] > 1 and children[heads[i] - 1] == 1]


def _sample_pair(rng: np.random.Generator, rule: SyntheticRule, gcfg: GenConfig, pair_id: str) -> MinimalPair:
    for _ in range(MAX_ATTEMPTS):
        n = int(rng.integers(gcfg.min_length, gcfg.max_length + 1))
        heads, upos, deprel = _random_tree(rng, n)
        relations = _relations(heads, deprel)
        skeleton = _graph(heads, upos, relations, [LanguageTag.L1] * n)
        depths = node_depths(skeleton) if rule.family is RuleFamily.DEPTH_LIMIT else None

        # natural region sits above or below the manipulated one, by coin
        natural_is_upper = rng.random() < 0.5
        feasible = []
        for upper, lower in _chains(heads):
            top, other = (upper, lower) if natural_is_upper else (lower, upper)
            if rule.allows(skeleton, top, depths) and not rule.allows(skeleton, other, depths):
                feasible.append((top, other))
        if feasible:
            break
    else:
        raise UnsatisfiableRuleError(
            f"{rule.family.value} rule left no parent/only-child edge pair with one allowed and one "
            f"disallowed edge after {MAX_ATTEMPTS} attempts at lengths {gcfg.min_length}..{gcfg.max_length}"
        )

    natural_top, manipulated_top = feasible[int(rng.integers(len(feasible)))]
    natural = _subtree(heads, natural_top).astype(np.int64)
    manipulated = _subtree(heads, manipulated_top).astype(np.int64)

    # g2 relations are shared by both candidates
    resample = rng.random(n) < gcfg.perturbation_prob
    perturbed = np.where(resample, rng.integers(len(_NON_ROOT), size=n), deprel)
    g2_relations = _relations(heads, perturbed)

    def candidate(lang_bits: np.ndarray) -> CandidateSentence:
        langs = [LanguageTag.L2 if bit else LanguageTag.L1 for bit in lang_bits]
        return CandidateSentence(
            g1=_graph(heads, upos, relations, langs),
            g2=_graph(heads, upos, g2_relations, langs),
        )

    good, bad = candidate(natural), candidate(manipulated)
    if rng.random() < 0.5:
        return MinimalPair(id=pair_id, a=good, b=bad, label=Label.A)
    return MinimalPair(id=pair_id, a=bad, b=good, label=Label.B)


def generate_dataset(rule: SyntheticRule, gcfg: GenConfig, split: Split = Split.TRAIN) -> Dataset:
    """Deterministic in (rule, gcfg)"""
    rng = np.random.default_rng([gcfg.seed, rule.seed])
    prefix = f"synth-{rule.family.value.lower()}-{gcfg.seed}"
    pairs = tuple(_sample_pair(rng, rule, gcfg, f"{prefix}-{k:06d}") for k in range(gcfg.n_pairs))
    labels = np.array([p.label is Label.A for p in pairs])
    logger.info(f"Generated {len(pairs)} {rule.family.value} pairs ({labels.mean():.1%} labelled A)")
    return Dataset(pairs=pairs, split=split)


def split_configs(gcfg: GenConfig, sizes: Sequence[int]) -> Dict[Split, GenConfig]:
    """Train/validation/test generator settings, each with its own derived seed"""
    if len(sizes) != 3:
        raise ValueError(f"expected three split sizes, got {len(sizes)}")
    return {
        split: GenConfig(**{**gcfg.model_dump(), "n_pairs": size, "seed": gcfg.seed * 3 + offset})
        for offset, (split, size) in enumerate(zip(Split, sizes))
    }


def generate_splits(rule: SyntheticRule, gcfg: GenConfig, sizes: Sequence[int]) -> Dict[Split, Dataset]:
    return {split: generate_dataset(rule, cfg, split) for split, cfg in split_configs(gcfg, sizes).items()}


def sidecar_path(dataset_path: PathLike) -> str:
    root, _ = os.path.splitext(os.fspath(dataset_path))
    return f"{root}.rule.json"


def write_synthetic(d: Dataset, rule: SyntheticRule, gcfg: GenConfig, path: PathLike) -> str:
    """Dataset file plus a `<name>.rule.json` sidecar describing how it was made"""
    write_dataset(d, path)
    sidecar = sidecar_path(path)
    payload = {"rule": rule.model_dump(mode="json"), "generator": gcfg.model_dump(mode="json"), "pairs": len(d)}
    with open(sidecar, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, indent=2, sort_keys=True)
        f.write("\n")
    return sidecar


def read_rule(sidecar: PathLike) -> Tuple[SyntheticRule, Optional[GenConfig]]:
    with open(os.fspath(sidecar), "r", encoding="utf-8") as f:
        payload = json.load(f)
    gen = payload.get("generator")
    return SyntheticRule.model_validate(payload["rule"]), (GenConfig.model_validate(gen) if gen else None)
