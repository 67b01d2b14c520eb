"""
Feature randomisation for ablation runs.

Each affected feature is redrawn uniformly per token (or per dependency edge
for relation types). Tree shape, graph origin, ids and labels never change.
Draws are fixed by the seed, so an ablated dataset is reproducible.
"""
import logging
from enum import Enum

import numpy as np

from dataset.schemas import (
    CandidateSentence,
    Dataset,
    LanguageTag,
    SentenceGraph,
    UD_RELATIONS,
    UposTag,
)

logger = logging.getLogger(__name__)

_UPOS = tuple(UposTag)
_LANG = tuple(LanguageTag)


class AblationMode(str, Enum):
    NONE = "none"
    RANDOM_DEPREL = "random_deprel"
    RANDOM_POS = "random_pos"
    RANDOM_DEPREL_POS = "random_deprel_pos"
    RANDOM_LANG = "random_lang"
    RANDOM_ALL = "random_all"

    @property
    def randomizes_deprel(self) -> bool:
        return self in (AblationMode.RANDOM_DEPREL, AblationMode.RANDOM_DEPREL_POS, AblationMode.RANDOM_ALL)

    @property
    def randomizes_pos(self) -> bool:
        return self in (AblationMode.RANDOM_POS, AblationMode.RANDOM_DEPREL_POS, AblationMode.RANDOM_ALL)

    @property
    def randomizes_lang(self) -> bool:
        return self in (AblationMode.RANDOM_LANG, AblationMode.RANDOM_ALL)


def _randomize_graph(g: SentenceGraph, mode: AblationMode, rng: np.random.Generator) -> SentenceGraph:
    n = len(g)
    upos = rng.integers(len(_UPOS), size=n) if mode.randomizes_pos else None
    deprel = rng.integers(len(UD_RELATIONS), size=n) if mode.randomizes_deprel else None
    lang = rng.integers(len(_LANG), size=n) if mode.randomizes_lang else None

    nodes = []
    for i, node in enumerate(g.nodes):
        update = {}
        if upos is not None:
            update["upos"] = _UPOS[upos[i]]
        # Only real dependency edges carry a relation; the root keeps its label
        if deprel is not None and node.head != 0:
            update["deprel"] = UD_RELATIONS[deprel[i]]
        if lang is not None:
            update["lang"] = _LANG[lang[i]]
        nodes.append(node.model_copy(update=update) if update else node)
    return SentenceGraph.model_construct(nodes=tuple(nodes))


def _randomize_candidate(c: CandidateSentence, mode: AblationMode, rng: np.random.Generator) -> CandidateSentence:
    return CandidateSentence.model_construct(
        g1=_randomize_graph(c.g1, mode, rng),
        g2=_randomize_graph(c.g2, mode, rng),
    )


def randomize_features(d: Dataset, mode: AblationMode, seed: int) -> Dataset:
    mode = AblationMode(mode)
    if mode is AblationMode.NONE:
        return d

    rng = np.random.default_rng(seed)
    pairs = []
    for pair in d.pairs:
        a = _randomize_candidate(pair.a, mode, rng)
        b = _randomize_candidate(pair.b, mode, rng)
        pairs.append(pair.model_copy(update={"a": a, "b": b}))
    logger.info(f"Randomized {mode.value} features of {len(pairs)} {d.split.value} pairs (seed={seed})")
    return Dataset(pairs=tuple(pairs), split=d.split)

