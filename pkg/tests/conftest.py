import os
import sys

import numpy as np
import pytest

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.config import clear_settings_cache
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
from synth.generator import GenConfig, generate_dataset
from synth.rules import RuleFamily, SyntheticRule

NON_ROOT = tuple(r for r in UD_RELATIONS if r is not DepRelTag.ROOT)


def build_graph(heads, upos=None, lang=None, deprel=None) -> SentenceGraph:
    n = len(heads)
    upos = upos or [UposTag.NOUN] * n
    lang = lang or [LanguageTag.L1] * n
    deprel = deprel or [DepRelTag.ROOT if h == 0 else DepRelTag.DEP for h in heads]
    return SentenceGraph(
        nodes=tuple(ParseNode(upos=upos[i], lang=lang[i], head=heads[i], deprel=deprel[i]) for i in range(n))
    )


def random_graph(rng: np.random.Generator, n: int) -> SentenceGraph:
    heads = [0] + [int(rng.integers(1, i + 1)) for i in range(1, n)]
    return build_graph(
        heads,
        upos=[list(UposTag)[k] for k in rng.integers(len(UposTag), size=n)],
        lang=[list(LanguageTag)[k] for k in rng.integers(3, size=n)],
        deprel=[DepRelTag.ROOT if h == 0 else NON_ROOT[rng.integers(len(NON_ROOT))] for h in heads],
    )


def random_pair(rng: np.random.Generator, pair_id: str, max_nodes: int = 6) -> MinimalPair:
    def candidate():
        return CandidateSentence(
            g1=random_graph(rng, int(rng.integers(1, max_nodes + 1))),
            g2=random_graph(rng, int(rng.integers(1, max_nodes + 1))),
        )

    return MinimalPair(
        id=pair_id,
        a=candidate(),
        b=candidate(),
        label=Label.A if rng.random() < 0.5 else Label.B,
        human_agreement=float(np.round(rng.random(), 3)) if rng.random() < 0.7 else None,
    )


@pytest.fixture
def graph_factory():
    return build_graph


@pytest.fixture
def single_token_pair():
    """Both candidates are one-token sentences in each language"""
    one = build_graph([0])
    other = build_graph([0], lang=[LanguageTag.L2])
    return MinimalPair(
        id="single",
        a=CandidateSentence(g1=one, g2=one),
        b=CandidateSentence(g1=other, g2=other),
        label=Label.A,
    )


@pytest.fixture
def random_pairs():
    def make(n: int, seed: int = 0, max_nodes: int = 6):
        rng = np.random.default_rng(seed)
        return Dataset(pairs=tuple(random_pair(rng, f"r{i:05d}", max_nodes) for i in range(n)))

    return make


@pytest.fixture(scope="session")
def deprel_rule():
    return SyntheticRule(
        family=RuleFamily.DEPREL_SET,
        relations=(DepRelTag.OBJ, DepRelTag.NMOD, DepRelTag.AMOD, DepRelTag.ADVMOD, DepRelTag.CONJ, DepRelTag.XCOMP),
        seed=0,
    )


@pytest.fixture(scope="session")
def small_synthetic(deprel_rule):
    """Small train/validation/test splits under one DEPREL_SET rule"""
    return {
        split: generate_dataset(deprel_rule, GenConfig(n_pairs=size, seed=seed), split)
        for split, size, seed in ((Split.TRAIN, 120, 1), (Split.VALIDATION, 40, 2), (Split.TEST, 40, 3))
    }


@pytest.fixture
def cli_env(tmp_path, monkeypatch):
    """Settings pointed at a temporary directory"""
    monkeypatch.setenv("OUTPUT_DIR", str(tmp_path / "output"))
    monkeypatch.setenv("LOGS_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("LOG_LEVEL", "WARNING")
    clear_settings_cache()
    yield tmp_path
    clear_settings_cache()
