"""
Numeric union graphs for candidate sentences.

The two monolingual parses of a candidate become one graph with two
unconnected components. Every dependency is stored in both directions with
the same relation index, and every node gets a SELF loop.
"""
from dataclasses import dataclass

import numpy as np

from dataset.schemas import CandidateSentence, Label, MinimalPair, SentenceGraph
from encoding.vocab import DEFAULT_VOCAB, FeatureVocab, Origin


@dataclass(frozen=True)
class EncodedGraph:
    node_count: int
    node_upos: np.ndarray
    node_lang: np.ndarray
    node_origin: np.ndarray
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_rel: np.ndarray
    component: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.edge_src.shape[0])

    @property
    def edges(self):
        return list(zip(self.edge_src.tolist(), self.edge_dst.tolist(), self.edge_rel.tolist()))


@dataclass(frozen=True)
class EncodedPair:
    enc_a: EncodedGraph
    enc_b: EncodedGraph
    label: Label


def _component_arrays(g: SentenceGraph, offset: int, v: FeatureVocab):
    n = len(g)
    upos = np.fromiter((v.upos[node.upos] for node in g.nodes), dtype=np.int64, count=n)
    lang = np.fromiter((v.lang[node.lang] for node in g.nodes), dtype=np.int64, count=n)

    local = np.arange(n, dtype=np.int64) + offset
    src = [local]
    dst = [local]
    rel = [np.full(n, v.self_index, dtype=np.int64)]

    dependents = [i for i, node in enumerate(g.nodes) if node.head != 0]
    if dependents:
        dep = np.asarray(dependents, dtype=np.int64)
        head = np.asarray([g.nodes[i].head - 1 for i in dependents], dtype=np.int64)
        dep_rel = np.asarray([v.deprel[g.nodes[i].deprel] for i in dependents], dtype=np.int64)
        src += [head + offset, dep + offset]
        dst += [dep + offset, head + offset]
        rel += [dep_rel, dep_rel]

    return upos, lang, np.concatenate(src), np.concatenate(dst), np.concatenate(rel)


def encode_candidate(c: CandidateSentence, v: FeatureVocab = DEFAULT_VOCAB) -> EncodedGraph:
    """g1 nodes first, then g2 nodes; no edge crosses the two components"""
    n1, n2 = len(c.g1), len(c.g2)
    up1, lang1, src1, dst1, rel1 = _component_arrays(c.g1, 0, v)
    up2, lang2, src2, dst2, rel2 = _component_arrays(c.g2, n1, v)

    origin = np.concatenate(
        [
            np.full(n1, v.origin[Origin.FROM_G1], dtype=np.int64),
            np.full(n2, v.origin[Origin.FROM_G2], dtype=np.int64),
        ]
    )
    component = np.concatenate([np.zeros(n1, dtype=np.int64), np.ones(n2, dtype=np.int64)])
    return EncodedGraph(
        node_count=n1 + n2,
        node_upos=np.concatenate([up1, up2]),
        node_lang=np.concatenate([lang1, lang2]),
        node_origin=origin,
        edge_src=np.concatenate([src1, src2]),
        edge_dst=np.concatenate([dst1, dst2]),
        edge_rel=np.concatenate([rel1, rel2]),
        component=component,
    )


def encode_pair(pair: MinimalPair, v: FeatureVocab = DEFAULT_VOCAB) -> EncodedPair:
    return EncodedPair(enc_a=encode_candidate(pair.a, v), enc_b=encode_candidate(pair.b, v), label=pair.label)
