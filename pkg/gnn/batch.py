"""
Disjoint-union batches of encoded graphs.

Scatter matrices turn per-edge and per-node arrays into sums:
    dst_scatter  (N x E)  sums edge rows into their destination node
    src_scatter  (N x E)  sums edge rows into their source node
    pool         (G x N)  mean over the nodes of each graph
    *_onehot     (V x N or V x E)  sums rows per feature value (embedding gradients)
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import sparse

from dataset.schemas import Label
from encoding.graph_encoder import EncodedGraph, EncodedPair
from encoding.vocab import NUM_DEPREL, NUM_LANG, NUM_ORIGIN, NUM_UPOS


def _scatter(rows: np.ndarray, cols: np.ndarray, shape, values: Optional[np.ndarray] = None) -> sparse.csr_matrix:
    if values is None:
        values = np.ones(rows.shape[0], dtype=np.float64)
    return sparse.csr_matrix((values, (rows, cols)), shape=shape)


@dataclass(frozen=True)
class GraphBatch:
    num_graphs: int
    node_count: int
    node_upos: np.ndarray
    node_lang: np.ndarray
    node_origin: np.ndarray
    node_graph: np.ndarray
    edge_src: np.ndarray
    edge_dst: np.ndarray
    edge_rel: np.ndarray
    dst_scatter: sparse.csr_matrix
    src_scatter: sparse.csr_matrix
    pool: sparse.csr_matrix
    upos_onehot: sparse.csr_matrix
    lang_onehot: sparse.csr_matrix
    origin_onehot: sparse.csr_matrix
    rel_onehot: sparse.csr_matrix

    @classmethod
    def from_graphs(cls, graphs: Sequence[EncodedGraph]) -> "GraphBatch":
        sizes = np.fromiter((g.node_count for g in graphs), dtype=np.int64, count=len(graphs))
        offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]])
        n = int(sizes.sum())
        num_graphs = len(graphs)

        edge_src = np.concatenate([g.edge_src + off for g, off in zip(graphs, offsets)])
        edge_dst = np.concatenate([g.edge_dst + off for g, off in zip(graphs, offsets)])
        edge_rel = np.concatenate([g.edge_rel for g in graphs])
        node_upos = np.concatenate([g.node_upos for g in graphs])
        node_lang = np.concatenate([g.node_lang for g in graphs])
        node_origin = np.concatenate([g.node_origin for g in graphs])
        node_graph = np.repeat(np.arange(num_graphs, dtype=np.int64), sizes)

        e = edge_src.shape[0]
        edge_ids = np.arange(e, dtype=np.int64)
        node_ids = np.arange(n, dtype=np.int64)
        return cls(
            num_graphs=num_graphs,
            node_count=n,
            node_upos=node_upos,
            node_lang=node_lang,
            node_origin=node_origin,
            node_graph=node_graph,
            edge_src=edge_src,
            edge_dst=edge_dst,
            edge_rel=edge_rel,
            dst_scatter=_scatter(edge_dst, edge_ids, (n, e)),
            src_scatter=_scatter(edge_src, edge_ids, (n, e)),
            pool=_scatter(node_graph, node_ids, (num_graphs, n), 1.0 / sizes[node_graph]),
            upos_onehot=_scatter(node_upos, node_ids, (NUM_UPOS, n)),
            lang_onehot=_scatter(node_lang, node_ids, (NUM_LANG, n)),
            origin_onehot=_scatter(node_origin, node_ids, (NUM_ORIGIN, n)),
            rel_onehot=_scatter(edge_rel, edge_ids, (NUM_DEPREL, e)),
        )


def as_batch(graph) -> GraphBatch:
    return graph if isinstance(graph, GraphBatch) else GraphBatch.from_graphs([graph])


@dataclass(frozen=True)
class PairBatch:
    """B pairs: graphs 0..B-1 are the A side, B..2B-1 the B side; labels 0 = A, 1 = B"""

    size: int
    graphs: GraphBatch
    labels: np.ndarray

    @classmethod
    def from_pairs(cls, pairs: Sequence[EncodedPair], swap: Optional[np.ndarray] = None) -> "PairBatch":
        if swap is None:
            swap = np.zeros(len(pairs), dtype=bool)
        firsts, seconds, labels = [], [], []
        for pair, flip in zip(pairs, swap):
            label = 0 if pair.label is Label.A else 1
            if flip:
                firsts.append(pair.enc_b)
                seconds.append(pair.enc_a)
                label = 1 - label
            else:
                firsts.append(pair.enc_a)
                seconds.append(pair.enc_b)
            labels.append(label)
        return cls(
            size=len(pairs),
            graphs=GraphBatch.from_graphs(firsts + seconds),
            labels=np.asarray(labels, dtype=np.int64),
        )
