"""
Pairwise comparison model: shared GNN encoder, mean pooling, MLP classifier.

Training uses the raw classifier output on one presentation order.
Inference symmetrizes over both orders so the decision does not depend on
which candidate is shown first.
"""
from typing import Dict, Optional, Tuple, Union

import numpy as np
from scipy.special import logsumexp, softmax

from dataset.schemas import Label
from encoding.graph_encoder import EncodedGraph, EncodedPair
from gnn.batch import GraphBatch, PairBatch, as_batch
from gnn.layers import gat_backward, gat_forward, gine_backward, gine_forward, relu
from gnn.params import Architecture, ModelConfig, ModelParameters

Graphs = Union[EncodedGraph, GraphBatch]


def node_init(enc: Graphs, p: ModelParameters) -> np.ndarray:
    batch = as_batch(enc)
    return p["pos_embed"][batch.node_upos] + p["lang_embed"][batch.node_lang] + p["origin_embed"][batch.node_origin]


def gine_layer(x: np.ndarray, enc: Graphs, layer: Dict[str, np.ndarray], deprel_embed: np.ndarray) -> np.ndarray:
    return gine_forward(x, as_batch(enc), layer, deprel_embed)[0]


def gat_layer(x: np.ndarray, enc: Graphs, layer: Dict[str, np.ndarray], deprel_embed: np.ndarray) -> np.ndarray:
    return gat_forward(x, as_batch(enc), layer, deprel_embed)[0]


def mean_pool(x: np.ndarray, enc: Graphs) -> np.ndarray:
    """Mean over all nodes of each graph (both components); one row per graph"""
    pooled = as_batch(enc).pool @ x
    return pooled[0] if isinstance(enc, EncodedGraph) else pooled


# ===== Encoder =====
def _layer_fns(cfg: ModelConfig):
    if cfg.architecture is Architecture.GAT:
        return gat_forward, gat_backward
    return gine_forward, gine_backward


def embed_graphs(batch: GraphBatch, p: ModelParameters):
    forward_fn, _ = _layer_fns(p.config)
    x = node_init(batch, p)
    caches = []
    for l in range(p.config.num_layers):
        x, cache = forward_fn(x, batch, p.layer(l), p["deprel_embed"])
        caches.append(cache)
    return batch.pool @ x, caches


def _embed_backward(g_pooled: np.ndarray, caches, batch: GraphBatch, p: ModelParameters, grads: Dict[str, np.ndarray]) -> None:
    _, backward_fn = _layer_fns(p.config)
    g_x = batch.pool.T @ g_pooled
    for l in reversed(range(p.config.num_layers)):
        g_x, layer_grads, g_deprel = backward_fn(g_x, caches[l], batch, p.layer(l))
        for short, g in layer_grads.items():
            grads[f"layers.{l}.{short}"] += g
        grads["deprel_embed"] += g_deprel
    grads["pos_embed"] += batch.upos_onehot @ g_x
    grads["lang_embed"] += batch.lang_onehot @ g_x
    grads["origin_embed"] += batch.origin_onehot @ g_x


# ===== Classifier =====
def _classifier_forward(emb_a: np.ndarray, emb_b: np.ndarray, p: ModelParameters):
    u = np.concatenate([emb_a, emb_b], axis=-1)
    h = u @ p["classifier.C1"] + p["classifier.c1"]
    r = relu(h)
    raw = r @ p["classifier.C2"] + p["classifier.c2"]
    return raw, (u, h, r)


def _classifier_backward(g_raw: np.ndarray, cache, p: ModelParameters, grads: Dict[str, np.ndarray]):
    u, h, r = cache
    grads["classifier.C2"] += r.T @ g_raw
    grads["classifier.c2"] += g_raw.sum(axis=0)
    g_h = (g_raw @ p["classifier.C2"].T) * (h > 0)
    grads["classifier.C1"] += u.T @ g_h
    grads["classifier.c1"] += g_h.sum(axis=0)
    g_u = g_h @ p["classifier.C1"].T
    d = g_u.shape[-1] // 2
    return g_u[..., :d], g_u[..., d:]


def classify_pair(emb_a: np.ndarray, emb_b: np.ndarray, p: ModelParameters, symmetrize: bool = True) -> np.ndarray:
    """Scores (score_A, score_B); works on single embeddings or on rows of a batch"""
    raw_ab = _classifier_forward(emb_a, emb_b, p)[0]
    if not symmetrize:
        return raw_ab
    raw_ba = _classifier_forward(emb_b, emb_a, p)[0]
    return 0.5 * (raw_ab + raw_ba[..., ::-1])


def _label_index(label) -> np.ndarray:
    if isinstance(label, Label):
        return np.asarray(0 if label is Label.A else 1)
    return np.asarray(label)


def cross_entropy(logits: np.ndarray, label) -> Union[float, np.ndarray]:
    """-log softmax(logits)[label]; per row for a batch of logits"""
    logits = np.asarray(logits, dtype=np.float64)
    y = _label_index(label)
    picked = np.take_along_axis(logits, np.atleast_1d(y)[..., None], axis=-1)[..., 0] if logits.ndim > 1 else logits[y]
    loss = logsumexp(logits, axis=-1) - picked
    return float(loss) if np.ndim(loss) == 0 else loss


# ===== Whole model =====
def forward(pair: EncodedPair, p: ModelParameters, cfg: Optional[ModelConfig] = None, symmetrize: bool = True) -> np.ndarray:
    return predict_logits(PairBatch.from_pairs([pair]), p, symmetrize=symmetrize)[0]


def predict_logits(pb: PairBatch, p: ModelParameters, symmetrize: bool = True) -> np.ndarray:
    emb, _ = embed_graphs(pb.graphs, p)
    return classify_pair(emb[: pb.size], emb[pb.size :], p, symmetrize=symmetrize)


def batch_loss(pb: PairBatch, p: ModelParameters) -> float:
    """Mean training loss (raw, unsymmetrized presentation)"""
    return float(np.mean(cross_entropy(predict_logits(pb, p, symmetrize=False), pb.labels)))


def loss_and_gradients(pb: PairBatch, p: ModelParameters) -> Tuple[float, Dict[str, np.ndarray]]:
    """Mean cross-entropy over the batch and its exact gradient"""
    emb, caches = embed_graphs(pb.graphs, p)
    raw, cls_cache = _classifier_forward(emb[: pb.size], emb[pb.size :], p)
    loss = float(np.mean(cross_entropy(raw, pb.labels)))

    g_raw = softmax(raw, axis=1)
    g_raw[np.arange(pb.size), pb.labels] -= 1.0
    g_raw /= pb.size

    grads = p.zeros_like()
    g_a, g_b = _classifier_backward(g_raw, cls_cache, p, grads)
    _embed_backward(np.concatenate([g_a, g_b], axis=0), caches, pb.graphs, p, grads)
    return loss, grads


def gradients(pair: EncodedPair, label, p: ModelParameters, cfg: Optional[ModelConfig] = None) -> Dict[str, np.ndarray]:
    """Gradient of cross_entropy(forward(pair), label) with the unsymmetrized training forward"""
    if label is not None and Label(label) is not pair.label:
        pair = EncodedPair(pair.enc_a, pair.enc_b, Label(label))
    return loss_and_gradients(PairBatch.from_pairs([pair]), p)[1]
