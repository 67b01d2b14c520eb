"""
Message-passing layers with hand-derived backward passes.

GINE:
    x'_i = h((1 + eps) * x_i + sum_{j -> i} ReLU(x_j + e_{j,i})),   h = W2 . ReLU . W1
GAT (single head, edge-aware):
    m_j   = W x_j + e_{j,i}
    s_ij  = LeakyReLU_0.2(a . [W x_i || m_j])
    x'_i  = sum_j softmax_j(s_ij) m_j
ReLU has subgradient 0 at 0.
"""
from typing import Dict, Tuple

import numpy as np

from gnn.batch import GraphBatch

LEAKY_SLOPE = 0.2


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


# ===== GINE =====
def gine_forward(x: np.ndarray, batch: GraphBatch, layer: Dict[str, np.ndarray], deprel_embed: np.ndarray):
    pre = x[batch.edge_src] + deprel_embed[batch.edge_rel]
    agg = batch.dst_scatter @ relu(pre)
    z = (1.0 + layer["eps"][0]) * x + agg
    h = z @ layer["W1"] + layer["b1"]
    a = relu(h)
    out = a @ layer["W2"] + layer["b2"]
    return out, (x, pre, z, h, a)


def gine_backward(
    g_out: np.ndarray, cache, batch: GraphBatch, layer: Dict[str, np.ndarray]
) -> Tuple[np.ndarray, Dict[str, np.ndarray], np.ndarray]:
    """Returns (grad wrt x, grads of the layer tensors, grad wrt deprel_embed)"""
    x, pre, z, h, a = cache
    grads = {
        "W2": a.T @ g_out,
        "b2": g_out.sum(axis=0),
    }
    g_h = (g_out @ layer["W2"].T) * (h > 0)
    grads["W1"] = z.T @ g_h
    grads["b1"] = g_h.sum(axis=0)
    g_z = g_h @ layer["W1"].T
    grads["eps"] = np.array([np.sum(g_z * x)])

    g_pre = g_z[batch.edge_dst] * (pre > 0)
    g_x = (1.0 + layer["eps"][0]) * g_z + batch.src_scatter @ g_pre
    g_deprel = batch.rel_onehot @ g_pre
    return g_x, grads, g_deprel


# ===== GAT =====
def _segment_softmax(scores: np.ndarray, batch: GraphBatch) -> np.ndarray:
    top = np.full(batch.node_count, -np.inf)
    np.maximum.at(top, batch.edge_dst, scores)
    ex = np.exp(scores - top[batch.edge_dst])
    # every node has a self-loop, so no denominator is zero
    denom = batch.dst_scatter @ ex
    return ex / denom[batch.edge_dst]


def gat_forward(x: np.ndarray, batch: GraphBatch, layer: Dict[str, np.ndarray], deprel_embed: np.ndarray):
    d = x.shape[1]
    att_dst, att_src = layer["att"][:d], layer["att"][d:]
    wx = x @ layer["W"] + layer["bW"]
    m = wx[batch.edge_src] + deprel_embed[batch.edge_rel]
    s = wx[batch.edge_dst] @ att_dst + m @ att_src
    scores = np.where(s > 0, s, LEAKY_SLOPE * s)
    alpha = _segment_softmax(scores, batch)
    out = batch.dst_scatter @ (alpha[:, None] * m)
    return out, (x, wx, m, s, alpha)


def gat_backward(
    g_out: np.ndarray, cache, batch: GraphBatch, layer: Dict[str, np.ndarray]
) -> Tuple[np.ndarray, Dict[str, np.ndarray], np.ndarray]:
    x, wx, m, s, alpha = cache
    d = x.shape[1]
    att_dst, att_src = layer["att"][:d], layer["att"][d:]

    g_out_e = g_out[batch.edge_dst]
    g_m = alpha[:, None] * g_out_e
    g_alpha = np.sum(g_out_e * m, axis=1)
    expected = batch.dst_scatter @ (alpha * g_alpha)
    g_scores = alpha * (g_alpha - expected[batch.edge_dst])
    g_s = g_scores * np.where(s > 0, 1.0, LEAKY_SLOPE)

    wx_dst = wx[batch.edge_dst]
    grads = {"att": np.concatenate([wx_dst.T @ g_s, m.T @ g_s])}
    g_m += g_s[:, None] * att_src[None, :]
    g_wx = batch.dst_scatter @ (g_s[:, None] * att_dst[None, :]) + batch.src_scatter @ g_m
    g_deprel = batch.rel_onehot @ g_m

    grads["W"] = x.T @ g_wx
    grads["bW"] = g_wx.sum(axis=0)
    g_x = g_wx @ layer["W"].T
    return g_x, grads, g_deprel


def attention_weights(x: np.ndarray, batch: GraphBatch, layer: Dict[str, np.ndarray], deprel_embed: np.ndarray) -> np.ndarray:
    """Per-edge attention coefficients of a GAT layer (edge order of the batch)"""
    return gat_forward(x, batch, layer, deprel_embed)[1][4]
