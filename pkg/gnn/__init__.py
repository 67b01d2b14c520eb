from gnn.params import (
    Architecture,
    ModelConfig,
    ModelParameters,
    init_params,
    param_count,
    tensor_shapes,
    zero_params,
)
from gnn.batch import GraphBatch, PairBatch
from gnn.model import (
    classify_pair,
    cross_entropy,
    forward,
    gat_layer,
    gine_layer,
    gradients,
    loss_and_gradients,
    mean_pool,
    node_init,
    predict_logits,
)
from gnn.checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    "Architecture",
    "ModelConfig",
    "ModelParameters",
    "init_params",
    "param_count",
    "tensor_shapes",
    "zero_params",
    "GraphBatch",
    "PairBatch",
    "classify_pair",
    "cross_entropy",
    "forward",
    "gat_layer",
    "gine_layer",
    "gradients",
    "loss_and_gradients",
    "mean_pool",
    "node_init",
    "predict_logits",
    "load_checkpoint",
    "save_checkpoint",
]
