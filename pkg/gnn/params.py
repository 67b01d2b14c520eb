"""
Model configuration and parameter bookkeeping.

Tensor names:
    pos_embed, deprel_embed, lang_embed, origin_embed
    layers.{l}.eps, layers.{l}.W1, layers.{l}.b1, layers.{l}.W2, layers.{l}.b2   (GINE)
    layers.{l}.W, layers.{l}.bW, layers.{l}.att                                  (GAT)
    classifier.C1, classifier.c1, classifier.C2, classifier.c2
Weight matrices are stored (fan_in, fan_out) and applied as x @ W + b.
"""
import math
from collections import OrderedDict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from encoding.vocab import NUM_DEPREL, NUM_LANG, NUM_ORIGIN, NUM_UPOS


class Architecture(str, Enum):
    GINE = "GINE"
    GAT = "GAT"


class ModelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    hidden_dim: int = Field(12, ge=1, description="Node state width d")
    num_layers: int = Field(3, ge=1, description="Message-passing layers L")
    architecture: Architecture = Architecture.GINE
    layer_mlp_expansion: int = Field(2, ge=1, description="h_theta is d -> expansion*d -> d")
    classifier_hidden: Optional[int] = Field(None, ge=1, description="Defaults to hidden_dim")
    seed: int = 0

    @property
    def classifier_width(self) -> int:
        return self.classifier_hidden or self.hidden_dim

    def structural(self) -> dict:
        """Every field that determines tensor shapes or semantics (i.e. all but the seed)"""
        values = self.model_dump(mode="json")
        values.pop("seed")
        values["classifier_hidden"] = self.classifier_width
        return values


def tensor_shapes(cfg: ModelConfig) -> "OrderedDict[str, Tuple[int, ...]]":
    d = cfg.hidden_dim
    shapes = OrderedDict()
    shapes["pos_embed"] = (NUM_UPOS, d)
    shapes["deprel_embed"] = (NUM_DEPREL, d)
    shapes["lang_embed"] = (NUM_LANG, d)
    shapes["origin_embed"] = (NUM_ORIGIN, d)
    for l in range(cfg.num_layers):
        if cfg.architecture is Architecture.GINE:
            wide = cfg.layer_mlp_expansion * d
            shapes[f"layers.{l}.eps"] = (1,)
            shapes[f"layers.{l}.W1"] = (d, wide)
            shapes[f"layers.{l}.b1"] = (wide,)
            shapes[f"layers.{l}.W2"] = (wide, d)
            shapes[f"layers.{l}.b2"] = (d,)
        else:
            shapes[f"layers.{l}.W"] = (d, d)
            shapes[f"layers.{l}.bW"] = (d,)
            shapes[f"layers.{l}.att"] = (2 * d,)
    h = cfg.classifier_width
    shapes["classifier.C1"] = (2 * d, h)
    shapes["classifier.c1"] = (h,)
    shapes["classifier.C2"] = (h, 2)
    shapes["classifier.c2"] = (2,)
    return shapes


def param_count(cfg: ModelConfig) -> int:
    """Exact number of learnable scalars"""
    return sum(math.prod(shape) for shape in tensor_shapes(cfg).values())


@dataclass
class ModelParameters:
    config: ModelConfig
    tensors: Dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.tensors[name]

    def layer(self, l: int) -> Dict[str, np.ndarray]:
        prefix = f"layers.{l}."
        return {name[len(prefix):]: t for name, t in self.tensors.items() if name.startswith(prefix)}

    def copy(self) -> "ModelParameters":
        return ModelParameters(self.config, OrderedDict((k, v.copy()) for k, v in self.tensors.items()))

    def zeros_like(self) -> Dict[str, np.ndarray]:
        return OrderedDict((k, np.zeros_like(v)) for k, v in self.tensors.items())

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(t)) for t in self.tensors.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelParameters):
            return NotImplemented
        return (
            self.config == other.config
            and list(self.tensors) == list(other.tensors)
            and all(np.array_equal(self.tensors[k], other.tensors[k]) for k in self.tensors)
        )


def _fan_in(name: str, shape: Tuple[int, ...], cfg: ModelConfig) -> int:
    if name.endswith("_embed"):
        # the first layer receives embedding sums of width d
        return cfg.hidden_dim
    return shape[0]


def init_params(cfg: ModelConfig) -> ModelParameters:
    """Uniform(-sqrt(1/fan_in), +sqrt(1/fan_in)) weights, zero biases, eps = 0"""
    rng = np.random.default_rng(cfg.seed)
    tensors = OrderedDict()
    for name, shape in tensor_shapes(cfg).items():
        short = name.rsplit(".", 1)[-1]
        if short in ("eps", "b1", "b2", "bW", "c1", "c2"):
            tensors[name] = np.zeros(shape, dtype=np.float64)
        else:
            bound = math.sqrt(1.0 / _fan_in(name, shape, cfg))
            tensors[name] = rng.uniform(-bound, bound, size=shape)
    return ModelParameters(cfg, tensors)


def zero_params(cfg: ModelConfig) -> ModelParameters:
    return ModelParameters(
        cfg, OrderedDict((name, np.zeros(shape)) for name, shape in tensor_shapes(cfg).items())
    )
