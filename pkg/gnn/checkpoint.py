"""
Checkpoint files.

Line 1 is a JSON header (format, version, vocabulary version, ModelConfig).
Every further line is one tensor: {"name", "shape", "values"} with values
row-major at 17 significant digits, which round-trips float64 exactly.
"""
import json
import logging
import math
import os
from collections import OrderedDict
from typing import Optional

import numpy as np
from pydantic import ValidationError

from encoding.vocab import VOCAB_VERSION
from exception.exception_handling import CheckpointError, CheckpointMismatchError
from gnn.params import ModelConfig, ModelParameters, tensor_shapes

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "switchgraph-checkpoint"
CHECKPOINT_VERSION = 1


def _tensor_line(name: str, tensor: np.ndarray) -> str:
    values = ", ".join(format(float(v), ".17g") for v in tensor.ravel(order="C"))
    return f'{{"name": {json.dumps(name)}, "shape": {json.dumps(list(tensor.shape))}, "values": [{values}]}}'


def save_checkpoint(params: ModelParameters, path: str) -> None:
    if not params.is_finite():
        raise CheckpointError("refusing to save non-finite parameters")
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    header = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "vocab_version": VOCAB_VERSION,
        "config": params.config.model_dump(mode="json"),
        "tensors": len(params.tensors),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(json.dumps(header, sort_keys=True) + "\n")
        for name, tensor in params.tensors.items():
            f.write(_tensor_line(name, tensor) + "\n")
    logger.info(f"Saved checkpoint with {len(params.tensors)} tensors to {path}")


def load_checkpoint(path: str, expected: Optional[ModelConfig] = None) -> ModelParameters:
    """Read a checkpoint; refuse it if its config differs structurally from `expected`"""
    if not os.path.isfile(path):
        raise CheckpointError(f"checkpoint not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        lines = [line for line in f if line.strip()]
    if not lines:
        raise CheckpointError(f"{path}: empty checkpoint")

    try:
        header = json.loads(lines[0])
        config = ModelConfig.model_validate(header["config"])
    except (json.JSONDecodeError, KeyError, ValidationError) as e:
        raise CheckpointError(f"{path}: bad header: {e}") from e
    if header.get("format") != CHECKPOINT_FORMAT or header.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"{path}: unsupported checkpoint format {header.get('format')} v{header.get('version')}")
    if header.get("vocab_version") != VOCAB_VERSION:
        raise CheckpointError(f"{path}: feature vocabulary v{header.get('vocab_version')} != v{VOCAB_VERSION}")

    if expected is not None and expected.structural() != config.structural():
        raise CheckpointMismatchError(
            f"{path}: checkpoint config {config.structural()} does not match requested {expected.structural()}"
        )

    shapes = tensor_shapes(config)
    tensors = OrderedDict()
    for line_num, line in enumerate(lines[1:], start=2):
        try:
            record = json.loads(line)
            name, shape = record["name"], tuple(record["shape"])
            values = np.asarray(record["values"], dtype=np.float64)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
            raise CheckpointError(f"{path}:{line_num}: bad tensor record: {e}") from e
        if shapes.get(name) != shape or values.size != math.prod(shape):
            raise CheckpointError(f"{path}:{line_num}: tensor {name} has shape {shape}, expected {shapes.get(name)}")
        tensors[name] = values.reshape(shape)

    missing = [name for name in shapes if name not in tensors]
    if missing:
        raise CheckpointError(f"{path}: missing tensors {missing}")
    return ModelParameters(config, OrderedDict((name, tensors[name]) for name in shapes))
