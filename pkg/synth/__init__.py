from synth.rules import RuleFamily, SyntheticRule, is_natural, node_depths, oracle_label, switch_edges
from synth.generator import (
    GenConfig,
    generate_dataset,
    generate_splits,
    read_rule,
    sidecar_path,
    split_configs,
    write_synthetic,
)

__all__ = [
    "RuleFamily",
    "SyntheticRule",
    "is_natural",
    "node_depths",
    "oracle_label",
    "switch_edges",
    "GenConfig",
    "generate_dataset",
    "generate_splits",
    "read_rule",
    "sidecar_path",
    "split_configs",
    "write_synthetic",
]
