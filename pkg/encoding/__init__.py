from encoding.vocab import DEFAULT_VOCAB, FeatureVocab, Origin
from encoding.graph_encoder import EncodedGraph, EncodedPair, encode_candidate, encode_pair
from encoding.ablation import AblationMode, randomize_features

__all__ = [
    "DEFAULT_VOCAB",
    "FeatureVocab",
    "Origin",
    "EncodedGraph",
    "EncodedPair",
    "encode_candidate",
    "encode_pair",
    "AblationMode",
    "randomize_features",
]
