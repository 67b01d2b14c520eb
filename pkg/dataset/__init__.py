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
from dataset.validation import ValidationResult, validate_sentence_graph
from dataset.io import parse_dataset, write_dataset

__all__ = [
    "CandidateSentence",
    "Dataset",
    "DepRelTag",
    "Label",
    "LanguageTag",
    "MinimalPair",
    "ParseNode",
    "SentenceGraph",
    "Split",
    "UD_RELATIONS",
    "UposTag",
    "ValidationResult",
    "validate_sentence_graph",
    "parse_dataset",
    "write_dataset",
]
