"""
Dataset model for code-switched minimal pairs.

Every candidate sentence is two monolingual dependency parses (one per
contributing language) whose tokens carry the language of the aligned word
in the code-switched original.
"""
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

# Validation context key set by the file reader; such records accept only
# the A/B aliases for candidates
FILE_RECORD = "file_record"


# ===== Closed tag sets =====
class UposTag(str, Enum):
    ADJ = "ADJ"
    ADP = "ADP"
    ADV = "ADV"
    AUX = "AUX"
    CCONJ = "CCONJ"
    DET = "DET"
    INTJ = "INTJ"
    NOUN = "NOUN"
    NUM = "NUM"
    PART = "PART"
    PRON = "PRON"
    PROPN = "PROPN"
    PUNCT = "PUNCT"
    SCONJ = "SCONJ"
    SYM = "SYM"
    VERB = "VERB"
    X = "X"


class DepRelTag(str, Enum):
    ACL = "acl"
    ADVCL = "advcl"
    ADVMOD = "advmod"
    AMOD = "amod"
    APPOS = "appos"
    AUX = "aux"
    CASE = "case"
    CC = "cc"
    CCOMP = "ccomp"
    CLF = "clf"
    COMPOUND = "compound"
    CONJ = "conj"
    COP = "cop"
    CSUBJ = "csubj"
    DEP = "dep"
    DET = "det"
    DISCOURSE = "discourse"
    DISLOCATED = "dislocated"
    EXPL = "expl"
    FIXED = "fixed"
    FLAT = "flat"
    GOESWITH = "goeswith"
    IOBJ = "iobj"
    LIST = "list"
    MARK = "mark"
    NMOD = "nmod"
    NSUBJ = "nsubj"
    NUMMOD = "nummod"
    OBJ = "obj"
    OBL = "obl"
    ORPHAN = "orphan"
    PARATAXIS = "parataxis"
    PUNCT = "punct"
    REPARANDUM = "reparandum"
    ROOT = "root"
    VOCATIVE = "vocative"
    XCOMP = "xcomp"
    # Reserved for self-connections; never valid in input files
    SELF = "SELF"


UD_RELATIONS: Tuple[DepRelTag, ...] = tuple(r for r in DepRelTag if r is not DepRelTag.SELF)


class LanguageTag(str, Enum):
    L1 = "L1"
    L2 = "L2"
    OTHER = "OTHER"


class Label(str, Enum):
    A = "A"
    B = "B"

    def flipped(self) -> "Label":
        return Label.B if self is Label.A else Label.A


class Split(str, Enum):
    TRAIN = "train"
    VALIDATION = "validation"
    TEST = "test"


# ===== Graph records =====
class ParseNode(BaseModel):
    """One token; its 1-based index is its position in the sentence"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    upos: UposTag
    lang: LanguageTag
    head: int = Field(..., ge=0, description="0 marks the root")
    deprel: DepRelTag

    @field_validator("deprel")
    @classmethod
    def reject_reserved_relation(cls, v: DepRelTag) -> DepRelTag:
        if v is DepRelTag.SELF:
            raise ValueError("the SELF relation is reserved for self-connections")
        return v


class SentenceGraph(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    nodes: Tuple[ParseNode, ...]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def heads(self) -> Tuple[int, ...]:
        return tuple(node.head for node in self.nodes)


class CandidateSentence(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    g1: SentenceGraph = Field(..., description="Translation into Lang1")
    g2: SentenceGraph = Field(..., description="Translation into Lang2")

    @model_validator(mode="after")
    def check_graphs(self) -> "CandidateSentence":
        from dataset.validation import validate_sentence_graph

        for name, graph in (("g1", self.g1), ("g2", self.g2)):
            validate_sentence_graph(graph).raise_for_error(name)
        return self


class MinimalPair(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    id: str
    a: CandidateSentence = Field(..., alias="A")
    b: CandidateSentence = Field(..., alias="B")
    label: Label = Field(..., description="The naturally observed candidate")
    human_agreement: Optional[float] = Field(None, ge=0.0, le=1.0)

    @model_validator(mode="before")
    @classmethod
    def aliases_only_in_files(cls, data, info: ValidationInfo):
        if info.context and info.context.get(FILE_RECORD) and isinstance(data, dict):
            unknown = sorted(key for key in ("a", "b") if key in data)
            if unknown:
                raise ValueError(f"unknown field(s) {', '.join(unknown)}; candidates are keyed A and B")
        return data

    def swapped(self) -> "MinimalPair":
        """Same pair presented in the other order"""
        return self.model_copy(update={"a": self.b, "b": self.a, "label": self.label.flipped()})


class Dataset(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    pairs: Tuple[MinimalPair, ...] = ()
    split: Split = Split.TRAIN

    @model_validator(mode="after")
    def check_unique_ids(self) -> "Dataset":
        seen = set()
        for pair in self.pairs:
            if pair.id in seen:
                raise ValueError(f"duplicate pair id {pair.id!r}")
            seen.add(pair.id)
        return self

    def __len__(self) -> int:
        return len(self.pairs)

    def subset(self, indices) -> "Dataset":
        return Dataset(pairs=tuple(self.pairs[i] for i in indices), split=self.split)
