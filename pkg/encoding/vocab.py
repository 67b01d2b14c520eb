from dataclasses import dataclass, field
from enum import Enum
from typing import Dict

from dataset.schemas import DepRelTag, LanguageTag, UposTag

VOCAB_VERSION = 1


class Origin(str, Enum):
    FROM_G1 = "FROM_G1"
    FROM_G2 = "FROM_G2"


def _index(members) -> Dict:
    return {member: i for i, member in enumerate(members)}


@dataclass(frozen=True)
class FeatureVocab:
    """Fixed feature-to-index maps; independent of any data"""

    version: int = VOCAB_VERSION
    upos: Dict[UposTag, int] = field(default_factory=lambda: _index(UposTag))
    deprel: Dict[DepRelTag, int] = field(default_factory=lambda: _index(DepRelTag))
    lang: Dict[LanguageTag, int] = field(default_factory=lambda: _index(LanguageTag))
    origin: Dict[Origin, int] = field(default_factory=lambda: _index(Origin))

    @property
    def self_index(self) -> int:
        return self.deprel[DepRelTag.SELF]


DEFAULT_VOCAB = FeatureVocab()

NUM_UPOS = len(UposTag)
NUM_DEPREL = len(DepRelTag)
NUM_LANG = len(LanguageTag)
NUM_ORIGIN = len(Origin)
