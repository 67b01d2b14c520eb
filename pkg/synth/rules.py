"""
Planted switch-acceptability rules.

A switch edge is a dependency of g1 whose two endpoints carry different
non-OTHER language tags. A candidate is natural iff every switch edge is
allowed by the rule; rules look at the dependent's relation, POS, or depth.
"""
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dataset.schemas import CandidateSentence, DepRelTag, Label, LanguageTag, MinimalPair, SentenceGraph, UD_RELATIONS, UposTag
from exception.exception_handling import AmbiguousPairError


class RuleFamily(str, Enum):
    DEPREL_SET = "DEPREL_SET"
    POS_SET = "POS_SET"
    DEPTH_LIMIT = "DEPTH_LIMIT"


class SyntheticRule(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    family: RuleFamily
    relations: Optional[Tuple[DepRelTag, ...]] = Field(None, description="DEPREL_SET payload")
    tags: Optional[Tuple[UposTag, ...]] = Field(None, description="POS_SET payload")
    max_depth: Optional[int] = Field(None, ge=1, description="DEPTH_LIMIT payload")
    seed: int = 0

    @model_validator(mode="after")
    def check_payload(self) -> "SyntheticRule":
        if self.family is RuleFamily.DEPREL_SET:
            if not self.relations:
                raise ValueError("DEPREL_SET needs a nonempty relation set")
            if DepRelTag.SELF in self.relations:
                raise ValueError("SELF cannot appear in a rule")
            if set(self.relations) >= set(UD_RELATIONS):
                raise ValueError("DEPREL_SET must be a proper subset of the relations")
        elif self.family is RuleFamily.POS_SET:
            if not self.tags:
                raise ValueError("POS_SET needs a nonempty tag set")
            if set(self.tags) >= set(UposTag):
                raise ValueError("POS_SET must be a proper subset of the tags")
        elif self.max_depth is None:
            raise ValueError("DEPTH_LIMIT needs max_depth")
        return self

    @classmethod
    def sample(cls, family: RuleFamily, seed: int = 0) -> "SyntheticRule":
        """A rule with a payload drawn from the seed (about half of each vocabulary)"""
        rng = np.random.default_rng(seed)
        family = RuleFamily(family)
        if family is RuleFamily.DEPREL_SET:
            candidates = [r for r in UD_RELATIONS if r is not DepRelTag.ROOT]
            picked = rng.choice(len(candidates), size=len(candidates) // 2, replace=False)
            return cls(family=family, relations=tuple(candidates[i] for i in sorted(picked)), seed=seed)
        if family is RuleFamily.POS_SET:
            tags = list(UposTag)
            picked = rng.choice(len(tags), size=len(tags) // 2, replace=False)
            return cls(family=family, tags=tuple(tags[i] for i in sorted(picked)), seed=seed)
        return cls(family=family, max_depth=int(rng.integers(1, 4)), seed=seed)

    def allows(self, graph: SentenceGraph, dependent: int, depths: Optional[List[int]] = None) -> bool:
        """Whether a switch on the edge into `dependent` (0-based) is acceptable"""
        node = graph.nodes[dependent]
        if self.family is RuleFamily.DEPREL_SET:
            return node.deprel in self.relations
        if self.family is RuleFamily.POS_SET:
            return node.upos in self.tags
        if depths is None:
            depths = node_depths(graph)
        return depths[dependent] <= self.max_depth


def node_depths(graph: SentenceGraph) -> List[int]:
    """Root has depth 0; heads are assumed to form a valid tree"""
    depths: List[Optional[int]] = [None] * len(graph)

    def depth(i: int) -> int:
        chain = []
        while depths[i] is None:
            head = graph.nodes[i].head
            if head == 0:
                depths[i] = 0
                break
            chain.append(i)
            i = head - 1
        base = depths[i]
        for offset, j in enumerate(reversed(chain), start=1):
            depths[j] = base + offset
        return depths[chain[0]] if chain else base

    for i in range(len(graph)):
        depth(i)
    return depths


def switch_edges(graph: SentenceGraph) -> List[int]:
    """0-based dependents whose edge joins two different non-OTHER languages"""
    edges = []
    for i, node in enumerate(graph.nodes):
        if node.head == 0:
            continue
        head = graph.nodes[node.head - 1]
        if LanguageTag.OTHER not in (node.lang, head.lang) and node.lang is not head.lang:
            edges.append(i)
    return edges


def is_natural(candidate: CandidateSentence, rule: SyntheticRule) -> bool:
    depths = node_depths(candidate.g1) if rule.family is RuleFamily.DEPTH_LIMIT else None
    return all(rule.allows(candidate.g1, i, depths) for i in switch_edges(candidate.g1))


def oracle_label(pair: MinimalPair, rule: SyntheticRule) -> Label:
    natural_a = is_natural(pair.a, rule)
    natural_b = is_natural(pair.b, rule)
    if natural_a == natural_b:
        state = "both" if natural_a else "neither"
        raise AmbiguousPairError(f"pair {pair.id}: {state} candidates satisfy the {rule.family.value} rule")
    return Label.A if natural_a else Label.B
