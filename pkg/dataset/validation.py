from dataclasses import dataclass
from typing import Optional

from dataset.schemas import SentenceGraph
from exception.exception_handling import GraphValidationError

# Reason codes
EMPTY = "empty"
HEAD_OUT_OF_RANGE = "head_out_of_range"
SELF_HEAD = "self_head"
CYCLE = "cycle"
MULTIPLE_ROOTS = "multiple_roots"


@dataclass(frozen=True)
class ValidationResult:
    ok: bool
    reason: Optional[str] = None
    node: Optional[int] = None
    message: str = ""

    def raise_for_error(self, where: str = "graph") -> None:
        if not self.ok:
            raise GraphValidationError(self.reason, f"{where}: {self.reason}: {self.message}", self.node)


def validate_sentence_graph(g: SentenceGraph) -> ValidationResult:
    """Accept iff g is a nonempty single-rooted dependency tree"""
    heads = g.heads
    n = len(heads)
    if n == 0:
        return ValidationResult(False, EMPTY, None, "sentence has no nodes")

    for index, head in enumerate(heads, start=1):
        if head < 0 or head > n:
            return ValidationResult(
                False, HEAD_OUT_OF_RANGE, index, f"node {index} has head {head} outside [0, {n}]"
            )
        if head == index:
            return ValidationResult(False, SELF_HEAD, index, f"node {index} is its own head")

    # 0 = unvisited, 1 = on current path, 2 = known to reach the root
    state = [0] * (n + 1)
    state[0] = 2
    for start in range(1, n + 1):
        path = []
        node = start
        while state[node] == 0:
            state[node] = 1
            path.append(node)
            node = heads[node - 1]
        if state[node] == 1:
            return ValidationResult(False, CYCLE, node, f"head links starting at node {start} form a cycle")
        for visited in path:
            state[visited] = 2

    roots = [i for i, head in enumerate(heads, start=1) if head == 0]
    if len(roots) != 1:
        return ValidationResult(
            False, MULTIPLE_ROOTS, roots[1], f"nodes {roots} all attach to the root"
        )
    return ValidationResult(True)
