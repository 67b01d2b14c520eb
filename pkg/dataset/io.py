"""
Line-delimited reader and writer for minimal-pair dataset files.

Each line is one JSON record:
    {"id": ..., "label": "A"|"B", "human_agreement": number|null,
     "A": {"g1": GRAPH, "g2": GRAPH}, "B": {"g1": GRAPH, "g2": GRAPH}}

Records are validated strictly: no type coercion, and candidates only under
the A and B keys.
"""
import logging
import os
from typing import Union

from pydantic import ValidationError

from dataset.schemas import FILE_RECORD, Dataset, MinimalPair, Split
from exception.exception_handling import DatasetFormatError

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(p) for p in item["loc"])
        parts.append(f"{location}: {item['msg']}" if location else item["msg"])
    return "; ".join(parts)


def parse_dataset(path: PathLike, split: Split = Split.TRAIN) -> Dataset:
    """Read and validate every record; order is preserved"""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise FileNotFoundError(f"dataset file not found: {path}")

    pairs = []
    seen_ids = set()
    with open(path, "rb") as f:
        for line_num, raw in enumerate(f, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise DatasetFormatError(path, line_num, f"invalid UTF-8 at byte {e.start}") from e
            if not line.strip():
                continue
            try:
                pair = MinimalPair.model_validate_json(line, strict=True, context={FILE_RECORD: True})
            except ValidationError as e:
                raise DatasetFormatError(path, line_num, _describe(e)) from e
            if pair.id in seen_ids:
                raise DatasetFormatError(path, line_num, f"duplicate id {pair.id!r}")
            seen_ids.add(pair.id)
            pairs.append(pair)

    logger.debug(f"Parsed {len(pairs)} pairs from {path}")
    return Dataset(pairs=tuple(pairs), split=split)


def write_dataset(d: Dataset, path: PathLike) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for pair in d.pairs:
            f.write(pair.model_dump_json(by_alias=True))
            f.write("\n")
    logger.debug(f"Wrote {len(d.pairs)} pairs to {path}")
