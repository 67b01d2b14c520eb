import json

import numpy as np
import pytest
from pydantic import ValidationError

from dataset.io import parse_dataset, write_dataset
from dataset.schemas import CandidateSentence, Dataset, DepRelTag, Label, LanguageTag, ParseNode, SentenceGraph, Split, UposTag
from dataset.validation import validate_sentence_graph
from exception.exception_handling import DatasetFormatError, GraphValidationError
from tests.conftest import build_graph, random_pair


def _node(head, deprel="dep"):
    return {"upos": "NOUN", "lang": "L1", "head": head, "deprel": deprel}


def _record(pair_id="p1", heads_a=(0,), label="A", human_agreement=None):
    nodes = [_node(h, "root" if h == 0 else "dep") for h in heads_a]
    single = {"nodes": [_node(0, "root")]}
    return {
        "id": pair_id,
        "label": label,
        "human_agreement": human_agreement,
        "A": {"g1": {"nodes": nodes}, "g2": single},
        "B": {"g1": single, "g2": single},
    }


def _write_lines(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


class TestParseDataset:
    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("", encoding="utf-8")
        assert len(parse_dataset(path)) == 0

    def test_single_token_record(self, tmp_path):
        d = parse_dataset(_write_lines(tmp_path / "one.jsonl", [_record()]), Split.TEST)
        assert len(d) == 1
        assert d.split is Split.TEST
        pair = d.pairs[0]
        graphs = [pair.a.g1, pair.a.g2, pair.b.g1, pair.b.g2]
        assert [len(g) for g in graphs] == [1, 1, 1, 1]
        assert pair.label is Label.A

    def test_self_head_names_node(self, tmp_path):
        path = _write_lines(tmp_path / "bad.jsonl", [_record(heads_a=(0, 2))])
        with pytest.raises(DatasetFormatError) as info:
            parse_dataset(path)
        assert info.value.line == 1
        assert "self_head" in str(info.value)
        assert "node 2" in str(info.value)

    def test_error_reports_line_number(self, tmp_path):
        path = _write_lines(tmp_path / "bad.jsonl", [_record("p1"), _record("p2", label="C")])
        with pytest.raises(DatasetFormatError) as info:
            parse_dataset(path)
        assert info.value.line == 2
        assert str(info.value).startswith(f"{path}:2:")

    def test_unknown_tag_rejected(self, tmp_path):
        record = _record()
        record["A"]["g1"]["nodes"][0]["upos"] = "NOUNISH"
        with pytest.raises(DatasetFormatError):
            parse_dataset(_write_lines(tmp_path / "bad.jsonl", [record]))

    def test_self_relation_rejected(self, tmp_path):
        record = _record(heads_a=(0, 1))
        record["A"]["g1"]["nodes"][1]["deprel"] = "SELF"
        with pytest.raises(DatasetFormatError):
            parse_dataset(_write_lines(tmp_path / "bad.jsonl", [record]))

    def test_duplicate_ids(self, tmp_path):
        with pytest.raises(DatasetFormatError, match="duplicate"):
            parse_dataset(_write_lines(tmp_path / "dup.jsonl", [_record("x"), _record("x")]))

    def test_missing_file_names_path(self, tmp_path):
        missing = tmp_path / "nowhere.jsonl"
        with pytest.raises(FileNotFoundError, match="nowhere.jsonl"):
            parse_dataset(missing)

    def test_agreement_out_of_range(self, tmp_path):
        with pytest.raises(DatasetFormatError):
            parse_dataset(_write_lines(tmp_path / "bad.jsonl", [_record(human_agreement=1.5)]))

    def test_invalid_utf8_reports_line(self, tmp_path):
        path = tmp_path / "latin.jsonl"
        good = json.dumps(_record("p1")).encode("utf-8")
        bad = json.dumps(_record("p\u00e9")).encode("utf-8").replace(b"\\u00e9", b"\xe9")
        path.write_bytes(good + b"\n" + bad + b"\n")
        with pytest.raises(DatasetFormatError, match="UTF-8") as info:
            parse_dataset(path)
        assert info.value.line == 2

    def test_lowercase_candidate_keys_rejected(self, tmp_path):
        record = _record()
        record["a"], record["b"] = record.pop("A"), record.pop("B")
        with pytest.raises(DatasetFormatError, match="unknown field"):
            parse_dataset(_write_lines(tmp_path / "keys.jsonl", [record]))

    def test_string_head_rejected(self, tmp_path):
        record = _record()
        record["A"]["g1"]["nodes"][0]["head"] = "0"
        with pytest.raises(DatasetFormatError) as info:
            parse_dataset(_write_lines(tmp_path / "head.jsonl", [record]))
        assert "head" in str(info.value)

    def test_integer_agreement_is_a_number(self, tmp_path):
        d = parse_dataset(_write_lines(tmp_path / "agree.jsonl", [_record(human_agreement=1)]))
        assert d.pairs[0].human_agreement == 1.0


class TestValidateSentenceGraph:
    def test_single_node(self, graph_factory):
        assert validate_sentence_graph(graph_factory([0])).ok

    def test_root_with_two_dependents(self, graph_factory):
        assert validate_sentence_graph(graph_factory([0, 1, 1])).ok

    def test_two_node_cycle(self, graph_factory):
        result = validate_sentence_graph(graph_factory([2, 1]))
        assert not result.ok
        assert result.reason == "cycle"

    def test_longer_cycle_behind_root(self, graph_factory):
        result = validate_sentence_graph(graph_factory([0, 3, 4, 2]))
        assert result.reason == "cycle"

    def test_two_roots(self, graph_factory):
        result = validate_sentence_graph(graph_factory([0, 0]))
        assert result.reason == "multiple_roots"
        assert result.node == 2

    def test_head_out_of_range(self, graph_factory):
        result = validate_sentence_graph(graph_factory([0, 5]))
        assert result.reason == "head_out_of_range"
        assert result.node == 2

    def test_empty(self):
        assert validate_sentence_graph(SentenceGraph(nodes=())).reason == "empty"

    def test_raise_for_error(self, graph_factory):
        validate_sentence_graph(graph_factory([0, 1])).raise_for_error()
        with pytest.raises(GraphValidationError) as info:
            validate_sentence_graph(graph_factory([0, 0])).raise_for_error("g1")
        assert info.value.reason == "multiple_roots"
        assert info.value.node == 2
        assert str(info.value).startswith("g1: multiple_roots:")

    def test_candidate_rejects_invalid_graph(self, graph_factory):
        with pytest.raises(ValidationError, match="g2: cycle") as info:
            CandidateSentence(g1=graph_factory([0]), g2=graph_factory([2, 1]))
        assert isinstance(info.value.errors()[0]["ctx"]["error"], GraphValidationError)

    def test_all_random_trees_accepted(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            n = int(rng.integers(1, 12))
            heads = [0] + [int(rng.integers(1, i + 1)) for i in range(1, n)]
            perm = rng.permutation(n)
            # relabel nodes; the result is still a tree
            inverse = np.argsort(perm)
            relabelled = [0] * n
            for old, head in enumerate(heads):
                relabelled[inverse[old]] = 0 if head == 0 else int(inverse[head - 1]) + 1
            assert validate_sentence_graph(build_graph(relabelled)).ok


class TestWriteDataset:
    def test_empty_dataset(self, tmp_path):
        path = tmp_path / "out.jsonl"
        write_dataset(Dataset(), path)
        assert path.read_text(encoding="utf-8") == ""

    def test_single_pair_round_trip(self, tmp_path, single_token_pair):
        d = Dataset(pairs=(single_token_pair,))
        path = tmp_path / "out.jsonl"
        write_dataset(d, path)
        assert len(path.read_text(encoding="utf-8").splitlines()) == 1
        assert parse_dataset(path) == d

    def test_random_round_trip(self, tmp_path, random_pairs):
        d = random_pairs(100, seed=11)
        path = tmp_path / "out.jsonl"
        write_dataset(d, path)
        back = parse_dataset(path)
        assert back == d
        assert [p.human_agreement for p in back.pairs] == [p.human_agreement for p in d.pairs]

    def test_rewrite_is_byte_identical(self, tmp_path, random_pairs):
        first, second = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        write_dataset(random_pairs(50, seed=5), first)
        write_dataset(parse_dataset(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_uses_file_aliases(self, tmp_path, single_token_pair):
        path = tmp_path / "out.jsonl"
        write_dataset(Dataset(pairs=(single_token_pair,)), path)
        record = json.loads(path.read_text(encoding="utf-8"))
        assert set(record) == {"id", "A", "B", "label", "human_agreement"}


class TestSchemas:
    def test_swapped_flips_label(self, single_token_pair):
        swapped = single_token_pair.swapped()
        assert swapped.label is Label.B
        assert swapped.a == single_token_pair.b

    def test_node_is_frozen(self):
        node = ParseNode(upos=UposTag.VERB, lang=LanguageTag.L2, head=0, deprel=DepRelTag.ROOT)
        with pytest.raises(ValidationError):
            node.head = 3

    def test_dataset_rejects_duplicate_ids(self):
        rng = np.random.default_rng(0)
        pair = random_pair(rng, "same")
        with pytest.raises(ValidationError):
            Dataset(pairs=(pair, pair))
