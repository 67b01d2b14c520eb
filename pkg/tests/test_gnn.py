from collections import OrderedDict

import numpy as np
import pytest
from pydantic import ValidationError
from scipy.special import softmax

from dataset.schemas import DepRelTag, Label, UposTag
from encoding.graph_encoder import EncodedGraph, EncodedPair, encode_pair
from encoding.vocab import DEFAULT_VOCAB, NUM_DEPREL
from exception.exception_handling import CheckpointError, CheckpointMismatchError
from gnn.batch import GraphBatch, PairBatch
from gnn.checkpoint import load_checkpoint, save_checkpoint
from gnn.layers import LEAKY_SLOPE, attention_weights
from gnn.model import (
    batch_loss,
    classify_pair,
    cross_entropy,
    embed_graphs,
    forward,
    gat_layer,
    gine_layer,
    gradients,
    loss_and_gradients,
    mean_pool,
    node_init,
    _classifier_forward,
)
from gnn.params import Architecture, ModelConfig, ModelParameters, init_params, param_count, tensor_shapes, zero_params
from tests.conftest import random_pair

SELF = DEFAULT_VOCAB.self_index
OBJ = DEFAULT_VOCAB.deprel[DepRelTag.OBJ]


def make_graph(n, edges, upos=None, lang=None, origin=None):
    src, dst, rel = (np.asarray(column, dtype=np.int64) for column in zip(*edges))
    zeros = np.zeros(n, dtype=np.int64)
    return EncodedGraph(
        node_count=n,
        node_upos=zeros if upos is None else np.asarray(upos, dtype=np.int64),
        node_lang=zeros if lang is None else np.asarray(lang, dtype=np.int64),
        node_origin=zeros if origin is None else np.asarray(origin, dtype=np.int64),
        edge_src=src,
        edge_dst=dst,
        edge_rel=rel,
        component=zeros,
    )


def random_params(cfg: ModelConfig, rng: np.random.Generator, scale: float = 0.5) -> ModelParameters:
    return ModelParameters(cfg, OrderedDict((k, rng.normal(0.0, scale, s)) for k, s in tensor_shapes(cfg).items()))


def identity_gine(eps: float) -> dict:
    """d = 1 layer whose MLP is the identity on non-negative inputs"""
    return {
        "eps": np.array([eps]),
        "W1": np.array([[1.0, 0.0]]),
        "b1": np.zeros(2),
        "W2": np.array([[1.0], [0.0]]),
        "b2": np.zeros(1),
    }


def permuted(enc: EncodedGraph, rng: np.random.Generator) -> EncodedGraph:
    """Same graph with node ids and edge order shuffled"""
    position = rng.permutation(enc.node_count)
    order = np.argsort(position)
    edges = rng.permutation(enc.edge_count)
    return EncodedGraph(
        node_count=enc.node_count,
        node_upos=enc.node_upos[order],
        node_lang=enc.node_lang[order],
        node_origin=enc.node_origin[order],
        edge_src=position[enc.edge_src][edges],
        edge_dst=position[enc.edge_dst][edges],
        edge_rel=enc.edge_rel[edges],
        component=enc.component[order],
    )


def naive_embedding(enc: EncodedGraph, p: ModelParameters) -> np.ndarray:
    """GINE encoder written as plain loops over nodes and edges"""
    x = np.array(
        [
            p["pos_embed"][enc.node_upos[i]] + p["lang_embed"][enc.node_lang[i]] + p["origin_embed"][enc.node_origin[i]]
            for i in range(enc.node_count)
        ]
    )
    for l in range(p.config.num_layers):
        layer = p.layer(l)
        new = np.zeros_like(x)
        for i in range(enc.node_count):
            agg = np.zeros(x.shape[1])
            for src, dst, rel in enc.edges:
                if dst == i:
                    agg += np.maximum(x[src] + p["deprel_embed"][rel], 0.0)
            z = (1.0 + layer["eps"][0]) * x[i] + agg
            new[i] = np.maximum(z @ layer["W1"] + layer["b1"], 0.0) @ layer["W2"] + layer["b2"]
        x = new
    return x.mean(axis=0)


def naive_logits(pair: EncodedPair, p: ModelParameters) -> np.ndarray:
    a, b = naive_embedding(pair.enc_a, p), naive_embedding(pair.enc_b, p)

    def mlp(u, v):
        hidden = np.maximum(np.concatenate([u, v]) @ p["classifier.C1"] + p["classifier.c1"], 0.0)
        return hidden @ p["classifier.C2"] + p["classifier.c2"]

    return 0.5 * (mlp(a, b) + mlp(b, a)[::-1])


class TestParams:
    def test_default_count(self):
        assert param_count(ModelConfig()) == 2885
        assert 2430 <= param_count(ModelConfig()) <= 2970

    def test_d8_count(self):
        assert param_count(ModelConfig(hidden_dim=8)) == 1477

    def test_zero_layers_rejected(self):
        with pytest.raises(ValidationError):
            ModelConfig(num_layers=0)

    def test_minimal_shapes(self):
        shapes = tensor_shapes(ModelConfig(hidden_dim=1, num_layers=1))
        assert shapes["pos_embed"] == (17, 1)
        assert shapes["deprel_embed"] == (NUM_DEPREL, 1)
        assert shapes["layers.0.W1"] == (1, 2)
        assert shapes["layers.0.W2"] == (2, 1)
        assert shapes["layers.0.eps"] == (1,)
        assert shapes["classifier.C1"] == (2, 1)
        assert shapes["classifier.C2"] == (1, 2)

    def test_gat_shapes(self):
        shapes = tensor_shapes(ModelConfig(architecture=Architecture.GAT))
        assert shapes["layers.2.att"] == (24,)
        assert "layers.0.eps" not in shapes

    def test_same_seed_same_parameters(self):
        assert init_params(ModelConfig(seed=4)) == init_params(ModelConfig(seed=4))
        assert init_params(ModelConfig(seed=4)) != init_params(ModelConfig(seed=5))

    def test_init_biases_and_eps_zero(self):
        p = init_params(ModelConfig())
        assert not np.any(p["layers.1.eps"])
        assert not np.any(p["classifier.c2"])


class TestNodeInit:
    def test_zero_tables(self):
        enc = make_graph(3, [(i, i, SELF) for i in range(3)])
        assert not np.any(node_init(enc, zero_params(ModelConfig())))

    def test_sum_of_rows(self):
        p = zero_params(ModelConfig(hidden_dim=3))
        p["pos_embed"][5] = [1.0, 0.0, 0.0]
        p["lang_embed"][1] = [0.0, 1.0, 0.0]
        p["origin_embed"][1] = [0.0, 0.0, 1.0]
        enc = make_graph(1, [(0, 0, SELF)], upos=[5], lang=[1], origin=[1])
        np.testing.assert_array_equal(node_init(enc, p), [[1.0, 1.0, 1.0]])

    def test_origin_difference(self):
        p = random_params(ModelConfig(hidden_dim=4), np.random.default_rng(0))
        enc = make_graph(2, [(0, 0, SELF), (1, 1, SELF)], upos=[3, 3], lang=[2, 2], origin=[0, 1])
        x = node_init(enc, p)
        np.testing.assert_allclose(x[1] - x[0], p["origin_embed"][1] - p["origin_embed"][0], atol=1e-12)


class TestGineLayer:
    """Hand-computed GINE outputs on tiny graphs"""

    def setup_method(self):
        self.deprel = np.zeros((NUM_DEPREL, 1))
        self.deprel[OBJ] = 0.5

    def test_zero_fixed_point(self):
        enc = make_graph(1, [(0, 0, SELF)])
        out = gine_layer(np.array([[0.0]]), enc, identity_gine(0.0), self.deprel)
        np.testing.assert_array_equal(out, [[0.0]])

    def test_single_node_eps_one(self):
        enc = make_graph(1, [(0, 0, SELF)])
        out = gine_layer(np.array([[3.0]]), enc, identity_gine(1.0), self.deprel)
        assert out[0, 0] == pytest.approx(9.0, abs=1e-12)

    def test_two_nodes_mutual_edges(self):
        enc = make_graph(2, [(0, 0, SELF), (1, 1, SELF), (0, 1, OBJ), (1, 0, OBJ)])
        out = gine_layer(np.array([[1.0], [2.0]]), enc, identity_gine(0.0), self.deprel)
        np.testing.assert_allclose(out[:, 0], [4.5, 5.5], atol=1e-12)

    def test_matches_loop_evaluation(self):
        rng = np.random.default_rng(12)
        cfg = ModelConfig(hidden_dim=5, num_layers=1)
        for k in range(20):
            pair = encode_pair(random_pair(rng, f"g{k}"))
            p = random_params(cfg, rng)
            x = node_init(pair.enc_a, p)
            out = gine_layer(x, pair.enc_a, p.layer(0), p["deprel_embed"])
            layer = p.layer(0)
            for i in range(pair.enc_a.node_count):
                agg = sum(np.maximum(x[s] + p["deprel_embed"][r], 0.0) for s, d, r in pair.enc_a.edges if d == i)
                z = (1 + layer["eps"][0]) * x[i] + agg
                expected = np.maximum(z @ layer["W1"] + layer["b1"], 0.0) @ layer["W2"] + layer["b2"]
                np.testing.assert_allclose(out[i], expected, atol=1e-12)


class TestGatLayer:
    def _layer(self, rng, d):
        return {"W": rng.normal(size=(d, d)), "bW": np.zeros(d), "att": rng.normal(size=2 * d)}

    def test_self_loop_only(self):
        rng = np.random.default_rng(1)
        layer = self._layer(rng, 3)
        deprel = rng.normal(size=(NUM_DEPREL, 3))
        x = rng.normal(size=(1, 3))
        out = gat_layer(x, make_graph(1, [(0, 0, SELF)]), layer, deprel)
        np.testing.assert_allclose(out[0], x[0] @ layer["W"] + deprel[SELF], atol=1e-12)

    def test_identical_neighbours_split_evenly(self):
        rng = np.random.default_rng(2)
        layer = self._layer(rng, 2)
        deprel = rng.normal(size=(NUM_DEPREL, 2))
        enc = make_graph(3, [(1, 0, OBJ), (2, 0, OBJ), (1, 1, SELF), (2, 2, SELF)])
        x = np.array([[0.3, -1.0], [0.7, 0.2], [0.7, 0.2]])
        alpha = attention_weights(x, GraphBatch.from_graphs([enc]), layer, deprel)
        np.testing.assert_allclose(alpha[:2], [0.5, 0.5], atol=1e-12)

    def test_star_matches_direct_softmax(self):
        rng = np.random.default_rng(3)
        d = 3
        layer = self._layer(rng, d)
        layer["bW"] = rng.normal(size=d)
        deprel = rng.normal(size=(NUM_DEPREL, d))
        edges = [(0, 0, SELF), (1, 0, OBJ), (2, 0, 4), (1, 1, SELF), (2, 2, SELF)]
        enc = make_graph(3, edges)
        x = rng.normal(size=(3, d))
        alpha = attention_weights(x, GraphBatch.from_graphs([enc]), layer, deprel)

        wx = x @ layer["W"] + layer["bW"]
        scores = []
        for src, _, rel in edges[:3]:
            s = layer["att"][:d] @ wx[0] + layer["att"][d:] @ (wx[src] + deprel[rel])
            scores.append(s if s > 0 else LEAKY_SLOPE * s)
        scores = np.array(scores)
        expected = np.exp(scores - scores.max()) / np.exp(scores - scores.max()).sum()
        np.testing.assert_allclose(alpha[:3], expected, atol=1e-12)

        out = gat_layer(x, enc, layer, deprel)
        messages = np.array([wx[src] + deprel[rel] for src, _, rel in edges[:3]])
        np.testing.assert_allclose(out[0], expected @ messages, atol=1e-12)

    def test_attention_sums_to_one_per_node(self):
        rng = np.random.default_rng(4)
        cfg = ModelConfig(hidden_dim=4, num_layers=1, architecture=Architecture.GAT)
        pair = encode_pair(random_pair(rng, "g"))
        p = random_params(cfg, rng)
        batch = GraphBatch.from_graphs([pair.enc_a])
        alpha = attention_weights(node_init(batch, p), batch, p.layer(0), p["deprel_embed"])
        np.testing.assert_allclose(batch.dst_scatter @ alpha, 1.0, atol=1e-12)


class TestMeanPool:
    def test_one_node(self):
        enc = make_graph(1, [(0, 0, SELF)])
        np.testing.assert_array_equal(mean_pool(np.array([[1.5, -2.0]]), enc), [1.5, -2.0])

    def test_two_nodes(self):
        enc = make_graph(2, [(0, 0, SELF), (1, 1, SELF)])
        np.testing.assert_allclose(mean_pool(np.array([[1.0, 3.0], [3.0, 5.0]]), enc), [2.0, 4.0])

    def test_permutation_invariant(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(6, 3))
        enc = make_graph(6, [(i, i, SELF) for i in range(6)])
        np.testing.assert_allclose(mean_pool(x, enc), mean_pool(x[rng.permutation(6)], enc), atol=1e-12)


class TestClassifyPair:
    def test_zero_weights_give_bias(self):
        p = zero_params(ModelConfig(hidden_dim=3))
        p["classifier.c2"][:] = [0.4, -0.1]
        rng = np.random.default_rng(6)
        raw = classify_pair(rng.normal(size=3), rng.normal(size=3), p, symmetrize=False)
        np.testing.assert_array_equal(raw, [0.4, -0.1])

    def test_identical_embeddings_tie(self):
        rng = np.random.default_rng(7)
        p = random_params(ModelConfig(hidden_dim=4), rng)
        emb = rng.normal(size=4)
        logits = classify_pair(emb, emb, p)
        assert logits[0] == pytest.approx(logits[1], abs=1e-12)

    def test_decision_mirrors_under_swap(self):
        rng = np.random.default_rng(8)
        p = random_params(ModelConfig(hidden_dim=4), rng)
        for _ in range(200):
            a, b = rng.normal(size=4), rng.normal(size=4)
            ab, ba = classify_pair(a, b, p), classify_pair(b, a, p)
            np.testing.assert_allclose(ab, ba[::-1], atol=1e-12)
            assert np.argmax(ab) == 1 - np.argmax(ba)


class TestCrossEntropy:
    def test_uniform(self):
        assert cross_entropy(np.array([0.0, 0.0]), Label.A) == pytest.approx(0.693147, abs=1e-6)

    def test_saturated(self):
        assert cross_entropy(np.array([10.0, -10.0]), Label.A) == pytest.approx(2.0611536e-9, rel=1e-6)

    def test_label_b(self):
        assert cross_entropy(np.array([1.0, 0.5]), Label.B) == pytest.approx(0.974077, abs=1e-6)

    def test_batch_rows(self):
        losses = cross_entropy(np.array([[0.0, 0.0], [1.0, 0.5]]), np.array([0, 1]))
        np.testing.assert_allclose(losses, [np.log(2.0), 0.974077], atol=1e-6)

    def test_non_negative_and_normalized(self):
        rng = np.random.default_rng(9)
        logits = rng.normal(scale=20.0, size=(1000, 2))
        assert np.all(cross_entropy(logits, rng.integers(0, 2, size=1000)) >= 0)
        np.testing.assert_allclose(softmax(logits, axis=1).sum(axis=1), 1.0, atol=1e-12)


class TestForward:
    """Whole-model invariants"""

    def test_zero_parameters(self, single_token_pair):
        p = zero_params(ModelConfig())
        np.testing.assert_array_equal(forward(encode_pair(single_token_pair), p), [0.0, 0.0])

    def test_zero_weights_raw_bias(self, random_pairs):
        p = zero_params(ModelConfig())
        p["classifier.c2"][:] = [1.25, -0.5]
        for pair in random_pairs(10).pairs:
            np.testing.assert_array_equal(forward(encode_pair(pair), p, symmetrize=False), [1.25, -0.5])

    def test_identical_candidates_tie(self):
        rng = np.random.default_rng(10)
        pair = random_pair(rng, "same")
        same = pair.model_copy(update={"b": pair.a})
        logits = forward(encode_pair(same), random_params(ModelConfig(hidden_dim=6), rng))
        assert logits[0] == pytest.approx(logits[1], abs=1e-12)

    def test_matches_loop_composition(self):
        rng = np.random.default_rng(11)
        cfg = ModelConfig(hidden_dim=5, num_layers=2)
        for k in range(10):
            pair = encode_pair(random_pair(rng, f"p{k}", max_nodes=4))
            p = random_params(cfg, rng)
            np.testing.assert_allclose(forward(pair, p), naive_logits(pair, p), atol=1e-12)

    @pytest.mark.parametrize("arch", [Architecture.GINE, Architecture.GAT])
    def test_isomorphism_invariance(self, arch):
        rng = np.random.default_rng(13)
        cfg = ModelConfig(hidden_dim=4, num_layers=2, architecture=arch)
        for k in range(1000):
            pair = encode_pair(random_pair(rng, f"i{k}", max_nodes=5))
            p = random_params(cfg, rng) if k % 100 == 0 else p
            relabelled = EncodedPair(permuted(pair.enc_a, rng), permuted(pair.enc_b, rng), pair.label)
            np.testing.assert_allclose(forward(relabelled, p), forward(pair, p), atol=1e-10)

    def test_component_independence(self):
        rng = np.random.default_rng(14)
        p = random_params(ModelConfig(hidden_dim=4), rng)
        base = encode_pair(random_pair(rng, "a"))
        for k in range(1000):
            other = encode_pair(random_pair(rng, f"b{k}"))
            batch = PairBatch.from_pairs([EncodedPair(base.enc_a, other.enc_b, Label.A)])
            emb, _ = embed_graphs(batch.graphs, p)
            alone, _ = embed_graphs(GraphBatch.from_graphs([base.enc_a]), p)
            np.testing.assert_allclose(emb[0], alone[0], atol=1e-12)

    def test_swap_invariance_of_decisions(self):
        rng = np.random.default_rng(15)
        p = random_params(ModelConfig(hidden_dim=4), rng)
        for k in range(1000):
            pair = random_pair(rng, f"s{k}", max_nodes=4)
            logits = forward(encode_pair(pair), p)
            swapped = forward(encode_pair(pair.swapped()), p)
            np.testing.assert_allclose(swapped, logits[::-1], atol=1e-12)


def _kink_margin(pb: PairBatch, p: ModelParameters) -> float:
    """Distance of the nearest ReLU / LeakyReLU input from zero"""
    emb, caches = embed_graphs(pb.graphs, p)
    margins = []
    for cache in caches:
        if p.config.architecture is Architecture.GINE:
            _, pre, _, h, _ = cache
            margins += [np.abs(pre).min(), np.abs(h).min()]
        else:
            margins.append(np.abs(cache[3]).min())
    _, (_, h, _) = _classifier_forward(emb[: pb.size], emb[pb.size :], p)
    margins.append(np.abs(h).min())
    return float(min(margins))


def _max_relative_error(pb: PairBatch, p: ModelParameters, step: float = 1e-5) -> float:
    _, grads = loss_and_gradients(pb, p)
    worst = 0.0
    for name, tensor in p.tensors.items():
        for idx in np.ndindex(tensor.shape):
            original = tensor[idx]
            tensor[idx] = original + step
            up = batch_loss(pb, p)
            tensor[idx] = original - step
            down = batch_loss(pb, p)
            tensor[idx] = original
            numeric = (up - down) / (2 * step)
            analytic = grads[name][idx]
            worst = max(worst, abs(numeric - analytic) / max(abs(numeric), abs(analytic), 1e-3))
    return worst


class TestGradients:
    """Hand-derived gradients against central differences and structural zeros"""

    def test_finite_differences(self):
        rng = np.random.default_rng(16)
        for k in range(100):
            cfg = ModelConfig(
                hidden_dim=1 + k % 3,
                num_layers=1 + (k // 3) % 2,
                architecture=Architecture.GINE if k % 2 == 0 else Architecture.GAT,
            )
            pairs = [encode_pair(random_pair(rng, f"f{k}-{j}", max_nodes=3)) for j in range(1 + k % 2)]
            pb = PairBatch.from_pairs(pairs, rng.random(len(pairs)) < 0.5)
            for _ in range(50):
                p = random_params(cfg, rng)
                if _kink_margin(pb, p) > 1e-3:
                    break
            assert _max_relative_error(pb, p) < 1e-4, f"instance {k} ({cfg.architecture.value}, d={cfg.hidden_dim})"

    @pytest.mark.parametrize("architecture", list(Architecture), ids=lambda a: a.value)
    @pytest.mark.parametrize("hidden_dim", [5, 8])
    def test_finite_differences_at_default_depth(self, architecture, hidden_dim):
        rng = np.random.default_rng(20 + hidden_dim)
        cfg = ModelConfig(hidden_dim=hidden_dim, num_layers=3, architecture=architecture)
        pairs = [encode_pair(random_pair(rng, f"deep-{j}", max_nodes=4)) for j in range(2)]
        pb = PairBatch.from_pairs(pairs, np.array([False, True]))
        p = max((random_params(cfg, rng) for _ in range(20)), key=lambda q: _kink_margin(pb, q))
        assert _max_relative_error(pb, p) < 1e-4

    def test_saturated_loss_has_tiny_gradient(self, single_token_pair):
        p = zero_params(ModelConfig())
        p["classifier.c2"][:] = [10.0, -10.0]
        grads = gradients(encode_pair(single_token_pair), Label.A, p)
        norm = np.sqrt(sum(np.sum(g**2) for g in grads.values()))
        assert norm < 1e-6

    def test_absent_features_get_zero_gradient(self):
        rng = np.random.default_rng(17)
        p = random_params(ModelConfig(hidden_dim=4), rng)
        pair = encode_pair(random_pair(rng, "z", max_nodes=3))
        grads = gradients(pair, pair.label, p)
        present_upos = set(pair.enc_a.node_upos.tolist()) | set(pair.enc_b.node_upos.tolist())
        present_rel = set(pair.enc_a.edge_rel.tolist()) | set(pair.enc_b.edge_rel.tolist())
        for k in range(len(UposTag)):
            if k not in present_upos:
                assert np.all(grads["pos_embed"][k] == 0.0)
        for r in range(NUM_DEPREL):
            if r not in present_rel:
                assert np.all(grads["deprel_embed"][r] == 0.0)

    def test_batch_gradient_is_mean_of_pair_gradients(self):
        rng = np.random.default_rng(18)
        p = random_params(ModelConfig(hidden_dim=3, num_layers=2), rng)
        pairs = [encode_pair(random_pair(rng, f"m{j}")) for j in range(4)]
        _, batch_grads = loss_and_gradients(PairBatch.from_pairs(pairs), p)
        singles = [gradients(pair, pair.label, p) for pair in pairs]
        for name in batch_grads:
            np.testing.assert_allclose(batch_grads[name], np.mean([g[name] for g in singles], axis=0), atol=1e-12)

    def test_label_override(self, single_token_pair):
        rng = np.random.default_rng(19)
        p = random_params(ModelConfig(hidden_dim=3), rng)
        enc = encode_pair(single_token_pair)
        flipped = EncodedPair(enc.enc_a, enc.enc_b, Label.B)
        for name, g in gradients(enc, Label.B, p).items():
            np.testing.assert_array_equal(g, gradients(flipped, None, p)[name])


class TestCheckpoint:
    def test_round_trip_is_exact(self, tmp_path):
        p = random_params(ModelConfig(hidden_dim=5, architecture=Architecture.GAT), np.random.default_rng(20))
        path = str(tmp_path / "ckpt.txt")
        save_checkpoint(p, path)
        assert load_checkpoint(path) == p

    def test_resave_is_byte_identical(self, tmp_path):
        p = init_params(ModelConfig(seed=3))
        first, second = str(tmp_path / "a.txt"), str(tmp_path / "b.txt")
        save_checkpoint(p, first)
        save_checkpoint(load_checkpoint(first), second)
        assert open(first, "rb").read() == open(second, "rb").read()

    def test_config_mismatch(self, tmp_path):
        path = str(tmp_path / "ckpt.txt")
        save_checkpoint(init_params(ModelConfig()), path)
        with pytest.raises(CheckpointMismatchError):
            load_checkpoint(path, expected=ModelConfig(hidden_dim=8))

    def test_seed_is_not_structural(self, tmp_path):
        path = str(tmp_path / "ckpt.txt")
        save_checkpoint(init_params(ModelConfig(seed=1)), path)
        assert load_checkpoint(path, expected=ModelConfig(seed=2)).config.seed == 1

    def test_refuses_non_finite(self, tmp_path):
        p = init_params(ModelConfig())
        p["classifier.c2"][0] = np.nan
        with pytest.raises(CheckpointError):
            save_checkpoint(p, str(tmp_path / "bad.txt"))

    def test_truncated_file(self, tmp_path):
        path = tmp_path / "ckpt.txt"
        save_checkpoint(init_params(ModelConfig()), str(path))
        lines = path.read_text(encoding="utf-8").splitlines(keepends=True)
        path.write_text("".join(lines[:-1]), encoding="utf-8")
        with pytest.raises(CheckpointError, match="missing"):
            load_checkpoint(str(path))
