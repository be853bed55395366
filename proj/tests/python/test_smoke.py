import math

import numpy as np
import pytest

import somps

TINY = [
    "bilstm_hidden=6",
    "attention_heads=2",
    "head_dim_qk=2",
    "head_dim_v=3",
    "attention_output_dim=6",
    "pns_hidden=4",
    "max_epochs=3",
    "learning_rate=0.01",
    "seed=4",
    "split_seed=4",
]


def test_version_is_exposed():
    assert somps.__version__.count(".") == 2


def test_synthetic_stratification_and_determinism():
    corpus = somps.generate_synthetic(100, fake_fraction=0.3, seed=7)
    assert len(corpus) == 100
    assert corpus.labels.count(0) == 30
    again = somps.generate_synthetic(100, fake_fraction=0.3, seed=7)
    assert corpus.to_bytes() == again.to_bytes()
    with pytest.raises(somps.ArgumentError):
        somps.generate_synthetic(0)


def test_corpus_round_trips_through_jsonl(tmp_path):
    corpus = somps.generate_synthetic(10, seed=1)
    corpus.write_jsonl(tmp_path)
    loaded = somps.load_corpus(tmp_path / "news.jsonl", tmp_path / "engagements.jsonl", tmp_path / "users.jsonl")
    assert loaded.to_bytes() == corpus.to_bytes()
    corpus.save(tmp_path / "corpus.bin")
    assert somps.read_corpus(tmp_path / "corpus.bin").to_bytes() == corpus.to_bytes()


def test_missing_file_raises_parse_error(tmp_path):
    with pytest.raises(somps.ParseError, match="nope.jsonl"):
        somps.load_corpus(tmp_path / "nope.jsonl", tmp_path / "e", tmp_path / "u")


def test_connectivity_and_normalization_examples():
    assert somps.connectivity_score(["1", "2"], ["4"], ["2", "3"], ["4", "5"]) == pytest.approx(0.4)
    out = somps.normalize_adjacency(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(out, np.full((2, 2), 0.5))
    np.testing.assert_array_equal(somps.normalize_adjacency(np.zeros((3, 3))), np.eye(3))
    with pytest.raises(somps.ArgumentError):
        somps.normalize_adjacency(np.array([[0.0, -1.0], [-1.0, 0.0]]))


def test_tokenize_and_embeddings():
    assert somps.tokenize("Read THIS: https://t.co/x now!") == ["read", "this", "now"]
    table = somps.EmbeddingTable.synthetic(dim=8, seed=1)
    assert table.dim == 8
    assert not table.lookup("definitely-not-a-token").any()


def test_split_and_metrics():
    corpus = somps.generate_synthetic(100, fake_fraction=0.3, seed=2)
    split = somps.stratified_split(corpus, seed=5)
    assert [len(split[k]) for k in ("train", "val", "test")] == [75, 10, 15]
    assert not set(split["train"]) & set(split["test"])
    with pytest.raises(somps.SplitError):
        somps.stratified_split(corpus, train=1.0, val=0.0, test=0.0)
    m = somps.compute_metrics([1] * 10 + [0] * 5, [1] * 8 + [0] * 2 + [1] * 2 + [0] * 3)
    assert m["f1_real"] == pytest.approx(0.8)


def test_config_rejects_unknown_keys():
    echo = somps.config_echo("learning_rate = 0.01\n")
    assert "learning_rate = 0.01\n" in echo
    assert set(line.split(" = ")[0] for line in echo.splitlines()) == set(somps.config_keys())
    with pytest.raises(somps.ParseError):
        somps.config_echo("colour = red\n")
    with pytest.raises(somps.ArgumentError):
        somps.config_echo("", ["colour=red"])


def test_small_experiment_is_deterministic():
    corpus = somps.generate_synthetic(40, fake_fraction=0.4, seed=3)
    table = somps.EmbeddingTable.synthetic(dim=6, seed=3)
    a = somps.run_experiment(corpus, table, overrides=TINY)
    b = somps.run_experiment(corpus, table, overrides=TINY)
    assert a["checkpoint"] == b["checkpoint"]
    assert a["report_json"] == b["report_json"]
    assert a["epochs"] <= 3
    for split in ("train", "val", "test"):
        metrics = a[split]
        assert 0.0 <= metrics["accuracy"] <= 1.0
        assert all(0.0 <= p <= 1.0 and math.isfinite(p) for _, p in metrics["probabilities"])
